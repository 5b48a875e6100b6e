#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdyn::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the directory for artifacts when --out is not given.
inline constexpr const char* kOutDirEnv = "QDYN_OUT_DIR";

/// Runs one job. args excludes the program name. Subcommands: julia,
/// params, sweep, cycles, lyapunov, orbit, twoqubit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdyn::cli
