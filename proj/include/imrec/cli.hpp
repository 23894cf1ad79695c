#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace imrec {

/// Exit status contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Entry point of the `imrec` tool. Subcommands: psf, phantom, blur, noise,
/// denoise, deblur, restore, metrics. Returns 0 on success, 1 on a
/// validation or runtime failure (one-line diagnostic on err), 2 on an
/// unknown command or flag (usage text on err).
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imrec
