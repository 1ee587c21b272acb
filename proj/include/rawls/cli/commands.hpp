#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rawls/cli/config.hpp"

namespace rawls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point. `args` excludes the program name. Settings are layered as
/// built-in defaults < `--config` file < `--key value` flags; `--workers`
/// falls back to RAWLS_WORKERS and then to the hardware thread count.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The command bodies take a validated config. Results go to the `out` key
/// when set, otherwise to `out`. Library precondition failures propagate as
/// exceptions; run_cli maps them to exit codes.
int cmd_recover(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_curve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bound(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_lemma_check(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace rawls::cli
