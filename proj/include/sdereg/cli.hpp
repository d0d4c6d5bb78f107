#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sdereg/config.hpp"

namespace sdereg::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;

const std::vector<std::string>& subcommands();

/// Runs one subcommand. The artifact goes to config.out_path, or to `out`
/// when the path is empty; diagnostics go to `err`. Returns the exit code.
int run(std::string_view subcommand, const ExperimentConfig& config, std::ostream& out,
        std::ostream& err);

}  // namespace sdereg::cli
