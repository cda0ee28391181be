/**
 * Command dispatch: each command writes <out>/<command>.csv (plus extra CSVs
 * for jsa) and a <command>.json metadata sidecar.
 *
 * Exit codes: 0 success, 1 a tolerance check failed (files are still
 * written), 2 bad input (unknown command, unusable config for the command,
 * unwritable output).
 */
#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lrs/config.hpp"

namespace lrs::io {

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // default: config.output_dir
  unsigned threads = 1;
  std::optional<double> rel_tol;  // overrides tolerances.rate_rel_tol
};

const std::vector<std::string>& command_names();

int run_command(const std::string& command, const RunConfig& config, const RunOptions& opts, std::ostream& out,
                std::ostream& err);

}  // namespace lrs::io
