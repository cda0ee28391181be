// lossy-ring-sfwm <command> --config <path> [--out <dir>] [--threads N] [--tol X] [--simd ISA]

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lrs/commands.hpp"
#include "lrs/config.hpp"
#include "lrs/errors.hpp"
#include "lrs/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Photon-pair generation rates and joint spectra for a lossy microring"};
  std::string command, config_path, out_dir, simd;
  unsigned threads = 1;
  double tol = 0.0;

  std::string names;
  for (const auto& n : lrs::io::command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "one of: " + names)->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (default: output.dir from the config)");
  app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  auto* tol_opt = app.add_option("--tol", tol, "relative tolerance for rate quadratures")->check(CLI::PositiveNumber);
  app.add_option("--simd", simd, "kernel set: scalar or avx2 (default: best available)");
  CLI11_PARSE(app, argc, argv);

  if (!simd.empty()) {
    try {
      lrs::kernels::set_isa(lrs::kernels::parse_isa(simd));
    } catch (const lrs::DomainError& e) {
      std::cerr << "error: --simd: " << e.what() << "\n";
      return 2;
    }
  }

  lrs::io::RunConfig config;
  try {
    config = lrs::io::load_config(config_path);
  } catch (const lrs::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 2;
  }

  lrs::io::RunOptions opts;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  opts.threads = threads;
  if (*tol_opt) opts.rel_tol = tol;
  return lrs::io::run_command(command, config, opts, std::cout, std::cerr);
}
