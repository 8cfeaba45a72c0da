// abeltheta <eval|gram|curvature|verify> --config <path> [options]
//
// Prints the text report on stdout and writes the CSV block to --out when
// given. Exit status is 0 iff every check in the report passes.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <omp.h>

#include <CLI11.hpp>

#include "abeltheta/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Theta functions, Gram matrices and curvature on polarized abelian varieties"};
  std::string command;
  std::string config_path;
  std::string out_path;
  abeltheta::CommandOptions opts;
  app.add_option("command", command, "eval, gram, curvature or verify")->required();
  app.add_option("--config", config_path, "period-data config file")->required();
  app.add_option("--m", opts.m, "characteristic, one integer per dimension")->delimiter(',');
  app.add_option("--z-re", opts.z_re, "Re z")->delimiter(',');
  app.add_option("--z-im", opts.z_im, "Im z")->delimiter(',');
  app.add_option("--mu-re", opts.mu_re, "Re mu")->delimiter(',');
  app.add_option("--mu-im", opts.mu_im, "Im mu")->delimiter(',');
  app.add_option("--out", out_path, "write the CSV block here");
  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("ABELTHETA_THREADS")) {
    const int threads = std::atoi(env);
    if (threads < 1) {
      std::cerr << "error: ABELTHETA_THREADS must be a positive integer\n";
      return 2;
    }
    omp_set_num_threads(threads);
  }

  try {
    const abeltheta::Config cfg = abeltheta::load_config(config_path);
    const abeltheta::Report report = abeltheta::run_command(command, cfg, opts);
    std::cout << report.render();
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
      }
      out << report.csv;
    }
    return report.all_pass() ? 0 : 1;
  } catch (const abeltheta::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
