#include "trapres/cli/config.hpp"
#include "trapres/cli/experiments.hpp"
#include "trapres/errors.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

namespace {

unsigned thread_count(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("TRAPRES_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    std::cerr << "warning: ignoring invalid TRAPRES_THREADS='" << env << "'\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance bands and trapped-set dynamics on warped products"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--output", output_dir, "Output directory (overrides output.directory)");
  run->add_option("--threads", threads, "Worker threads (default: TRAPRES_THREADS or 1)")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Check a config file without running it");
  val->add_option("--config", validate_path, "JSON config")->required();

  CLI11_PARSE(app, argc, argv);

  if (val->parsed()) {
    try {
      const auto cfg = trapres::cli::load_config(validate_path);
      std::cout << "ok: " << trapres::cli::to_string(cfg.experiment) << "\n";
      return 0;
    } catch (const trapres::Error& e) {
      std::cerr << "invalid config: " << e.what() << "\n";
      return 2;
    }
  }

  trapres::cli::ExperimentConfig cfg;
  try {
    cfg = trapres::cli::load_config(config_path);
  } catch (const trapres::Error& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    if (!output_dir.empty()) {
      try {
        trapres::cli::emit_config_error(output_dir, config_path, e.what());
      } catch (const std::exception& w) {
        std::cerr << "cannot write meta.json: " << w.what() << "\n";
      }
    }
    return 2;
  }
  const std::string dir = output_dir.empty() ? cfg.output.directory : output_dir;
  try {
    const int status = trapres::cli::run_and_emit(cfg, dir, thread_count(threads));
    if (status == 3) std::cerr << "experiment failed; see " << dir << "/meta.json\n";
    if (status == 1) std::cerr << "some checks failed; see " << dir << "/results.csv\n";
    return status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
