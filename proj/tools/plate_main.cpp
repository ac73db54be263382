#include "plate/config.hpp"
#include "plate/errors.hpp"
#include "plate/study.hpp"
#include "plate/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum Exit { Ok = 0, ConfigFailure = 2, NumericalFailure = 3, VerifyFailure = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive plate bending solver"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  bool svg = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [study] output)");
    sub->add_flag("--svg", svg, "also write study.svg");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve once on the initial mesh and write estimator CSVs");
  CLI::App* study = app.add_subcommand("study", "run the study configured in [study] kind");
  CLI::App* adapt = app.add_subcommand("adapt", "adaptive study regardless of [study] kind");
  CLI::App* verify = app.add_subcommand("verify", "run the runtime invariant checks");
  for (CLI::App* s : {solve, study, adapt, verify}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : ConfigFailure;
  }

  try {
    plate::RunConfig cfg = plate::load_config(config_path);
    if (!out_dir.empty()) cfg.output = out_dir;
    if (svg) cfg.svg = true;
    if (*adapt) cfg.kind = plate::StudyKind::Adaptive;
    if (*verify) cfg.kind = plate::StudyKind::Verify;

    if (cfg.kind == plate::StudyKind::Verify) {
      const auto results = plate::run_verify_suite(cfg.seed, &std::cout);
      int failed = 0;
      for (const auto& r : results) failed += r.passed ? 0 : 1;
      std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
      return failed == 0 ? Ok : VerifyFailure;
    }
    if (*solve) {
      const auto rec = plate::run_solve(cfg, &std::cout);
      (void)rec;
      return Ok;
    }
    const auto record = plate::run_study(cfg, &std::cout);
    std::cout << record.levels.size() << " levels written to " << cfg.output << "\n";
    return Ok;
  } catch (const plate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ConfigFailure;
  } catch (const plate::DataAssumptionError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return ConfigFailure;
  } catch (const plate::MeshError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return ConfigFailure;
  } catch (const plate::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return NumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return NumericalFailure;
  }
}
