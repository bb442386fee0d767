#include "coactive/coactive.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{
      "Online structured prediction simulator: preference perceptron learners "
      "against simulated coactive users, with CSV regret traces."};

  std::string config_path;
  std::string task, learner, user, alpha, rounds, seeds, alpha_grid, out;
  std::vector<std::string> overrides;
  bool print_config = false;

  app.add_option("-c,--config", config_path,
                 "Key-value config file (flat `key = value` lines, # comments)");
  app.add_option("--task", task, "Task kind: ranking | items | adversary");
  app.add_option("--learner", learner,
                 "Learner kind: perceptron | batch | convex");
  app.add_option("--user", user,
                 "User model: strict_alpha | expected_alpha | noisy_relevance "
                 "| rating_increment");
  app.add_option("--alpha", alpha, "Feedback quality parameter in (0, 1]");
  app.add_option("--T", rounds, "Number of interaction rounds");
  app.add_option("--seeds", seeds, "Comma-separated run seeds, e.g. 1,2,3");
  app.add_option("--alpha-grid", alpha_grid,
                 "Comma-separated alpha values for slack diagnostics");
  app.add_option("--out", out, "Output directory for trace files");
  app.add_option("--set", overrides,
                 "Extra `key=value` override, repeatable; same keys as the "
                 "config file")
      ->take_all();
  app.add_flag("--print-config", print_config,
               "Print the effective config and exit without running");

  CLI11_PARSE(app, argc, argv);

  try {
    coactive::ExperimentConfig config;
    if (!config_path.empty()) {
      config = coactive::parse_config_file(config_path);
    }
    // Flags win over file values.
    if (!task.empty()) coactive::set_config_value(config, "task", task);
    if (!learner.empty()) coactive::set_config_value(config, "learner", learner);
    if (!user.empty()) coactive::set_config_value(config, "user", user);
    if (!alpha.empty()) coactive::set_config_value(config, "alpha", alpha);
    if (!rounds.empty()) coactive::set_config_value(config, "T", rounds);
    if (!seeds.empty()) coactive::set_config_value(config, "seeds", seeds);
    if (!alpha_grid.empty()) {
      coactive::set_config_value(config, "alpha_grid", alpha_grid);
    }
    if (!out.empty()) coactive::set_config_value(config, "out", out);
    for (const std::string& kv : overrides) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("--set expects key=value, got: " + kv);
      }
      coactive::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }

    coactive::validate(config);
    if (print_config) {
      std::fputs(coactive::serialize_config(config).c_str(), stdout);
      return 0;
    }

    coactive::ExperimentResult result = coactive::run_experiment(config);
    std::printf("wrote %zu trace file(s) to %s\n", result.runs.size(),
                config.out_dir.c_str());
    const coactive::RunResult& last = result.runs.back();
    std::printf("final average regret (seed %llu): %.17g\n",
                static_cast<unsigned long long>(last.seed),
                last.trace.rows().back().regret_avg);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
