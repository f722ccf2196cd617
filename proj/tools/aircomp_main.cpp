// SPDX-License-Identifier: Apache-2.0
// Command-line front end: scenario configs, figure presets, acceptance run.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance/checks.hpp"
#include "aircomp/experiment.hpp"
#include "aircomp/results_io.hpp"

namespace fs = std::filesystem;
using namespace aircomp;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int threads = 0;
  bool timing = false;
};

void apply(ExperimentSpec& spec, const Overrides& o) {
  if (o.seed) spec.base_seed = *o.seed;
  if (o.trials) spec.trials = *o.trials;
  if (o.timing) spec.record_timing = true;
  spec.validate();
}

void print_summary(const ExperimentResult& res) {
  std::printf("%-13s %10s %14s %12s %8s %8s\n", "scheme", std::string(to_string(res.sweep_variable)).c_str(),
              "mean_mse", "std_error", "iters", "excl");
  for (const auto& r : res.rows)
    std::printf("%-13s %10g %14.6g %12.3g %8.1f %8d\n", std::string(to_string(r.scheme)).c_str(),
                r.sweep_value, r.mean_mse, r.std_error, r.mean_outer_iters, r.excluded);
}

int execute(ExperimentSpec spec, const Overrides& o, const fs::path& out_dir) {
  apply(spec, o);
  fs::create_directories(out_dir);
  const fs::path csv = out_dir / (spec.name + ".csv");
  const ExperimentResult res = run_experiment(spec, resolve_threads(o.threads));
  write_results(res, spec, csv);
  print_summary(res);
  std::printf("wrote %s\n", csv.string().c_str());
  return 0;
}

// One line, key=value, so scripts can split on spaces after the prefix.
int report_error(std::string_view kind, std::string_view message) {
  std::string flat(message);
  for (char& c : flat)
    if (c == '\n') c = ' ';
  std::fprintf(stderr, "aircomp: error kind=%.*s msg=\"%s\"\n", static_cast<int>(kind.size()),
               kind.data(), flat.c_str());
  return kind == "usage" || kind == "config" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid beamforming for massive-MIMO over-the-air computation"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  Overrides o;
  const auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Base seed override");
    cmd->add_option("--threads", o.threads, "Worker threads (default: $AIRCOMP_THREADS or 1)");
    cmd->add_option("--trials", o.trials, "Trials per sweep point")->check(CLI::PositiveNumber);
  };

  std::string config_path;
  std::string out_dir = "results";
  auto* run = app.add_subcommand("run", "Run the sweep described by a key = value config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--timing", o.timing, "Record wall time (makes CSVs run-dependent)");
  add_common(run);

  std::string figure;
  auto* fig = app.add_subcommand("figure", "Run a preset scenario (fig2 ... fig9)");
  fig->add_option("name", figure, "Preset name")->required();
  fig->add_option("--out", out_dir, "Output directory");
  fig->add_flag("--timing", o.timing, "Record wall time (makes CSVs run-dependent)");
  add_common(fig);

  auto* show = app.add_subcommand("show", "Print a preset as a config file");
  show->add_option("name", figure, "Preset name")->required();

  std::vector<int> criteria;
  auto* validate = app.add_subcommand("validate", "Run the acceptance checks");
  validate->add_option("--criteria", criteria, "Subset of criteria (1-10)")->delimiter(',');
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("usage", e.what());
  }

  try {
    if (*run) return execute(load_spec(config_path), o, out_dir);
    if (*fig) return execute(figure_preset(figure), o, out_dir);
    if (*show) {
      std::cout << format_spec(figure_preset(figure));
      return 0;
    }
    if (*validate) {
      acceptance::Options opts;
      opts.threads = resolve_threads(o.threads);
      opts.trials = o.trials;
      if (o.seed) opts.seed = *o.seed;
      if (criteria.empty()) criteria = acceptance::all_criteria();
      bool ok = true;
      for (int id : criteria) {
        const auto r = acceptance::run_criterion(id, opts);
        std::cout << acceptance::format_line(r) << std::endl;
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    return report_error("config", e.what());
  } catch (const std::invalid_argument& e) {
    return report_error("input", e.what());
  } catch (const std::system_error& e) {
    return report_error("io", e.what());
  } catch (const std::exception& e) {
    return report_error("runtime", e.what());
  }
  return report_error("usage", "no subcommand");
}
