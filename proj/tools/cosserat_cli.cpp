// Copyright 2026 The Cosserat Observer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for truth runs, observer runs and studies.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cosserat/errors.hpp"
#include "cosserat/harness.hpp"
#include "cosserat/io.hpp"

namespace {

using namespace cosserat;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format = "csv";
  std::optional<int> nodes;
  std::optional<double> dt;
  std::optional<double> end_time;
  std::optional<double> gain;
  bool soft = false;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--nodes", o.nodes, "Grid nodes N");
  app->add_option("--dt", o.dt, "Time step in s (<= 0: stable default)");
  app->add_option("--end-time", o.end_time, "Horizon in s");
  app->add_option("--gain", o.gain, "Observer gain gamma, Gamma = gamma I");
  app->add_flag("--soft", o.soft, "Start from the reduced-stiffness preset (ignored with --config)");
}

ExperimentConfig build_config(const CommonOptions& o) {
  ExperimentConfig c = o.soft ? ExperimentConfig::soft() : ExperimentConfig::paper();
  if (!o.config_path.empty()) c = load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.nodes) c.nodes = *o.nodes;
  if (o.dt) c.dt_s = *o.dt;
  if (o.end_time) c.end_time_s = *o.end_time;
  if (o.gain) c.gain = *o.gain;
  c.validate();
  return c;
}

void warn_gain(const ExperimentConfig& c) {
  if (c.tip_condition != TipCondition::kStrong || c.gain <= 0.0) return;
  const RodModel model(make_parameters(c), make_actuation(c), make_grid(c, true));
  const double bound = gain_stability_bound(model, resolve_dt(c));
  if (c.gain > bound) {
    std::fprintf(stderr,
                 "warning: gain %.3g exceeds the explicit tip update bound %.3g; "
                 "the strong tip condition may diverge\n",
                 c.gain, bound);
  }
}

class Output {
 public:
  Output(const ExperimentConfig& c, Format f) : dir_(c.output_dir), format_(f) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create '" + dir_.string() + "': " + ec.message());
    write_file((dir_ / "config.json").string(), config_to_json(c));
  }
  void put(const std::string& stem, const std::string& contents) const {
    const std::string path = (dir_ / (stem + extension(format_))).string();
    write_file(path, contents);
    std::printf("wrote %s\n", path.c_str());
  }
  Format format() const { return format_; }

 private:
  std::filesystem::path dir_;
  Format format_;
};

void summarize(const std::vector<ErrorRecord>& errors) {
  if (errors.empty()) return;
  const auto t = convergence_time(errors, kConvergenceFraction);
  std::printf("initial stacked error %.6g, final %.6g, steady state %.6g\n",
              errors.front().stacked_linf(), errors.back().stacked_linf(),
              steady_state_error(errors, kSteadyStateWindow));
  if (t) {
    std::printf("converged below %.0f%% at t = %.4g s\n", 100 * kConvergenceFraction, *t);
  } else {
    std::printf("did not converge below %.0f%%\n", 100 * kConvergenceFraction);
  }
}

double paper_amplitude(StudyKind kind) {
  switch (kind) {
    case StudyKind::kNoise: return 0.2;
    case StudyKind::kParams: return 0.2;
    case StudyKind::kRouting: return 0.1;
    case StudyKind::kNone: return 0.0;
  }
  return 0.0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cosserat rod boundary observer experiments"};
  app.require_subcommand(1);

  CommonOptions simulate_opts, observe_opts, twin_opts, study_opts, sweep_opts;
  CLI::App* simulate = app.add_subcommand("simulate", "Truth run: trajectory and tip log");
  add_common(simulate, simulate_opts);

  CLI::App* observe = app.add_subcommand("observe", "Observer run against a tip log");
  add_common(observe, observe_opts);
  std::string log_path;
  observe->add_option("--log", log_path, "Measurement log (csv or json)")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* twin = app.add_subcommand("twin", "Truth run, observer run and errors");
  add_common(twin, twin_opts);

  CLI::App* study = app.add_subcommand("study", "Twin run with one robustness perturbation");
  add_common(study, study_opts);
  std::string study_kind;
  std::optional<double> study_amplitude;
  study->add_option("--kind", study_kind, "Perturbation kind")
      ->required()
      ->check(CLI::IsMember({"noise", "params", "routing"}));
  study->add_option("--amplitude", study_amplitude, "Amplitude (default: 0.2, 0.2, 0.1)");

  CLI::App* sweep = app.add_subcommand("sweep", "Grid of amplitudes and seeds for one kind");
  add_common(sweep, sweep_opts);
  std::string sweep_kind = "noise";
  std::vector<double> amplitudes = {0.0, 0.1, 0.2};
  std::vector<std::uint64_t> seeds = {0};
  int workers = 0;
  sweep->add_option("--kind", sweep_kind, "Perturbation kind")
      ->check(CLI::IsMember({"noise", "params", "routing"}));
  sweep->add_option("--amplitudes", amplitudes, "Amplitudes")->delimiter(',');
  sweep->add_option("--seeds", seeds, "Seeds")->delimiter(',');
  sweep->add_option("--workers", workers, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const ExperimentConfig c = build_config(simulate_opts);
      const Output out(c, parse_format(simulate_opts.format));
      const TruthRun run = run_truth(c);
      out.put("truth_trajectory", trajectory_to_string(run.trajectory, out.format()));
      out.put("measurements", log_to_string(run.log, out.format()));
    } else if (observe->parsed()) {
      const ExperimentConfig c = build_config(observe_opts);
      warn_gain(c);
      const Output out(c, parse_format(observe_opts.format));
      const Format in = log_path.ends_with(".json") ? Format::kJson : Format::kCsv;
      const MeasurementLog log = log_from_string(read_file(log_path), in);
      const ObserverRun run = run_observer(c, log);
      out.put("estimate_trajectory", trajectory_to_string(run.trajectory, out.format()));
    } else if (twin->parsed() || study->parsed()) {
      const bool is_study = study->parsed();
      ExperimentConfig c = build_config(is_study ? study_opts : twin_opts);
      if (is_study) {
        const StudyKind kind = parse_study_kind(study_kind);
        c.study = {kind, study_amplitude.value_or(paper_amplitude(kind))};
        c.validate();
      }
      warn_gain(c);
      const Output out(c, parse_format(is_study ? study_opts.format : twin_opts.format));
      const TwinRun run = run_twin(c);
      out.put("truth_trajectory", trajectory_to_string(run.truth.trajectory, out.format()));
      out.put("measurements", log_to_string(run.truth.log, out.format()));
      out.put("estimate_trajectory", trajectory_to_string(run.observer.trajectory, out.format()));
      out.put("errors", errors_to_string(run.observer.errors, out.format()));
      summarize(run.observer.errors);
    } else if (sweep->parsed()) {
      const ExperimentConfig c = build_config(sweep_opts);
      warn_gain(c);
      const Output out(c, parse_format(sweep_opts.format));
      const std::vector<StudyCell> cells =
          run_study(c, parse_study_kind(sweep_kind), amplitudes, seeds, workers);
      out.put("sweep", study_to_string(cells, out.format()));
      for (const StudyCell& cell : cells) {
        std::printf("%s amplitude %.3g seed %llu: steady state %.6g\n",
                    to_string(cell.kind).c_str(), cell.amplitude,
                    static_cast<unsigned long long>(cell.seed), cell.steady_state_error);
      }
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "diverged at step %ld, node %d: %s\n", e.step(), e.node(), e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
