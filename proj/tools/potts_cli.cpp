// potts-partition: piecewise-constant disparity and optical flow.
//
//   potts-partition disparity --left L.png --right R.png --lambda 2.5 -o disp.pgm
//   potts-partition flow --frame1 a.png --frame2 b.png --lambda 0.05 -o flow.flo --color flow.png
//   potts-partition potts1d --signal z.csv --gamma 0.1
//   potts-partition metrics --result disp.pgm --gt gt.pgm --gt-scale 8

#include "cli_config.hpp"

#include "potts/error.hpp"
#include "potts/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Flags
{
  double lambda = 0.0;
  int mu = 0;
  std::vector<double> box_min;
  std::vector<double> box_max;
  std::vector<int> search_min;
  std::vector<int> search_max;
  double color_max = 0.0;
};

void add_solver_options(CLI::App &sub, potts::RunSpec &spec, Flags &flags)
{
  sub.add_option("--lambda", flags.lambda, "Potts weight")->required()->check(CLI::PositiveNumber);
  sub.add_option("--mu", flags.mu, "1 enables the box constraint (disparity only)")->check(CLI::IsMember({0, 1}));
  sub.add_option("--box-min", flags.box_min, "Lower box bound (default: search minimum)")->delimiter(',');
  sub.add_option("--box-max", flags.box_max, "Upper box bound (default: search maximum)")->delimiter(',');
  sub.add_option("--eta0", spec.solver.eta0, "Initial coupling weight")->capture_default_str();
  sub.add_option("--sigma", spec.solver.sigma, "Coupling growth factor (> 1)")->capture_default_str();
  sub.add_option("--iters", spec.solver.iterations, "Iterations")->capture_default_str();
  sub.add_option("--stop-tol", spec.solver.stop_tolerance, "Early stop on max |u-v|,|u-w| (0 = off)");
  sub.add_flag("--check-invariants", spec.solver.check_invariants, "Assert convergence bounds every iteration");
  sub.add_option("--search-min", flags.search_min, "Smallest displacement (row,col for flow)")->delimiter(',');
  sub.add_option("--search-max", flags.search_max, "Largest displacement (row,col for flow)")->delimiter(',');
  sub.add_option("--block-radius", spec.match.block_radius, "Block radius (3 = 7x7)")->capture_default_str();
  sub.add_option("--median-radius", spec.match.median_radius, "Median radius (1 = 3x3)")->capture_default_str();
  sub.add_option("--trace", spec.trace_path, "Iteration trace CSV");
  sub.add_option("--gt", spec.gt_path, "Ground truth for evaluation");
  sub.add_option("--tau", spec.tau, "Bad-pixel threshold")->capture_default_str();
  sub.add_option("--threads", spec.match.threads, "Worker threads (0 = all cores)");
}

// Applies the parsed range/box flags; `axes` is 1 for disparity, 2 for flow.
void finish_spec(potts::RunSpec &spec, const Flags &flags, int axes, potts::SearchRange fallback)
{
  spec.solver.lambda = flags.lambda;
  spec.solver.box = flags.mu == 1;
  spec.solver.threads = spec.match.threads;

  auto pick = [](const std::vector<int> &values, std::size_t index, int fallback_value) {
    if (values.empty()) {
      return fallback_value;
    }
    return values.size() == 1 ? values[0] : values.at(index);
  };
  for (auto const *values : {&flags.search_min, &flags.search_max}) {
    if (values->size() > static_cast<std::size_t>(axes)) {
      throw potts::Error(potts::Errc::InvalidArgument, "--search-min/--search-max take at most " +
                                                          std::to_string(axes) + " values");
    }
  }
  if (axes == 1) {
    spec.match.rows = {0, 0};
    spec.match.cols = {pick(flags.search_min, 0, fallback.min), pick(flags.search_max, 0, fallback.max)};
  } else {
    spec.match.rows = {pick(flags.search_min, 0, fallback.min), pick(flags.search_max, 0, fallback.max)};
    spec.match.cols = {pick(flags.search_min, 1, fallback.min), pick(flags.search_max, 1, fallback.max)};
  }

  if (spec.solver.box) {
    spec.solver.box_min = flags.box_min;
    spec.solver.box_max = flags.box_max;
    if (spec.solver.box_min.empty()) {
      spec.solver.box_min = {static_cast<double>(spec.match.cols.min)};
    }
    if (spec.solver.box_max.empty()) {
      spec.solver.box_max = {static_cast<double>(spec.match.cols.max)};
    }
  }
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Piecewise-constant disparity and optical flow by Potts-regularized splitting"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");
  // --config is consumed before parsing; registered here for --help only.
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; command line flags take precedence");

  potts::RunSpec spec;
  Flags flags;

  auto *disparity = app.add_subcommand("disparity", "Partitioned disparity from a rectified stereo pair");
  disparity->add_option("--left", spec.first, "Left image (PGM/PPM/PNG)")->required();
  disparity->add_option("--right", spec.second, "Right image")->required();
  disparity->add_option("-o,--out", spec.output, "16-bit disparity image (PGM or PNG)")->required();
  disparity->add_option("--out-scale", spec.output_scale, "Output sample = disparity * scale")->capture_default_str();
  disparity->add_flag("--normalize", spec.normalize_output, "Stretch [min, max] to the 16-bit range");
  disparity->add_option("--gt-scale", spec.gt_scale, "Ground-truth samples per disparity unit")->capture_default_str();
  add_solver_options(*disparity, spec, flags);

  auto *flow = app.add_subcommand("flow", "Partitioned optical flow from two frames");
  flow->add_option("--frame1", spec.first, "First frame")->required();
  flow->add_option("--frame2", spec.second, "Second frame")->required();
  flow->add_option("-o,--out", spec.output, "Middlebury .flo output");
  flow->add_option("--color", spec.color_output, "Color-coded flow image (PNG or PPM)");
  auto *color_max = flow->add_option("--color-max", flags.color_max, "Magnitude mapped to full brightness");
  add_solver_options(*flow, spec, flags);

  auto *potts1d = app.add_subcommand("potts1d", "Exact univariate Potts segmentation of a CSV signal");
  potts1d->add_option("--signal", spec.signal_path, "CSV, one sample per line, channels comma separated")->required();
  potts1d->add_option("--gamma", spec.gamma, "Jump penalty")->required()->check(CLI::NonNegativeNumber);
  potts1d->add_option("-o,--out", spec.output, "Segmentation CSV (default: stdout)");

  auto *metrics = app.add_subcommand("metrics", "Score a disparity image or .flo file against ground truth");
  metrics->add_option("--result", spec.result_path, "Disparity image or .flo")->required();
  metrics->add_option("--gt", spec.gt_path, "Ground truth (image or .flo)")->required();
  metrics->add_option("--result-scale", spec.result_scale, "Result samples per disparity unit")->capture_default_str();
  metrics->add_option("--gt-scale", spec.gt_scale, "Ground-truth samples per disparity unit")->capture_default_str();
  metrics->add_option("--tau", spec.tau, "Bad-pixel threshold")->capture_default_str();

  std::vector<std::string> args;
  try {
    std::vector<std::string> raw(argv + 1, argv + argc);
    args = potts::cli::expand_config(raw);
  } catch (const potts::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    if (disparity->parsed()) {
      spec.mode = potts::Mode::Disparity;
      finish_spec(spec, flags, 1, {0, 16});
    } else if (flow->parsed()) {
      spec.mode = potts::Mode::Flow;
      finish_spec(spec, flags, 2, {-4, 4});
      if (color_max->count() > 0) {
        spec.color_max = flags.color_max;
      }
    } else if (potts1d->parsed()) {
      spec.mode = potts::Mode::Potts1D;
    } else {
      spec.mode = potts::Mode::Metrics;
    }
  } catch (const potts::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  return potts::run_pipeline(spec, std::cout, std::cerr);
}
