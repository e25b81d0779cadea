#pragma once

// End-to-end runs: block matching -> linearized data term -> splitting
// solver, plus the file-level driver behind the command line tool.

#include "potts/blockmatch.hpp"
#include "potts/dataterm.hpp"
#include "potts/potts1d.hpp"
#include "potts/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace potts {

struct PartitionOutput
{
  VectorField init; // integer initializer from block matching
  LinearizedData data;
  SolverResult result;
};

// Disparity between a rectified pair; f1 = left, f2 = right.
PartitionOutput compute_disparity(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &match,
                                  const SolverConfig &solver);
// Flow between two frames; the result is a (row, col) displacement field.
PartitionOutput compute_flow(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &match,
                             const SolverConfig &solver);

enum class Mode {
  Disparity,
  Flow,
  Potts1D,
  Metrics,
};

struct RunSpec
{
  Mode mode = Mode::Disparity;

  // disparity / flow
  std::string first;  // left image or frame 1
  std::string second; // right image or frame 2
  std::string output; // disparity: 16-bit PGM/PNG; flow: .flo
  std::string color_output; // flow: color-coded PNG/PPM
  std::string trace_path;
  MatchConfig match;
  SolverConfig solver;
  // Disparity output encoding: sample = round(u * output_scale), clamped to
  // [0, 65535]. With normalize_output the range [min u, max u] is stretched
  // to [0, 65535] instead.
  double output_scale = 256.0;
  bool normalize_output = false;
  std::optional<double> color_max;

  // Ground truth for disparity / flow / metrics. Disparity ground truth is
  // an image whose samples are disparity * gt_scale, with 0 = unknown.
  std::string gt_path;
  double gt_scale = 1.0;
  double tau = 1.0;

  // metrics: the result to score (disparity image or .flo) and the scale of
  // a disparity image.
  std::string result_path;
  double result_scale = 256.0;

  // potts1d
  std::string signal_path;
  double gamma = 1.0;
};

// Runs one mode; returns the process exit status. Results and diagnostics
// go to `log` and `err`; errors carry the file or pixel they refer to.
int run_pipeline(const RunSpec &spec, std::ostream &log, std::ostream &err);

// One sample per line, channels comma separated. Blank lines, '#' comments
// and a non-numeric header line are skipped.
Signal1D parse_signal_csv(const std::string &text);
// Header "begin,end,value_0[,value_1...]" then one line per segment; `end`
// is exclusive.
std::string format_segmentation_csv(const Segmentation1D &seg);

} // namespace potts
