#include "potts/pipeline.hpp"

#include "potts/error.hpp"
#include "potts/flo.hpp"
#include "potts/flow_color.hpp"
#include "potts/image_io.hpp"
#include "potts/metrics.hpp"
#include "potts/potts1d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace potts {

PartitionOutput compute_disparity(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &match,
                                  const SolverConfig &solver)
{
  PartitionOutput out;
  out.init = init_disparity(f1, f2, match);
  out.data = build_disparity_data(f1, f2, out.init);
  out.result = run(out.data, out.init, solver);
  return out;
}

PartitionOutput compute_flow(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &match,
                             const SolverConfig &solver)
{
  PartitionOutput out;
  out.init = init_flow(f1, f2, match);
  out.data = build_flow_data(f1, f2, out.init);
  out.result = run(out.data, out.init, solver);
  return out;
}

namespace {

std::string read_text(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, "cannot open '" + path + "'");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::Io, "cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw Error(Errc::Io, "write failed for '" + path + "'");
  }
}

void write_trace(const std::string &path, const IterationTrace &trace)
{
  if (path.empty()) {
    return;
  }
  std::ostringstream text;
  write_trace_csv(text, trace);
  write_text(path, text.str());
}

bool has_flo_extension(const std::string &path)
{
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".flo") == 0;
}

RawImage encode_disparity(const VectorField &u, double scale, bool normalize, std::ostream &log)
{
  RawImage image;
  image.rows = u.rows();
  image.cols = u.cols();
  image.channels = 1;
  image.maxval = 65535;
  image.samples.resize(u.pixels());
  double offset = 0.0;
  if (normalize) {
    auto [lo, hi] = std::minmax_element(u.values().begin(), u.values().end());
    offset = *lo;
    scale = *hi > *lo ? 65535.0 / (*hi - *lo) : 0.0;
    log << "disparity range [" << *lo << ", " << *hi << "] stretched to [0, 65535]\n";
  }
  std::size_t clipped = 0;
  for (std::size_t k = 0; k < u.pixels(); ++k) {
    double const s = std::round((u.values()[k] - offset) * scale);
    clipped += (s < 0.0 || s > 65535.0) ? 1 : 0;
    image.samples[k] = static_cast<std::uint16_t>(std::clamp(s, 0.0, 65535.0));
  }
  if (clipped > 0) {
    log << "warning: " << clipped << " disparity values clipped to the 16-bit range\n";
  }
  return image;
}

// Disparity ground truth: samples / scale with 0 marking unknown pixels.
VectorField read_disparity_gt(const std::string &path, double scale)
{
  if (!(scale > 0.0)) {
    throw Error(Errc::InvalidArgument, "ground-truth scale must be > 0");
  }
  ScalarImage const raw = to_gray_samples(read_raw_image(path));
  VectorField gt(raw.rows(), raw.cols(), 1);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    double const s = raw.values()[k];
    gt.values()[k] = s == 0.0 ? 10.0 * kFloUnknown : s / scale;
  }
  return gt;
}

VectorField read_disparity_result(const std::string &path, double scale)
{
  if (!(scale > 0.0)) {
    throw Error(Errc::InvalidArgument, "result scale must be > 0");
  }
  ScalarImage const raw = to_gray_samples(read_raw_image(path));
  VectorField u(raw.rows(), raw.cols(), 1);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    u.values()[k] = raw.values()[k] / scale;
  }
  return u;
}

void report(std::ostream &log, const DisparityMetrics &m, double tau)
{
  log.precision(6);
  log << "bad_pixel_rate(tau=" << tau << ")=" << m.bad_pixel_rate << " mean_abs_error=" << m.mean_abs_error
      << " evaluated=" << m.evaluated << '\n';
}

void report(std::ostream &log, const FlowMetrics &m)
{
  log.precision(6);
  log << "average_endpoint_error=" << m.average_endpoint_error
      << " average_angular_error=" << m.average_angular_error << " evaluated=" << m.evaluated << '\n';
}

void require(const std::string &value, const char *what)
{
  if (value.empty()) {
    throw Error(Errc::InvalidArgument, std::string("missing required ") + what);
  }
}

void run_disparity(const RunSpec &spec, std::ostream &log)
{
  require(spec.first, "left image");
  require(spec.second, "right image");
  require(spec.output, "output path");
  ScalarImage const left = read_image(spec.first);
  ScalarImage const right = read_image(spec.second);
  if (!left.same_shape(right)) {
    throw Error(Errc::ShapeMismatch, "'" + spec.first + "' and '" + spec.second + "' differ in size");
  }
  PartitionOutput const out = compute_disparity(left, right, spec.match, spec.solver);
  write_image(spec.output, encode_disparity(out.result.u, spec.output_scale, spec.normalize_output, log));
  write_trace(spec.trace_path, out.result.trace);
  log << "segments=" << count_segments(out.result.u, 1e-3) << " pixels=" << out.result.u.pixels() << '\n';
  if (!spec.gt_path.empty()) {
    VectorField const gt = read_disparity_gt(spec.gt_path, spec.gt_scale);
    report(log, disparity_metrics(out.result.u, gt, spec.tau), spec.tau);
  }
}

void run_flow(const RunSpec &spec, std::ostream &log)
{
  require(spec.first, "first frame");
  require(spec.second, "second frame");
  if (spec.output.empty() && spec.color_output.empty()) {
    throw Error(Errc::InvalidArgument, "flow needs an output path (.flo) and/or a color output");
  }
  ScalarImage const f1 = read_image(spec.first);
  ScalarImage const f2 = read_image(spec.second);
  if (!f1.same_shape(f2)) {
    throw Error(Errc::ShapeMismatch, "'" + spec.first + "' and '" + spec.second + "' differ in size");
  }
  PartitionOutput const out = compute_flow(f1, f2, spec.match, spec.solver);
  VectorField const flow = to_middlebury(out.result.u);
  if (!spec.output.empty()) {
    write_flo(spec.output, flow);
  }
  if (!spec.color_output.empty()) {
    write_image(spec.color_output, colorize_flow(flow, spec.color_max));
  }
  write_trace(spec.trace_path, out.result.trace);
  log << "segments=" << count_segments(out.result.u, 1e-3) << " pixels=" << out.result.u.pixels() << '\n';
  if (!spec.gt_path.empty()) {
    report(log, flow_metrics(flow, read_flo(spec.gt_path)));
  }
}

void run_potts1d(const RunSpec &spec, std::ostream &log)
{
  require(spec.signal_path, "signal path");
  Signal1D const signal = parse_signal_csv(read_text(spec.signal_path));
  Segmentation1D const seg = solve_potts_1d(signal, spec.gamma);
  std::string const csv = format_segmentation_csv(seg);
  if (spec.output.empty()) {
    log << csv;
  } else {
    write_text(spec.output, csv);
  }
  log.precision(17);
  log << "energy=" << seg.energy << " segments=" << seg.segment_count() << '\n';
}

void run_metrics(const RunSpec &spec, std::ostream &log)
{
  require(spec.result_path, "result path");
  require(spec.gt_path, "ground truth path");
  if (has_flo_extension(spec.result_path)) {
    report(log, flow_metrics(read_flo(spec.result_path), read_flo(spec.gt_path)));
  } else {
    VectorField const u = read_disparity_result(spec.result_path, spec.result_scale);
    VectorField const gt = read_disparity_gt(spec.gt_path, spec.gt_scale);
    report(log, disparity_metrics(u, gt, spec.tau), spec.tau);
  }
}

bool parse_number(std::string_view token, double &value)
{
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) {
    token.remove_prefix(1);
  }
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (!token.empty() && token.front() == '+') {
    token.remove_prefix(1);
  }
  auto const [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(value);
}

} // namespace

Signal1D parse_signal_csv(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  std::vector<double> samples;
  std::size_t channels = 0;
  std::size_t line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.front() == '#') {
      continue;
    }
    std::vector<double> row;
    bool numeric = true;
    std::string_view rest(line);
    for (;;) {
      auto const comma = rest.find(',');
      double v = 0.0;
      if (!parse_number(rest.substr(0, comma), v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
      if (comma == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    if (!numeric) {
      if (!seen_row) {
        seen_row = true; // header
        continue;
      }
      throw Error(Errc::InvalidArgument, "signal CSV line " + std::to_string(line_no) + ": not a number");
    }
    seen_row = true;
    if (channels == 0) {
      channels = row.size();
    } else if (row.size() != channels) {
      throw Error(Errc::LengthMismatch, "signal CSV line " + std::to_string(line_no) + ": expected " +
                                          std::to_string(channels) + " values");
    }
    samples.insert(samples.end(), row.begin(), row.end());
  }
  if (channels == 0) {
    throw Error(Errc::InvalidArgument, "signal CSV contains no samples");
  }
  std::size_t const n = samples.size() / channels;
  return Signal1D(n, channels, std::move(samples));
}

std::string format_segmentation_csv(const Segmentation1D &seg)
{
  std::ostringstream out;
  out.precision(17);
  out << "begin,end";
  for (std::size_t ch = 0; ch < seg.channels; ++ch) {
    out << ",value_" << ch;
  }
  out << '\n';
  for (std::size_t k = 0; k < seg.segment_count(); ++k) {
    out << seg.segment_begin(k) << ',' << seg.breakpoints[k];
    for (double v : seg.value(k)) {
      out << ',' << v;
    }
    out << '\n';
  }
  return out.str();
}

int run_pipeline(const RunSpec &spec, std::ostream &log, std::ostream &err)
{
  try {
    switch (spec.mode) {
    case Mode::Disparity: run_disparity(spec, log); break;
    case Mode::Flow: run_flow(spec, log); break;
    case Mode::Potts1D: run_potts1d(spec, log); break;
    case Mode::Metrics: run_metrics(spec, log); break;
    }
  } catch (const Error &e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace potts
