#include "potts/potts1d.hpp"

#include "potts/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace potts {

Signal1D::Signal1D(std::size_t length, std::size_t channels)
  : length_(length)
  , channels_(channels)
  , samples_(length * channels, 0.0)
{
  if (length == 0 || channels == 0) {
    throw Error(Errc::InvalidArgument, "Signal1D: length and channels must be >= 1");
  }
}

Signal1D::Signal1D(std::size_t length, std::size_t channels, std::vector<double> samples)
  : length_(length)
  , channels_(channels)
  , samples_(std::move(samples))
{
  if (length == 0 || channels == 0) {
    throw Error(Errc::InvalidArgument, "Signal1D: length and channels must be >= 1");
  }
  if (samples_.size() != length * channels) {
    throw Error(Errc::LengthMismatch, "Signal1D: expected " + std::to_string(length * channels) + " samples, got " +
                                        std::to_string(samples_.size()));
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) {
      throw Error(Errc::NonfinitePixel, "Signal1D: non-finite sample");
    }
  }
}

Signal1D Signal1D::scalar(std::vector<double> samples)
{
  std::size_t const n = samples.size();
  return Signal1D(n, 1, std::move(samples));
}

std::vector<double> Segmentation1D::expand() const
{
  std::vector<double> out;
  if (breakpoints.empty()) {
    return out;
  }
  out.reserve(breakpoints.back() * channels);
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    for (std::size_t i = segment_begin(k); i < breakpoints[k]; ++i) {
      auto v = value(k);
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  return out;
}

double potts_tie_tolerance(std::span<const double> samples, std::size_t length, double gamma)
{
  double scale = 1.0 + gamma * static_cast<double>(length);
  for (double v : samples) {
    scale += v * v;
  }
  return 1e-12 * scale;
}

namespace {

void check_gamma(double gamma)
{
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(Errc::InvalidArgument, "Potts: gamma must be finite and >= 0");
  }
}

// Per-channel means of each segment plus the energy recomputed from scratch.
Segmentation1D finish_segmentation(const Signal1D &signal, std::vector<std::size_t> ends, double gamma)
{
  std::size_t const d = signal.channels();
  Segmentation1D seg;
  seg.channels = d;
  seg.breakpoints = std::move(ends);
  seg.segment_values.assign(seg.breakpoints.size() * d, 0.0);
  double residual = 0.0;
  for (std::size_t k = 0; k < seg.breakpoints.size(); ++k) {
    std::size_t const begin = seg.segment_begin(k);
    std::size_t const end = seg.breakpoints[k];
    double const len = static_cast<double>(end - begin);
    for (std::size_t ch = 0; ch < d; ++ch) {
      double sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        sum += signal(i, ch);
      }
      double const mean = sum / len;
      seg.segment_values[k * d + ch] = mean;
      for (std::size_t i = begin; i < end; ++i) {
        double const r = signal(i, ch) - mean;
        residual += r * r;
      }
    }
  }
  seg.energy = gamma * static_cast<double>(seg.breakpoints.size() - 1) + residual;
  return seg;
}

} // namespace

PottsSolver::PottsSolver(PottsOptions options)
  : options_(options)
{
}

void PottsSolver::prefix_ends(std::size_t end, std::vector<std::size_t> &out) const
{
  out.clear();
  for (std::size_t k = end; k > 0; k = prev_[k]) {
    out.push_back(k);
  }
  std::reverse(out.begin(), out.end());
}

bool PottsSolver::lex_less(std::size_t a, std::size_t b)
{
  prefix_ends(a, lex_a_);
  prefix_ends(b, lex_b_);
  return std::lexicographical_compare(lex_a_.begin(), lex_a_.end(), lex_b_.begin(), lex_b_.end());
}

void PottsSolver::run(std::span<const double> samples, std::size_t d, double gamma)
{
  std::size_t const n = samples.size() / d;
  double const tol = potts_tie_tolerance(samples, n, gamma);

  best_.assign(n + 1, 0.0);
  segments_.assign(n + 1, 0);
  prev_.assign(n + 1, 0);
  candidate_energy_.resize(n);
  candidate_start_.resize(n);
  mean_.resize(d);
  forward_mean_.assign(d, 0.0);
  double forward_m2 = 0.0;

  for (std::size_t r = 1; r <= n; ++r) {
    // Deviation of the single segment [0, r), accumulated left to right.
    {
      double const count = static_cast<double>(r);
      auto z = samples.subspan((r - 1) * d, d);
      for (std::size_t ch = 0; ch < d; ++ch) {
        double const delta = z[ch] - forward_mean_[ch];
        forward_mean_[ch] += delta / count;
        forward_m2 += delta * (z[ch] - forward_mean_[ch]);
      }
    }

    std::size_t candidates = 0;
    candidate_energy_[candidates] = forward_m2;
    candidate_start_[candidates] = 0;
    ++candidates;
    double min_energy = forward_m2;

    // Last segment [l, r) for l = r-1 down to 1, deviation accumulated right
    // to left. The deviation never decreases as l moves left and the prefix
    // energies are nonnegative, so once gamma + m2 leaves the tie window of
    // the running minimum no smaller l can enter it.
    std::fill(mean_.begin(), mean_.end(), 0.0);
    double m2 = 0.0;
    for (std::size_t l = r - 1; l >= 1; --l) {
      double const count = static_cast<double>(r - l);
      auto z = samples.subspan(l * d, d);
      for (std::size_t ch = 0; ch < d; ++ch) {
        double const delta = z[ch] - mean_[ch];
        mean_[ch] += delta / count;
        m2 += delta * (z[ch] - mean_[ch]);
      }
      if (options_.prune && gamma + m2 > min_energy + tol) {
        break;
      }
      double const energy = best_[l] + gamma + m2;
      candidate_energy_[candidates] = energy;
      candidate_start_[candidates] = l;
      ++candidates;
      min_energy = std::min(min_energy, energy);
    }

    // Among candidates inside the tie window: fewest segments, then the
    // lexicographically smallest breakpoints. All candidates end at r, so
    // the comparison reduces to their prefixes.
    std::size_t chosen = candidates;
    for (std::size_t k = 0; k < candidates; ++k) {
      if (candidate_energy_[k] > min_energy + tol) {
        continue;
      }
      if (chosen == candidates) {
        chosen = k;
        continue;
      }
      std::size_t const l = candidate_start_[k];
      std::size_t const lc = candidate_start_[chosen];
      if (segments_[l] < segments_[lc] || (segments_[l] == segments_[lc] && lex_less(l, lc))) {
        chosen = k;
      }
    }
    std::size_t const l = candidate_start_[chosen];
    best_[r] = candidate_energy_[chosen];
    segments_[r] = segments_[l] + 1;
    prev_[r] = l;
  }
}

Segmentation1D PottsSolver::solve(const Signal1D &signal, double gamma)
{
  check_gamma(gamma);
  if (signal.length() == 0) {
    throw Error(Errc::InvalidArgument, "Potts: empty signal");
  }
  run(signal.samples(), signal.channels(), gamma);
  std::vector<std::size_t> ends;
  prefix_ends(signal.length(), ends);
  return finish_segmentation(signal, std::move(ends), gamma);
}

void PottsSolver::solve_into(std::span<const double> samples, std::size_t d, double gamma, std::span<double> out)
{
  check_gamma(gamma);
  if (d == 0 || samples.empty() || samples.size() % d != 0 || out.size() != samples.size()) {
    throw Error(Errc::LengthMismatch, "Potts: inconsistent sample/output sizes");
  }
  run(samples, d, gamma);
  std::size_t const n = samples.size() / d;
  prefix_ends(n, lex_a_);
  std::size_t begin = 0;
  for (std::size_t end : lex_a_) {
    double const len = static_cast<double>(end - begin);
    for (std::size_t ch = 0; ch < d; ++ch) {
      double sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        sum += samples[i * d + ch];
      }
      double const mean = sum / len;
      for (std::size_t i = begin; i < end; ++i) {
        out[i * d + ch] = mean;
      }
    }
    begin = end;
  }
}

Segmentation1D solve_potts_1d(const Signal1D &signal, double gamma, PottsOptions options)
{
  PottsSolver solver(options);
  return solver.solve(signal, gamma);
}

double potts_energy_1d(const Signal1D &signal, std::span<const double> values, double gamma)
{
  std::size_t const d = signal.channels();
  if (values.size() != signal.length() * d) {
    throw Error(Errc::LengthMismatch, "potts_energy_1d: values length " + std::to_string(values.size()) +
                                        " does not match signal length " + std::to_string(signal.length() * d));
  }
  double residual = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    double const r = signal.samples()[k] - values[k];
    residual += r * r;
  }
  std::size_t jumps = 0;
  for (std::size_t i = 0; i + 1 < signal.length(); ++i) {
    for (std::size_t ch = 0; ch < d; ++ch) {
      if (values[i * d + ch] != values[(i + 1) * d + ch]) {
        ++jumps;
        break;
      }
    }
  }
  return gamma * static_cast<double>(jumps) + residual;
}

Segmentation1D brute_force_potts(const Signal1D &signal, double gamma)
{
  check_gamma(gamma);
  std::size_t const n = signal.length();
  if (n == 0) {
    throw Error(Errc::InvalidArgument, "brute_force_potts: empty signal");
  }
  if (n > kBruteForceMaxLength) {
    throw Error(Errc::LengthCapExceeded, "brute_force_potts: length " + std::to_string(n) + " exceeds cap " +
                                           std::to_string(kBruteForceMaxLength));
  }
  double const tol = potts_tie_tolerance(signal.samples(), n, gamma);

  std::size_t const partitions = std::size_t{1} << (n - 1);
  std::vector<Segmentation1D> all;
  all.reserve(partitions);
  double min_energy = std::numeric_limits<double>::infinity();
  // Bit i of the mask places a breakpoint after sample i.
  for (std::size_t mask = 0; mask < partitions; ++mask) {
    std::vector<std::size_t> ends;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        ends.push_back(i + 1);
      }
    }
    ends.push_back(n);
    all.push_back(finish_segmentation(signal, std::move(ends), gamma));
    min_energy = std::min(min_energy, all.back().energy);
  }

  Segmentation1D const *chosen = nullptr;
  for (auto const &seg : all) {
    if (seg.energy > min_energy + tol) {
      continue;
    }
    if (chosen == nullptr || seg.segment_count() < chosen->segment_count() ||
        (seg.segment_count() == chosen->segment_count() && seg.breakpoints < chosen->breakpoints)) {
      chosen = &seg;
    }
  }
  return *chosen;
}

} // namespace potts
