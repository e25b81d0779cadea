#pragma once

// Exact univariate Potts solver.
//
// Minimizes  P(v) = gamma * J(v) + sum_i ||z_i - v_i||^2  over all
// d-vector sequences v, where J(v) counts the positions with v_{i+1} != v_i
// (one jump per position, however many channels change).
//
// Ties between segmentations whose energies agree to within
// potts_tie_tolerance() are broken toward fewer segments, then toward the
// lexicographically smallest breakpoint sequence.

#include <cstddef>
#include <span>
#include <vector>

namespace potts {

class Signal1D
{
public:
  Signal1D() = default;
  Signal1D(std::size_t length, std::size_t channels);
  // `samples` is sample-major: samples[i * channels + ch].
  Signal1D(std::size_t length, std::size_t channels, std::vector<double> samples);

  static Signal1D scalar(std::vector<double> samples);

  std::size_t length() const noexcept { return length_; }
  std::size_t channels() const noexcept { return channels_; }

  double &operator()(std::size_t i, std::size_t ch = 0) noexcept { return samples_[i * channels_ + ch]; }
  double operator()(std::size_t i, std::size_t ch = 0) const noexcept { return samples_[i * channels_ + ch]; }

  std::span<const double> sample(std::size_t i) const noexcept
  {
    return {samples_.data() + i * channels_, channels_};
  }
  std::span<const double> samples() const noexcept { return samples_; }

private:
  std::size_t length_ = 0;
  std::size_t channels_ = 1;
  std::vector<double> samples_;
};

struct Segmentation1D
{
  std::size_t channels = 1;
  // Exclusive end index of each segment; strictly increasing, last == length.
  std::vector<std::size_t> breakpoints;
  // One d-vector per segment, the per-channel mean of the covered samples.
  std::vector<double> segment_values;
  double energy = 0.0;

  std::size_t segment_count() const noexcept { return breakpoints.size(); }
  std::size_t segment_begin(std::size_t k) const noexcept { return k == 0 ? 0 : breakpoints[k - 1]; }
  std::span<const double> value(std::size_t k) const noexcept
  {
    return {segment_values.data() + k * channels, channels};
  }
  // Per-sample values, sample-major.
  std::vector<double> expand() const;
};

struct PottsOptions
{
  // Skip segment starts that provably cannot reach the tie window of the
  // current best. Results are identical with pruning on or off.
  bool prune = true;
};

// Energies closer than this are treated as equal by the tie-break.
double potts_tie_tolerance(std::span<const double> samples, std::size_t length, double gamma);

// Dynamic program over the start of the last segment with reusable
// workspace. One instance per thread.
class PottsSolver
{
public:
  explicit PottsSolver(PottsOptions options = {});

  Segmentation1D solve(const Signal1D &signal, double gamma);

  // Writes the minimizer's per-sample values (sample-major) into `out`,
  // which must hold samples.size() values.
  void solve_into(std::span<const double> samples, std::size_t channels, double gamma, std::span<double> out);

private:
  // Fills prev_ so that the optimal segmentation of the full signal can be
  // read back from position `length`.
  void run(std::span<const double> samples, std::size_t channels, double gamma);
  // Segment ends of the stored optimal segmentation of prefix [0, end).
  void prefix_ends(std::size_t end, std::vector<std::size_t> &out) const;
  bool lex_less(std::size_t a, std::size_t b);

  PottsOptions options_;
  std::vector<double> best_;
  std::vector<std::size_t> segments_;
  std::vector<std::size_t> prev_;
  std::vector<double> candidate_energy_;
  std::vector<std::size_t> candidate_start_;
  std::vector<double> mean_;
  std::vector<double> forward_mean_;
  std::vector<std::size_t> lex_a_;
  std::vector<std::size_t> lex_b_;
};

Segmentation1D solve_potts_1d(const Signal1D &signal, double gamma, PottsOptions options = {});

// gamma * J(v) + sum_i ||z_i - v_i||^2 for a sample-major value sequence.
double potts_energy_1d(const Signal1D &signal, std::span<const double> values, double gamma);

inline constexpr std::size_t kBruteForceMaxLength = 14;

// Exhaustive search over all 2^(n-1) interval partitions, with segment values
// set to per-channel means and the same tie-break as the solver.
Segmentation1D brute_force_potts(const Signal1D &signal, double gamma);

} // namespace potts
