#include "potts/blockmatch.hpp"

#include "potts/error.hpp"
#include "potts/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace potts {

double ncc(std::span<const double> block_a, std::span<const double> block_b)
{
  if (block_a.size() != block_b.size()) {
    throw Error(Errc::LengthMismatch, "ncc: blocks differ in size");
  }
  if (block_a.empty()) {
    return 0.0;
  }
  double const count = static_cast<double>(block_a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t k = 0; k < block_a.size(); ++k) {
    mean_a += block_a[k];
    mean_b += block_b[k];
  }
  mean_a /= count;
  mean_b /= count;
  double cross = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t k = 0; k < block_a.size(); ++k) {
    double const da = block_a[k] - mean_a;
    double const db = block_b[k] - mean_b;
    cross += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  return cross / std::sqrt(var_a * var_b + kNccEpsilon);
}

namespace {

struct Displacement
{
  int dr = 0;
  int dc = 0;
};

// Admissible shifts along one axis for a pixel at `pos`: pos - s in [0, size).
SearchRange admissible(SearchRange range, std::size_t pos, std::size_t size)
{
  int const p = static_cast<int>(pos);
  return {std::max(range.min, p - static_cast<int>(size) + 1), std::min(range.max, p)};
}

// Candidates ordered by squared norm, then lexicographically; the first
// maximal score in this order wins.
std::vector<Displacement> candidate_order(SearchRange rows, SearchRange cols)
{
  std::vector<Displacement> out;
  for (int dr = rows.min; dr <= rows.max; ++dr) {
    for (int dc = cols.min; dc <= cols.max; ++dc) {
      out.push_back({dr, dc});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](Displacement a, Displacement b) {
    int const na = a.dr * a.dr + a.dc * a.dc;
    int const nb = b.dr * b.dr + b.dc * b.dc;
    if (na != nb) {
      return na < nb;
    }
    if (a.dr != b.dr) {
      return a.dr < b.dr;
    }
    return a.dc < b.dc;
  });
  return out;
}

void validate(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &cfg)
{
  if (!f1.same_shape(f2)) {
    throw Error(Errc::ShapeMismatch, "block matching: images differ in shape");
  }
  if (f1.empty()) {
    throw Error(Errc::InvalidArgument, "block matching: empty images");
  }
  if (cfg.block_radius < 1) {
    throw Error(Errc::InvalidArgument, "block matching: block radius must be >= 1");
  }
  if (cfg.median_radius < 0) {
    throw Error(Errc::InvalidArgument, "block matching: median radius must be >= 0");
  }
  if (cfg.rows.min > cfg.rows.max || cfg.cols.min > cfg.cols.max) {
    throw Error(Errc::EmptySearch, "block matching: empty search range");
  }
}

// Returns the best displacement per pixel; `channels` is 1 (column shift
// only) or 2 (row, col).
VectorField match(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &cfg, SearchRange rows,
                  SearchRange cols, std::size_t channels)
{
  std::size_t const height = f1.rows();
  std::size_t const width = f1.cols();
  int const radius = cfg.block_radius;
  auto const order = candidate_order(rows, cols);
  std::size_t const block_cap = static_cast<std::size_t>((2 * radius + 1) * (2 * radius + 1));

  VectorField out(height, width, channels);
  parallel_chunks(height, cfg.threads, [&](unsigned, std::size_t row_begin, std::size_t row_end) {
    std::vector<double> block_a;
    std::vector<double> block_b;
    block_a.reserve(block_cap);
    block_b.reserve(block_cap);
    for (std::size_t r = row_begin; r < row_end; ++r) {
      SearchRange const row_ok = admissible(rows, r, height);
      for (std::size_t c = 0; c < width; ++c) {
        SearchRange const col_ok = admissible(cols, c, width);
        if (row_ok.min > row_ok.max || col_ok.min > col_ok.max) {
          throw Error(Errc::EmptySearch, "block matching: no admissible displacement at pixel (" + std::to_string(r) +
                                           ", " + std::to_string(c) + ")");
        }
        bool found = false;
        double best_score = 0.0;
        Displacement best;
        for (Displacement s : order) {
          if (s.dr < row_ok.min || s.dr > row_ok.max || s.dc < col_ok.min || s.dc > col_ok.max) {
            continue;
          }
          int const r2 = static_cast<int>(r) - s.dr;
          int const c2 = static_cast<int>(c) - s.dc;
          block_a.clear();
          block_b.clear();
          for (int oi = -radius; oi <= radius; ++oi) {
            int const ra = static_cast<int>(r) + oi;
            int const rb = r2 + oi;
            if (ra < 0 || rb < 0 || ra >= static_cast<int>(height) || rb >= static_cast<int>(height)) {
              continue;
            }
            for (int oj = -radius; oj <= radius; ++oj) {
              int const ca = static_cast<int>(c) + oj;
              int const cb = c2 + oj;
              if (ca < 0 || cb < 0 || ca >= static_cast<int>(width) || cb >= static_cast<int>(width)) {
                continue;
              }
              block_a.push_back(f1(static_cast<std::size_t>(ra), static_cast<std::size_t>(ca)));
              block_b.push_back(f2(static_cast<std::size_t>(rb), static_cast<std::size_t>(cb)));
            }
          }
          double const score = ncc(block_a, block_b);
          if (!found || score > best_score) {
            found = true;
            best_score = score;
            best = s;
          }
        }
        if (channels == 1) {
          out(r, c, 0) = best.dc;
        } else {
          out(r, c, 0) = best.dr;
          out(r, c, 1) = best.dc;
        }
      }
    }
  });
  return out;
}

void clamp_admissible(VectorField &field, SearchRange rows, SearchRange cols)
{
  for (std::size_t r = 0; r < field.rows(); ++r) {
    for (std::size_t c = 0; c < field.cols(); ++c) {
      SearchRange const col_ok = admissible(cols, c, field.cols());
      if (field.channels() == 1) {
        field(r, c, 0) = std::clamp<double>(field(r, c, 0), col_ok.min, col_ok.max);
      } else {
        SearchRange const row_ok = admissible(rows, r, field.rows());
        field(r, c, 0) = std::clamp<double>(field(r, c, 0), row_ok.min, row_ok.max);
        field(r, c, 1) = std::clamp<double>(field(r, c, 1), col_ok.min, col_ok.max);
      }
    }
  }
}

void assert_in_grid(const VectorField &field)
{
  for (std::size_t r = 0; r < field.rows(); ++r) {
    for (std::size_t c = 0; c < field.cols(); ++c) {
      GridIndex src;
      if (!shifted_source(field, r, c, src)) {
        throw Error(Errc::OutOfGrid, "block matching produced an out-of-grid displacement at (" + std::to_string(r) +
                                       ", " + std::to_string(c) + ")");
      }
    }
  }
}

} // namespace

VectorField median_filter(const VectorField &field, int radius)
{
  if (radius < 0) {
    throw Error(Errc::InvalidArgument, "median_filter: radius must be >= 0");
  }
  if (radius == 0) {
    return field;
  }
  VectorField out(field.rows(), field.cols(), field.channels());
  std::vector<double> window;
  int const height = static_cast<int>(field.rows());
  int const width = static_cast<int>(field.cols());
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      for (std::size_t ch = 0; ch < field.channels(); ++ch) {
        window.clear();
        for (int rr = std::max(0, r - radius); rr <= std::min(height - 1, r + radius); ++rr) {
          for (int cc = std::max(0, c - radius); cc <= std::min(width - 1, c + radius); ++cc) {
            window.push_back(field(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc), ch));
          }
        }
        auto mid = window.begin() + static_cast<std::ptrdiff_t>((window.size() - 1) / 2);
        std::nth_element(window.begin(), mid, window.end());
        out(static_cast<std::size_t>(r), static_cast<std::size_t>(c), ch) = *mid;
      }
    }
  }
  return out;
}

VectorField init_disparity(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &cfg)
{
  validate(f1, f2, cfg);
  SearchRange const none{0, 0};
  VectorField raw = match(f1, f2, cfg, none, cfg.cols, 1);
  VectorField out = median_filter(raw, cfg.median_radius);
  clamp_admissible(out, none, cfg.cols);
  assert_in_grid(out);
  return out;
}

VectorField init_flow(const ScalarImage &f1, const ScalarImage &f2, const MatchConfig &cfg)
{
  validate(f1, f2, cfg);
  VectorField raw = match(f1, f2, cfg, cfg.rows, cfg.cols, 2);
  VectorField out = median_filter(raw, cfg.median_radius);
  clamp_admissible(out, cfg.rows, cfg.cols);
  assert_in_grid(out);
  return out;
}

} // namespace potts
