#include "potts/solver.hpp"

#include "potts/error.hpp"
#include "potts/parallel.hpp"
#include "potts/potts1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace potts {

void validate(const SolverConfig &cfg, std::size_t channels)
{
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw Error(Errc::InvalidArgument, "solver: lambda must be finite and >= 0");
  }
  if (!(cfg.eta0 > 0.0) || !std::isfinite(cfg.eta0)) {
    throw Error(Errc::InvalidArgument, "solver: eta0 must be > 0");
  }
  if (!(cfg.sigma > 1.0) || !std::isfinite(cfg.sigma)) {
    throw Error(Errc::InvalidArgument, "solver: sigma must be > 1");
  }
  if (cfg.iterations < 0) {
    throw Error(Errc::InvalidArgument, "solver: iterations must be >= 0");
  }
  if (cfg.box) {
    if (channels != 1) {
      throw Error(Errc::BoxFlowUnsupported, "solver: the box constraint is only supported for disparity");
    }
    if (cfg.box_min.size() != channels || cfg.box_max.size() != channels) {
      throw Error(Errc::InvalidArgument, "solver: box bounds need one value per channel");
    }
    for (std::size_t ch = 0; ch < channels; ++ch) {
      if (!(cfg.box_min[ch] <= cfg.box_max[ch])) {
        throw Error(Errc::InvalidArgument, "solver: box_min must not exceed box_max");
      }
    }
  }
}

SolverState initial_state(const VectorField &init, const SolverConfig &cfg)
{
  SolverState state;
  state.u = init;
  state.v = init;
  state.w = init;
  state.q1 = VectorField(init.rows(), init.cols(), init.channels());
  state.q2 = VectorField(init.rows(), init.cols(), init.channels());
  state.eta = cfg.eta0;
  state.iteration = 0;
  return state;
}

namespace {

void check_state(const LinearizedData &data, const SolverState &state)
{
  VectorField const &g = data.coeffs;
  if (!state.v.same_shape(g) || !state.w.same_shape(g) || !state.q1.same_shape(g) || !state.q2.same_shape(g) ||
      !g.same_grid(data.rhs)) {
    throw Error(Errc::ShapeMismatch, "solver: state shape does not match the data term");
  }
  if (g.channels() != 1 && g.channels() != 2) {
    throw Error(Errc::InvalidArgument, "solver: data term must have 1 or 2 channels");
  }
}

} // namespace

VectorField u_update(const LinearizedData &data, const SolverState &state, const SolverConfig &cfg)
{
  check_state(data, state);
  if (!(state.eta > 0.0)) {
    throw Error(Errc::InvalidArgument, "u_update: eta must be > 0");
  }
  std::size_t const d = data.channels();
  if (cfg.box && d != 1) {
    throw Error(Errc::BoxFlowUnsupported, "u_update: box-constrained flow is not supported");
  }
  double const eta = state.eta;
  VectorField out(data.coeffs.rows(), data.coeffs.cols(), d);

  parallel_chunks(out.rows(), cfg.threads, [&](unsigned, std::size_t row_begin, std::size_t row_end) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
      for (std::size_t c = 0; c < out.cols(); ++c) {
        double const b = data.rhs(r, c);
        if (d == 1) {
          double const g = data.coeffs(r, c, 0);
          double const target = state.v(r, c) - state.q1(r, c) + state.w(r, c) - state.q2(r, c);
          double u = (g * b + eta * target) / (g * g + 2.0 * eta);
          if (cfg.box) {
            u = std::max(std::min(u, cfg.box_max[0]), cfg.box_min[0]);
          }
          out(r, c, 0) = u;
        } else {
          double const g1 = data.coeffs(r, c, 0);
          double const g2 = data.coeffs(r, c, 1);
          double const t1 = state.v(r, c, 0) - state.q1(r, c, 0) + state.w(r, c, 0) - state.q2(r, c, 0);
          double const t2 = state.v(r, c, 1) - state.q1(r, c, 1) + state.w(r, c, 1) - state.q2(r, c, 1);
          double const rhs1 = g1 * b + eta * t1;
          double const rhs2 = g2 * b + eta * t2;
          double const a11 = g1 * g1 + 2.0 * eta;
          double const a22 = g2 * g2 + 2.0 * eta;
          double const a12 = g1 * g2;
          // a11 * a22 - a12^2 expanded; strictly positive for eta > 0.
          double const det = 2.0 * eta * (g1 * g1 + g2 * g2) + 4.0 * eta * eta;
          out(r, c, 0) = (a22 * rhs1 - a12 * rhs2) / det;
          out(r, c, 1) = (a11 * rhs2 - a12 * rhs1) / det;
        }
      }
    }
  });

  if (!out.all_finite()) {
    throw Error(Errc::NonfinitePixel, "u_update: non-finite value");
  }
  return out;
}

namespace {

// Potts along columns (vertical == true) or rows of z = u + q.
VectorField potts_slices(const VectorField &u, const VectorField &q, double gamma, bool vertical, unsigned threads)
{
  std::size_t const d = u.channels();
  std::size_t const slices = vertical ? u.cols() : u.rows();
  std::size_t const length = vertical ? u.rows() : u.cols();
  VectorField out(u.rows(), u.cols(), d);

  parallel_chunks(slices, threads, [&](unsigned, std::size_t begin, std::size_t end) {
    PottsSolver solver;
    std::vector<double> z(length * d);
    std::vector<double> fit(length * d);
    for (std::size_t s = begin; s < end; ++s) {
      for (std::size_t i = 0; i < length; ++i) {
        std::size_t const r = vertical ? i : s;
        std::size_t const c = vertical ? s : i;
        for (std::size_t ch = 0; ch < d; ++ch) {
          z[i * d + ch] = u(r, c, ch) + q(r, c, ch);
        }
      }
      solver.solve_into(z, d, gamma, fit);
      for (std::size_t i = 0; i < length; ++i) {
        std::size_t const r = vertical ? i : s;
        std::size_t const c = vertical ? s : i;
        for (std::size_t ch = 0; ch < d; ++ch) {
          out(r, c, ch) = fit[i * d + ch];
        }
      }
    }
  });
  return out;
}

double potts_gamma(const SolverState &state, const SolverConfig &cfg)
{
  if (!(state.eta > 0.0)) {
    throw Error(Errc::InvalidArgument, "Potts step: eta must be > 0");
  }
  return 2.0 * cfg.lambda / state.eta;
}

} // namespace

VectorField v_update(const SolverState &state, const SolverConfig &cfg)
{
  if (!state.u.same_shape(state.q1)) {
    throw Error(Errc::ShapeMismatch, "v_update: u and q1 differ in shape");
  }
  return potts_slices(state.u, state.q1, potts_gamma(state, cfg), true, cfg.threads);
}

VectorField w_update(const SolverState &state, const SolverConfig &cfg)
{
  if (!state.u.same_shape(state.q2)) {
    throw Error(Errc::ShapeMismatch, "w_update: u and q2 differ in shape");
  }
  return potts_slices(state.u, state.q2, potts_gamma(state, cfg), false, cfg.threads);
}

void dual_update(SolverState &state, double sigma)
{
  if (!state.u.same_shape(state.v) || !state.u.same_shape(state.w) || !state.u.same_shape(state.q1) ||
      !state.u.same_shape(state.q2)) {
    throw Error(Errc::ShapeMismatch, "dual_update: state fields differ in shape");
  }
  auto u = state.u.values();
  auto v = state.v.values();
  auto w = state.w.values();
  auto q1 = state.q1.values();
  auto q2 = state.q2.values();
  for (std::size_t k = 0; k < u.size(); ++k) {
    q1[k] = q1[k] + u[k] - v[k];
    q2[k] = q2[k] + u[k] - w[k];
  }
  state.eta *= sigma;
  ++state.iteration;
}

double normal_equation_residual(const LinearizedData &data, const SolverState &state, const SolverConfig &cfg,
                                const VectorField &u_next)
{
  check_state(data, state);
  std::size_t const d = data.channels();
  double const eta = state.eta;
  double worst = 0.0;
  for (std::size_t r = 0; r < u_next.rows(); ++r) {
    for (std::size_t c = 0; c < u_next.cols(); ++c) {
      if (cfg.box) {
        double const u = u_next(r, c, 0);
        if (u <= cfg.box_min[0] || u >= cfg.box_max[0]) {
          continue;
        }
      }
      double au = 0.0;
      for (std::size_t ch = 0; ch < d; ++ch) {
        au += data.coeffs(r, c, ch) * u_next(r, c, ch);
      }
      for (std::size_t ch = 0; ch < d; ++ch) {
        double const g = data.coeffs(r, c, ch);
        double const lhs = g * au + 2.0 * eta * u_next(r, c, ch);
        double const target =
          state.v(r, c, ch) - state.q1(r, c, ch) + state.w(r, c, ch) - state.q2(r, c, ch);
        double const rhs = g * data.rhs(r, c) + eta * target;
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

double potts_term(const VectorField &u, double lambda)
{
  return lambda * static_cast<double>(vertical_jumps(u) + horizontal_jumps(u));
}

double total_energy(const LinearizedData &data, const VectorField &u, const SolverConfig &cfg)
{
  if (cfg.box) {
    for (std::size_t r = 0; r < u.rows(); ++r) {
      for (std::size_t c = 0; c < u.cols(); ++c) {
        for (std::size_t ch = 0; ch < u.channels(); ++ch) {
          if (u(r, c, ch) < cfg.box_min[ch] || u(r, c, ch) > cfg.box_max[ch]) {
            return std::numeric_limits<double>::infinity();
          }
        }
      }
    }
  }
  return data_energy(data, u) + potts_term(u, cfg.lambda);
}

namespace {

[[noreturn]] void violation(std::size_t iteration, const std::string &what)
{
  throw Error(Errc::InvariantViolation, "solver iteration " + std::to_string(iteration) + ": " + what);
}

void check_slices(const SolverState &state, const VectorField &fit, const VectorField &q, double gamma,
                  bool vertical, std::size_t iteration)
{
  std::size_t const length = vertical ? state.u.rows() : state.u.cols();
  if (length > 10) {
    return;
  }
  std::size_t const d = state.u.channels();
  std::size_t const slices = vertical ? state.u.cols() : state.u.rows();
  for (std::size_t s = 0; s < slices; ++s) {
    std::vector<double> z(length * d);
    std::vector<double> values(length * d);
    for (std::size_t i = 0; i < length; ++i) {
      std::size_t const r = vertical ? i : s;
      std::size_t const c = vertical ? s : i;
      for (std::size_t ch = 0; ch < d; ++ch) {
        z[i * d + ch] = state.u(r, c, ch) + q(r, c, ch);
        values[i * d + ch] = fit(r, c, ch);
      }
    }
    Signal1D const signal(length, d, std::move(z));
    double const got = potts_energy_1d(signal, values, gamma);
    double const want = brute_force_potts(signal, gamma).energy;
    if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want))) {
      violation(iteration, std::string(vertical ? "column" : "row") + " Potts step is not optimal");
    }
  }
}

} // namespace

SolverResult run(const LinearizedData &data, const VectorField &init, const SolverConfig &cfg)
{
  if (!init.same_shape(data.coeffs)) {
    throw Error(Errc::ShapeMismatch, "run: initializer shape does not match the data term");
  }
  validate(cfg, data.channels());

  SolverState state = initial_state(init, cfg);
  double const pixels = static_cast<double>(init.pixels());
  double const bound_scale = 2.0 * cfg.lambda * pixels;
  std::vector<double> etas;
  etas.reserve(static_cast<std::size_t>(cfg.iterations));

  SolverResult result;
  result.trace.reserve(static_cast<std::size_t>(cfg.iterations));

  for (int k = 0; k < cfg.iterations; ++k) {
    double const eta = state.eta;
    etas.push_back(eta);
    VectorField u_next = u_update(data, state, cfg);

    IterationRecord rec;
    rec.iteration = state.iteration + 1;
    rec.eta = eta;
    rec.normal_residual = normal_equation_residual(data, state, cfg, u_next);
    rec.step = l2_diff(u_next, state.u);

    state.u = std::move(u_next);
    state.v = v_update(state, cfg);
    state.w = w_update(state, cfg);

    if (cfg.check_invariants) {
      double const gamma = 2.0 * cfg.lambda / eta;
      // q1^(k) is still in place, so z = u^(k+1) + q1^(k) can be rebuilt.
      check_slices(state, state.v, state.q1, gamma, true, rec.iteration);
      check_slices(state, state.w, state.q2, gamma, false, rec.iteration);
    }

    dual_update(state, cfg.sigma);

    rec.data_energy = data_energy(data, state.u);
    rec.potts_term = potts_term(state.u, cfg.lambda);
    rec.energy = total_energy(data, state.u, cfg);
    rec.ru = l2_diff(state.u, state.v);
    rec.rw = l2_diff(state.u, state.w);
    rec.q1 = l2_norm(state.q1);
    rec.q2 = l2_norm(state.q2);

    if (cfg.check_invariants) {
      // Absolute 1e-10 for unit-sized data, relative to the magnitude of
      // the normal-equation terms otherwise.
      double g_max = 0.0;
      double b_max = 0.0;
      double u_max = 0.0;
      for (double g : data.coeffs.values()) {
        g_max = std::max(g_max, std::abs(g));
      }
      for (double b : data.rhs.values()) {
        b_max = std::max(b_max, std::abs(b));
      }
      for (double u : state.u.values()) {
        u_max = std::max(u_max, std::abs(u));
      }
      double const scale = std::max(1.0, g_max * (g_max * u_max + b_max) + eta * u_max);
      if (rec.normal_residual >= 1e-10 * scale) {
        violation(rec.iteration, "u-step normal equation residual " + std::to_string(rec.normal_residual));
      }
      double const dual_bound = bound_scale / eta;
      if (!(rec.q1 * rec.q1 <= dual_bound) || !(rec.q2 * rec.q2 <= dual_bound)) {
        violation(rec.iteration, "dual bound ||q||^2 <= 2 lambda P / eta violated");
      }
      if (rec.iteration >= 2) {
        double const primal_bound = 2.0 * std::sqrt(bound_scale / etas[rec.iteration - 2]);
        if (!(rec.ru <= primal_bound) || !(rec.rw <= primal_bound)) {
          violation(rec.iteration, "primal residual bound violated");
        }
      }
    }

    result.trace.push_back(rec);

    if (cfg.stop_tolerance > 0.0 &&
        std::max(max_abs_diff(state.u, state.v), max_abs_diff(state.u, state.w)) < cfg.stop_tolerance) {
      break;
    }
  }

  result.u = std::move(state.u);
  result.v = std::move(state.v);
  result.w = std::move(state.w);
  return result;
}

void write_trace_csv(std::ostream &out, const IterationTrace &trace)
{
  std::ostringstream buffer;
  buffer.precision(17);
  buffer << "iteration,energy,data_energy,potts_term,ru,rw,q1,q2,eta\n";
  for (auto const &rec : trace) {
    buffer << rec.iteration << ',' << rec.energy << ',' << rec.data_energy << ',' << rec.potts_term << ','
           << rec.ru << ',' << rec.rw << ',' << rec.q1 << ',' << rec.q2 << ',' << rec.eta << '\n';
  }
  out << buffer.str();
}

} // namespace potts
