#pragma once

// ADMM-like splitting for Potts-regularized linearized data terms.
//
// Minimizes  1/2 ||A u - b||^2 + mu * box(u) + lambda (||grad_1 u||_0 + ||grad_2 u||_0)
// by splitting u into v (vertical jumps) and w (horizontal jumps):
//
//   u <- argmin 1/2 ||A u - b||^2 + eta/2 (||u - v + q1||^2 + ||u - w + q2||^2)
//   v <- column-wise univariate Potts of u + q1 with gamma = 2 lambda / eta
//   w <- row-wise univariate Potts of u + q2 with gamma = 2 lambda / eta
//   q1 += u - v,  q2 += u - w,  eta *= sigma
//
// A is per-pixel diagonal, so the u-step is a closed-form 1x1 (disparity) or
// 2x2 (flow) solve at every pixel.

#include "potts/dataterm.hpp"
#include "potts/grid.hpp"

#include <iosfwd>
#include <vector>

namespace potts {

struct SolverConfig
{
  double lambda = 1.0;
  bool box = false; // mu = 1; disparity only
  double eta0 = 0.01;
  double sigma = 1.05;
  int iterations = 100;
  std::vector<double> box_min; // one bound per channel
  std::vector<double> box_max;
  // Assert the dual bound, the primal residual bound, u-step exactness and
  // (on slices of length <= 10) Potts optimality after every iteration.
  bool check_invariants = false;
  // Stop early once max(|u - v|_inf, |u - w|_inf) < stop_tolerance; 0 = off.
  double stop_tolerance = 0.0;
  unsigned threads = 0;
};

void validate(const SolverConfig &cfg, std::size_t channels);

struct SolverState
{
  VectorField u;
  VectorField v;
  VectorField w;
  VectorField q1;
  VectorField q2;
  double eta = 0.0;
  std::size_t iteration = 0;
};

// v = w = u = init, q1 = q2 = 0, eta = eta0.
SolverState initial_state(const VectorField &init, const SolverConfig &cfg);

struct IterationRecord
{
  std::size_t iteration = 0; // k + 1: the record describes u^(k+1), v^(k+1), ...
  double energy = 0.0;
  double data_energy = 0.0;
  double potts_term = 0.0;
  double ru = 0.0; // ||u - v||_2
  double rw = 0.0; // ||u - w||_2
  double q1 = 0.0; // ||q1||_2
  double q2 = 0.0;
  double eta = 0.0; // eta^(k), the coupling used by this iteration
  double step = 0.0; // ||u^(k+1) - u^(k)||_2
  // Max pixelwise residual of the u-step normal equations over pixels not
  // pinned by the box.
  double normal_residual = 0.0;
};

using IterationTrace = std::vector<IterationRecord>;

struct SolverResult
{
  VectorField u;
  VectorField v;
  VectorField w;
  IterationTrace trace;
};

VectorField u_update(const LinearizedData &data, const SolverState &state, const SolverConfig &cfg);
// Uses state.u as u^(k+1).
VectorField v_update(const SolverState &state, const SolverConfig &cfg);
VectorField w_update(const SolverState &state, const SolverConfig &cfg);
// q1 += u - v, q2 += u - w, eta *= sigma, iteration += 1.
void dual_update(SolverState &state, double sigma);

// max over pixels of |(A^T A + 2 eta I) u - (A^T b + eta (v - q1 + w - q2))|,
// skipping pixels where the box pins u to a bound.
double normal_equation_residual(const LinearizedData &data, const SolverState &state, const SolverConfig &cfg,
                                const VectorField &u_next);

SolverResult run(const LinearizedData &data, const VectorField &init, const SolverConfig &cfg);

double potts_term(const VectorField &u, double lambda);
// Data term + Potts term; +inf when the box is active and u violates it.
double total_energy(const LinearizedData &data, const VectorField &u, const SolverConfig &cfg);

// Columns: iteration,energy,data_energy,potts_term,ru,rw,q1,q2,eta with
// 17 significant digits.
void write_trace_csv(std::ostream &out, const IterationTrace &trace);

} // namespace potts
