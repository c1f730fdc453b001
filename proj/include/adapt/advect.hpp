#ifndef ADAPT_ADVECT_HPP
#define ADAPT_ADVECT_HPP

#include <functional>

#include "adapt/field.hpp"
#include "adapt/hessian.hpp"
#include "adapt/mesh.hpp"

namespace adapt {

// Swirling vortex velocity with reversal period T: divergence-free, zero on
// the unit-square boundary, time factor cos(2*pi*t/T).
Vec2 velocity_2d(double x, double y, double t, double T);

// Smoothed bubble: 0.5*(1 - tanh((r - r0)/eps)) around (0.5, 0.75),
// r0 = 0.15, eps = 0.05.
double initial_bubble(double x, double y);

struct AdvectionProblem {
  std::function<Vec2(double, double, double)> velocity;  // (x, y, t)
  double T_period = 6.0;
  std::function<double(double, double)> u0;
  double t_end = 3.0;
  // benchmark fields have v.n = 0 on the whole boundary; the solver checks
  // it at boundary quadrature points unless disabled (manufactured tests)
  bool assert_noflow = true;
};

// The reversing-vortex bubble benchmark.
AdvectionProblem vortex_bubble_problem(double T = 6.0, double t_end = 3.0);

struct SolverOptions {
  double dt = 0.01;
  double theta = 0.5;  // 0.5 = Crank-Nicolson
  bool supg = true;
  double lin_tol = 1e-10;
};

// One theta-scheme step of the advection equation with SUPG test functions
// w + tau_K v.grad(w). Exact P1 quadrature, velocity by midpoint rule.
ScalarField step(const Mesh& mesh, const ScalarField& u_n, double t_n,
                 const SolverOptions& opts, const AdvectionProblem& problem);

struct HessianSampler {
  int samples_per_interval = 20;
};

// Advance from t_start to t_end with fixed dt (last step shortened),
// sampling |Hessian| at the configured cadence into the accumulator.
std::pair<ScalarField, HessianAccumulator> run_subinterval(
    const Mesh& mesh, const ScalarField& u_start, double t_start, double t_end,
    const SolverOptions& opts, const AdvectionProblem& problem,
    const HessianSampler& sampler);

// integral of u over the mesh, exact P1 quadrature
double mass(const Mesh& mesh, const ScalarField& u);

// L2 norm of a P1 field (consistent mass matrix, exact)
double l2_norm(const Mesh& mesh, const ScalarField& u);
double l2_diff(const Mesh& mesh, const ScalarField& u, const ScalarField& v);

// nodal interpolant of an analytic function
ScalarField sample_function(const Mesh& mesh, const std::function<double(double, double)>& f);

}  // namespace adapt

#endif
