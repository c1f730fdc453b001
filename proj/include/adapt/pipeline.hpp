#ifndef ADAPT_PIPELINE_HPP
#define ADAPT_PIPELINE_HPP

#include <vector>

#include "adapt/advect.hpp"
#include "adapt/config.hpp"
#include "adapt/field.hpp"
#include "adapt/mesh.hpp"
#include "adapt/metric.hpp"

namespace adapt {

struct IntervalDiag {
  int vertices = 0;
  int steps = 0;
  double mass_start = 0.0;
  double mass_end = 0.0;
  // mass of the carried solution before/after the incoming transfer
  double transfer_mass_before = 0.0;
  double transfer_mass_after = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double k_term = 0.0;  // K^i of the normalization sum
  double solve_seconds = 0.0;
};

struct IterationDiag {
  std::vector<IntervalDiag> intervals;
  double l2_return_error = -1.0;  // set when t_end == T/2
  double norm_sum = 0.0;          // sum of K^j * S_j^(2p/(2p+d))
  double global_factor = 0.0;     // N_st^(2/d) * norm_sum^(-2/d)
  long total_vertices = 0;
  double solve_seconds = 0.0;
  double adapt_seconds = 0.0;
};

struct PipelineState {
  // one entry per sub-interval. `meshes` holds the current meshes (the ones
  // a further iteration would solve on); end-of-interval solutions and mean
  // Hessians are bound to `solved_meshes`, the meshes of the last executed
  // solve sweep. The two coincide unless remesh_final ran.
  std::vector<Mesh> meshes;
  std::vector<Mesh> solved_meshes;
  std::vector<ScalarField> end_solutions;
  std::vector<TensorField> mean_hessians;
  std::vector<double> tau_integrals;
  std::vector<IterationDiag> iterations;
  int solve_sweeps = 0;
  int adapt_calls = 0;
  double dt = 0.0;
};

Mesh build_initial_mesh(const AdaptConfig& config);

// Global fixed-point transient adaptation: n_ptfx sweeps over n_adap
// sub-intervals, metrics from the globally normalized Hessian averages,
// remeshing between sweeps (the final sweep's remeshing is skipped unless
// remesh_final is set). The default problem is the reversing-vortex bubble.
PipelineState fixed_point_adapt(const AdaptConfig& config);
PipelineState fixed_point_adapt(const AdaptConfig& config,
                                const AdvectionProblem& problem);

}  // namespace adapt

#endif
