#ifndef ADAPT_METRIC_HPP
#define ADAPT_METRIC_HPP

#include <vector>

#include "adapt/field.hpp"
#include "adapt/mesh.hpp"

namespace adapt {

// Sentinel for the L-infinity norm limit.
constexpr int kPInfinity = 0;

struct MetricParams {
  double N_st = 1e4;  // target space-time complexity
  int p = 2;          // L^p exponent, kPInfinity for the p -> inf limit
  int d = 2;          // spatial dimension
  std::vector<double> tau_integrals;  // per-sub-interval step counts
  double h_min = 1e-3;
  double h_max = 1.0;
  double a_max = 1e3;     // max anisotropy ratio
  double eps_det = 1e-10; // determinant floor for degenerate Hessians
};

// Raise eigenvalues so that det >= eps while keeping eigenvectors.
SymTensor2 floor_det(const SymTensor2& s, double eps);

// K^i = integral of (det H~)^(p/(2p+d)) over the mesh, P1 vertex-average
// quadrature per cell.
double complexity_term(const Mesh& mesh, const TensorField& h_mean,
                       const MetricParams& params);

struct LpMetricDiag {
  std::vector<double> k_terms;
  double norm_sum = 0.0;
  double global_factor = 0.0;
};

// Globally normalized L^p optimal metric, one per sub-interval, from the
// per-interval mean Hessians. Output passes through clamp_metric.
std::vector<TensorField> lp_metric(const std::vector<const Mesh*>& meshes,
                                   const std::vector<const TensorField*>& h_means,
                                   const MetricParams& params,
                                   LpMetricDiag* diag = nullptr);

// Eigenvalues clamped into [1/h_max^2, 1/h_min^2], anisotropy ratio capped
// by raising the small eigenvalue. Result SPD.
TensorField clamp_metric(const Mesh& mesh, const TensorField& m,
                         const MetricParams& params);
SymTensor2 clamp_metric_value(const SymTensor2& m, const MetricParams& params);

// Continuous mesh complexity C(M) = integral of sqrt(det M), same
// quadrature as complexity_term.
double complexity(const Mesh& mesh, const TensorField& m);

}  // namespace adapt

#endif
