#include "adapt/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace adapt {

namespace {

// exponent p/(2p+d), with its p -> infinity limit 1/2
double k_exponent(const MetricParams& params) {
  if (params.p == kPInfinity) return 0.5;
  return static_cast<double>(params.p) / (2.0 * params.p + params.d);
}

SymTensor2 psd_clip(const SymTensor2& s) {
  EigenPair e = eig(s);
  const double scale = std::max(std::abs(e.lambda1), 1.0);
  if (e.lambda2 < -1e-9 * scale) {
    throw std::invalid_argument("lp_metric: non-PSD Hessian input");
  }
  return from_eigen(std::max(e.lambda1, 0.0), std::max(e.lambda2, 0.0), e.v1, e.v2);
}

}  // namespace

SymTensor2 floor_det(const SymTensor2& s, double eps) {
  EigenPair e = eig(s);
  const double root = std::sqrt(eps);
  const double l1 = std::max(e.lambda1, root);
  const double l2 = std::max(e.lambda2, eps / l1);
  return from_eigen(l1, l2, e.v1, e.v2);
}

double complexity_term(const Mesh& mesh, const TensorField& h_mean,
                       const MetricParams& params) {
  h_mean.check_binding(mesh);
  const double expo = k_exponent(params);
  double k = 0.0;
  for (PointId c : mesh.points(Stratum::Cell)) {
    const auto v = mesh.cell_vertices(c);
    double cell_avg = 0.0;
    for (PointId vert : v) {
      const SymTensor2 h = floor_det(psd_clip(h_mean.at_vertex(mesh, vert)), params.eps_det);
      cell_avg += std::pow(h.det(), expo);
    }
    k += mesh.cell_area(c) * cell_avg / 3.0;
  }
  return k;
}

SymTensor2 clamp_metric_value(const SymTensor2& m, const MetricParams& params) {
  const double lo = 1.0 / (params.h_max * params.h_max);
  const double hi = 1.0 / (params.h_min * params.h_min);
  EigenPair e = eig(m);
  double l1 = std::min(std::max(e.lambda1, lo), hi);
  double l2 = std::min(std::max(e.lambda2, lo), hi);
  const double ratio_cap = params.a_max * params.a_max;
  if (l1 / l2 > ratio_cap) l2 = l1 / ratio_cap;
  return from_eigen(l1, l2, e.v1, e.v2);
}

TensorField clamp_metric(const Mesh& mesh, const TensorField& m,
                         const MetricParams& params) {
  m.check_binding(mesh);
  TensorField out(mesh);
  for (size_t i = 0; i < m.size(); ++i) out[i] = clamp_metric_value(m[i], params);
  return out;
}

std::vector<TensorField> lp_metric(const std::vector<const Mesh*>& meshes,
                                   const std::vector<const TensorField*>& h_means,
                                   const MetricParams& params, LpMetricDiag* diag) {
  const size_t n = meshes.size();
  if (n == 0) throw std::invalid_argument("lp_metric: empty interval list");
  if (h_means.size() != n || params.tau_integrals.size() != n) {
    throw std::invalid_argument("lp_metric: interval list size mismatch");
  }
  for (double s : params.tau_integrals) {
    if (s <= 0.0) throw std::invalid_argument("lp_metric: tau integral must be positive");
  }
  if (!(0.0 < params.h_min && params.h_min < params.h_max) || params.a_max < 1.0 ||
      params.N_st <= 0.0) {
    throw std::invalid_argument("lp_metric: invalid MetricParams bounds");
  }

  const bool pinf = params.p == kPInfinity;
  const double d = params.d;
  const double denom = 2.0 * params.p + d;                // 2p + d
  const double q = pinf ? 1.0 : 2.0 * params.p / denom;   // 2p/(2p+d)

  double norm_sum = 0.0;
  std::vector<double> k_terms(n);
  for (size_t j = 0; j < n; ++j) {
    k_terms[j] = complexity_term(*meshes[j], *h_means[j], params);
    norm_sum += k_terms[j] * std::pow(params.tau_integrals[j], q);
  }
  const double global = std::pow(params.N_st, 2.0 / d) * std::pow(norm_sum, -2.0 / d);
  if (diag) {
    diag->k_terms = std::move(k_terms);
    diag->norm_sum = norm_sum;
    diag->global_factor = global;
  }

  std::vector<TensorField> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const Mesh& mesh = *meshes[i];
    h_means[i]->check_binding(mesh);
    const double interval_factor =
        pinf ? 1.0 : std::pow(params.tau_integrals[i], -2.0 / denom);
    TensorField m(mesh);
    for (size_t k = 0; k < m.size(); ++k) {
      const SymTensor2 h = floor_det(psd_clip((*h_means[i])[k]), params.eps_det);
      const double det_factor = pinf ? 1.0 : std::pow(h.det(), -1.0 / denom);
      m[k] = clamp_metric_value(h * (global * interval_factor * det_factor), params);
    }
    out.push_back(std::move(m));
  }
  return out;
}

double complexity(const Mesh& mesh, const TensorField& m) {
  m.check_binding(mesh);
  double c = 0.0;
  for (PointId cell : mesh.points(Stratum::Cell)) {
    double cell_avg = 0.0;
    for (PointId v : mesh.cell_vertices(cell)) {
      cell_avg += std::sqrt(std::max(m.at_vertex(mesh, v).det(), 0.0));
    }
    c += mesh.cell_area(cell) * cell_avg / 3.0;
  }
  return c;
}

}  // namespace adapt
