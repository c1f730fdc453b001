#ifndef ADAPT_SYM_TENSOR_HPP
#define ADAPT_SYM_TENSOR_HPP

#include <cmath>
#include <stdexcept>

#include "adapt/geometry.hpp"

namespace adapt {

// Symmetric 2x2 tensor, 3 stored components. Houses both Hessians
// (field-units / length^2) and Riemannian metrics (1 / length^2).
struct SymTensor2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  SymTensor2() = default;
  SymTensor2(double m11, double m12, double m22) : a11(m11), a12(m12), a22(m22) {}

  static SymTensor2 identity() { return {1.0, 0.0, 1.0}; }
  static SymTensor2 diag(double d1, double d2) { return {d1, 0.0, d2}; }
  static SymTensor2 zero() { return {}; }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a12; }

  // Largest absolute entry, used as a scale for relative tolerances.
  double max_abs() const {
    return std::max({std::abs(a11), std::abs(a12), std::abs(a22)});
  }

  // SPD test for 2x2 symmetric: positive leading minor and determinant.
  bool spd() const { return a11 > 0.0 && det() > 0.0; }

  Vec2 apply(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y};
  }

  SymTensor2 operator+(const SymTensor2& o) const {
    return {a11 + o.a11, a12 + o.a12, a22 + o.a22};
  }
  SymTensor2 operator-(const SymTensor2& o) const {
    return {a11 - o.a11, a12 - o.a12, a22 - o.a22};
  }
  SymTensor2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }
  SymTensor2& operator+=(const SymTensor2& o) {
    a11 += o.a11;
    a12 += o.a12;
    a22 += o.a22;
    return *this;
  }
};

inline SymTensor2 operator*(double s, const SymTensor2& t) { return t * s; }

struct EigenPair {
  double lambda1 = 0.0;  // lambda1 >= lambda2
  double lambda2 = 0.0;
  Vec2 v1;
  Vec2 v2;
};

// Closed-form eigendecomposition of a symmetric 2x2 tensor.
// Returns eigenvalues in descending order with orthonormal eigenvectors.
inline EigenPair eig(const SymTensor2& s) {
  EigenPair out;
  const double mid = 0.5 * (s.a11 + s.a22);
  const double half_diff = 0.5 * (s.a11 - s.a22);
  const double disc = std::hypot(half_diff, s.a12);
  out.lambda1 = mid + disc;
  out.lambda2 = mid - disc;
  if (disc <= 1e-300) {
    // Isotropic tensor: any orthonormal pair works.
    out.v1 = {1.0, 0.0};
    out.v2 = {0.0, 1.0};
    return out;
  }
  // Pick the better conditioned column of (s - lambda2*I) for v1.
  Vec2 c1 = {half_diff + disc, s.a12};
  Vec2 c2 = {s.a12, -half_diff + disc};
  Vec2 v = (norm2(c1) >= norm2(c2)) ? c1 : c2;
  const double n = norm(v);
  out.v1 = v / n;
  out.v2 = perp(out.v1);
  return out;
}

// Reassemble lambda1*v1*v1^T + lambda2*v2*v2^T.
inline SymTensor2 from_eigen(double l1, double l2, const Vec2& v1, const Vec2& v2) {
  return {l1 * v1.x * v1.x + l2 * v2.x * v2.x,
          l1 * v1.x * v1.y + l2 * v2.x * v2.y,
          l1 * v1.y * v1.y + l2 * v2.y * v2.y};
}

// |S|: same eigenvectors, eigenvalues replaced by absolute values.
inline SymTensor2 abs_tensor(const SymTensor2& s) {
  EigenPair e = eig(s);
  return from_eigen(std::abs(e.lambda1), std::abs(e.lambda2), e.v1, e.v2);
}

// Length of edge vector e under the arithmetic mean of the endpoint metrics.
inline double metric_edge_length(const SymTensor2& ma, const SymTensor2& mb,
                                 const Vec2& e) {
  if (!ma.spd() || !mb.spd()) {
    throw std::invalid_argument("metric_edge_length: non-SPD metric");
  }
  const SymTensor2 m = (ma + mb) * 0.5;
  return std::sqrt(dot(e, m.apply(e)));
}

}  // namespace adapt

#endif
