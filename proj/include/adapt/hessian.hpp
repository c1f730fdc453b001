#ifndef ADAPT_HESSIAN_HPP
#define ADAPT_HESSIAN_HPP

#include "adapt/field.hpp"
#include "adapt/mesh.hpp"

namespace adapt {

// Constant P1 basis gradients on a triangle; area returned alongside.
inline std::array<Vec2, 3> p1_gradients(const std::array<Vec2, 3>& p, double& area) {
  const double a2 = signed_area2(p[0], p[1], p[2]);
  area = 0.5 * a2;
  return {perp(p[2] - p[1]) / a2, perp(p[0] - p[2]) / a2, perp(p[1] - p[0]) / a2};
}

// Galerkin Hessian recovery of a P1 scalar field: each second-derivative
// component is integrated by parts once (derivative moved onto the test
// function, boundary term kept), the mass matrix is lumped, and the result
// symmetrized. Exact for globally quadratic u.
TensorField recover_hessian(const Mesh& mesh, const ScalarField& u);

// Running time-average of |Hessian| samples over one sub-interval.
class HessianAccumulator {
 public:
  HessianAccumulator() = default;
  explicit HessianAccumulator(const Mesh& mesh)
      : generation_(mesh.generation()),
        weighted_sum_(mesh),
        plain_sum_(mesh) {}

  // sum += |sample| * dt_weight, weight += dt_weight.
  void accumulate(const Mesh& mesh, const TensorField& sample, double dt_weight);

  // sum / weight; equals the plain average of samples for equal spacing
  // (and is the plain average when the accumulated weight is zero).
  TensorField finalize(const Mesh& mesh) const;

  int n_samples() const { return n_samples_; }
  double weight() const { return weight_; }

 private:
  uint64_t generation_ = 0;
  TensorField weighted_sum_;
  TensorField plain_sum_;
  double weight_ = 0.0;
  int n_samples_ = 0;
};

}  // namespace adapt

#endif
