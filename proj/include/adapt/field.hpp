#ifndef ADAPT_FIELD_HPP
#define ADAPT_FIELD_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "adapt/mesh.hpp"
#include "adapt/sym_tensor.hpp"

namespace adapt {

// P1 nodal field: one value per vertex slot of the bound mesh generation.
// V is double, Vec2 or SymTensor2. Fields do not survive compaction or
// adaptation; transfer between meshes is explicit.
template <class V>
class NodalField {
 public:
  NodalField() = default;
  explicit NodalField(const Mesh& mesh, const V& init = V{})
      : generation_(mesh.generation()),
        values_(static_cast<size_t>(mesh.num_vertex_slots()), init) {}

  void check_binding(const Mesh& mesh) const {
    if (generation_ != mesh.generation() ||
        values_.size() != static_cast<size_t>(mesh.num_vertex_slots())) {
      throw std::logic_error("NodalField: field not bound to this mesh generation");
    }
  }
  bool bound_to(const Mesh& mesh) const {
    return generation_ == mesh.generation() &&
           values_.size() == static_cast<size_t>(mesh.num_vertex_slots());
  }

  V& operator[](int32_t slot) { return values_[slot]; }
  const V& operator[](int32_t slot) const { return values_[slot]; }
  V& at_vertex(const Mesh& mesh, PointId v) { return values_[mesh.vertex_slot(v)]; }
  const V& at_vertex(const Mesh& mesh, PointId v) const {
    return values_[mesh.vertex_slot(v)];
  }

  size_t size() const { return values_.size(); }
  std::vector<V>& values() { return values_; }
  const std::vector<V>& values() const { return values_; }

  uint64_t generation() const { return generation_; }

 private:
  uint64_t generation_ = 0;
  std::vector<V> values_;
};

// Barycentric coordinates of point x in triangle (a, b, c).
inline std::array<double, 3> barycentric(const Vec2& a, const Vec2& b, const Vec2& c,
                                         const Vec2& x) {
  const double a2 = signed_area2(a, b, c);
  return {signed_area2(x, b, c) / a2, signed_area2(a, x, c) / a2,
          signed_area2(a, b, x) / a2};
}

// P1 evaluation of a field at a point inside a cell (tolerance 1e-10 on the
// barycentric coordinates).
template <class V>
V evaluate(const NodalField<V>& field, const Mesh& mesh, PointId cell, const Vec2& x) {
  field.check_binding(mesh);
  constexpr double tol = 1e-10;
  const auto v = mesh.cell_vertices(cell);
  const auto p = mesh.cell_coords(cell);
  const auto lam = barycentric(p[0], p[1], p[2], x);
  for (double l : lam) {
    if (l < -tol || l > 1.0 + tol) {
      throw std::invalid_argument("evaluate: point outside cell");
    }
  }
  return field.at_vertex(mesh, v[0]) * lam[0] + field.at_vertex(mesh, v[1]) * lam[1] +
         field.at_vertex(mesh, v[2]) * lam[2];
}

using ScalarField = NodalField<double>;
using VectorField = NodalField<Vec2>;
using TensorField = NodalField<SymTensor2>;

}  // namespace adapt

#endif
