#ifndef ADAPT_TRANSFER_HPP
#define ADAPT_TRANSFER_HPP

#include <array>
#include <optional>

#include "adapt/field.hpp"
#include "adapt/mesh.hpp"

namespace adapt {

struct Location {
  PointId cell = kNoPoint;
  std::array<double, 3> bary = {0.0, 0.0, 0.0};  // matches cell_vertices order
};

// Walk search from the hint toward the neighbor across the face with the
// most negative barycentric coordinate; exhaustive scan on walk failure.
// Returned coordinates are clipped non-negative. Throws if the point lies
// outside the mesh beyond tolerance 1e-8.
Location locate_point(const Mesh& mesh, const Vec2& x,
                      std::optional<PointId> hint = std::nullopt);

// Pointwise P1 transfer: locate every vertex of mesh_new in mesh_old and
// evaluate. Vertices outside mesh_old by <= 1e-8 are snapped to its nearest
// boundary point first.
ScalarField interpolate_field(const ScalarField& u_old, const Mesh& mesh_old,
                              const Mesh& mesh_new);

}  // namespace adapt

#endif
