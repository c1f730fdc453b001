#include "adapt/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adapt {

namespace {

constexpr double kInsideTol = 1e-10;
constexpr double kDomainTol = 1e-8;

std::array<double, 3> cell_bary(const Mesh& mesh, PointId c, const Vec2& x) {
  const auto p = mesh.cell_coords(c);
  return barycentric(p[0], p[1], p[2], x);
}

double min_bary(const std::array<double, 3>& b) {
  return std::min({b[0], b[1], b[2]});
}

// clip small negatives and renormalize; keeps the value a convex combination
std::array<double, 3> clip_bary(std::array<double, 3> b) {
  double sum = 0.0;
  for (double& l : b) {
    l = std::max(l, 0.0);
    sum += l;
  }
  for (double& l : b) l /= sum;
  return b;
}

PointId first_cell(const Mesh& mesh) {
  for (PointId p = 0; p < mesh.num_points(); ++p) {
    if (mesh.active(p) && mesh.stratum(p) == Stratum::Cell) return p;
  }
  throw std::invalid_argument("locate_point: mesh has no cells");
}

// neighbor of c across the edge opposite cell vertex k, kNoPoint on boundary
PointId neighbor_across(const Mesh& mesh, PointId c, int k) {
  const auto v = mesh.cell_vertices(c);
  const PointId e = mesh.find_edge(v[(k + 1) % 3], v[(k + 2) % 3]);
  for (PointId other : mesh.support(e)) {
    if (other != c) return other;
  }
  return kNoPoint;
}

}  // namespace

Location locate_point(const Mesh& mesh, const Vec2& x, std::optional<PointId> hint) {
  PointId cur = (hint && mesh.active(*hint) && mesh.stratum(*hint) == Stratum::Cell)
                    ? *hint
                    : first_cell(mesh);
  const int max_walk = 2 * mesh.num_cells();

  for (int step = 0; step < max_walk; ++step) {
    const auto b = cell_bary(mesh, cur, x);
    int worst = 0;
    for (int i = 1; i < 3; ++i) {
      if (b[i] < b[worst]) worst = i;
    }
    if (b[worst] >= -kInsideTol) {
      return {cur, clip_bary(b)};
    }
    const PointId next = neighbor_across(mesh, cur, worst);
    if (next == kNoPoint) break;  // hit the boundary, fall back
    cur = next;
  }

  // exhaustive scan: best cell by its least barycentric coordinate
  PointId best = kNoPoint;
  double best_min = -1e300;
  std::array<double, 3> best_b{};
  for (PointId c = 0; c < mesh.num_points(); ++c) {
    if (!mesh.active(c) || mesh.stratum(c) != Stratum::Cell) continue;
    const auto b = cell_bary(mesh, c, x);
    const double m = min_bary(b);
    if (m > best_min) {
      best_min = m;
      best = c;
      best_b = b;
      if (m >= -kInsideTol) break;
    }
  }
  if (best == kNoPoint || best_min < -kDomainTol) {
    throw std::invalid_argument("locate_point: point outside the mesh");
  }
  return {best, clip_bary(best_b)};
}

namespace {

Vec2 closest_point_on_segment(const Vec2& a, const Vec2& b, const Vec2& x) {
  const Vec2 d = b - a;
  const double t = std::clamp(dot(x - a, d) / norm2(d), 0.0, 1.0);
  return a + d * t;
}

// nearest point on the boundary of the mesh (brute force over boundary edges)
Vec2 snap_to_boundary(const Mesh& mesh, const Vec2& x) {
  Vec2 best = x;
  double best_d2 = 1e300;
  for (PointId e = 0; e < mesh.num_points(); ++e) {
    if (!mesh.active(e) || mesh.stratum(e) != Stratum::Edge) continue;
    if (mesh.support(e).size() != 1) continue;
    const auto ev = mesh.edge_vertices(e);
    const Vec2 p = closest_point_on_segment(mesh.coord(ev[0]), mesh.coord(ev[1]), x);
    const double d2 = norm2(p - x);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = p;
    }
  }
  return best;
}

}  // namespace

ScalarField interpolate_field(const ScalarField& u_old, const Mesh& mesh_old,
                              const Mesh& mesh_new) {
  u_old.check_binding(mesh_old);
  ScalarField out(mesh_new);
  std::optional<PointId> hint;
  for (PointId v : mesh_new.points(Stratum::Vertex)) {
    const Vec2 x = mesh_new.coord(v);
    Location loc;
    try {
      loc = locate_point(mesh_old, x, hint);
    } catch (const std::invalid_argument&) {
      const Vec2 snapped = snap_to_boundary(mesh_old, x);
      if (norm(snapped - x) > kDomainTol) {
        throw std::invalid_argument("interpolate_field: vertex outside source mesh");
      }
      loc = locate_point(mesh_old, snapped, hint);
    }
    hint = loc.cell;
    const auto cv = mesh_old.cell_vertices(loc.cell);
    out.at_vertex(mesh_new, v) = loc.bary[0] * u_old.at_vertex(mesh_old, cv[0]) +
                                 loc.bary[1] * u_old.at_vertex(mesh_old, cv[1]) +
                                 loc.bary[2] * u_old.at_vertex(mesh_old, cv[2]);
  }
  return out;
}

}  // namespace adapt
