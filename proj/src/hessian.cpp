#include "adapt/hessian.hpp"

#include <stdexcept>

namespace adapt {

TensorField recover_hessian(const Mesh& mesh, const ScalarField& u) {
  u.check_binding(mesh);
  const int nslots = mesh.num_vertex_slots();
  std::vector<double> lumped(nslots, 0.0);
  // raw components before symmetrization: xx, xy, yx, yy
  std::vector<std::array<double, 4>> rhs(nslots, {0.0, 0.0, 0.0, 0.0});

  for (PointId c : mesh.points(Stratum::Cell)) {
    const auto v = mesh.cell_vertices(c);
    const auto p = mesh.cell_coords(c);
    double area;
    const auto grad = p1_gradients(p, area);
    if (area <= 0.0) throw std::invalid_argument("recover_hessian: inverted cell");

    const Vec2 grad_u = grad[0] * u.at_vertex(mesh, v[0]) +
                        grad[1] * u.at_vertex(mesh, v[1]) +
                        grad[2] * u.at_vertex(mesh, v[2]);
    for (int i = 0; i < 3; ++i) {
      const int32_t slot = mesh.vertex_slot(v[i]);
      lumped[slot] += area / 3.0;
      // -int grad_k(phi_i) grad_l(u) dx, exact for constant integrand
      rhs[slot][0] -= area * grad[i].x * grad_u.x;
      rhs[slot][1] -= area * grad[i].x * grad_u.y;
      rhs[slot][2] -= area * grad[i].y * grad_u.x;
      rhs[slot][3] -= area * grad[i].y * grad_u.y;
    }
  }

  // boundary term: + int_e phi_i n_k grad_l(u) ds with grad u from the
  // single adjacent cell and int_e phi_i ds = |e|/2 per endpoint
  for (PointId e : mesh.points(Stratum::Edge)) {
    const auto sup = mesh.support(e);
    if (sup.size() != 1) continue;
    const PointId c = sup[0];
    const auto cv = mesh.cell_vertices(c);
    const auto ev = mesh.edge_vertices(e);
    // direction of e as traversed by the CCW cell
    PointId a = kNoPoint, b = kNoPoint;
    for (int i = 0; i < 3; ++i) {
      PointId s = cv[i], t = cv[(i + 1) % 3];
      if ((s == ev[0] && t == ev[1]) || (s == ev[1] && t == ev[0])) {
        a = s;
        b = t;
        break;
      }
    }
    const Vec2 d = mesh.coord(b) - mesh.coord(a);
    const double len = norm(d);
    const Vec2 n = {d.y / len, -d.x / len};  // outward for a CCW cell

    const auto p = mesh.cell_coords(c);
    double area;
    const auto grad = p1_gradients(p, area);
    const Vec2 grad_u = grad[0] * u.at_vertex(mesh, cv[0]) +
                        grad[1] * u.at_vertex(mesh, cv[1]) +
                        grad[2] * u.at_vertex(mesh, cv[2]);
    const double w = 0.5 * len;
    for (PointId vert : ev) {
      const int32_t slot = mesh.vertex_slot(vert);
      rhs[slot][0] += w * n.x * grad_u.x;
      rhs[slot][1] += w * n.x * grad_u.y;
      rhs[slot][2] += w * n.y * grad_u.x;
      rhs[slot][3] += w * n.y * grad_u.y;
    }
  }

  TensorField h(mesh);
  for (PointId v : mesh.points(Stratum::Vertex)) {
    const int32_t slot = mesh.vertex_slot(v);
    const double m = lumped[slot];
    const auto& b = rhs[slot];
    h[slot] = SymTensor2{b[0] / m, 0.5 * (b[1] + b[2]) / m, b[3] / m};
  }
  return h;
}

void HessianAccumulator::accumulate(const Mesh& mesh, const TensorField& sample,
                                    double dt_weight) {
  sample.check_binding(mesh);
  if (generation_ != mesh.generation()) {
    throw std::logic_error("HessianAccumulator: mesh mismatch");
  }
  for (size_t i = 0; i < sample.size(); ++i) {
    const SymTensor2 a = abs_tensor(sample[i]);
    weighted_sum_[i] += a * dt_weight;
    plain_sum_[i] += a;
  }
  weight_ += dt_weight;
  n_samples_ += 1;
}

TensorField HessianAccumulator::finalize(const Mesh& mesh) const {
  if (generation_ != mesh.generation()) {
    throw std::logic_error("HessianAccumulator: mesh mismatch");
  }
  if (n_samples_ == 0) {
    throw std::logic_error("HessianAccumulator: no samples");
  }
  TensorField out(mesh);
  if (weight_ > 0.0) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = weighted_sum_[i] * (1.0 / weight_);
  } else {
    for (size_t i = 0; i < out.size(); ++i) out[i] = plain_sum_[i] * (1.0 / n_samples_);
  }
  return out;
}

}  // namespace adapt
