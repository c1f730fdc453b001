#include "adapt/remesh.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "adapt/sym_tensor.hpp"

namespace adapt {

namespace {

constexpr double kSwapHysteresis = 1e-12;

double sq(double x) { return x * x; }

// Metric length of the segment (pa, pb) with endpoint metrics (ma, mb).
double seg_length(const Vec2& pa, const Vec2& pb, const SymTensor2& ma,
                  const SymTensor2& mb) {
  const Vec2 e = pb - pa;
  const SymTensor2 m = (ma + mb) * 0.5;
  return std::sqrt(dot(e, m.apply(e)));
}

// Vertices adjacent to v through edges, ascending id.
std::vector<PointId> vertex_neighbors(const Mesh& mesh, PointId v) {
  std::vector<PointId> out;
  for (PointId e : mesh.support(v)) {
    auto ev = mesh.edge_vertices(e);
    out.push_back(ev[0] == v ? ev[1] : ev[0]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Cells of the vertex star, ascending id.
std::vector<PointId> star_cells(const Mesh& mesh, PointId v) {
  std::vector<PointId> out;
  for (PointId e : mesh.support(v)) {
    for (PointId c : mesh.support(e)) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

const SymTensor2& metric_at(const Mesh& mesh, const TensorField& metric, PointId v) {
  return metric[mesh.vertex_slot(v)];
}

}  // namespace

double tri_quality(const Vec2& p0, const Vec2& p1, const Vec2& p2,
                   const SymTensor2& m0, const SymTensor2& m1, const SymTensor2& m2) {
  const double area = signed_area(p0, p1, p2);
  const SymTensor2 mbar = (m0 + m1 + m2) * (1.0 / 3.0);
  const double area_m = std::sqrt(std::max(mbar.det(), 0.0)) * area;
  const double lsum = sq(seg_length(p0, p1, m0, m1)) + sq(seg_length(p1, p2, m1, m2)) +
                      sq(seg_length(p2, p0, m2, m0));
  return 4.0 * std::sqrt(3.0) * area_m / lsum;
}

double quality(const Mesh& mesh, PointId cell, const TensorField& metric) {
  metric.check_binding(mesh);
  if (mesh.cell_area(cell) <= 0.0) {
    throw std::invalid_argument("quality: inverted cell");
  }
  const auto v = mesh.cell_vertices(cell);
  const auto p = mesh.cell_coords(cell);
  return tri_quality(p[0], p[1], p[2], metric_at(mesh, metric, v[0]),
                     metric_at(mesh, metric, v[1]), metric_at(mesh, metric, v[2]));
}

MutationResult split_edge(Mesh& mesh, PointId edge, TensorField& metric,
                          [[maybe_unused]] const AdaptOptions& opts) {
  if (!mesh.active(edge)) {
    throw std::invalid_argument("split_edge: tombstoned edge");
  }
  const auto ev = mesh.edge_vertices(edge);
  const int edge_tag = mesh.tag(edge);
  const Vec2 pa = mesh.coord(ev[0]);
  const Vec2 pb = mesh.coord(ev[1]);
  const Vec2 mid = (pa + pb) * 0.5;
  const SymTensor2& ma = metric_at(mesh, metric, ev[0]);
  const SymTensor2& mb = metric_at(mesh, metric, ev[1]);
  const SymTensor2 mmid = (ma + mb) * 0.5;

  // Refinement is length-driven: gate only on degeneracy of the children.
  // A quality floor here deadlocks anisotropic refinement, because splitting
  // either long edge of a flat cell transiently leaves one child worse than
  // the parent; collapse/swap/smooth restore quality afterwards.
  const std::vector<PointId> cells(mesh.support(edge).begin(), mesh.support(edge).end());
  double new_min = 1.0;
  for (PointId c : cells) {
    const PointId w = mesh.opposite_vertex(c, edge);
    const Vec2 pw = mesh.coord(w);
    const SymTensor2& mw = metric_at(mesh, metric, w);
    const double orient = signed_area(pa, pb, pw) > 0.0 ? 1.0 : -1.0;
    double q1, q2;
    if (orient > 0.0) {
      q1 = tri_quality(pa, mid, pw, ma, mmid, mw);
      q2 = tri_quality(mid, pb, pw, mmid, mb, mw);
    } else {
      q1 = tri_quality(mid, pa, pw, mmid, ma, mw);
      q2 = tri_quality(pb, mid, pw, mb, mmid, mw);
    }
    new_min = std::min({new_min, q1, q2});
  }
  if (!(new_min > 0.0) || !std::isfinite(new_min)) {
    return MutationResult::RejectedGeometry;
  }

  // apply: drop incident cells and the edge, insert midpoint, rebuild
  struct OldCell {
    PointId w;
  };
  std::vector<OldCell> old_cells;
  for (PointId c : cells) old_cells.push_back({mesh.opposite_vertex(c, edge)});
  for (PointId c : cells) mesh.remove_point(c);
  mesh.remove_point(edge);

  const PointId vm = mesh.add_vertex(mid, edge_tag);
  metric.values().push_back(mmid);
  mesh.add_edge(ev[0], vm, edge_tag);
  mesh.add_edge(vm, ev[1], edge_tag);
  for (const OldCell& oc : old_cells) {
    mesh.add_cell_from_vertices(ev[0], vm, oc.w);
    mesh.add_cell_from_vertices(vm, ev[1], oc.w);
  }
  return MutationResult::Applied;
}

MutationResult collapse_edge(Mesh& mesh, PointId edge, TensorField& metric,
                             const AdaptOptions& opts) {
  if (!mesh.active(edge)) {
    throw std::invalid_argument("collapse_edge: tombstoned edge");
  }
  const auto ev = mesh.edge_vertices(edge);
  const bool edge_boundary = mesh.tag(edge) != kTagInterior;

  // candidate endpoints to remove, deterministic order
  std::vector<PointId> candidates;
  auto removable = [&](PointId r, PointId k) {
    if (mesh.tag(r) == kTagCorner) return false;
    const bool rb = mesh.tag(r) != kTagInterior;
    const bool kb = mesh.tag(k) != kTagInterior;
    if (rb && !kb) return false;     // interior endpoint must be the one removed
    if (rb && kb && !edge_boundary) return false;  // would pinch the domain
    return true;
  };
  const PointId lo = std::min(ev[0], ev[1]);
  const PointId hi = std::max(ev[0], ev[1]);
  if (removable(lo, hi)) candidates.push_back(lo);
  if (removable(hi, lo)) candidates.push_back(hi);
  if (candidates.empty()) return MutationResult::RejectedTopology;

  MutationResult last = MutationResult::RejectedTopology;
  for (PointId rm : candidates) {
    const PointId keep = rm == ev[0] ? ev[1] : ev[0];

    // link condition: common neighbors must be exactly the opposite
    // vertices of the cells dying with the edge
    std::vector<PointId> opp;
    for (PointId c : mesh.support(edge)) opp.push_back(mesh.opposite_vertex(c, edge));
    std::sort(opp.begin(), opp.end());
    const auto n_rm = vertex_neighbors(mesh, rm);
    const auto n_keep = vertex_neighbors(mesh, keep);
    std::vector<PointId> common;
    std::set_intersection(n_rm.begin(), n_rm.end(), n_keep.begin(), n_keep.end(),
                          std::back_inserter(common));
    if (common != opp) {
      last = MutationResult::RejectedTopology;
      continue;
    }

    // proposed retriangulation
    const auto star = star_cells(mesh, rm);
    std::vector<std::array<PointId, 3>> proposed;
    double old_min = 1.0;
    for (PointId c : star) old_min = std::min(old_min, quality(mesh, c, metric));
    bool ok = true;
    for (PointId c : star) {
      auto tri = mesh.cell_vertices(c);
      bool dies = false;
      for (int i = 0; i < 3; ++i) {
        if (tri[i] == rm) tri[i] = keep;
      }
      // cells containing both endpoints degenerate away
      dies = (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]);
      if (dies) continue;
      proposed.push_back(tri);
    }
    double new_min = 1.0;
    for (const auto& tri : proposed) {
      const Vec2 p0 = mesh.coord(tri[0]), p1 = mesh.coord(tri[1]), p2 = mesh.coord(tri[2]);
      if (signed_area(p0, p1, p2) <= 0.0) {
        ok = false;
        last = MutationResult::RejectedGeometry;
        break;
      }
      new_min = std::min(new_min, tri_quality(p0, p1, p2, metric_at(mesh, metric, tri[0]),
                                              metric_at(mesh, metric, tri[1]),
                                              metric_at(mesh, metric, tri[2])));
    }
    if (!ok) continue;

    // no replacement edge may exceed the split threshold
    for (PointId n : n_rm) {
      if (n == keep) continue;
      if (std::binary_search(opp.begin(), opp.end(), n)) continue;
      const double len = seg_length(mesh.coord(keep), mesh.coord(n),
                                    metric_at(mesh, metric, keep),
                                    metric_at(mesh, metric, n));
      if (len > opts.l_split) {
        ok = false;
        last = MutationResult::RejectedGeometry;
        break;
      }
    }
    if (!ok) continue;

    if (new_min < opts.q_min_accept && new_min <= old_min) {
      last = MutationResult::RejectedQuality;
      continue;
    }

    // remember boundary tags of the edges that get rebuilt or merged
    std::map<PointId, int> rim_tag;  // far vertex -> tag of old edge (rm, far)
    for (PointId e : mesh.support(rm)) {
      const auto evv = mesh.edge_vertices(e);
      const PointId far = evv[0] == rm ? evv[1] : evv[0];
      if (mesh.tag(e) != kTagInterior && far != keep) rim_tag[far] = mesh.tag(e);
    }

    // apply: clear the star of rm, then rebuild the proposed cells
    std::vector<PointId> dead_edges(mesh.support(rm).begin(), mesh.support(rm).end());
    for (PointId c : star) mesh.remove_point(c);
    for (PointId e : dead_edges) mesh.remove_point(e);
    mesh.remove_point(rm);
    for (const auto& tri : proposed) {
      mesh.add_cell_from_vertices(tri[0], tri[1], tri[2]);
    }
    // restore boundary tags on rebuilt or merged rim edges
    for (const auto& [far, t] : rim_tag) {
      const PointId e = mesh.find_edge(keep, far);
      if (e != kNoPoint && mesh.tag(e) == kTagInterior) mesh.set_tag(e, t);
    }
    return MutationResult::Applied;
  }
  return last;
}

MutationResult swap_edge(Mesh& mesh, PointId edge, const TensorField& metric) {
  if (!mesh.active(edge)) {
    throw std::invalid_argument("swap_edge: tombstoned edge");
  }
  if (mesh.tag(edge) != kTagInterior || mesh.support(edge).size() != 2) {
    throw std::invalid_argument("swap_edge: boundary edge");
  }
  const auto sup = mesh.support(edge);
  const PointId c0 = sup[0], c1 = sup[1];
  const auto ev = mesh.edge_vertices(edge);
  const PointId a = ev[0], b = ev[1];
  const PointId p = mesh.opposite_vertex(c0, edge);
  const PointId q = mesh.opposite_vertex(c1, edge);
  if (mesh.find_edge(p, q) != kNoPoint) return MutationResult::RejectedTopology;

  const Vec2 pp = mesh.coord(p), pq = mesh.coord(q), pa = mesh.coord(a), pb = mesh.coord(b);
  // a and b must lie strictly on opposite sides of line p-q
  const double sa = cross(pq - pp, pa - pp);
  const double sb = cross(pq - pp, pb - pp);
  if (sa == 0.0 || sb == 0.0 || (sa > 0.0) == (sb > 0.0)) {
    return MutationResult::RejectedGeometry;  // non-convex quad
  }

  const SymTensor2& mp = metric_at(mesh, metric, p);
  const SymTensor2& mq = metric_at(mesh, metric, q);
  const SymTensor2& ma = metric_at(mesh, metric, a);
  const SymTensor2& mb = metric_at(mesh, metric, b);
  const double old_min = std::min(quality(mesh, c0, metric), quality(mesh, c1, metric));
  double q1, q2;
  if (sa > 0.0) {
    q1 = tri_quality(pp, pq, pa, mp, mq, ma);
    q2 = tri_quality(pq, pp, pb, mq, mp, mb);
  } else {
    q1 = tri_quality(pq, pp, pa, mq, mp, ma);
    q2 = tri_quality(pp, pq, pb, mp, mq, mb);
  }
  if (std::min(q1, q2) <= old_min + kSwapHysteresis) {
    return MutationResult::RejectedQuality;
  }

  mesh.remove_point(c0);
  mesh.remove_point(c1);
  mesh.remove_point(edge);
  mesh.add_edge(p, q, kTagInterior);
  if (sa > 0.0) {
    mesh.add_cell_from_vertices(p, q, a);
    mesh.add_cell_from_vertices(q, p, b);
  } else {
    mesh.add_cell_from_vertices(q, p, a);
    mesh.add_cell_from_vertices(p, q, b);
  }
  return MutationResult::Applied;
}

MutationResult smooth_vertex(Mesh& mesh, PointId vertex, const TensorField& metric) {
  if (!mesh.active(vertex)) {
    throw std::invalid_argument("smooth_vertex: tombstoned vertex");
  }
  const int vtag = mesh.tag(vertex);
  if (vtag == kTagCorner) return MutationResult::RejectedTopology;

  // weighted average of neighbor positions; boundary vertices use their two
  // boundary neighbors only, which keeps them on the (straight) side
  Vec2 sum{0.0, 0.0};
  double wsum = 0.0;
  for (PointId e : mesh.support(vertex)) {
    if (vtag != kTagInterior && mesh.tag(e) == kTagInterior) continue;
    const auto ev = mesh.edge_vertices(e);
    const PointId n = ev[0] == vertex ? ev[1] : ev[0];
    const double w = std::sqrt(std::max(metric_at(mesh, metric, n).det(), 0.0));
    sum += mesh.coord(n) * w;
    wsum += w;
  }
  if (wsum <= 0.0) return MutationResult::RejectedGeometry;
  const Vec2 proposed = sum / wsum;
  const Vec2 old_pos = mesh.coord(vertex);

  const auto star = star_cells(mesh, vertex);
  double old_min = 1.0;
  for (PointId c : star) old_min = std::min(old_min, quality(mesh, c, metric));

  mesh.set_coord(vertex, proposed);
  double new_min = 1.0;
  for (PointId c : star) {
    const auto v = mesh.cell_vertices(c);
    const auto pc = mesh.cell_coords(c);
    new_min = std::min(new_min, tri_quality(pc[0], pc[1], pc[2],
                                            metric_at(mesh, metric, v[0]),
                                            metric_at(mesh, metric, v[1]),
                                            metric_at(mesh, metric, v[2])));
  }
  if (new_min < old_min) {
    mesh.set_coord(vertex, old_pos);
    return MutationResult::RejectedQuality;
  }
  return MutationResult::Applied;
}

std::vector<double> edge_metric_lengths(const Mesh& mesh, const TensorField& metric) {
  metric.check_binding(mesh);
  std::vector<double> out;
  for (PointId e : mesh.points(Stratum::Edge)) {
    const auto ev = mesh.edge_vertices(e);
    out.push_back(seg_length(mesh.coord(ev[0]), mesh.coord(ev[1]),
                             metric_at(mesh, metric, ev[0]),
                             metric_at(mesh, metric, ev[1])));
  }
  return out;
}

std::vector<double> cell_qualities(const Mesh& mesh, const TensorField& metric) {
  metric.check_binding(mesh);
  std::vector<double> out;
  for (PointId c : mesh.points(Stratum::Cell)) out.push_back(quality(mesh, c, metric));
  return out;
}

AdaptResult adapt(const Mesh& input, const TensorField& metric_in,
                  const AdaptOptions& opts) {
  metric_in.check_binding(input);
  if (!(0.0 < opts.l_collapse && opts.l_collapse < 1.0 && 1.0 < opts.l_split) ||
      !(0.0 < opts.q_min_accept && opts.q_min_accept <= 1.0)) {
    throw std::invalid_argument("adapt: invalid AdaptOptions thresholds");
  }
  {
    auto rep = input.validate();
    if (!rep.ok()) {
      throw std::invalid_argument("adapt: invalid input mesh: " + rep.violations.front());
    }
  }
  for (PointId v : input.points(Stratum::Vertex)) {
    if (!metric_in[input.vertex_slot(v)].spd()) {
      throw std::invalid_argument("adapt: non-SPD metric");
    }
  }

  Mesh mesh = input;
  TensorField metric = metric_in;
  AdaptResult result;

  struct LenEdge {
    double len;
    PointId e;
  };

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    result.sweeps = sweep + 1;
    int splits = 0, collapses = 0, swaps = 0;

    // refinement: longest first, split set computed up front
    std::vector<LenEdge> to_split;
    for (PointId e : mesh.points(Stratum::Edge)) {
      const auto ev = mesh.edge_vertices(e);
      const double len = seg_length(mesh.coord(ev[0]), mesh.coord(ev[1]),
                                    metric_at(mesh, metric, ev[0]),
                                    metric_at(mesh, metric, ev[1]));
      if (len > opts.l_split) to_split.push_back({len, e});
    }
    std::sort(to_split.begin(), to_split.end(), [](const LenEdge& a, const LenEdge& b) {
      return a.len != b.len ? a.len > b.len : a.e < b.e;
    });
    for (const LenEdge& le : to_split) {
      if (!mesh.active(le.e)) continue;
      if (split_edge(mesh, le.e, metric, opts) == MutationResult::Applied) ++splits;
    }

    // coarsening: shortest first
    std::vector<LenEdge> to_collapse;
    for (PointId e : mesh.points(Stratum::Edge)) {
      const auto ev = mesh.edge_vertices(e);
      const double len = seg_length(mesh.coord(ev[0]), mesh.coord(ev[1]),
                                    metric_at(mesh, metric, ev[0]),
                                    metric_at(mesh, metric, ev[1]));
      if (len < opts.l_collapse) to_collapse.push_back({len, e});
    }
    std::sort(to_collapse.begin(), to_collapse.end(),
              [](const LenEdge& a, const LenEdge& b) {
                return a.len != b.len ? a.len < b.len : a.e < b.e;
              });
    for (const LenEdge& le : to_collapse) {
      if (!mesh.active(le.e)) continue;
      if (collapse_edge(mesh, le.e, metric, opts) == MutationResult::Applied) ++collapses;
    }

    // swapping
    {
      const auto edges = mesh.points(Stratum::Edge);
      for (PointId e : edges) {
        if (!mesh.active(e)) continue;
        if (mesh.tag(e) != kTagInterior || mesh.support(e).size() != 2) continue;
        if (swap_edge(mesh, e, metric) == MutationResult::Applied) ++swaps;
      }
    }

    // smoothing
    for (int it = 0; it < opts.smooth_iters; ++it) {
      const auto verts = mesh.points(Stratum::Vertex);
      for (PointId v : verts) {
        if (smooth_vertex(mesh, v, metric) == MutationResult::Applied) {
          ++result.smooth_moves;
        }
      }
    }

    if (opts.validate_each_sweep) {
      auto rep = mesh.validate();
      if (!rep.ok()) {
        throw std::logic_error("adapt: sweep broke the mesh: " + rep.violations.front());
      }
    }

    result.splits += splits;
    result.collapses += collapses;
    result.swaps += swaps;
    if (splits + collapses + swaps == 0) break;
  }

  result.mesh = mesh.compact(&result.maps);
  TensorField out_metric(result.mesh);
  for (int32_t slot = 0; slot < static_cast<int32_t>(metric.size()); ++slot) {
    const int32_t ns = slot < static_cast<int32_t>(result.maps.vertex_map.size())
                           ? result.maps.vertex_map[slot]
                           : -1;
    if (ns >= 0) out_metric[ns] = metric[slot];
  }
  result.metric = std::move(out_metric);

  auto rep = result.mesh.validate();
  if (!rep.ok()) {
    throw std::logic_error("adapt: output mesh invalid: " + rep.violations.front());
  }
  return result;
}

}  // namespace adapt
