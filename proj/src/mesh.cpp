#include "adapt/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace adapt {

namespace {

std::atomic<uint64_t> g_generation{1};

std::string point_str(PointId p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point %d", p);
  return buf;
}

}  // namespace

void Mesh::check_active(PointId p, const char* who) const {
  if (!in_range(p)) {
    throw std::out_of_range(std::string(who) + ": " + point_str(p) + " out of range");
  }
  if (!points_[p].active) {
    throw std::invalid_argument(std::string(who) + ": " + point_str(p) + " is tombstoned");
  }
}

Stratum Mesh::stratum(PointId p) const {
  if (!in_range(p)) throw std::out_of_range("stratum: " + point_str(p) + " out of range");
  return points_[p].stratum;
}

std::span<const PointId> Mesh::cone(PointId p) const {
  check_active(p, "cone");
  const PointRec& r = points_[p];
  return {r.cone.data(), static_cast<size_t>(r.cone_size)};
}

std::span<const PointId> Mesh::support(PointId p) const {
  check_active(p, "support");
  return points_[p].support;
}

std::vector<PointId> Mesh::closure(PointId p) const {
  check_active(p, "closure");
  std::vector<PointId> out = {p};
  std::vector<PointId> work = {p};
  while (!work.empty()) {
    PointId q = work.back();
    work.pop_back();
    for (PointId c : cone(q)) {
      if (std::find(out.begin(), out.end(), c) == out.end()) {
        out.push_back(c);
        work.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointId> Mesh::star(PointId p) const {
  check_active(p, "star");
  std::vector<PointId> out = {p};
  std::vector<PointId> work = {p};
  while (!work.empty()) {
    PointId q = work.back();
    work.pop_back();
    for (PointId s : support(q)) {
      if (std::find(out.begin(), out.end(), s) == out.end()) {
        out.push_back(s);
        work.push_back(s);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointId> Mesh::points(Stratum s) const {
  std::vector<PointId> out;
  out.reserve(counts_[static_cast<int>(s)]);
  for (PointId p = 0; p < num_points(); ++p) {
    if (points_[p].active && points_[p].stratum == s) out.push_back(p);
  }
  return out;
}

int32_t Mesh::vertex_slot(PointId v) const {
  check_active(v, "vertex_slot");
  if (points_[v].stratum != Stratum::Vertex) {
    throw std::invalid_argument("vertex_slot: " + point_str(v) + " is not a vertex");
  }
  return points_[v].vslot;
}

Vec2 Mesh::coord(PointId v) const { return coords_[vertex_slot(v)]; }

int Mesh::tag(PointId p) const {
  check_active(p, "tag");
  return points_[p].tag;
}

std::array<PointId, 2> Mesh::edge_vertices(PointId e) const {
  check_active(e, "edge_vertices");
  const PointRec& r = points_[e];
  if (r.stratum != Stratum::Edge) {
    throw std::invalid_argument("edge_vertices: " + point_str(e) + " is not an edge");
  }
  return {r.cone[0], r.cone[1]};
}

std::array<PointId, 3> Mesh::cell_vertices(PointId c) const {
  check_active(c, "cell_vertices");
  const PointRec& r = points_[c];
  if (r.stratum != Stratum::Cell) {
    throw std::invalid_argument("cell_vertices: " + point_str(c) + " is not a cell");
  }
  std::array<PointId, 3> v;
  for (int i = 0; i < 3; ++i) {
    const PointRec& e = points_[r.cone[i]];
    v[i] = r.cone_orient[i] == 0 ? e.cone[0] : e.cone[1];
  }
  return v;
}

std::array<Vec2, 3> Mesh::cell_coords(PointId c) const {
  auto v = cell_vertices(c);
  return {coord(v[0]), coord(v[1]), coord(v[2])};
}

double Mesh::cell_area(PointId c) const {
  auto p = cell_coords(c);
  return signed_area(p[0], p[1], p[2]);
}

Vec2 Mesh::edge_vector(PointId e) const {
  auto v = edge_vertices(e);
  return coord(v[1]) - coord(v[0]);
}

PointId Mesh::find_edge(PointId v0, PointId v1) const {
  check_active(v0, "find_edge");
  check_active(v1, "find_edge");
  for (PointId e : points_[v0].support) {
    const PointRec& r = points_[e];
    if (r.cone[0] == v1 || r.cone[1] == v1) return e;
  }
  return kNoPoint;
}

PointId Mesh::opposite_vertex(PointId c, PointId e) const {
  auto cv = cell_vertices(c);
  auto ev = edge_vertices(e);
  for (PointId v : cv) {
    if (v != ev[0] && v != ev[1]) return v;
  }
  throw std::invalid_argument("opposite_vertex: edge not in cell");
}

PointId Mesh::append_point(PointRec rec) {
  PointId p = num_points();
  counts_[static_cast<int>(rec.stratum)]++;
  points_.push_back(std::move(rec));
  return p;
}

PointId Mesh::add_vertex(const Vec2& pos, int t) {
  PointRec rec;
  rec.stratum = Stratum::Vertex;
  rec.tag = t;
  rec.vslot = static_cast<int32_t>(slot_point_.size());
  PointId p = append_point(std::move(rec));
  coords_.push_back(pos);
  slot_point_.push_back(p);
  return p;
}

PointId Mesh::add_edge(PointId v0, PointId v1, int t) {
  check_active(v0, "add_edge");
  check_active(v1, "add_edge");
  if (v0 == v1) throw std::invalid_argument("add_edge: repeated vertex");
  PointRec rec;
  rec.stratum = Stratum::Edge;
  rec.cone_size = 2;
  rec.cone = {v0, v1, kNoPoint};
  rec.tag = t;
  PointId e = append_point(std::move(rec));
  points_[v0].support.push_back(e);
  points_[v1].support.push_back(e);
  return e;
}

PointId Mesh::add_cell(const std::array<PointId, 3>& edges,
                       const std::array<int8_t, 3>& orient) {
  for (PointId e : edges) check_active(e, "add_cell");
  PointRec rec;
  rec.stratum = Stratum::Cell;
  rec.cone_size = 3;
  rec.cone = edges;
  rec.cone_orient = orient;
  PointId c = append_point(std::move(rec));
  for (PointId e : edges) points_[e].support.push_back(c);
  return c;
}

PointId Mesh::add_cell_from_vertices(PointId v0, PointId v1, PointId v2) {
  double a2 = signed_area2(coord(v0), coord(v1), coord(v2));
  if (a2 == 0.0) throw std::invalid_argument("add_cell_from_vertices: zero area");
  if (a2 < 0.0) std::swap(v1, v2);
  const std::array<PointId, 3> vs = {v0, v1, v2};
  std::array<PointId, 3> es;
  std::array<int8_t, 3> orient;
  for (int i = 0; i < 3; ++i) {
    PointId a = vs[i], b = vs[(i + 1) % 3];
    PointId e = find_edge(a, b);
    if (e == kNoPoint) e = add_edge(a, b, kTagInterior);
    es[i] = e;
    orient[i] = points_[e].cone[0] == a ? 0 : 1;
  }
  return add_cell(es, orient);
}

void Mesh::remove_point(PointId p) {
  check_active(p, "remove_point");
  PointRec& r = points_[p];
  if (!r.support.empty()) {
    throw std::logic_error("remove_point: " + point_str(p) + " still has support");
  }
  for (int i = 0; i < r.cone_size; ++i) {
    auto& sup = points_[r.cone[i]].support;
    auto it = std::find(sup.begin(), sup.end(), p);
    if (it != sup.end()) sup.erase(it);
  }
  if (r.stratum == Stratum::Vertex) slot_point_[r.vslot] = kNoPoint;
  r.active = false;
  counts_[static_cast<int>(r.stratum)]--;
}

void Mesh::set_coord(PointId v, const Vec2& pos) { coords_[vertex_slot(v)] = pos; }

void Mesh::set_tag(PointId p, int t) {
  check_active(p, "set_tag");
  points_[p].tag = t;
}

void Mesh::debug_set_cone_entry(PointId p, int idx, PointId q) {
  check_active(p, "debug_set_cone_entry");
  points_[p].cone[idx] = q;
}

ValidationReport Mesh::validate() const {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

  for (PointId p = 0; p < num_points(); ++p) {
    const PointRec& r = points_[p];
    if (!r.active) continue;
    // cone arity and liveness
    int expect = r.stratum == Stratum::Vertex ? 0 : (r.stratum == Stratum::Edge ? 2 : 3);
    if (r.cone_size != expect) {
      fail(point_str(p) + ": cone size " + std::to_string(r.cone_size) +
           ", expected " + std::to_string(expect));
      continue;
    }
    for (int i = 0; i < r.cone_size; ++i) {
      PointId q = r.cone[i];
      if (!active(q)) {
        fail(point_str(p) + ": cone entry " + point_str(q) + " inactive");
        continue;
      }
      // transpose: q in cone(p) => p in support(q)
      const auto& sup = points_[q].support;
      if (std::find(sup.begin(), sup.end(), p) == sup.end()) {
        fail(point_str(p) + ": missing from support of " + point_str(q));
      }
      Stratum qs = points_[q].stratum;
      Stratum want = r.stratum == Stratum::Cell ? Stratum::Edge : Stratum::Vertex;
      if (qs != want) fail(point_str(p) + ": cone entry " + point_str(q) + " wrong stratum");
    }
    for (PointId s : r.support) {
      if (!active(s)) {
        fail(point_str(p) + ": support entry " + point_str(s) + " inactive");
        continue;
      }
      const PointRec& sr = points_[s];
      bool found = false;
      for (int i = 0; i < sr.cone_size; ++i) found = found || sr.cone[i] == p;
      if (!found) fail(point_str(p) + ": not in cone of supporting " + point_str(s));
    }
    if (r.stratum == Stratum::Edge) {
      if (r.cone[0] == r.cone[1]) fail(point_str(p) + ": edge with repeated vertex");
      size_t ncell = r.support.size();
      if (ncell != 1 && ncell != 2) {
        fail(point_str(p) + ": edge with " + std::to_string(ncell) + " cells");
      } else if (ncell == 1 && r.tag == kTagInterior) {
        fail(point_str(p) + ": boundary edge without tag");
      } else if (ncell == 2 && r.tag != kTagInterior) {
        fail(point_str(p) + ": interior edge with boundary tag");
      }
    }
    if (r.stratum == Stratum::Cell) {
      if (r.cone[0] == r.cone[1] || r.cone[1] == r.cone[2] || r.cone[0] == r.cone[2]) {
        fail(point_str(p) + ": cell with repeated edge");
        continue;
      }
      // edges must chain head-to-tail under their orientations
      bool chained = true;
      for (int i = 0; i < 3; ++i) {
        const PointRec& e = points_[r.cone[i]];
        const PointRec& f = points_[r.cone[(i + 1) % 3]];
        PointId end = r.cone_orient[i] == 0 ? e.cone[1] : e.cone[0];
        PointId next = r.cone_orient[(i + 1) % 3] == 0 ? f.cone[0] : f.cone[1];
        chained = chained && end == next;
      }
      if (!chained) {
        fail(point_str(p) + ": cell edges do not chain");
        continue;
      }
      if (cell_area(p) <= 0.0) fail(point_str(p) + ": non-positive area");
    }
    if (r.stratum == Stratum::Vertex) {
      bool on_boundary = false;
      for (PointId e : r.support) {
        on_boundary = on_boundary || (points_[e].support.size() == 1);
      }
      if (on_boundary && r.tag == kTagInterior) {
        fail(point_str(p) + ": boundary vertex without tag");
      }
      if (!on_boundary && r.tag != kTagInterior) {
        fail(point_str(p) + ": interior vertex with boundary tag");
      }
    }
  }

  int euler = num_vertices() - num_edges() + num_cells();
  if (euler != 1) fail("Euler characteristic V-E+C = " + std::to_string(euler) + ", expected 1");
  return rep;
}

Mesh Mesh::compact(CompactMaps* maps) const {
  Mesh out;
  CompactMaps local;
  CompactMaps& m = maps ? *maps : local;
  m.point_map.assign(num_points(), kNoPoint);
  m.vertex_map.assign(num_vertex_slots(), -1);

  for (PointId p = 0; p < num_points(); ++p) {
    const PointRec& r = points_[p];
    if (!r.active || r.stratum != Stratum::Vertex) continue;
    m.point_map[p] = out.add_vertex(coords_[r.vslot], r.tag);
    m.vertex_map[r.vslot] = out.points_[m.point_map[p]].vslot;
  }
  for (PointId p = 0; p < num_points(); ++p) {
    const PointRec& r = points_[p];
    if (!r.active || r.stratum != Stratum::Edge) continue;
    m.point_map[p] = out.add_edge(m.point_map[r.cone[0]], m.point_map[r.cone[1]], r.tag);
  }
  for (PointId p = 0; p < num_points(); ++p) {
    const PointRec& r = points_[p];
    if (!r.active || r.stratum != Stratum::Cell) continue;
    std::array<PointId, 3> es = {m.point_map[r.cone[0]], m.point_map[r.cone[1]],
                                 m.point_map[r.cone[2]]};
    m.point_map[p] = out.add_cell(es, r.cone_orient);
  }
  out.generation_ = g_generation.fetch_add(1);
  return out;
}

Mesh build_from_cells(const std::vector<std::array<int, 3>>& cell_vertex_lists,
                      const std::vector<Vec2>& coords) {
  if (cell_vertex_lists.empty()) {
    throw std::invalid_argument("build_from_cells: no cells");
  }
  const int nv = static_cast<int>(coords.size());

  Mesh mesh;
  for (const Vec2& c : coords) mesh.add_vertex(c, kTagInterior);

  // orient all cells CCW, check degeneracy and duplicates
  std::vector<std::array<int, 3>> cells = cell_vertex_lists;
  std::set<std::array<int, 3>> seen;
  for (auto& cell : cells) {
    for (int v : cell) {
      if (v < 0 || v >= nv) {
        throw std::invalid_argument("build_from_cells: vertex index out of range");
      }
    }
    if (cell[0] == cell[1] || cell[1] == cell[2] || cell[0] == cell[2]) {
      throw std::invalid_argument("build_from_cells: degenerate cell (repeated vertex)");
    }
    double a2 = signed_area2(coords[cell[0]], coords[cell[1]], coords[cell[2]]);
    if (a2 == 0.0) throw std::invalid_argument("build_from_cells: degenerate cell (zero area)");
    if (a2 < 0.0) std::swap(cell[1], cell[2]);
    std::array<int, 3> key = cell;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) {
      throw std::invalid_argument("build_from_cells: duplicate cell");
    }
  }

  // derive edges: each unordered vertex pair shared by incident cells
  std::map<std::pair<int, int>, PointId> edge_of;
  std::map<std::pair<int, int>, int> dir_count;  // oriented traversals
  for (const auto& cell : cells) {
    for (int i = 0; i < 3; ++i) {
      int a = cell[i], b = cell[(i + 1) % 3];
      auto key = std::minmax(a, b);
      if (edge_of.find({key.first, key.second}) == edge_of.end()) {
        edge_of[{key.first, key.second}] = mesh.add_edge(a, b, kTagInterior);
      }
      dir_count[{a, b}]++;
    }
  }
  for (const auto& [key, e] : edge_of) {
    int fwd = dir_count.count({key.first, key.second}) ? dir_count[{key.first, key.second}] : 0;
    int bwd = dir_count.count({key.second, key.first}) ? dir_count[{key.second, key.first}] : 0;
    if (fwd > 1 || bwd > 1) {
      throw std::invalid_argument(fwd + bwd > 2
                                      ? "build_from_cells: non-manifold edge"
                                      : "build_from_cells: inconsistent orientation");
    }
    (void)e;
  }

  for (const auto& cell : cells) {
    std::array<PointId, 3> es;
    std::array<int8_t, 3> orient;
    for (int i = 0; i < 3; ++i) {
      int a = cell[i], b = cell[(i + 1) % 3];
      auto key = std::minmax(a, b);
      es[i] = edge_of[{key.first, key.second}];
      orient[i] = mesh.edge_vertices(es[i])[0] == a ? 0 : 1;
    }
    mesh.add_cell(es, orient);
  }

  // boundary tags: edges with a single supporting cell, then their vertices;
  // corners where the two boundary edge directions are not collinear
  for (PointId e : mesh.points(Stratum::Edge)) {
    if (mesh.support(e).size() == 1) {
      mesh.set_tag(e, kTagBoundary);
      for (PointId v : mesh.cone(e)) {
        if (mesh.tag(v) == kTagInterior) mesh.set_tag(v, kTagBoundary);
      }
    }
  }
  for (PointId v : mesh.points(Stratum::Vertex)) {
    if (mesh.tag(v) == kTagInterior) continue;
    std::vector<Vec2> dirs;
    for (PointId e : mesh.support(v)) {
      if (mesh.tag(e) == kTagInterior) continue;
      auto ev = mesh.edge_vertices(e);
      PointId w = ev[0] == v ? ev[1] : ev[0];
      Vec2 d = mesh.coord(w) - mesh.coord(v);
      dirs.push_back(d / norm(d));
    }
    if (dirs.size() != 2 || std::abs(cross(dirs[0], dirs[1])) > 1e-9) {
      mesh.set_tag(v, kTagCorner);
    }
  }

  mesh.generation_ = g_generation.fetch_add(1);
  return mesh;
}

Mesh build_unit_square(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square: n must be >= 1");
  std::vector<Vec2> coords;
  coords.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      coords.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return build_from_cells(cells, coords);
}

}  // namespace adapt
