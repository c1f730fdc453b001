#ifndef ADAPT_MESH_HPP
#define ADAPT_MESH_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adapt/geometry.hpp"

namespace adapt {

// Index into a single global point numbering covering all strata.
using PointId = int32_t;
constexpr PointId kNoPoint = -1;

enum class Stratum : uint8_t { Vertex = 0, Edge = 1, Cell = 2 };

// Boundary tags. Corners are pinned by the remesher.
constexpr int kTagInterior = 0;
constexpr int kTagBoundary = 1;
constexpr int kTagCorner = 2;

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct CompactMaps {
  std::vector<PointId> point_map;   // old point -> new point, kNoPoint if tombstoned
  std::vector<int32_t> vertex_map;  // old vertex slot -> new vertex slot, -1 if gone
};

// Unstructured 2D triangle mesh: vertices, edges and cells are uniform
// points of a DAG related by cone (covered points) and support (covering
// points). Cells cover 3 edges, edges cover 2 vertices. Local remeshing
// tombstones points; compact() renumbers.
class Mesh {
 public:
  Mesh() = default;

  // ---- topology queries ----
  int num_points() const { return static_cast<int>(points_.size()); }
  bool in_range(PointId p) const { return p >= 0 && p < num_points(); }
  bool active(PointId p) const { return in_range(p) && points_[p].active; }
  Stratum stratum(PointId p) const;

  // Covered points in stored order; empty for vertices.
  std::span<const PointId> cone(PointId p) const;
  // Covering points; empty for cells.
  std::span<const PointId> support(PointId p) const;
  // Transitive cone closure including p, ascending PointId order.
  std::vector<PointId> closure(PointId p) const;
  // Transitive support closure including p, ascending PointId order.
  std::vector<PointId> star(PointId p) const;

  int num_vertices() const { return counts_[0]; }
  int num_edges() const { return counts_[1]; }
  int num_cells() const { return counts_[2]; }

  // Active points of a stratum, ascending id.
  std::vector<PointId> points(Stratum s) const;

  // ---- vertex slots: dense numbering used by nodal fields ----
  int num_vertex_slots() const { return static_cast<int>(slot_point_.size()); }
  int32_t vertex_slot(PointId v) const;
  PointId slot_point(int32_t slot) const { return slot_point_[slot]; }

  // ---- geometry ----
  Vec2 coord(PointId v) const;
  Vec2 coord_of_slot(int32_t slot) const { return coords_[slot]; }
  int tag(PointId p) const;

  std::array<PointId, 2> edge_vertices(PointId e) const;
  // Ordered CCW vertex triple derived from the cell's edge cone.
  std::array<PointId, 3> cell_vertices(PointId c) const;
  std::array<Vec2, 3> cell_coords(PointId c) const;
  double cell_area(PointId c) const;
  Vec2 edge_vector(PointId e) const;

  // Edge joining two vertices, kNoPoint if absent.
  PointId find_edge(PointId v0, PointId v1) const;
  // The cell vertex not covered by edge e.
  PointId opposite_vertex(PointId c, PointId e) const;

  // ---- mutation primitives (cone/support symmetry is maintained) ----
  PointId add_vertex(const Vec2& pos, int tag);
  PointId add_edge(PointId v0, PointId v1, int tag);
  PointId add_cell(const std::array<PointId, 3>& edges,
                   const std::array<int8_t, 3>& orient);
  // Creates missing edges (tag 0), orients CCW. Throws on zero area.
  PointId add_cell_from_vertices(PointId v0, PointId v1, PointId v2);
  // Tombstones p; requires empty support.
  void remove_point(PointId p);
  void set_coord(PointId v, const Vec2& pos);
  void set_tag(PointId p, int t);

  // Raw cone overwrite that deliberately skips the support bookkeeping.
  // Exists so validation tests can exercise the transpose check.
  void debug_set_cone_entry(PointId p, int idx, PointId q);

  // Bumped on build and compact; nodal fields bind to it.
  uint64_t generation() const { return generation_; }

  // ---- validation & compaction ----
  ValidationReport validate() const;
  // Renumbers active points contiguously per stratum (vertices, then
  // edges, then cells, ascending old id).
  Mesh compact(CompactMaps* maps = nullptr) const;

 private:
  struct PointRec {
    Stratum stratum = Stratum::Vertex;
    bool active = true;
    int8_t cone_size = 0;
    std::array<PointId, 3> cone = {kNoPoint, kNoPoint, kNoPoint};
    std::array<int8_t, 3> cone_orient = {0, 0, 0};  // cells: 1 = edge reversed
    std::vector<PointId> support;
    int tag = kTagInterior;
    int32_t vslot = -1;  // vertices only
  };

  PointId append_point(PointRec rec);
  void check_active(PointId p, const char* who) const;

  std::vector<PointRec> points_;
  std::vector<Vec2> coords_;        // by vertex slot
  std::vector<PointId> slot_point_; // vertex slot -> point (kNoPoint if tombstoned)
  std::array<int, 3> counts_ = {0, 0, 0};
  uint64_t generation_ = 0;

  friend Mesh build_from_cells(const std::vector<std::array<int, 3>>&,
                               const std::vector<Vec2>&);
};

// Interpolates the cell-vertex form into the full vertex/edge/cell DAG.
// Cells are re-oriented CCW; edges derived from shared vertex pairs;
// boundary edges/vertices tagged (geometric corners get kTagCorner).
Mesh build_from_cells(const std::vector<std::array<int, 3>>& cell_vertex_lists,
                      const std::vector<Vec2>& coords);

// n x n structured triangulation of the unit square (2 n^2 cells).
Mesh build_unit_square(int n);

}  // namespace adapt

#endif
