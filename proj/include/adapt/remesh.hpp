#ifndef ADAPT_REMESH_HPP
#define ADAPT_REMESH_HPP

#include <cmath>

#include "adapt/field.hpp"
#include "adapt/mesh.hpp"

namespace adapt {

struct AdaptOptions {
  double l_split = std::sqrt(2.0);        // metric length above which edges split
  double l_collapse = 1.0 / std::sqrt(2.0);
  double q_min_accept = 0.1;  // mutations may not push local quality below this
                              // unless they strictly improve the local minimum
  int max_sweeps = 20;
  int smooth_iters = 2;
  bool validate_each_sweep = false;  // enabled by test builds
};

enum class MutationResult {
  Applied,
  RejectedQuality,
  RejectedGeometry,  // would invert a cell or create an over-long edge
  RejectedTopology,  // forbidden configuration (non-manifold, corners, ...)
};

// Metric-aware quality in (0, 1]: Q = 4*sqrt(3) * A_M / sum(l_M,i^2) with
// A_M the metric area under the vertex-averaged metric. 1 iff the cell is
// metric-equilateral.
double quality(const Mesh& mesh, PointId cell, const TensorField& metric);

// Quality from raw positions and metrics; negative for inverted triangles.
double tri_quality(const Vec2& p0, const Vec2& p1, const Vec2& p2,
                   const SymTensor2& m0, const SymTensor2& m1, const SymTensor2& m2);

// Split at the Euclidean midpoint; metric at the new vertex is the mean of
// the endpoint metrics; boundary tag inherited.
MutationResult split_edge(Mesh& mesh, PointId edge, TensorField& metric,
                          const AdaptOptions& opts);

// Remove one endpoint and retriangulate its star onto the survivor.
MutationResult collapse_edge(Mesh& mesh, PointId edge, TensorField& metric,
                             const AdaptOptions& opts);

// Flip the diagonal of the two-cell quad iff the worst of the two new cells
// strictly beats the worst of the two old ones.
MutationResult swap_edge(Mesh& mesh, PointId edge, const TensorField& metric);

// Metric-weighted Laplacian move, accepted only if the star's minimum
// quality does not decrease. Boundary vertices slide along their side;
// corners are pinned.
MutationResult smooth_vertex(Mesh& mesh, PointId vertex, const TensorField& metric);

struct AdaptResult {
  Mesh mesh;
  TensorField metric;  // input metric carried onto the adapted mesh
  CompactMaps maps;
  int sweeps = 0;
  int splits = 0;
  int collapses = 0;
  int swaps = 0;
  int smooth_moves = 0;
};

// Iterative split/collapse/swap/smooth sweeps toward a unit mesh under the
// given vertex metric. Returns a compacted valid mesh.
AdaptResult adapt(const Mesh& mesh, const TensorField& metric, const AdaptOptions& opts);

// Metric lengths of all active edges (ascending edge id).
std::vector<double> edge_metric_lengths(const Mesh& mesh, const TensorField& metric);
std::vector<double> cell_qualities(const Mesh& mesh, const TensorField& metric);

}  // namespace adapt

#endif
