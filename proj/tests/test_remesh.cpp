#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "adapt/remesh.hpp"

using namespace adapt;
using doctest::Approx;

namespace {

Mesh two_triangle_square() {
  return build_from_cells({{0, 1, 2}, {0, 2, 3}}, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

// geometry + count signature for bitwise-unchanged checks
struct MeshSignature {
  int points, vertices, edges, cells;
  std::vector<Vec2> coords;
  bool operator==(const MeshSignature&) const = default;
};

MeshSignature signature(const Mesh& mesh) {
  MeshSignature s{mesh.num_points(), mesh.num_vertices(), mesh.num_edges(),
                  mesh.num_cells(), {}};
  for (PointId v : mesh.points(Stratum::Vertex)) s.coords.push_back(mesh.coord(v));
  return s;
}

SymTensor2 pushforward(const SymTensor2& m, double f11, double f12, double f21,
                       double f22) {
  // F^{-T} M F^{-1} for F = [[f11, f12], [f21, f22]]
  const double det = f11 * f22 - f12 * f21;
  const double i11 = f22 / det, i12 = -f12 / det, i21 = -f21 / det, i22 = f11 / det;
  const double a11 = m.a11 * i11 + m.a12 * i21;
  const double a12 = m.a11 * i12 + m.a12 * i22;
  const double a21 = m.a12 * i11 + m.a22 * i21;
  const double a22 = m.a12 * i12 + m.a22 * i22;
  return {i11 * a11 + i21 * a21, i11 * a12 + i21 * a22, i12 * a12 + i22 * a22};
}

}  // namespace

TEST_SUITE("remesh") {

TEST_CASE("quality of reference shapes") {
  const Vec2 p0{0, 0}, p1{1, 0}, p2{0.5, std::sqrt(3.0) / 2.0};
  const SymTensor2 id = SymTensor2::identity();
  CHECK(tri_quality(p0, p1, p2, id, id, id) == Approx(1.0).epsilon(1e-9));

  // right isoceles with unit legs: 4*sqrt(3)*(1/2)/(1+1+2) = sqrt(3)/2
  CHECK(tri_quality({0, 0}, {1, 0}, {0, 1}, id, id, id) ==
        Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

  // equilateral stretched x3 along x with the matching metric is again 1
  const SymTensor2 m = SymTensor2::diag(1.0 / 9.0, 1.0);
  CHECK(tri_quality({0, 0}, {3, 0}, {1.5, std::sqrt(3.0) / 2.0}, m, m, m) ==
        Approx(1.0).epsilon(1e-6));

  Mesh mesh = two_triangle_square();
  TensorField metric(mesh, id);
  for (PointId c : mesh.points(Stratum::Cell)) {
    CHECK(quality(mesh, c, metric) == Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("quality is invariant under affine maps with metric pushforward") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Vec2 p0{dist(rng), dist(rng)};
    const Vec2 p1 = p0 + Vec2{1.0 + 0.3 * dist(rng), 0.3 * dist(rng)};
    const Vec2 p2 = p0 + Vec2{0.3 * dist(rng), 1.0 + 0.3 * dist(rng)};
    SymTensor2 m0{2.0 + dist(rng), 0.4 * dist(rng), 2.0 + dist(rng)};
    SymTensor2 m1{2.0 + dist(rng), 0.4 * dist(rng), 2.0 + dist(rng)};
    SymTensor2 m2{2.0 + dist(rng), 0.4 * dist(rng), 2.0 + dist(rng)};

    double f11 = 1.0 + 0.5 * dist(rng), f12 = 0.5 * dist(rng);
    double f21 = 0.5 * dist(rng), f22 = 1.0 + 0.5 * dist(rng);
    if (f11 * f22 - f12 * f21 < 0.1) continue;
    auto map = [&](const Vec2& p) {
      return Vec2{f11 * p.x + f12 * p.y + 0.7, f21 * p.x + f22 * p.y - 0.2};
    };
    const double q = tri_quality(p0, p1, p2, m0, m1, m2);
    const double q_mapped = tri_quality(map(p0), map(p1), map(p2),
                                        pushforward(m0, f11, f12, f21, f22),
                                        pushforward(m1, f11, f12, f21, f22),
                                        pushforward(m2, f11, f12, f21, f22));
    CHECK(q_mapped == Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("split interior edge of the two-triangle square") {
  Mesh mesh = two_triangle_square();
  TensorField metric(mesh, SymTensor2::identity());
  AdaptOptions opts;
  const PointId diag = mesh.find_edge(0, 2);
  REQUIRE(split_edge(mesh, diag, metric, opts) == MutationResult::Applied);
  CHECK(mesh.num_vertices() == 5);
  CHECK(mesh.num_edges() == 8);
  CHECK(mesh.num_cells() == 4);
  CHECK(mesh.validate().ok());
  CHECK(metric.size() == 5);
  CHECK_THROWS_AS(split_edge(mesh, diag, metric, opts), std::invalid_argument);
}

TEST_CASE("split boundary edge of a single triangle") {
  Mesh mesh = build_from_cells({{0, 1, 2}}, {{0, 0}, {1, 0}, {0, 1}});
  TensorField metric(mesh, SymTensor2::identity());
  AdaptOptions opts;
  const PointId e = mesh.find_edge(0, 1);
  REQUIRE(mesh.tag(e) != kTagInterior);
  REQUIRE(split_edge(mesh, e, metric, opts) == MutationResult::Applied);
  CHECK(mesh.num_vertices() == 4);
  CHECK(mesh.num_edges() == 5);
  CHECK(mesh.num_cells() == 2);
  CHECK(mesh.validate().ok());
  // the midpoint inherits the boundary tag
  int boundary_vertices = 0;
  for (PointId v : mesh.points(Stratum::Vertex)) {
    if (mesh.tag(v) != kTagInterior) ++boundary_vertices;
  }
  CHECK(boundary_vertices == 4);
}

TEST_CASE("children of a split have half the metric length") {
  Mesh mesh = two_triangle_square();
  TensorField metric(mesh, SymTensor2::diag(3.0, 7.0));
  AdaptOptions opts;
  const PointId diag = mesh.find_edge(0, 2);
  const double parent_len =
      metric_edge_length(metric.at_vertex(mesh, 0), metric.at_vertex(mesh, 2),
                         mesh.coord(2) - mesh.coord(0));
  REQUIRE(split_edge(mesh, diag, metric, opts) == MutationResult::Applied);
  const PointId vm = mesh.points(Stratum::Vertex).back();  // the added vertex
  for (PointId end : {PointId(0), PointId(2)}) {
    const PointId child = mesh.find_edge(end, vm);
    REQUIRE(child != kNoPoint);
    const double len =
        metric_edge_length(metric.at_vertex(mesh, end), metric.at_vertex(mesh, vm),
                           mesh.coord(vm) - mesh.coord(end));
    CHECK(len == Approx(0.5 * parent_len).epsilon(1e-12));
  }
}

TEST_CASE("collapse is rejected on the two-triangle square") {
  Mesh mesh = two_triangle_square();
  TensorField metric(mesh, SymTensor2::identity());
  AdaptOptions opts;
  const MeshSignature before = signature(mesh);
  for (PointId e : mesh.points(Stratum::Edge)) {
    CHECK(collapse_edge(mesh, e, metric, opts) != MutationResult::Applied);
  }
  CHECK(signature(mesh) == before);
}

TEST_CASE("collapse an interior grid edge") {
  Mesh mesh = build_unit_square(4);
  TensorField metric(mesh, SymTensor2::identity());
  AdaptOptions opts;
  opts.q_min_accept = 0.0;
  const PointId e = mesh.find_edge(6, 7);  // two interior vertices
  REQUIRE(e != kNoPoint);
  REQUIRE(mesh.tag(6) == kTagInterior);
  REQUIRE(mesh.tag(7) == kTagInterior);
  REQUIRE(collapse_edge(mesh, e, metric, opts) == MutationResult::Applied);
  CHECK(mesh.num_vertices() == 24);
  CHECK(mesh.num_edges() == 53);
  CHECK(mesh.num_cells() == 30);
  CHECK(mesh.validate().ok());
}

TEST_CASE("collapse that would invert a cell is rejected unchanged") {
  // vertex 3 dents the star of vertex 0 so the ring is not star-shaped as
  // seen from vertex 1: retriangulating onto 1 folds cell (0, 3, 2)
  Mesh mesh = build_from_cells(
      {{0, 1, 3}, {0, 3, 2}, {0, 2, 4}, {0, 4, 5}, {0, 5, 1}},
      {{0.2, 0}, {1, 0}, {0, 1}, {0.3, 0.2}, {-1, 0}, {0, -1}});
  REQUIRE(mesh.validate().ok());
  TensorField metric(mesh, SymTensor2::identity());
  AdaptOptions opts;
  opts.q_min_accept = 0.0;
  opts.l_split = 1e9;  // disable the long-edge gate, isolate inversion
  const PointId e = mesh.find_edge(0, 1);
  REQUIRE(e != kNoPoint);
  const MeshSignature before = signature(mesh);
  const MutationResult res = collapse_edge(mesh, e, metric, opts);
  CHECK(res == MutationResult::RejectedGeometry);
  CHECK(signature(mesh) == before);
  CHECK(mesh.validate().ok());
}

TEST_CASE("boundary collapse keeps the boundary chain tagged") {
  Mesh mesh = build_unit_square(4);
  TensorField metric(mesh, SymTensor2::identity());
  AdaptOptions opts;
  opts.q_min_accept = 0.0;
  // vertices 1 and 2 are non-corner points of the bottom side
  const PointId e = mesh.find_edge(1, 2);
  REQUIRE(e != kNoPoint);
  REQUIRE(mesh.tag(e) != kTagInterior);
  REQUIRE(collapse_edge(mesh, e, metric, opts) == MutationResult::Applied);
  CHECK(mesh.validate().ok());
  CHECK(mesh.num_vertices() == 24);
}

TEST_CASE("swap") {
  SUBCASE("equal quality under the metric, no flip") {
    Mesh mesh = two_triangle_square();
    TensorField metric(mesh, SymTensor2::diag(1.0, 100.0));
    const PointId diag = mesh.find_edge(0, 2);
    CHECK(swap_edge(mesh, diag, metric) == MutationResult::RejectedQuality);
  }

  SUBCASE("improving flip applies and preserves counts") {
    Mesh mesh = build_from_cells({{0, 1, 2}, {1, 0, 3}},
                                 {{0, 0}, {2, 0}, {1, 0.8}, {1, -0.8}});
    TensorField metric(mesh, SymTensor2::identity());
    const PointId e = mesh.find_edge(0, 1);
    const int v = mesh.num_vertices(), ed = mesh.num_edges(), c = mesh.num_cells();
    REQUIRE(swap_edge(mesh, e, metric) == MutationResult::Applied);
    CHECK(mesh.num_vertices() == v);
    CHECK(mesh.num_edges() == ed);
    CHECK(mesh.num_cells() == c);
    CHECK(mesh.validate().ok());
    CHECK(mesh.find_edge(2, 3) != kNoPoint);

    // idempotence: the new diagonal is already optimal
    const PointId flipped = mesh.find_edge(2, 3);
    CHECK(swap_edge(mesh, flipped, metric) == MutationResult::RejectedQuality);
  }

  SUBCASE("non-convex quad is rejected") {
    Mesh mesh = build_from_cells({{0, 1, 2}, {1, 0, 3}},
                                 {{0, 0}, {1, 0}, {0.5, 1}, {-0.5, -0.2}});
    TensorField metric(mesh, SymTensor2::identity());
    const PointId e = mesh.find_edge(0, 1);
    CHECK(swap_edge(mesh, e, metric) == MutationResult::RejectedGeometry);
  }

  SUBCASE("boundary edge is a contract violation") {
    Mesh mesh = two_triangle_square();
    TensorField metric(mesh, SymTensor2::identity());
    CHECK_THROWS_AS(swap_edge(mesh, mesh.find_edge(0, 1), metric),
                    std::invalid_argument);
  }
}

TEST_CASE("smooth: fixed point stays put") {
  Mesh mesh = build_unit_square(4);
  TensorField metric(mesh, SymTensor2::identity());
  const PointId v = 12;  // lattice center
  REQUIRE(mesh.tag(v) == kTagInterior);
  const Vec2 before = mesh.coord(v);
  smooth_vertex(mesh, v, metric);
  CHECK(norm(mesh.coord(v) - before) <= 1e-12);
}

TEST_CASE("smooth: perturbed vertex moves back without losing quality") {
  Mesh mesh = build_unit_square(4);
  TensorField metric(mesh, SymTensor2::identity());
  const PointId v = 12;
  const Vec2 home = mesh.coord(v);
  mesh.set_coord(v, home + Vec2{0.05, 0.04});  // 0.2 h perturbation
  double worst_before = 1.0;
  for (PointId c : mesh.points(Stratum::Cell)) {
    worst_before = std::min(worst_before, quality(mesh, c, metric));
  }
  REQUIRE(smooth_vertex(mesh, v, metric) == MutationResult::Applied);
  CHECK(norm(mesh.coord(v) - home) < 0.05);
  double worst_after = 1.0;
  for (PointId c : mesh.points(Stratum::Cell)) {
    worst_after = std::min(worst_after, quality(mesh, c, metric));
  }
  CHECK(worst_after >= worst_before);
}

TEST_CASE("smooth: a move that would fold the star is rejected") {
  Mesh mesh = build_unit_square(2);
  TensorField metric(mesh, SymTensor2::identity());
  // huge weight at one corner drags the center toward it hard enough to
  // fold the opposite cells
  metric.at_vertex(mesh, 8) = SymTensor2::diag(1e12, 1e12);
  const PointId center = 4;
  REQUIRE(mesh.tag(center) == kTagInterior);
  const Vec2 before = mesh.coord(center);
  const MutationResult res = smooth_vertex(mesh, center, metric);
  CHECK(res == MutationResult::RejectedQuality);
  CHECK(mesh.coord(center) == before);
}

TEST_CASE("corner vertices are pinned") {
  Mesh mesh = build_unit_square(2);
  TensorField metric(mesh, SymTensor2::identity());
  CHECK(smooth_vertex(mesh, 0, metric) == MutationResult::RejectedTopology);
  CHECK(mesh.coord(0) == Vec2{0.0, 0.0});
}

TEST_CASE("split then collapse returns to the original point counts") {
  Mesh mesh = two_triangle_square();
  TensorField metric(mesh, SymTensor2::identity());
  AdaptOptions opts;
  opts.q_min_accept = 0.0;
  const PointId diag = mesh.find_edge(0, 2);
  REQUIRE(split_edge(mesh, diag, metric, opts) == MutationResult::Applied);
  // collapse one child edge: the new midpoint is interior, corner 0 survives
  const PointId vm = mesh.points(Stratum::Vertex).back();
  const PointId child = mesh.find_edge(0, vm);
  REQUIRE(child != kNoPoint);
  REQUIRE(collapse_edge(mesh, child, metric, opts) == MutationResult::Applied);
  CHECK(mesh.num_vertices() == 4);
  CHECK(mesh.num_edges() == 5);
  CHECK(mesh.num_cells() == 2);
  CHECK(mesh.validate().ok());
}

TEST_CASE("adapt to a uniform metric hits the complexity budget") {
  Mesh mesh = build_unit_square(4);
  const double h = 0.1;  // complexity 100, expected ~115 vertices
  TensorField metric(mesh, SymTensor2::diag(1.0 / (h * h), 1.0 / (h * h)));
  AdaptOptions opts;
  opts.validate_each_sweep = true;
  const AdaptResult res = adapt::adapt(mesh, metric, opts);
  CHECK(res.mesh.validate().ok());
  const double expected = (1.0 / (h * h)) * 2.0 / std::sqrt(3.0);
  CHECK(res.mesh.num_vertices() >= 0.7 * expected);
  CHECK(res.mesh.num_vertices() <= 1.3 * expected);

  const auto lengths = edge_metric_lengths(res.mesh, res.metric);
  const long in_band = std::count_if(lengths.begin(), lengths.end(), [](double l) {
    return l >= 1.0 / std::sqrt(2.0) && l <= std::sqrt(2.0);
  });
  CHECK(static_cast<double>(in_band) / lengths.size() >= 0.9);
  const long in_wide = std::count_if(lengths.begin(), lengths.end(), [](double l) {
    return l >= 0.4 && l <= 2.5;
  });
  CHECK(static_cast<double>(in_wide) / lengths.size() >= 0.99);

  // the carried metric is the input metric sampled at the new vertices
  for (const SymTensor2& m : res.metric.values()) {
    CHECK(m.a11 == Approx(1.0 / (h * h)));
    CHECK(m.a22 == Approx(1.0 / (h * h)));
  }
}

TEST_CASE("adapt on an already-unit mesh is near-idempotent") {
  Mesh start = build_unit_square(4);
  const double h = 0.08;
  TensorField metric(start, SymTensor2::diag(1.0 / (h * h), 1.0 / (h * h)));
  AdaptOptions opts;
  const AdaptResult first = adapt::adapt(start, metric, opts);

  const AdaptResult second = adapt::adapt(first.mesh, first.metric, opts);
  const int mutations = second.splits + second.collapses + second.swaps;
  CHECK(mutations <= 0.05 * first.mesh.num_edges());
}

TEST_CASE("adapt rejects a non-SPD metric") {
  Mesh mesh = build_unit_square(2);
  TensorField bad(mesh, SymTensor2::diag(-1.0, 1.0));
  AdaptOptions opts;
  CHECK_THROWS_AS(adapt::adapt(mesh, bad, opts), std::invalid_argument);
}

TEST_CASE("randomized operation fuzz keeps the mesh valid") {
  std::mt19937 rng(1234);
  Mesh mesh = build_unit_square(5);
  TensorField metric(mesh);
  auto randomize_metric = [&]() {
    std::uniform_real_distribution<double> logh(std::log(0.05), std::log(0.6));
    for (auto& m : metric.values()) {
      const double hx = std::exp(logh(rng)), hy = std::exp(logh(rng));
      const double c = std::cos(logh(rng)), s = std::sin(logh(rng));
      const SymTensor2 d = SymTensor2::diag(1.0 / (hx * hx), 1.0 / (hy * hy));
      m = {c * c * d.a11 + s * s * d.a22, c * s * (d.a11 - d.a22),
           s * s * d.a11 + c * c * d.a22};
    }
  };
  randomize_metric();

  AdaptOptions opts;
  opts.q_min_accept = 0.05;
  int applied = 0;
  for (int op = 0; op < 2000; ++op) {
    const auto edges = mesh.points(Stratum::Edge);
    const auto verts = mesh.points(Stratum::Vertex);
    std::uniform_int_distribution<int> which(0, 3);
    std::uniform_int_distribution<size_t> pick_e(0, edges.size() - 1);
    std::uniform_int_distribution<size_t> pick_v(0, verts.size() - 1);
    MutationResult res = MutationResult::RejectedTopology;
    switch (which(rng)) {
      case 0:
        res = split_edge(mesh, edges[pick_e(rng)], metric, opts);
        break;
      case 1:
        res = collapse_edge(mesh, edges[pick_e(rng)], metric, opts);
        break;
      case 2: {
        const PointId e = edges[pick_e(rng)];
        if (mesh.tag(e) == kTagInterior && mesh.support(e).size() == 2) {
          res = swap_edge(mesh, e, metric);
        }
        break;
      }
      case 3:
        res = smooth_vertex(mesh, verts[pick_v(rng)], metric);
        break;
    }
    applied += res == MutationResult::Applied ? 1 : 0;
    if (op % 200 == 0) {
      const auto rep = mesh.validate();
      REQUIRE_MESSAGE(rep.ok(), (rep.violations.empty() ? std::string() : rep.violations.front()));
    }
    if (op % 500 == 499) {
      mesh = mesh.compact();
      metric = TensorField(mesh, SymTensor2::identity());
      randomize_metric();
    }
  }
  CHECK(applied > 200);
  CHECK(mesh.validate().ok());
}

}  // TEST_SUITE
