#include <doctest.h>

#include <cmath>
#include <random>

#include "adapt/field.hpp"
#include "adapt/mesh.hpp"
#include "adapt/sym_tensor.hpp"

using namespace adapt;
using doctest::Approx;

namespace {

double frob_norm(const SymTensor2& s) {
  return std::sqrt(s.a11 * s.a11 + 2.0 * s.a12 * s.a12 + s.a22 * s.a22);
}

double reconstruction_error(const SymTensor2& s) {
  const EigenPair e = eig(s);
  const SymTensor2 r = from_eigen(e.lambda1, e.lambda2, e.v1, e.v2);
  return frob_norm(r - s);
}

}  // namespace

TEST_SUITE("tensor_field") {

TEST_CASE("eig on simple tensors") {
  {
    const EigenPair e = eig(SymTensor2::identity());
    CHECK(e.lambda1 == Approx(1.0));
    CHECK(e.lambda2 == Approx(1.0));
    CHECK(dot(e.v1, e.v2) == Approx(0.0).epsilon(1e-14));
  }
  {
    const EigenPair e = eig(SymTensor2::diag(4.0, 1.0));
    CHECK(e.lambda1 == Approx(4.0));
    CHECK(e.lambda2 == Approx(1.0));
    CHECK(std::abs(e.v1.x) == Approx(1.0));
    CHECK(std::abs(e.v2.y) == Approx(1.0));
  }
  {
    // [[2,1],[1,2]]: eigenvalues 3 and 1, principal axis (1,1)/sqrt(2)
    const EigenPair e = eig(SymTensor2{2.0, 1.0, 2.0});
    CHECK(e.lambda1 == Approx(3.0));
    CHECK(e.lambda2 == Approx(1.0));
    CHECK(std::abs(e.v1.x) == Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(e.v1.y) == Approx(1.0 / std::sqrt(2.0)));
    CHECK(e.v1.x * e.v1.y > 0.0);
    CHECK(reconstruction_error(SymTensor2{2.0, 1.0, 2.0}) <= 1e-12 * 4.0);
  }
}

TEST_CASE("eig reconstruction on random tensors") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const SymTensor2 s{dist(rng), dist(rng), dist(rng)};
    const EigenPair e = eig(s);
    CHECK(e.lambda1 >= e.lambda2);
    CHECK(std::abs(dot(e.v1, e.v2)) <= 1e-13);
    CHECK(norm(e.v1) == Approx(1.0).epsilon(1e-13));
    CHECK(reconstruction_error(s) <= 1e-12 * (1.0 + frob_norm(s)));
  }
}

TEST_CASE("abs_tensor") {
  {
    const SymTensor2 a = abs_tensor(SymTensor2::diag(2.0, -3.0));
    CHECK(a.a11 == Approx(2.0));
    CHECK(a.a22 == Approx(3.0));
    CHECK(a.a12 == Approx(0.0).epsilon(1e-14));
  }
  {
    // SPD input unchanged
    const SymTensor2 s{2.0, 0.5, 1.5};
    CHECK(frob_norm(abs_tensor(s) - s) <= 1e-12);
  }
  {
    // [[0,1],[1,0]] has eigenvalues +-1; |H| = I
    const SymTensor2 a = abs_tensor(SymTensor2{0.0, 1.0, 0.0});
    CHECK(frob_norm(a - SymTensor2::identity()) <= 1e-12);
  }
}

TEST_CASE("abs_tensor is idempotent") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const SymTensor2 s{dist(rng), dist(rng), dist(rng)};
    const SymTensor2 a = abs_tensor(s);
    CHECK(frob_norm(abs_tensor(a) - a) <= 1e-11 * (1.0 + frob_norm(s)));
    const EigenPair e = eig(a);
    CHECK(e.lambda2 >= -1e-12 * (1.0 + frob_norm(s)));  // PSD
  }
}

TEST_CASE("metric_edge_length") {
  const Vec2 ex{1.0, 0.0};
  CHECK(metric_edge_length(SymTensor2::identity(), SymTensor2::identity(), ex) ==
        Approx(1.0));
  CHECK(metric_edge_length(SymTensor2::diag(4.0, 1.0), SymTensor2::diag(4.0, 1.0), ex) ==
        Approx(2.0));
  // averaging formula: (I + 9I)/2 = 5I, length sqrt(5)
  CHECK(metric_edge_length(SymTensor2::identity(), SymTensor2::diag(9.0, 9.0), ex) ==
        Approx(std::sqrt(5.0)).epsilon(1e-9));

  // scales linearly with the Euclidean length
  const SymTensor2 m{3.0, 1.0, 2.0};
  const Vec2 e{0.3, -0.7};
  const double l1 = metric_edge_length(m, m, e);
  CHECK(metric_edge_length(m, m, e * 2.5) == Approx(2.5 * l1).epsilon(1e-13));
  CHECK(metric_edge_length(m, m, e) ==
        Approx(std::sqrt(dot(e, m.apply(e)))).epsilon(1e-14));

  CHECK_THROWS_AS(metric_edge_length(SymTensor2::diag(-1.0, 1.0),
                                     SymTensor2::identity(), ex),
                  std::invalid_argument);
}

TEST_CASE("evaluate: P1 semantics") {
  Mesh mesh = build_from_cells({{0, 1, 2}}, {{0, 0}, {1, 0}, {0, 1}});
  const PointId cell = mesh.points(Stratum::Cell)[0];

  ScalarField constant(mesh, 3.25);
  CHECK(evaluate(constant, mesh, cell, {0.2, 0.3}) == Approx(3.25));

  // u = x at (0.5, 0.25)
  ScalarField ux(mesh);
  for (PointId v : mesh.points(Stratum::Vertex)) {
    ux.at_vertex(mesh, v) = mesh.coord(v).x;
  }
  CHECK(evaluate(ux, mesh, cell, {0.5, 0.25}) == Approx(0.5));

  // vertex evaluation returns the stored value exactly
  ScalarField f(mesh);
  f.at_vertex(mesh, 0) = 11.0;
  f.at_vertex(mesh, 1) = -2.0;
  f.at_vertex(mesh, 2) = 0.5;
  CHECK(evaluate(f, mesh, cell, mesh.coord(1)) == -2.0);

  CHECK_THROWS_AS(evaluate(f, mesh, cell, {0.9, 0.9}), std::invalid_argument);
}

TEST_CASE("evaluate reproduces global linears at random interior points") {
  Mesh mesh = build_unit_square(5);
  ScalarField lin(mesh);
  for (PointId v : mesh.points(Stratum::Vertex)) {
    const Vec2 p = mesh.coord(v);
    lin.at_vertex(mesh, v) = 2.0 * p.x - 3.0 * p.y + 0.75;
  }
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const auto cells = mesh.points(Stratum::Cell);
  int tested = 0;
  for (int trial = 0; trial < 500 && tested < 200; ++trial) {
    const Vec2 x{dist(rng), dist(rng)};
    for (PointId c : cells) {
      const auto p = mesh.cell_coords(c);
      const auto b = barycentric(p[0], p[1], p[2], x);
      if (b[0] >= 0 && b[1] >= 0 && b[2] >= 0) {
        const double expected = 2.0 * x.x - 3.0 * x.y + 0.75;
        CHECK(evaluate(lin, mesh, c, x) == Approx(expected).epsilon(1e-12));
        ++tested;
        break;
      }
    }
  }
  CHECK(tested >= 200);
}

TEST_CASE("fields bind to a mesh generation") {
  Mesh mesh = build_unit_square(2);
  ScalarField f(mesh, 1.0);
  Mesh compacted = mesh.compact();
  CHECK_THROWS_AS(f.check_binding(compacted), std::logic_error);
  CHECK(f.bound_to(mesh));
  CHECK_FALSE(f.bound_to(compacted));
}

}  // TEST_SUITE
