#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adapt/metric.hpp"
#include "adapt/pipeline.hpp"
#include "adapt/remesh.hpp"

using namespace adapt;
using doctest::Approx;

namespace {

namespace fs = std::filesystem;

std::string fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AdaptConfig tiny_benchmark(const std::string& out) {
  AdaptConfig c;
  c.n_ptfx = 3;
  c.n_adap = 3;
  c.N_st = 6e4;  // ~ 300 vertices per interval mesh
  c.t_end = 3.0;
  c.T_period = 6.0;
  c.dt = 0.05;
  c.initial_mesh = "structured:12";
  c.h_min = 0.01;
  c.h_max = 0.5;
  c.a_max = 50.0;
  c.out_dir = out;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("static problem composes the metric and remesher oracles") {
  // v = 0, u0 a quadratic bump: the metric reduces to the clamped static
  // Hessian term and the adapted mesh matches its complexity
  AdaptConfig config;
  config.n_ptfx = 1;
  config.n_adap = 1;
  config.remesh_final = true;  // otherwise a single iteration never remeshes
  config.N_st = 3e4;
  config.t_end = 0.5;
  config.T_period = 1e9;
  config.dt = 0.05;
  config.initial_mesh = "structured:16";
  // bounds tight enough that the first-order boundary recovery cannot
  // spike the metric far beyond the interior level
  config.h_min = 0.01;
  config.h_max = 1.0;
  config.a_max = 100.0;
  config.out_dir = fresh_dir("adapt_static_case");

  AdvectionProblem still;
  still.velocity = [](double, double, double) { return Vec2{0.0, 0.0}; };
  still.u0 = [](double x, double y) {
    return 1.0 - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5);
  };
  still.T_period = config.T_period;
  still.t_end = config.t_end;
  still.assert_noflow = false;

  const PipelineState state = fixed_point_adapt(config, still);
  REQUIRE(state.meshes.size() == 1);
  REQUIRE(state.mean_hessians.size() == 1);
  CHECK(state.adapt_calls == 1);

  // reconstruct the metric the pipeline must have used from the solved mesh
  const Mesh& solved = state.solved_meshes[0];
  MetricParams params;
  params.N_st = config.N_st;
  params.p = config.p;
  params.tau_integrals = state.tau_integrals;
  params.h_min = config.h_min;
  params.h_max = config.h_max;
  params.a_max = config.a_max;

  // the mean Hessian of the still flow is |D2 u0| = 2 I up to recovery error
  const TensorField& h = state.mean_hessians[0];
  int interior_checked = 0;
  for (PointId v : solved.points(Stratum::Vertex)) {
    if (solved.tag(v) != kTagInterior) continue;
    CHECK(h.at_vertex(solved, v).a11 == Approx(2.0).epsilon(1e-6));
    CHECK(h.at_vertex(solved, v).a22 == Approx(2.0).epsilon(1e-6));
    ++interior_checked;
  }
  CHECK(interior_checked > 0);

  std::vector<const Mesh*> meshes = {&solved};
  std::vector<const TensorField*> hs = {&h};
  const auto metrics = lp_metric(meshes, hs, params);
  const double c_metric = complexity(solved, metrics[0]);
  const double expected_vertices = c_metric * 2.0 / std::sqrt(3.0);
  CHECK(state.meshes[0].num_vertices() >= 0.7 * expected_vertices);
  CHECK(state.meshes[0].num_vertices() <= 1.3 * expected_vertices);
}

TEST_CASE("bookkeeping counters and state shape") {
  AdaptConfig config = tiny_benchmark(fresh_dir("adapt_tiny_count"));
  const PipelineState state = fixed_point_adapt(config);

  CHECK(state.solve_sweeps == config.n_ptfx);
  CHECK(state.adapt_calls == config.n_adap * (config.n_ptfx - 1));
  CHECK(state.meshes.size() == static_cast<size_t>(config.n_adap));
  CHECK(state.mean_hessians.size() == static_cast<size_t>(config.n_adap));
  CHECK(state.iterations.size() == static_cast<size_t>(config.n_ptfx));
  for (const IterationDiag& it : state.iterations) {
    CHECK(it.intervals.size() == static_cast<size_t>(config.n_adap));
  }

  // one snapshot per (iteration, interval)
  int vtk_files = 0;
  for (const auto& entry : fs::directory_iterator(config.out_dir)) {
    vtk_files += entry.path().extension() == ".vtk" ? 1 : 0;
  }
  CHECK(vtk_files == config.n_ptfx * config.n_adap);

  // every interval advanced the expected step count: 1.0 / 0.05 = 20
  for (double s : state.tau_integrals) CHECK(s == Approx(20.0));

  // the return error is recorded per iteration (t_end = T/2) and improves
  // or holds as the meshes adapt
  for (const IterationDiag& it : state.iterations) {
    CHECK(it.l2_return_error >= 0.0);
  }

  // the mean Hessian of interval i is bound to the mesh interval i was
  // solved on, which is the current mesh when the final sweep skips remeshing
  for (int i = 0; i < config.n_adap; ++i) {
    CHECK(state.mean_hessians[i].bound_to(state.solved_meshes[i]));
    CHECK(state.end_solutions[i].bound_to(state.solved_meshes[i]));
    CHECK(state.mean_hessians[i].bound_to(state.meshes[i]));
  }
}

TEST_CASE("remesh_final adds one extra round of adapt calls") {
  AdaptConfig config = tiny_benchmark(fresh_dir("adapt_tiny_final"));
  config.n_ptfx = 2;
  config.remesh_final = true;
  const PipelineState state = fixed_point_adapt(config);
  CHECK(state.adapt_calls == config.n_adap * config.n_ptfx);
}

TEST_CASE("single-sweep run never remeshes") {
  AdaptConfig config = tiny_benchmark(fresh_dir("adapt_tiny_solve"));
  config.n_ptfx = 1;
  const PipelineState state = fixed_point_adapt(config);
  CHECK(state.adapt_calls == 0);
  CHECK(state.solve_sweeps == 1);
  const Mesh initial = build_initial_mesh(config);
  for (const Mesh& m : state.meshes) {
    CHECK(m.num_vertices() == initial.num_vertices());
  }
}

TEST_CASE("two runs of the same config are byte-identical") {
  AdaptConfig config = tiny_benchmark(fresh_dir("adapt_det_a"));
  config.n_ptfx = 2;
  const PipelineState a = fixed_point_adapt(config);

  AdaptConfig config2 = tiny_benchmark(fresh_dir("adapt_det_b"));
  config2.n_ptfx = 2;
  const PipelineState b = fixed_point_adapt(config2);

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(config.out_dir)) {
    const fs::path other = fs::path(config2.out_dir) / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path().string()) == slurp(other.string()));
    ++compared;
  }
  CHECK(compared == 6);
  CHECK(a.iterations.back().l2_return_error ==
        b.iterations.back().l2_return_error);
}

TEST_CASE("initial mesh spec") {
  AdaptConfig config;
  config.initial_mesh = "structured:5";
  const Mesh mesh = build_initial_mesh(config);
  CHECK(mesh.num_vertices() == 36);
  CHECK(mesh.num_cells() == 50);

  config.initial_mesh = "no_such_file.msh";
  CHECK_THROWS(build_initial_mesh(config));
}

}  // TEST_SUITE
