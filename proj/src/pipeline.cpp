#include "adapt/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "adapt/io_msh.hpp"
#include "adapt/io_vtk.hpp"
#include "adapt/remesh.hpp"
#include "adapt/transfer.hpp"

namespace adapt {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int steps_for_span(double span, double dt) {
  return static_cast<int>(std::ceil(span / dt - 1e-9));
}

double max_speed(const AdvectionProblem& problem) {
  double vmax = 0.0;
  for (int j = 0; j <= 100; ++j) {
    for (int i = 0; i <= 100; ++i) {
      const Vec2 v = problem.velocity(i / 100.0, j / 100.0, 0.0);
      vmax = std::max(vmax, norm(v));
    }
  }
  return vmax;
}

std::string snapshot_path(const std::string& out_dir, int iter, int interval) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "iter%d_int%02d.vtk", iter + 1, interval + 1);
  return out_dir + "/" + buf;
}

}  // namespace

Mesh build_initial_mesh(const AdaptConfig& config) {
  const std::string& spec = config.initial_mesh;
  if (spec.rfind("structured:", 0) == 0) {
    const int n = std::stoi(spec.substr(11));
    return build_unit_square(n);
  }
  return read_msh(spec);
}

PipelineState fixed_point_adapt(const AdaptConfig& config) {
  return fixed_point_adapt(config, vortex_bubble_problem(config.T_period, config.t_end));
}

PipelineState fixed_point_adapt(const AdaptConfig& config,
                                const AdvectionProblem& problem) {
  if (config.n_ptfx < 1 || config.n_adap < 1) {
    throw std::invalid_argument("fixed_point_adapt: n_ptfx and n_adap must be >= 1");
  }
  if (config.t_end <= 0.0) {
    throw std::invalid_argument("fixed_point_adapt: t_end must be positive");
  }
  std::filesystem::create_directories(config.out_dir);

  SolverOptions solver_opts;
  solver_opts.theta = config.theta;
  solver_opts.supg = config.supg;
  solver_opts.lin_tol = config.lin_tol;
  solver_opts.dt = config.dt > 0.0 ? config.dt
                                   : config.cfl * config.h_min / max_speed(problem);

  MetricParams metric_params;
  metric_params.N_st = config.N_st;
  metric_params.p = config.p;
  metric_params.d = 2;
  metric_params.h_min = config.h_min;
  metric_params.h_max = config.h_max;
  metric_params.a_max = config.a_max;
  metric_params.eps_det = config.eps_det;

  const HessianSampler sampler{config.samples_per_interval};
  const AdaptOptions adapt_opts = config.adapt_options();

  PipelineState state;
  state.dt = solver_opts.dt;
  const Mesh initial = build_initial_mesh(config);
  state.meshes.assign(config.n_adap, initial);
  state.end_solutions.resize(config.n_adap);
  state.mean_hessians.resize(config.n_adap);
  state.tau_integrals.assign(config.n_adap, 0.0);

  const double interval_span = config.t_end / config.n_adap;

  for (int iter = 0; iter < config.n_ptfx; ++iter) {
    IterationDiag iter_diag;
    iter_diag.intervals.resize(config.n_adap);
    const auto sweep_start = std::chrono::steady_clock::now();

    // (1) advance the solution across all sub-intervals on the current meshes
    state.solve_sweeps += 1;
    for (int i = 0; i < config.n_adap; ++i) {
      IntervalDiag& diag = iter_diag.intervals[i];
      const auto t0 = std::chrono::steady_clock::now();
      const Mesh& mesh = state.meshes[i];
      const double t_start = i * interval_span;
      const double t_stop = (i + 1) * interval_span;

      // (a) initial data: analytic u0 on the first interval, interpolation
      // from the previous interval's mesh otherwise
      ScalarField u_start;
      if (i == 0) {
        u_start = sample_function(mesh, problem.u0);
        diag.transfer_mass_before = diag.transfer_mass_after = mass(mesh, u_start);
      } else {
        diag.transfer_mass_before = mass(state.meshes[i - 1], state.end_solutions[i - 1]);
        u_start = interpolate_field(state.end_solutions[i - 1], state.meshes[i - 1], mesh);
        diag.transfer_mass_after = mass(mesh, u_start);
      }
      diag.mass_start = mass(mesh, u_start);

      // (b) + (c) solve the sub-interval while accumulating Hessian samples
      auto [u_end, acc] = run_subinterval(mesh, u_start, t_start, t_stop, solver_opts,
                                          problem, sampler);
      state.end_solutions[i] = std::move(u_end);
      state.mean_hessians[i] = acc.finalize(mesh);
      state.tau_integrals[i] = steps_for_span(t_stop - t_start, solver_opts.dt);

      diag.steps = static_cast<int>(state.tau_integrals[i]);
      diag.vertices = mesh.num_vertices();
      diag.mass_end = mass(mesh, state.end_solutions[i]);
      diag.u_min = 1e300;
      diag.u_max = -1e300;
      for (double val : state.end_solutions[i].values()) {
        diag.u_min = std::min(diag.u_min, val);
        diag.u_max = std::max(diag.u_max, val);
      }
      diag.solve_seconds = seconds_since(t0);
      iter_diag.total_vertices += diag.vertices;

      if (config.output_cadence > 0 && (i % config.output_cadence) == 0) {
        VtkFields fields;
        fields.scalars.push_back({"u", &state.end_solutions[i]});
        write_vtk(mesh, fields, snapshot_path(config.out_dir, iter, i));
      }
      if (config.verbose) {
        std::fprintf(stderr, "[iter %d] interval %d: %d vertices, %d steps, mass %.6g\n",
                     iter + 1, i + 1, diag.vertices, diag.steps, diag.mass_end);
      }
    }
    iter_diag.solve_seconds = seconds_since(sweep_start);

    // return error at the reversal time
    if (std::abs(config.t_end - 0.5 * config.T_period) < 1e-12) {
      const Mesh& last = state.meshes[config.n_adap - 1];
      const ScalarField u0h = sample_function(last, problem.u0);
      iter_diag.l2_return_error = l2_diff(last, state.end_solutions[config.n_adap - 1], u0h);
    }

    // (2) global normalization and all sub-interval metrics, (3) remeshing.
    // Skipped on the final sweep unless configured otherwise, so the last
    // solve runs on the meshes it is judged on.
    const bool remesh = iter + 1 < config.n_ptfx || config.remesh_final;
    if (iter + 1 == config.n_ptfx) state.solved_meshes = state.meshes;
    if (remesh) {
      const auto adapt_start = std::chrono::steady_clock::now();
      metric_params.tau_integrals = state.tau_integrals;
      std::vector<const Mesh*> mesh_ptrs;
      std::vector<const TensorField*> hessian_ptrs;
      for (int i = 0; i < config.n_adap; ++i) {
        mesh_ptrs.push_back(&state.meshes[i]);
        hessian_ptrs.push_back(&state.mean_hessians[i]);
      }
      LpMetricDiag mdiag;
      std::vector<TensorField> metrics =
          lp_metric(mesh_ptrs, hessian_ptrs, metric_params, &mdiag);
      iter_diag.norm_sum = mdiag.norm_sum;
      iter_diag.global_factor = mdiag.global_factor;
      for (int i = 0; i < config.n_adap; ++i) {
        iter_diag.intervals[i].k_term = mdiag.k_terms[i];
      }

      for (int i = 0; i < config.n_adap; ++i) {
        AdaptResult res = adapt(state.meshes[i], metrics[i], adapt_opts);
        state.meshes[i] = std::move(res.mesh);
        state.adapt_calls += 1;
        if (config.verbose) {
          std::fprintf(stderr,
                       "[iter %d] adapt %d: %d vertices (%d splits, %d collapses, %d swaps)\n",
                       iter + 1, i + 1, state.meshes[i].num_vertices(), res.splits,
                       res.collapses, res.swaps);
        }
      }
      iter_diag.adapt_seconds = seconds_since(adapt_start);
    }

    state.iterations.push_back(std::move(iter_diag));
  }
  return state;
}

}  // namespace adapt
