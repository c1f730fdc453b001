#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "adapt/advect.hpp"
#include "adapt/config.hpp"
#include "adapt/io_msh.hpp"
#include "adapt/io_vtk.hpp"
#include "adapt/metric.hpp"
#include "adapt/pipeline.hpp"
#include "adapt/remesh.hpp"
#include "adapt/transfer.hpp"

namespace {

using namespace adapt;

void print_histogram(const std::vector<double>& values, double lo, double hi,
                     const char* label) {
  constexpr int kBins = 10;
  std::vector<int> bins(kBins, 0);
  int below = 0, above = 0;
  for (double v : values) {
    if (v < lo) {
      ++below;
    } else if (v >= hi) {
      ++above;
    } else {
      ++bins[static_cast<int>((v - lo) / (hi - lo) * kBins)];
    }
  }
  std::printf("%s histogram (%zu samples):\n", label, values.size());
  if (below > 0) std::printf("  < %-8.4g %d\n", lo, below);
  for (int b = 0; b < kBins; ++b) {
    std::printf("  [%.4g, %.4g) %d\n", lo + (hi - lo) * b / kBins,
                lo + (hi - lo) * (b + 1) / kBins, bins[b]);
  }
  if (above > 0) std::printf("  >= %-7.4g %d\n", hi, above);
}

int cmd_validate(const std::string& mesh_path) {
  Mesh mesh = read_msh(mesh_path);
  ValidationReport rep = mesh.validate();
  if (rep.ok()) {
    std::printf("OK: %d vertices, %d edges, %d cells\n", mesh.num_vertices(),
                mesh.num_edges(), mesh.num_cells());
    return 0;
  }
  for (const auto& v : rep.violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
  return 1;
}

int cmd_adapt(const std::string& mesh_path, const std::string& metric_path,
              const std::string& out_path, const AdaptConfig& config) {
  Mesh mesh = read_msh(mesh_path);
  TensorField metric = read_metric_file(metric_path, mesh);
  AdaptResult res = adapt::adapt(mesh, metric, config.adapt_options());
  write_msh(res.mesh, out_path);

  const auto lengths = edge_metric_lengths(res.mesh, res.metric);
  const double band_lo = 1.0 / std::sqrt(2.0), band_hi = std::sqrt(2.0);
  const long in_band = std::count_if(lengths.begin(), lengths.end(), [&](double l) {
    return l >= band_lo && l <= band_hi;
  });
  std::printf("adapted: %d -> %d vertices in %d sweeps "
              "(%d splits, %d collapses, %d swaps)\n",
              mesh.num_vertices(), res.mesh.num_vertices(), res.sweeps, res.splits,
              res.collapses, res.swaps);
  std::printf("unit-band edges: %.1f%%\n", 100.0 * in_band / lengths.size());
  return 0;
}

int cmd_diag(const std::string& mesh_path, const std::string& metric_path) {
  Mesh mesh = read_msh(mesh_path);
  std::printf("mesh: %d vertices, %d edges, %d cells\n", mesh.num_vertices(),
              mesh.num_edges(), mesh.num_cells());

  TensorField metric(mesh, SymTensor2::identity());
  if (!metric_path.empty()) {
    metric = read_metric_file(metric_path, mesh);
    std::printf("metric complexity: %.6g\n", complexity(mesh, metric));
  }
  print_histogram(edge_metric_lengths(mesh, metric), 0.0, 2.5,
                  metric_path.empty() ? "edge length (M = I)" : "metric edge length");
  print_histogram(cell_qualities(mesh, metric), 0.0, 1.0, "cell quality");
  return 0;
}

void print_run_table(const PipelineState& state) {
  std::printf("\n%-6s %-10s %-12s %-14s %-12s\n", "iter", "vertices", "avg/interval",
              "L2 return err", "mass drift");
  for (size_t j = 0; j < state.iterations.size(); ++j) {
    const IterationDiag& it = state.iterations[j];
    const double mass0 = it.intervals.front().mass_start;
    const double mass1 = it.intervals.back().mass_end;
    const double drift = mass0 != 0.0 ? (mass1 - mass0) / mass0 : 0.0;
    std::printf("%-6zu %-10ld %-12.1f %-14.6g %-12.3g\n", j + 1, it.total_vertices,
                static_cast<double>(it.total_vertices) / it.intervals.size(),
                it.l2_return_error, drift);
  }
  std::printf("\nper-interval vertex counts (final iteration):");
  for (const IntervalDiag& d : state.iterations.back().intervals) {
    std::printf(" %d", d.vertices);
  }
  std::printf("\nsolve sweeps: %d, adapt calls: %d, dt = %.6g\n", state.solve_sweeps,
              state.adapt_calls, state.dt);
}

int cmd_run(AdaptConfig config, bool fixed_mesh) {
  if (fixed_mesh) {
    config.n_ptfx = 1;
    config.remesh_final = false;
  }
  PipelineState state = fixed_point_adapt(config);
  print_run_table(state);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D anisotropic mesh adaptation driver"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path, out_dir, mesh_path, metric_path, out_mesh;
  bool verbose = false;
  app.add_option("--config", config_path, "configuration file (key = value lines)");
  app.add_option("--out", out_dir, "output directory override");
  app.add_flag("--verbose", verbose, "chatty progress on stderr");

  CLI::App* validate = app.add_subcommand("validate", "check mesh invariants");
  validate->add_option("mesh", mesh_path, "MSH 2.2 mesh file")->required();

  CLI::App* adapt_cmd = app.add_subcommand("adapt", "adapt a mesh to a metric");
  adapt_cmd->add_option("mesh", mesh_path, "MSH 2.2 mesh file")->required();
  adapt_cmd->add_option("--metric", metric_path, "vertex metric file")->required();
  adapt_cmd->add_option("--out-mesh", out_mesh, "adapted mesh output")->required();

  CLI::App* solve = app.add_subcommand("solve", "benchmark run on a fixed mesh");
  CLI::App* run = app.add_subcommand("run", "full fixed-point adaptive pipeline");

  CLI::App* diag = app.add_subcommand("diag", "mesh and metric diagnostics");
  diag->add_option("mesh", mesh_path, "MSH 2.2 mesh file")->required();
  diag->add_option("--metric", metric_path, "vertex metric file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    AdaptConfig config;
    if (!config_path.empty()) config = parse_config_file(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (verbose) config.verbose = true;

    if (validate->parsed()) return cmd_validate(mesh_path);
    if (adapt_cmd->parsed()) return cmd_adapt(mesh_path, metric_path, out_mesh, config);
    if (diag->parsed()) return cmd_diag(mesh_path, metric_path);
    if (solve->parsed()) {
      if (config_path.empty()) throw std::runtime_error("solve: --config is required");
      return cmd_run(config, true);
    }
    if (run->parsed()) {
      if (config_path.empty()) throw std::runtime_error("run: --config is required");
      return cmd_run(config, false);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
