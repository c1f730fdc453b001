#include "adapt/advect.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adapt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTauGuard = 1e-12;

// streamline cell diameter: longest vertex-pair separation along v
double streamline_diameter(const std::array<Vec2, 3>& p, const Vec2& vhat) {
  double h = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      h = std::max(h, std::abs(dot(p[a] - p[b], vhat)));
    }
  }
  return h;
}

void check_noflow(const Mesh& mesh, double t, const AdvectionProblem& problem) {
  for (PointId e : mesh.points(Stratum::Edge)) {
    if (mesh.support(e).size() != 1) continue;
    const auto ev = mesh.edge_vertices(e);
    const Vec2 a = mesh.coord(ev[0]);
    const Vec2 b = mesh.coord(ev[1]);
    const Vec2 d = b - a;
    const Vec2 n = Vec2{d.y, -d.x} / norm(d);
    for (double s : {0.0, 0.5, 1.0}) {
      const Vec2 x = a + d * s;
      const Vec2 v = problem.velocity(x.x, x.y, t);
      if (std::abs(dot(v, n)) > 1e-12) {
        throw std::runtime_error("step: velocity not tangential on the boundary");
      }
    }
  }
}

}  // namespace

Vec2 velocity_2d(double x, double y, double t, double T) {
  const double sx = std::sin(kPi * x);
  const double sy = std::sin(kPi * y);
  const double amp = std::cos(2.0 * kPi * t / T);
  return {-sx * sx * std::sin(2.0 * kPi * y) * amp,
          std::sin(2.0 * kPi * x) * sy * sy * amp};
}

double initial_bubble(double x, double y) {
  const double r = std::hypot(x - 0.5, y - 0.75);
  return 0.5 * (1.0 - std::tanh((r - 0.15) / 0.05));
}

AdvectionProblem vortex_bubble_problem(double T, double t_end) {
  AdvectionProblem p;
  p.T_period = T;
  p.t_end = t_end;
  p.velocity = [T](double x, double y, double t) { return velocity_2d(x, y, t, T); };
  p.u0 = initial_bubble;
  p.assert_noflow = true;
  return p;
}

ScalarField step(const Mesh& mesh, const ScalarField& u_n, double t_n,
                 const SolverOptions& opts, const AdvectionProblem& problem) {
  u_n.check_binding(mesh);
  const double dt = opts.dt;
  const double theta = opts.theta;
  if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
  if (theta < 0.0 || theta > 1.0) {
    throw std::invalid_argument("step: theta must lie in [0, 1]");
  }
  if (problem.assert_noflow) {
    check_noflow(mesh, t_n, problem);
    check_noflow(mesh, t_n + dt, problem);
  }

  const int n = mesh.num_vertex_slots();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.num_cells()) * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd uvec(n);
  for (int i = 0; i < n; ++i) uvec[i] = u_n[i];

  for (PointId c : mesh.points(Stratum::Cell)) {
    const auto v = mesh.cell_vertices(c);
    const auto p = mesh.cell_coords(c);
    double area;
    const auto grad = p1_gradients(p, area);
    if (area <= 0.0) throw std::invalid_argument("step: inverted cell");

    const Vec2 centroid = (p[0] + p[1] + p[2]) / 3.0;
    const Vec2 v_old = problem.velocity(centroid.x, centroid.y, t_n);
    const Vec2 v_new = problem.velocity(centroid.x, centroid.y, t_n + dt);
    const Vec2 v_mid = problem.velocity(centroid.x, centroid.y, t_n + 0.5 * dt);

    // SUPG test augmentation s_i = tau * v_mid.grad(phi_i), constant per cell
    std::array<double, 3> s = {0.0, 0.0, 0.0};
    const double vnorm = norm(v_mid);
    if (opts.supg && vnorm > 1e-14) {
      const double h = streamline_diameter(p, v_mid / vnorm);
      const double tau = h / (2.0 * vnorm + kTauGuard);
      for (int i = 0; i < 3; ++i) s[i] = tau * dot(v_mid, grad[i]);
    }

    std::array<int32_t, 3> slot;
    for (int i = 0; i < 3; ++i) slot[i] = mesh.vertex_slot(v[i]);

    for (int i = 0; i < 3; ++i) {
      // int (phi_i + s_i) phi_j dx
      std::array<double, 3> mass_row;
      for (int j = 0; j < 3; ++j) {
        mass_row[j] = area * ((i == j ? 1.0 / 6.0 : 1.0 / 12.0) + s[i] / 3.0);
      }
      // int (phi_i + s_i) v.grad(phi_j) dx with int phi_i dx = area/3
      const double w_i = area * (1.0 / 3.0 + s[i]);
      for (int j = 0; j < 3; ++j) {
        const double adv_new = w_i * dot(v_new, grad[j]);
        const double adv_old = w_i * dot(v_old, grad[j]);
        triplets.emplace_back(slot[i], slot[j], mass_row[j] / dt + theta * adv_new);
        rhs[slot[i]] += (mass_row[j] / dt - (1.0 - theta) * adv_old) * uvec[slot[j]];
      }
    }
  }

  Eigen::SparseMatrix<double> lhs(n, n);
  lhs.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(lhs);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("step: linear solve failed (factorization)");
  }
  Eigen::VectorXd sol = solver.solve(rhs);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("step: linear solve failed");
  }
  const double res = (lhs * sol - rhs).norm();
  const double ref = std::max(rhs.norm(), 1e-300);
  if (res > std::max(opts.lin_tol * ref, 1e-13)) {
    throw std::runtime_error("step: linear solve did not reach tolerance");
  }

  ScalarField u_next(mesh);
  for (int i = 0; i < n; ++i) u_next[i] = sol[i];
  return u_next;
}

std::pair<ScalarField, HessianAccumulator> run_subinterval(
    const Mesh& mesh, const ScalarField& u_start, double t_start, double t_end,
    const SolverOptions& opts, const AdvectionProblem& problem,
    const HessianSampler& sampler) {
  u_start.check_binding(mesh);
  if (t_end < t_start) throw std::invalid_argument("run_subinterval: t_end < t_start");

  HessianAccumulator acc(mesh);
  const double span = t_end - t_start;
  const int nsteps = static_cast<int>(std::ceil(span / opts.dt - 1e-9));
  if (nsteps == 0) {
    acc.accumulate(mesh, recover_hessian(mesh, u_start), 0.0);
    return {u_start, acc};
  }

  const int per = std::max(1, sampler.samples_per_interval);
  const int stride = (nsteps + per - 1) / per;

  ScalarField u = u_start;
  double t = t_start;
  double t_last_sample = t_start;
  for (int k = 1; k <= nsteps; ++k) {
    SolverOptions local = opts;
    local.dt = std::min(opts.dt, t_end - t);  // land exactly on t_end
    u = step(mesh, u, t, local, problem);
    t = (k == nsteps) ? t_end : t + local.dt;
    if (k % stride == 0 || k == nsteps) {
      acc.accumulate(mesh, recover_hessian(mesh, u), t - t_last_sample);
      t_last_sample = t;
    }
  }
  return {u, acc};
}

double mass(const Mesh& mesh, const ScalarField& u) {
  u.check_binding(mesh);
  double total = 0.0;
  for (PointId c : mesh.points(Stratum::Cell)) {
    const auto v = mesh.cell_vertices(c);
    const double avg = (u.at_vertex(mesh, v[0]) + u.at_vertex(mesh, v[1]) +
                        u.at_vertex(mesh, v[2])) / 3.0;
    total += mesh.cell_area(c) * avg;
  }
  return total;
}

double l2_norm(const Mesh& mesh, const ScalarField& u) {
  u.check_binding(mesh);
  double total = 0.0;
  for (PointId c : mesh.points(Stratum::Cell)) {
    const auto v = mesh.cell_vertices(c);
    const double u0 = u.at_vertex(mesh, v[0]);
    const double u1 = u.at_vertex(mesh, v[1]);
    const double u2 = u.at_vertex(mesh, v[2]);
    total += mesh.cell_area(c) *
             (u0 * u0 + u1 * u1 + u2 * u2 + u0 * u1 + u1 * u2 + u2 * u0) / 6.0;
  }
  return std::sqrt(total);
}

double l2_diff(const Mesh& mesh, const ScalarField& u, const ScalarField& v) {
  u.check_binding(mesh);
  v.check_binding(mesh);
  ScalarField d(mesh);
  for (size_t i = 0; i < d.size(); ++i) d[i] = u[i] - v[i];
  return l2_norm(mesh, d);
}

ScalarField sample_function(const Mesh& mesh,
                            const std::function<double(double, double)>& f) {
  ScalarField out(mesh);
  for (PointId v : mesh.points(Stratum::Vertex)) {
    const Vec2 x = mesh.coord(v);
    out.at_vertex(mesh, v) = f(x.x, x.y);
  }
  return out;
}

}  // namespace adapt
