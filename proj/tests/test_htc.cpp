#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "shtc/htc.hpp"

using namespace shtc;

namespace {

const SystemKind kAll[] = {SystemKind::Acoustics, SystemKind::Maxwell, SystemKind::MaxwellGLM};
const std::array<double, 2> kX{1.0, 0.0};
const std::array<double, 2> kY{0.0, 1.0};

CollocatedState random_field(const SystemModel& sys, const StaggeredMesh& mesh, std::mt19937_64& rng) {
  CollocatedState s = make_collocated_state(sys, mesh);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto q = oracle::random_state(sys.kind(), rng);
    std::copy(q.begin(), q.end(), s.q.begin() + static_cast<std::ptrdiff_t>(c) * sys.dim());
  }
  return s;
}

// Residual of the discrete compatibility condition written out directly.
double compatibility(const SystemModel& sys, const StateVector& ql, const StateVector& qr, int d,
                     const StateVector& f, double& scale) {
  const DualVector pl = sys.dual(ql), pr = sys.dual(qr);
  const StateVector fl = sys.flux(ql, d), fr = sys.flux(qr, d);
  const double Fl = sys.energy_flux(ql, d), Fr = sys.energy_flux(qr, d);
  double r = -(Fr - Fl);
  scale = std::abs(Fl) + std::abs(Fr);
  for (int i = 0; i < sys.dim(); ++i) {
    r += pl[i] * (f[i] - fl[i]) + pr[i] * (fr[i] - f[i]);
    scale += std::abs(pl[i]) * (std::abs(f[i]) + std::abs(fl[i])) + std::abs(pr[i]) * (std::abs(f[i]) + std::abs(fr[i]));
  }
  return r;
}

}  // namespace

TEST_CASE("flux is consistent for equal states") {
  std::mt19937_64 rng(41);
  for (SystemKind k : kAll) {
    const SystemModel sys(k);
    const StateVector q = oracle::to_state(oracle::random_state(k, rng));
    const StateVector fx = abgrall_flux(sys, q, q, kX);
    const StateVector fy = abgrall_flux(sys, q, q, kY);
    for (int i = 0; i < sys.dim(); ++i) {
      CHECK(fx[i] == sys.flux(q, 1)[i]);
      CHECK(fy[i] == sys.flux(q, 2)[i]);
    }
  }
}

TEST_CASE("flux satisfies the discrete compatibility condition") {
  std::mt19937_64 rng(43);
  for (SystemKind k : kAll) {
    const SystemModel sys(k);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t)
      for (int d = 1; d <= 2; ++d) {
        const StateVector ql = oracle::to_state(oracle::random_state(k, rng));
        const StateVector qr = oracle::to_state(oracle::random_state(k, rng));
        const StateVector f = abgrall_flux(sys, ql, qr, d == 1 ? kX : kY);
        double scale = 0.0;
        const double r = compatibility(sys, ql, qr, d, f, scale);
        worst = std::max(worst, std::abs(r) / scale);
        CHECK(std::abs(compatibility_residual(sys, ql, qr, d == 1 ? kX : kY, f) - r) <= 1e-14 * scale);
      }
    CHECK(worst <= 1e-13);
  }
}

TEST_CASE("flux is antisymmetric under exchange of states and normal") {
  std::mt19937_64 rng(47);
  for (SystemKind k : kAll) {
    const SystemModel sys(k);
    for (int t = 0; t < 100; ++t) {
      const StateVector ql = oracle::to_state(oracle::random_state(k, rng));
      const StateVector qr = oracle::to_state(oracle::random_state(k, rng));
      for (const auto& n : {kX, kY}) {
        const StateVector a = abgrall_flux(sys, ql, qr, n);
        const StateVector b = abgrall_flux(sys, qr, ql, {-n[0], -n[1]});
        CHECK((a + b).norm_inf() <= 1e-14 * std::max(1.0, a.norm_inf()));
      }
    }
  }
}

TEST_CASE("uniform states are steady") {
  const StaggeredMesh mesh(6, 5, 0.0, 1.0, 0.0, 1.0);
  std::mt19937_64 rng(53);
  for (SystemKind k : kAll) {
    const SystemModel sys(k);
    CollocatedState s = make_collocated_state(sys, mesh);
    const auto q = oracle::random_state(k, rng);
    for (int c = 0; c < mesh.num_cells(); ++c)
      std::copy(q.begin(), q.end(), s.q.begin() + static_cast<std::ptrdiff_t>(c) * sys.dim());
    for (double v : htc_rhs(sys, mesh, s)) CHECK(v == 0.0);
  }
}

TEST_CASE("semi-discrete operator conserves every component and the energy") {
  const StaggeredMesh mesh(9, 7, 0.0, 0.9, 0.0, 1.4);
  std::mt19937_64 rng(59);
  for (SystemKind k : kAll) {
    const SystemModel sys(k);
    for (int t = 0; t < 5; ++t) {
      const CollocatedState s = random_field(sys, mesh, rng);
      const auto dq = htc_rhs(sys, mesh, s);
      const int n = sys.dim();
      double energy_rate = 0.0, scale = 0.0;
      std::vector<double> sums(n, 0.0), sum_scale(n, 0.0);
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const DualVector p = sys.dual(s.at(sys, c));
        for (int i = 0; i < n; ++i) {
          const double v = dq[static_cast<std::size_t>(c) * n + i];
          energy_rate += mesh.cell_volume() * p[i] * v;
          scale += mesh.cell_volume() * std::abs(p[i] * v);
          sums[i] += mesh.cell_volume() * v;
          sum_scale[i] += mesh.cell_volume() * std::abs(v);
        }
      }
      CHECK(std::abs(energy_rate) <= 1e-12 * scale);
      for (int i = 0; i < n; ++i) CHECK(std::abs(sums[i]) <= 1e-13 * std::max(1.0, sum_scale[i]));
    }
  }
}

TEST_CASE("operator converges to minus the flux divergence") {
  // Smooth periodic acoustic data; the error at the finer mesh must drop by at
  // least the first-order factor.
  const SystemModel sys(SystemKind::Acoustics);
  const double two_pi = 2.0 * std::acos(-1.0);
  auto q_at = [&](double x, double y) {
    return StateVector{0.1 * std::sin(two_pi * x), 0.1 * std::cos(two_pi * y), 0.0,
                       2.0 + 0.2 * std::sin(two_pi * (x + y))};
  };
  auto error = [&](int n) {
    const StaggeredMesh mesh(n, n, 0.0, 1.0, 0.0, 1.0);
    CollocatedState s = make_collocated_state(sys, mesh);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const auto x = mesh.cell_center(i, j);
        const StateVector q = q_at(x[0], x[1]);
        for (int k = 0; k < 4; ++k) s.q[static_cast<std::size_t>(mesh.index(i, j)) * 4 + k] = q[k];
      }
    const auto dq = htc_rhs(sys, mesh, s);
    double err = 0.0;
    const double h = 1e-6;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const auto x = mesh.cell_center(i, j);
        const StateVector df1 = (1.0 / (2 * h)) * (sys.flux(q_at(x[0] + h, x[1]), 1) - sys.flux(q_at(x[0] - h, x[1]), 1));
        const StateVector df2 = (1.0 / (2 * h)) * (sys.flux(q_at(x[0], x[1] + h), 2) - sys.flux(q_at(x[0], x[1] - h), 2));
        for (int k = 0; k < 4; ++k)
          err = std::max(err, std::abs(dq[static_cast<std::size_t>(mesh.index(i, j)) * 4 + k] + df1[k] + df2[k]));
      }
    return err;
  };
  const double e1 = error(32);
  const double e2 = error(64);
  CHECK(e2 < e1 / 1.8);
}

TEST_CASE("tableaux") {
  for (int order = 1; order <= 4; ++order) {
    const ButcherTableau t = ButcherTableau::for_order(order);
    CHECK(t.order == order);
    CHECK_NOTHROW(t.validate());
  }
  CHECK_THROWS(ButcherTableau::for_order(7));

  const ButcherTableau rk4 = ButcherTableau::parse("4 4\n0 0 0 0\n0.5 0 0 0\n0 0.5 0 0\n0 0 1 0\n"
                                                   "0.16666666666666666 0.33333333333333333 0.33333333333333333 "
                                                   "0.16666666666666666\n0 0.5 0.5 1\n");
  CHECK(rk4.stages == 4);
  CHECK(rk4.coeff(3, 2) == 1.0);
  CHECK_THROWS(ButcherTableau::parse("2 2\n0 1\n0 0\n0.5 0.5\n0 1\n"));  // implicit entry
  CHECK_THROWS(ButcherTableau::parse("2 2\n0 0\n1 0\n0.5 0.6\n0 1\n"));  // weights
  CHECK_THROWS(ButcherTableau::parse("2 2\n0 0\n1 0\n"));                 // truncated

  const auto path = std::filesystem::temp_directory_path() / "shtc_heun_tableau.txt";
  {
    std::ofstream f(path);
    f << "2 2\n0 0\n1 0\n0.5 0.5\n0 1\n";
  }
  const ButcherTableau heun = ButcherTableau::load(path.string());
  CHECK(heun.b[1] == 0.5);
  std::filesystem::remove(path);
  CHECK_THROWS(ButcherTableau::load("/nonexistent/tableau.txt"));
}

TEST_CASE("rk step with zero time step leaves the state unchanged") {
  const StaggeredMesh mesh(5, 5, 0.0, 1.0, 0.0, 1.0);
  std::mt19937_64 rng(61);
  const SystemModel sys(SystemKind::MaxwellGLM);
  const CollocatedState s = random_field(sys, mesh, rng);
  const CollocatedState t = rk_step(sys, mesh, s, ButcherTableau::classic_rk4(), 0.0);
  CHECK(t.q == s.q);
}

TEST_CASE("RK4 on linear Maxwell matches the matrix exponential to fifth order") {
  // With eps = 0 the Abgrall correction vanishes and the semi-discrete scheme
  // is a linear skew-symmetric system dq/dt = A q. Its exact propagator comes
  // from the eigendecomposition of the Hermitian matrix iA.
  const SystemModel sys(SystemKind::Maxwell, EnergyParams{1.4, 0.0, 1.0});
  const StaggeredMesh mesh(8, 8, 0.0, 1.0, 0.0, 1.0);
  const int n = mesh.num_cells() * sys.dim();
  Eigen::MatrixXd a(n, n);
  CollocatedState unit = make_collocated_state(sys, mesh);
  for (int c = 0; c < n; ++c) {
    std::fill(unit.q.begin(), unit.q.end(), 0.0);
    unit.q[c] = 1.0;
    const auto col = htc_rhs(sys, mesh, unit);
    for (int r = 0; r < n; ++r) a(r, c) = col[r];
  }
  CHECK((a + a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());

  const Eigen::MatrixXcd ia = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ia);
  auto exact = [&](const Eigen::VectorXd& q0, double dt) {
    const Eigen::VectorXcd phase =
        (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -dt)).array().exp();
    const Eigen::VectorXcd y = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() *
                               q0.cast<std::complex<double>>();
    return Eigen::VectorXd(y.real());
  };

  std::mt19937_64 rng(67);
  const CollocatedState s = random_field(sys, mesh, rng);
  const Eigen::VectorXd q0 = Eigen::Map<const Eigen::VectorXd>(s.q.data(), n);
  const double dt0 = 0.2 * cfl_dt(sys, mesh, s, 1.0);
  std::vector<double> errs;
  for (double dt : {dt0, dt0 / 2, dt0 / 4}) {
    const CollocatedState t = rk_step(sys, mesh, s, ButcherTableau::classic_rk4(), dt);
    const Eigen::VectorXd q1 = Eigen::Map<const Eigen::VectorXd>(t.q.data(), n);
    errs.push_back((q1 - exact(q0, dt)).cwiseAbs().maxCoeff());
  }
  CHECK(errs[0] <= 1e-6);
  CHECK(errs[0] / errs[1] >= 24.0);
  CHECK(errs[1] / errs[2] >= 24.0);
}

TEST_CASE("cfl time step") {
  const SystemModel sys(SystemKind::Maxwell, EnergyParams{1.4, 0.0, 1.0});
  const StaggeredMesh mesh(10, 10, 0.0, 1.0, 0.0, 1.0);
  CollocatedState s = make_collocated_state(sys, mesh);
  for (std::size_t i = 0; i < s.q.size(); i += 6) s.q[i + 2] = 0.1;
  const double h = 0.1;
  // signal speed 2 on both axes: dt = 0.5 / (2 (1/h + 1/h)) = h / 8
  CHECK(cfl_dt(sys, mesh, s, 0.5) == doctest::Approx(h / 8.0).epsilon(1e-14));
  CHECK_THROWS(cfl_dt(sys, mesh, s, 0.0));
  CHECK_THROWS(cfl_dt(sys, mesh, s, 1.5));

  const StaggeredMesh fine(20, 20, 0.0, 1.0, 0.0, 1.0);
  CollocatedState sf = make_collocated_state(sys, fine);
  CHECK(cfl_dt(sys, fine, sf, 0.5) == doctest::Approx(0.5 * cfl_dt(sys, mesh, s, 0.5)).epsilon(1e-14));

  const SystemModel acoustics(SystemKind::Acoustics);
  CollocatedState a = make_collocated_state(acoustics, mesh);
  for (std::size_t i = 0; i < a.q.size(); i += 4) a.q[i + 3] = 1.0;
  CHECK(cfl_dt(acoustics, mesh, a, 1.0) == doctest::Approx(1.0 / 20.0));
}

TEST_CASE("loss of positivity aborts the step") {
  const SystemModel sys(SystemKind::Acoustics);
  const StaggeredMesh mesh(4, 4, 0.0, 1.0, 0.0, 1.0);
  CollocatedState s = make_collocated_state(sys, mesh);
  for (int c = 0; c < mesh.num_cells(); ++c) s.q[static_cast<std::size_t>(c) * 4 + 3] = c == 5 ? 0.01 : 1.0;
  s.q[5 * 4 + 0] = 5.0;  // strong outflow from a nearly empty cell
  CHECK_THROWS_AS(rk_step(sys, mesh, s, ButcherTableau::euler(), 0.5), AdmissibilityError);
}
