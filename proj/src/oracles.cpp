#include "dlpad/oracles.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dlpad {
namespace {

void check_ed_size(int L, int cap) {
  require_even_size(L);
  if (L > cap)
    throw std::out_of_range("exact diagonalization limited to L <= " + std::to_string(cap) + ", got " +
                            std::to_string(L));
}

bool in_sector(std::uint32_t cfg, std::optional<Sector> sector) {
  if (!sector) return true;
  const bool odd = std::popcount(cfg) % 2 != 0;
  return odd == (*sector == Sector::odd);
}

DenseSpectrumProblem assemble(const ModelParams& p, double s, int L, std::optional<Sector> sector,
                              const HamiltonianOptions& opts) {
  const std::uint32_t dim_full = 1u << L;
  DenseSpectrumProblem prob;
  prob.L = L;
  prob.s = s;
  prob.sector = sector;
  std::vector<int> index(dim_full, -1);
  for (std::uint32_t cfg = 0; cfg < dim_full; ++cfg) {
    if (!in_sector(cfg, sector)) continue;
    index[cfg] = static_cast<int>(prob.basis.size());
    prob.basis.push_back(cfg);
  }
  const auto dim = static_cast<Eigen::Index>(prob.basis.size());
  prob.matrix = Eigen::MatrixXd::Zero(dim, dim);

  const double w = p.w();
  const double mu = p.mu();
  const double ws = w * std::exp(s);
  const double hop = ws + mu;
  const double pair = std::sqrt(mu * (2.0 * ws + mu));
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint32_t cfg = prob.basis[col];
    for (int k = 0; k < L; ++k) {
      const int k1 = (k + 1) % L;
      const int occ = static_cast<int>((cfg >> k) & 1u) + static_cast<int>((cfg >> k1) & 1u);
      prob.matrix(col, col) += mu + w * occ;
      const std::uint32_t target = cfg ^ ((1u << k) | (1u << k1));
      const int row = index[target];
      prob.matrix(row, col) -= occ == 1 ? hop : pair;
    }
  }
  if (dim > 0) prob.matrix(0, 0) += opts.perturbation;
  return prob;
}

template <class Real>
Real cgf_sum(const Real& w, const Real& mu, const Real& s, int L, Sector sector) {
  CompensatedSum<Real> acc;
  for (int r = 0; r < L / 2; ++r) acc += detail::dispersion_impl<Real>(w, mu, s, L, r, sector);
  return Real(-(w + mu)) + Real(2) * acc.value() / Real(L);
}

template <class F>
DerivativeEstimate fd_checked(F&& f, double s0, int n, double tol, const char* what) {
  if (n < 1 || n > kMaxFdOrder)
    throw std::out_of_range(std::string(what) + ": order must be in [1, " + std::to_string(kMaxFdOrder) + "]");
  // Five Richardson levels leave an O(h^10) truncation error, so the step
  // balances eps / h^n against h^10 rather than h^2.
  constexpr int levels = 5;
  const Real50 h = optimal_fd_step<Real50>(n + 2 * levels - 2, Real50(1));
  const DerivativeEstimate est = richardson_derivative<Real50>(f, Real50(s0), n, h, levels);
  if (!(est.error <= tol))
    throw std::runtime_error(std::string(what) + ": error estimate " + std::to_string(est.error) +
                             " exceeds tolerance " + std::to_string(tol));
  return est;
}

}  // namespace

DenseSpectrumProblem build_hamiltonian(const ModelParams& p, double s, int L, const HamiltonianOptions& opts) {
  check_ed_size(L, kMaxFullEdSize);
  return assemble(p, s, L, std::nullopt, opts);
}

DenseSpectrumProblem build_hamiltonian(const ModelParams& p, double s, int L, Sector sector,
                                       const HamiltonianOptions& opts) {
  check_ed_size(L, kMaxSectorEdSize);
  return assemble(p, s, L, sector, opts);
}

Eigen::MatrixXd tilted_generator(const ModelParams& p, double s, int L) {
  check_ed_size(L, kMaxFullEdSize);
  const auto dim = static_cast<Eigen::Index>(1u << L);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  const double es = std::exp(s);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto cfg = static_cast<std::uint32_t>(col);
    for (int k = 0; k < L; ++k) {
      const int k1 = (k + 1) % L;
      const int occ = static_cast<int>((cfg >> k) & 1u) + static_cast<int>((cfg >> k1) & 1u);
      const double silent = p.mu();
      const double jump = p.w() * occ;
      g(col, col) += silent + jump;
      const auto target = static_cast<Eigen::Index>(cfg ^ ((1u << k) | (1u << k1)));
      g(target, col) -= silent + jump * es;
    }
  }
  return g;
}

Eigen::MatrixXd parity_operator(int L) {
  check_ed_size(L, kMaxFullEdSize);
  const auto dim = static_cast<Eigen::Index>(1u << L);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    out(i, i) = std::popcount(static_cast<std::uint32_t>(i)) % 2 == 0 ? 1.0 : -1.0;
  return out;
}

std::vector<double> eigenvalues(const DenseSpectrumProblem& problem) {
  if (problem.matrix.rows() == 0) throw std::runtime_error("eigenvalues: empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(problem.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues: symmetric eigensolver did not converge (L = " +
                             std::to_string(problem.L) + ")");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double lowest_eigenvalue(const DenseSpectrumProblem& problem) { return eigenvalues(problem).front(); }

double cgf_from_ed(const ModelParams& p, double s, int L, Sector sector, const HamiltonianOptions& opts) {
  return -lowest_eigenvalue(build_hamiltonian(p, s, L, sector, opts)) / L;
}

Real50 cgf_extended(const ModelParams& p, const Real50& s, int L, Sector sector) {
  require_even_size(L);
  return cgf_sum<Real50>(Real50(p.w()), Real50(p.mu()), s, L, sector);
}

DerivativeEstimate fd_cumulant(const ModelParams& p, int L, double s0, int n, Sector sector, double tol) {
  require_even_size(L);
  const Real50 w(p.w());
  const Real50 mu(p.mu());
  auto f = [&](const Real50& s) { return cgf_sum<Real50>(w, mu, s, L, sector); };
  return fd_checked(f, s0, n, tol, "fd_cumulant");
}

DerivativeEstimate fd_mode_derivative(const ModelParams& p, int L, int r, double s0, int n, Sector sector,
                                      double tol) {
  require_even_size(L);
  detail::check_mode_index(L, r);
  const Real50 w(p.w());
  const Real50 mu(p.mu());
  auto f = [&](const Real50& s) { return detail::dispersion_impl<Real50>(w, mu, s, L, r, sector); };
  return fd_checked(f, s0, n, tol, "fd_mode_derivative");
}

}  // namespace dlpad
