#pragma once

#include "dlpad/model.hpp"
#include "dlpad/numeric.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace dlpad {

constexpr int kMaxFullEdSize = 12;
constexpr int kMaxSectorEdSize = 14;
constexpr int kMaxFdOrder = 8;

/// Real symmetric form of the tilted generator in the occupation basis (bit k
/// of a configuration is eta_k). Per bond: exit rate mu + w(eta_k + eta_{k+1})
/// on the diagonal, -J_s for a hop, -sqrt(mu (2 w e^s + mu)) for a pair
/// flip. A sector block keeps only configurations of one parity.
struct DenseSpectrumProblem {
  int L = 0;
  double s = 0;
  std::optional<Sector> sector;  // nullopt: full space
  std::vector<std::uint32_t> basis;
  Eigen::MatrixXd matrix;
};

struct HamiltonianOptions {
  /// Added to the first diagonal element. Only for negative controls.
  double perturbation = 0.0;
};

/// Full space, 2 <= L <= 12.
DenseSpectrumProblem build_hamiltonian(const ModelParams& p, double s, int L,
                                       const HamiltonianOptions& opts = {});

/// One parity block, 2 <= L <= 14.
DenseSpectrumProblem build_hamiltonian(const ModelParams& p, double s, int L, Sector sector,
                                       const HamiltonianOptions& opts = {});

/// -G_s straight from the rates (not symmetric): column = source
/// configuration, row = target. Diagonal holds the exit rates, off-diagonals
/// minus the tilted transition rates mu + w (eta_k + eta_{k+1}) e^s. 2 <= L <= 12.
Eigen::MatrixXd tilted_generator(const ModelParams& p, double s, int L);

/// Diagonal (-1)^N on the full space.
Eigen::MatrixXd parity_operator(int L);

/// Ascending eigenvalues. Throws std::runtime_error if the solver fails.
std::vector<double> eigenvalues(const DenseSpectrumProblem& problem);

double lowest_eigenvalue(const DenseSpectrumProblem& problem);

/// -E_min / L in the requested parity block.
double cgf_from_ed(const ModelParams& p, double s, int L, Sector sector,
                   const HamiltonianOptions& opts = {});

/// K_L(s) summed in 50-digit arithmetic; the function the FD oracles differentiate.
Real50 cgf_extended(const ModelParams& p, const Real50& s, int L, Sector sector);

/// d^n K_L/ds^n at s0 by Richardson-extrapolated central differences in
/// 50-digit arithmetic. Throws std::runtime_error when the error estimate
/// exceeds tol.
DerivativeEstimate fd_cumulant(const ModelParams& p, int L, double s0, int n, Sector sector,
                               double tol = 1e-12);

/// d^n Lambda_{L,r}/ds^n at s0, same method.
DerivativeEstimate fd_mode_derivative(const ModelParams& p, int L, int r, double s0, int n,
                                      Sector sector, double tol = 1e-12);

}  // namespace dlpad
