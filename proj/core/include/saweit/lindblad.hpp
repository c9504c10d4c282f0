#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "saweit/atom.hpp"

namespace saweit {

// Exact steady state of the driven ladder master equation, used to check the
// weak-probe formulas.
//
// Rotating frame, hbar = 1:
//   H = -Dp |1><1| - (Dp + Dc) |2><2| + (Wp/2)(|0><1| + h.c.) + (Wc/2)(|1><2| + h.c.)
// Jump operators: sqrt(decay10)|0><1|, sqrt(decay21)|1><2|,
//                 sqrt(2 dephasing1)|1><1|, sqrt(2 dephasing2)|2><2|.
// No |0><->|2> term (parity-forbidden).
//
// Superoperators act on column-stacked density matrices: vec(rho)[i + 3 j] =
// rho(i, j), so vec(A rho B) = (B^T kron A) vec(rho).

using DensityMatrix3 = Eigen::Matrix3cd;
using Liouvillian = Eigen::Matrix<std::complex<double>, 9, 9>;
using SuperVector = Eigen::Matrix<std::complex<double>, 9, 1>;

constexpr int vec_index(int row, int col) { return row + 3 * col; }

SuperVector vectorize(const DensityMatrix3& rho);
DensityMatrix3 unvectorize(const SuperVector& v);

struct LiouvillianSpec {
  double decay10 = 0.0;
  double decay21 = 0.0;
  double dephasing1 = 0.0;
  double dephasing2 = 0.0;
  DriveCondition drive;

  static LiouvillianSpec from(const ThreeLevelAtom& atom, const DriveCondition& drive);

  void validate() const;
  Eigen::Matrix3cd hamiltonian() const;
  std::vector<Eigen::Matrix3cd> jump_operators() const;
};

Liouvillian build_liouvillian(const LiouvillianSpec& spec);

/// Solves L rho = 0, Tr rho = 1 by replacing the first row with the trace
/// functional. Throws NoUniqueSteadyState when the kernel is degenerate.
DensityMatrix3 steady_state(const Liouvillian& generator);

/// rho(t) = exp(L t) rho(0).
DensityMatrix3 evolve(const Liouvillian& generator, const DensityMatrix3& initial, double time);

/// Reflection read out from the 0-1 coherence, r = i (Gamma10/Wp) <sigma_->.
/// With the Hamiltonian above the probe phase reference makes
/// <sigma_-> = -rho_10, which reproduces the weak-probe reflection formula.
std::complex<double> reflection_from_state(const DensityMatrix3& rho, double decay10,
                                           double probe_rabi);

struct OracleGridPoint {
  double probe_detuning = 0.0;
  double control_detuning = 0.0;
  double control_rabi = 0.0;
};

/// max over the grid of |r_oracle - r_analytic| / |r_analytic|.
double weak_probe_deviation(const ThreeLevelAtom& atom, std::span<const OracleGridPoint> grid,
                            double probe_rabi);

}  // namespace saweit
