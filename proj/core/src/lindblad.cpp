#include "saweit/lindblad.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "saweit/errors.hpp"
#include "saweit/scattering.hpp"

namespace saweit {
namespace {

using cd = std::complex<double>;
using Kron = Eigen::Matrix<cd, 9, 9>;

Kron kron(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b) {
  Kron out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  }
  return out;
}

Eigen::Matrix3cd ket_bra(int i, int j) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(i, j) = 1.0;
  return m;
}

}  // namespace

SuperVector vectorize(const DensityMatrix3& rho) {
  SuperVector v;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) v(vec_index(i, j)) = rho(i, j);
  }
  return v;
}

DensityMatrix3 unvectorize(const SuperVector& v) {
  DensityMatrix3 rho;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) rho(i, j) = v(vec_index(i, j));
  }
  return rho;
}

LiouvillianSpec LiouvillianSpec::from(const ThreeLevelAtom& atom, const DriveCondition& drive) {
  return {atom.decay10, atom.decay21, atom.dephasing1, atom.dephasing2, drive};
}

void LiouvillianSpec::validate() const {
  coherence_rates(decay10, decay21, dephasing1, dephasing2);
  drive.validate();
}

Eigen::Matrix3cd LiouvillianSpec::hamiltonian() const {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(1, 1) = -drive.probe_detuning;
  h(2, 2) = -(drive.probe_detuning + drive.control_detuning);
  h(0, 1) = h(1, 0) = drive.probe_rabi / 2.0;
  h(1, 2) = h(2, 1) = drive.control_rabi / 2.0;
  return h;
}

std::vector<Eigen::Matrix3cd> LiouvillianSpec::jump_operators() const {
  return {std::sqrt(decay10) * ket_bra(0, 1), std::sqrt(decay21) * ket_bra(1, 2),
          std::sqrt(2.0 * dephasing1) * ket_bra(1, 1),
          std::sqrt(2.0 * dephasing2) * ket_bra(2, 2)};
}

Liouvillian build_liouvillian(const LiouvillianSpec& spec) {
  spec.validate();
  const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
  const Eigen::Matrix3cd h = spec.hamiltonian();
  const cd i{0.0, 1.0};

  // -i [H, rho]
  Liouvillian gen = -i * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& c : spec.jump_operators()) {
    const Eigen::Matrix3cd cdc = c.adjoint() * c;
    gen += kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
  }
  return gen;
}

DensityMatrix3 steady_state(const Liouvillian& generator) {
  const double norm = generator.cwiseAbs().maxCoeff();
  if (norm == 0.0) throw NoUniqueSteadyState("steady_state: generator is the zero map");

  Liouvillian system = generator / norm;
  system.row(0).setZero();
  for (int k = 0; k < 3; ++k) system(0, vec_index(k, k)) = 1.0;
  SuperVector rhs = SuperVector::Zero();
  rhs(0) = 1.0;

  const Eigen::PartialPivLU<Liouvillian> lu(system);
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (pivots.minCoeff() <= 1e-13 * pivots.maxCoeff()) {
    throw NoUniqueSteadyState("steady_state: kernel of the generator is not one-dimensional");
  }
  const SuperVector v = lu.solve(rhs);

  const double residual = (generator * v).norm();
  if (!(residual <= 1e-10 * generator.norm())) {
    throw NoUniqueSteadyState("steady_state: residual check failed");
  }
  DensityMatrix3 rho = unvectorize(v);
  return 0.5 * (rho + rho.adjoint().eval());
}

DensityMatrix3 evolve(const Liouvillian& generator, const DensityMatrix3& initial, double time) {
  const Liouvillian propagator = (generator * time).exp();
  return unvectorize(propagator * vectorize(initial));
}

cd reflection_from_state(const DensityMatrix3& rho, double decay10, double probe_rabi) {
  if (!(probe_rabi > 0.0)) throw DomainError("reflection_from_state: probe Rabi must be > 0");
  const cd sigma_minus = -rho(1, 0);
  return cd(0.0, 1.0) * (decay10 / probe_rabi) * sigma_minus;
}

double weak_probe_deviation(const ThreeLevelAtom& atom, std::span<const OracleGridPoint> grid,
                            double probe_rabi) {
  if (grid.empty()) throw DomainError("weak_probe_deviation: empty grid");
  if (!(probe_rabi > 0.0)) throw DomainError("weak_probe_deviation: probe Rabi must be > 0");
  double worst = 0.0;
  for (const auto& pt : grid) {
    const DriveCondition drive{probe_rabi, pt.probe_detuning, pt.control_rabi,
                               pt.control_detuning};
    const auto rho = steady_state(build_liouvillian(LiouvillianSpec::from(atom, drive)));
    const cd oracle = reflection_from_state(rho, atom.decay10, probe_rabi);
    const cd analytic = reflection(atom, drive);
    worst = std::max(worst, std::abs(oracle - analytic) / std::abs(analytic));
  }
  return worst;
}

}  // namespace saweit
