#include "thzqs/gaussian.hpp"

#include <cmath>

#include "thzqs/constants.hpp"
#include "thzqs/errors.hpp"

namespace thzqs {

using cd = std::complex<double>;

GainParams GainParams::equal_gain(double v0) {
  if (v0 < 0.0) throw DomainError("GainParams: V0 must be >= 0");
  GainParams g;
  g.u1 = g.u2 = std::sqrt(1.0 + v0);
  g.v1 = g.v2 = std::sqrt(v0);
  return g;
}

double GainParams::defect() const {
  const double d1 = std::abs(std::norm(u1) - std::norm(v1) - 1.0);
  const double d2 = std::abs(std::norm(u2) - std::norm(v2) - 1.0);
  return std::max(d1, d2);
}

void GainParams::validate(double tol) const {
  if (defect() > tol)
    throw NonUnitaryError("GainParams: |u|^2 - |v|^2 deviates from 1");
}

ObjectModel ObjectModel::lossless(double transmission) {
  if (transmission < 0.0 || transmission > 1.0)
    throw DomainError("ObjectModel: transmission must be in [0, 1]");
  ObjectModel o;
  o.t = std::sqrt(transmission);
  o.r = std::sqrt(1.0 - transmission);
  return o;
}

double ObjectModel::defect() const {
  return std::abs(std::norm(t) + std::norm(r) - 1.0);
}

void ObjectModel::validate(double tol) const {
  if (defect() > tol)
    throw NonUnitaryError("ObjectModel: |t|^2 + |r|^2 deviates from 1");
}

ModeChain ModeChain::identity() {
  return ModeChain(Matrix6::Identity());
}

ModeChain ModeChain::two_mode_squeeze(int a, int b, cd u, cd v) {
  Matrix6 m = Matrix6::Identity();
  // a'_a = u a_a + v a_b+ ; a'_b = u a_b + v a_a+
  m(a, a) = u;
  m(a, 3 + b) = v;
  m(b, b) = u;
  m(b, 3 + a) = v;
  m(3 + a, 3 + a) = std::conj(u);
  m(3 + a, b) = std::conj(v);
  m(3 + b, 3 + b) = std::conj(u);
  m(3 + b, a) = std::conj(v);
  return ModeChain(m);
}

ModeChain ModeChain::beam_splitter(int a, int b, cd t, cd r) {
  Matrix6 m = Matrix6::Identity();
  // a'_a = t a_a + r a_b ; a'_b = -r* a_a + t* a_b
  m(a, a) = t;
  m(a, b) = r;
  m(b, a) = -std::conj(r);
  m(b, b) = std::conj(t);
  m(3 + a, 3 + a) = std::conj(t);
  m(3 + a, 3 + b) = std::conj(r);
  m(3 + b, 3 + a) = -r;
  m(3 + b, 3 + b) = t;
  return ModeChain(m);
}

ModeChain ModeChain::phase_shift(int mode, double phi) {
  Matrix6 m = Matrix6::Identity();
  m(mode, mode) = std::polar(1.0, phi);
  m(3 + mode, 3 + mode) = std::polar(1.0, -phi);
  return ModeChain(m);
}

ModeChain ModeChain::after(const ModeChain& other) const {
  return ModeChain(m_ * other.m_);
}

double ModeChain::symplectic_defect() const {
  const auto A = m_.block<3, 3>(0, 0);
  const auto B = m_.block<3, 3>(0, 3);
  const Eigen::Matrix3cd c1 =
      A * A.adjoint() - B * B.adjoint() - Eigen::Matrix3cd::Identity();
  const Eigen::Matrix3cd abt = A * B.transpose();
  const Eigen::Matrix3cd c2 = abt - abt.transpose();
  return std::max(c1.cwiseAbs().maxCoeff(), c2.cwiseAbs().maxCoeff());
}

ModeChain compose_chain(const GainParams& gains, const ObjectModel& object,
                        const PhaseConfig& phases) {
  gains.validate();
  object.validate();
  const auto pass1 = ModeChain::two_mode_squeeze(ModeChain::kSignal,
                                                 ModeChain::kIdler, gains.u1,
                                                 gains.v1);
  const auto splitter = ModeChain::beam_splitter(ModeChain::kIdler,
                                                 ModeChain::kAux, object.t,
                                                 object.r);
  const auto idler_phase = ModeChain::phase_shift(ModeChain::kIdler,
                                                  phases.phi_i);
  const auto signal_phase = ModeChain::phase_shift(ModeChain::kSignal,
                                                   phases.phi_s);
  const auto pass2 = ModeChain::two_mode_squeeze(ModeChain::kSignal,
                                                 ModeChain::kIdler, gains.u2,
                                                 gains.v2);
  return pass2.after(signal_phase)
      .after(idler_phase)
      .after(splitter)
      .after(pass1);
}

ModeChain compose_upconversion_chain(double mixing_1, double mixing_2,
                                     const ObjectModel& object,
                                     const PhaseConfig& phases) {
  object.validate();
  const auto pass1 = ModeChain::beam_splitter(
      ModeChain::kSignal, ModeChain::kIdler, std::cos(mixing_1),
      std::sin(mixing_1));
  const auto splitter = ModeChain::beam_splitter(ModeChain::kIdler,
                                                 ModeChain::kAux, object.t,
                                                 object.r);
  const auto idler_phase = ModeChain::phase_shift(ModeChain::kIdler,
                                                  phases.phi_i);
  const auto signal_phase = ModeChain::phase_shift(ModeChain::kSignal,
                                                   phases.phi_s);
  const auto pass2 = ModeChain::beam_splitter(
      ModeChain::kSignal, ModeChain::kIdler, std::cos(mixing_2),
      std::sin(mixing_2));
  return pass2.after(signal_phase)
      .after(idler_phase)
      .after(splitter)
      .after(pass1);
}

double signal_rate_exact(const ModeChain& chain, double thermal_occupation) {
  if (thermal_occupation < 0.0)
    throw DomainError("signal_rate_exact: N_th must be >= 0");
  const auto& m = chain.matrix();
  const double occupation[3] = {0.0, thermal_occupation, thermal_occupation};
  double rate = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double a2 = std::norm(m(ModeChain::kSignal, j));
    const double b2 = std::norm(m(ModeChain::kSignal, 3 + j));
    rate += a2 * occupation[j] + b2 * (occupation[j] + 1.0);
  }
  return rate;
}

double upconversion_rate_exact(const ModeChain& chain,
                               double thermal_occupation) {
  return signal_rate_exact(chain, thermal_occupation);
}

double signal_rate_closed_form(double v0, double object_transmission,
                               double thermal_occupation, double phi) {
  if (object_transmission < 0.0 || object_transmission > 1.0)
    throw DomainError("signal_rate_closed_form: T must be in [0, 1]");
  if (v0 < 0.0) throw DomainError("signal_rate_closed_form: V0 must be >= 0");
  const double T = object_transmission;
  return (thermal_occupation + 1.0) * 2.0 * v0 *
         (1.0 + 0.5 * v0 * T + 0.5 * v0 +
          std::sqrt(T * (1.0 + 2.0 * v0 + v0 * v0)) * std::cos(2.0 * phi));
}

double sensing_rate(double v0, double thermal_occupation, double phi0,
                    double idler_frequency_Hz, double x_m, double plate_n,
                    double plate_d_m) {
  const double omega = 2.0 * constants::pi * idler_frequency_Hz;
  const double path = 2.0 * x_m + (plate_n - 1.0) * 2.0 * plate_d_m;
  return (thermal_occupation + 1.0) * 2.0 * v0 *
         (1.0 + std::cos(phi0 + omega / constants::speed_of_light * path));
}

}  // namespace thzqs
