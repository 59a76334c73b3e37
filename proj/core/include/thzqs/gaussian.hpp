#ifndef THZQS_GAUSSIAN_HPP
#define THZQS_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <complex>

namespace thzqs {

/// Conversion rates of the two crystal passes. Lossless Bogoliubov blocks
/// obey |u|^2 - |v|^2 = 1.
struct GainParams {
  std::complex<double> u1{1.0, 0.0}, v1{0.0, 0.0};
  std::complex<double> u2{1.0, 0.0}, v2{0.0, 0.0};

  /// Equal-gain configuration V1 = V2 = V0 with real rates.
  static GainParams equal_gain(double v0);

  double defect() const;                 // max |(|u|^2-|v|^2) - 1| over passes
  void validate(double tol = 1e-12) const;  // throws NonUnitaryError
};

/// Lossless beam splitter standing in for the object: |t|^2 + |r|^2 = 1.
struct ObjectModel {
  std::complex<double> t{1.0, 0.0};
  std::complex<double> r{0.0, 0.0};

  static ObjectModel lossless(double transmission);  // T in [0,1]

  double defect() const;
  void validate(double tol = 1e-12) const;
};

/// Propagation phases between the passes. Kept unreduced; wrap only when
/// presenting.
struct PhaseConfig {
  double phi_s = 0.0;
  double phi_i = 0.0;
};

/// Linear map on the stacked operator vector (a_s, a_i, a_3, a_s+, a_i+, a_3+).
/// Composition preserves the [[A, B], [conj B, conj A]] Bogoliubov block
/// structure; symplectic_defect measures commutator preservation.
class ModeChain {
 public:
  using Matrix6 = Eigen::Matrix<std::complex<double>, 6, 6>;

  static constexpr int kSignal = 0;
  static constexpr int kIdler = 1;
  static constexpr int kAux = 2;

  static ModeChain identity();
  static ModeChain two_mode_squeeze(int mode_a, int mode_b,
                                    std::complex<double> u,
                                    std::complex<double> v);
  static ModeChain beam_splitter(int mode_a, int mode_b,
                                 std::complex<double> t,
                                 std::complex<double> r);
  static ModeChain phase_shift(int mode, double phi);

  /// this applied after other: result = this * other.
  ModeChain after(const ModeChain& other) const;

  double symplectic_defect() const;
  const Matrix6& matrix() const { return m_; }

 private:
  explicit ModeChain(Matrix6 m) : m_(std::move(m)) {}
  Matrix6 m_;
};

/// Composition pass1 -> (idler: object splitter then phi_i; signal: phi_s)
/// -> pass2. Throws NonUnitaryError if an input violates its invariant.
ModeChain compose_chain(const GainParams& gains, const ObjectModel& object,
                        const PhaseConfig& phases);

/// Anti-Stokes variant: the crystal passes are particle-conserving
/// beam-splitter couplings between signal and idler with mixing amplitudes
/// (cos g_j, sin g_j).
ModeChain compose_upconversion_chain(double mixing_1, double mixing_2,
                                     const ObjectModel& object,
                                     const PhaseConfig& phases);

/// Exact mean photon number in the output signal mode: thermal occupation
/// N_th on idler inputs i and 3, vacuum on the signal input. For the output
/// row a' = sum_j (A_j a_j + B_j a_j+) this is
/// sum_j |A_j|^2 N_j + |B_j|^2 (N_j + 1). No truncation.
double signal_rate_exact(const ModeChain& chain, double thermal_occupation);

/// Same evaluator, named for the up-conversion use (the B row vanishes for
/// particle-conserving chains, so the rate is proportional to N_th).
double upconversion_rate_exact(const ModeChain& chain,
                               double thermal_occupation);

/// Printed equal-gain closed form:
/// R_s = (N_th+1) 2 V0 [1 + V0 T/2 + V0/2 + sqrt(T (1+2V0+V0^2)) cos(2 phi)].
double signal_rate_closed_form(double v0, double object_transmission,
                               double thermal_occupation, double phi);

/// Low-gain sensing rate with a transparent plate of index n and thickness d
/// in the idler arm, stage displacement x:
/// R_s = (N_th+1) 2 V0 [1 + cos(phi0 + (w_i/c)(2x + (n-1) 2d))].
double sensing_rate(double v0, double thermal_occupation, double phi0,
                    double idler_frequency_Hz, double x_m, double plate_n,
                    double plate_d_m);

}  // namespace thzqs

#endif
