#ifndef THZQS_MULTIMODE_HPP
#define THZQS_MULTIMODE_HPP

#include <vector>

#include "thzqs/interferogram.hpp"
#include "thzqs/phasematch.hpp"

namespace thzqs {

/// Idler acceptance: fringe-forming modes up to theta_i_max (inside the
/// crystal); emission integrated up to the total-internal-reflection cap.
struct ApertureModel {
  double theta_i_max_rad = 0.087266462599716474;  // 5 deg
  double tir_cap_rad = 0.19198621771937624;       // 11 deg

  void validate() const;
};

/// Gauss-Legendre node counts, integration windows, and the convergence
/// contract: doubling the node counts must change the result by less than
/// rel_tol pointwise.
struct QuadratureSpec {
  int n_omega = 193;
  int n_theta = 129;
  double rel_tol = 1e-4;
  bool check_convergence = true;
  double window_lobes = 4.0;      // idler window: root +- this many sinc lobes
  double theta_grid_max_rad = 0;  // 0: use the aperture TIR cap

  void validate() const;
};

/// Transparent plate in the idler arm. The Fresnel multiplier (off by
/// default) scales the fringe amplitude by ((2 sqrt(n)/(n+1))^2)^4, one
/// surface transmission per face and pass.
struct ObjectPlate {
  double n = 1.42;
  double sigma_n = 0.01;
  double d_m = 0.0;
  bool fresnel = false;

  double fringe_scale() const;
  double phase_path_m() const { return (n - 1.0) * 2.0 * d_m; }
};

/// Integrand of the azimuthally reduced rate,
///   exp(-w^2/2 [(k_s th_s)^2 + (k_i th_i)^2]) I0(w^2 k_s th_s k_i th_i)
///     * sinc^2(dk_z L/2) * (1 + t cos(phi_i)),
/// evaluated with the Bessel factor fused into the Gaussian so it stays
/// finite for any arguments.
double rate_density(const DispersionModel& dispersion,
                    const CrystalParams& crystal, ProcessBranch branch,
                    double theta_s, double idler_frequency_Hz, double theta_i,
                    double object_transmission, double phi_i);

struct AngularDensity {
  std::vector<double> theta_i;
  std::vector<double> gamma;  // normalized to peak 1
};

/// Gamma(theta_i): the theta_s = 0 rate density integrated over the idler
/// frequency window, normalized to peak 1.
AngularDensity idler_angular_density(const DispersionModel& dispersion,
                                     const CrystalParams& crystal,
                                     ProcessBranch branch, int points,
                                     double theta_max_rad,
                                     const QuadratureSpec& quad);

/// Aperture-limited collinear interferogram over the idler path-length grid:
/// outer integrals over idler frequency and angle of
/// Gaussian x sinc^2 x [1 + Theta(th_max - th_i) cos(phase)], thermal branch
/// weight (N_th + 1 Stokes / N_th Anti-Stokes) applied per frequency, result
/// normalized to unit pedestal. The angular integral is taken in the
/// small-angle solid-angle measure theta dtheta.
Interferogram interferogram(const DispersionModel& dispersion,
                            const CrystalParams& crystal, ProcessBranch branch,
                            const std::vector<double>& delta_l_m,
                            const ApertureModel& aperture,
                            const QuadratureSpec& quad, double phi0 = 0.0);

/// Same with a plate inserted: per-frequency phase (w_i/c)(n-1)2d added to
/// phi0 inside the cosine, so the envelope center moves to
/// delta_l = +2(n-1)d.
Interferogram object_shifted_interferogram(const DispersionModel& dispersion,
                                           const CrystalParams& crystal,
                                           ProcessBranch branch,
                                           const std::vector<double>& delta_l_m,
                                           const ApertureModel& aperture,
                                           const QuadratureSpec& quad,
                                           const ObjectPlate& plate,
                                           double phi0 = 0.0);

/// Precomputed spectral profiles for repeated evaluation (scan synthesis,
/// fixed-position sweeps). Immutable once built.
class InterferogramModel {
 public:
  InterferogramModel(const DispersionModel& dispersion,
                     const CrystalParams& crystal, ProcessBranch branch,
                     const ApertureModel& aperture, const QuadratureSpec& quad,
                     const ObjectPlate& plate = {}, double phi0 = 0.0);

  /// Pedestal-normalized rate at one idler path-length value.
  double rate(double delta_l_m) const;
  /// The (constant) pedestal level in the same normalization.
  double pedestal() const { return 1.0; }
  double collinear_root_Hz() const { return nu0_; }

  Interferogram evaluate(const std::vector<double>& delta_l_m) const;

 private:
  ProcessBranch branch_;
  double nu0_ = 0;
  double phi0_ = 0;
  double phase_path_m_ = 0;
  double fringe_scale_ = 1.0;
  std::vector<double> nu_;         // frequency nodes
  std::vector<double> weight_;     // GL weight x thermal branch weight
  std::vector<double> pedestal_;   // theta integral, all emission angles
  std::vector<double> coherent_;   // theta integral, aligned modes only
  double norm_ = 1.0;
};

}  // namespace thzqs

#endif
