#include "thzqs/multimode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thzqs/constants.hpp"
#include "thzqs/errors.hpp"
#include "thzqs/numerics.hpp"

namespace thzqs {

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;

/// Per-branch kinematic factors at fixed crystal temperature.
struct BranchKinematics {
  const DispersionModel& dispersion;
  const CrystalParams& crystal;
  ProcessBranch branch;
  double k_p;
  double s_i;
  double grating;

  BranchKinematics(const DispersionModel& d, const CrystalParams& c,
                   ProcessBranch b)
      : dispersion(d), crystal(c), branch(b) {
    const double nu_p = c.pump_frequency_Hz();
    k_p = d.n_e(Band::Visible, nu_p, c.temperature_K) * kTwoPi * nu_p /
          constants::speed_of_light;
    s_i = b.conversion == Conversion::Stokes ? -1.0 : 1.0;
    if (b.direction == IdlerDirection::Backward) s_i = -s_i;
    grating = -s_i * kTwoPi / c.poling_period_m;
  }

  double k_s(double nu_i) const {
    const double nu_s =
        branch.signal_frequency_Hz(crystal.pump_frequency_Hz(), nu_i);
    return dispersion.n_e(Band::Visible, nu_s, crystal.temperature_K) * kTwoPi *
           nu_s / constants::speed_of_light;
  }
  double k_i(double nu_i) const {
    return dispersion.n_e(Band::Terahertz, nu_i, crystal.temperature_K) *
           kTwoPi * nu_i / constants::speed_of_light;
  }
  double delta_kz(double nu_i, double theta_s, double theta_i) const {
    return k_p - k_s(nu_i) * (1.0 - 0.5 * theta_s * theta_s) +
           s_i * k_i(nu_i) * (1.0 - 0.5 * theta_i * theta_i) + grating;
  }
};

struct FrequencyWindow {
  double lo, hi, nu0;
};

FrequencyWindow frequency_window(const DispersionModel& dispersion,
                                 const CrystalParams& crystal,
                                 ProcessBranch branch, double lobes) {
  const double nu0 = collinear_frequency(dispersion, branch, crystal);
  const BranchKinematics kin(dispersion, crystal, branch);
  const double dnu = 5e8;
  const double slope = (kin.delta_kz(nu0 + dnu, 0, 0) -
                        kin.delta_kz(nu0 - dnu, 0, 0)) /
                       (2.0 * dnu);
  const double lobe_width =
      (kTwoPi / crystal.length_m) / std::abs(slope);  // Hz per sinc lobe
  const auto valid = dispersion.valid_range_Hz(Band::Terahertz);
  return {std::max(nu0 - lobes * lobe_width, valid[0]),
          std::min(nu0 + lobes * lobe_width, valid[1]), nu0};
}

}  // namespace

void ApertureModel::validate() const {
  if (!(theta_i_max_rad > 0.0) || !(theta_i_max_rad <= tir_cap_rad))
    throw DomainError("ApertureModel: need 0 < theta_i_max <= TIR cap");
}

void QuadratureSpec::validate() const {
  if (n_omega < 2 || n_theta < 2)
    throw DomainError("QuadratureSpec: node counts must be >= 2");
  if (!(rel_tol > 0.0) || !(window_lobes > 0.0))
    throw DomainError("QuadratureSpec: tolerances and windows must be > 0");
  if (theta_grid_max_rad < 0.0)
    throw DomainError("QuadratureSpec: theta_grid_max must be >= 0");
}

double ObjectPlate::fringe_scale() const {
  if (!fresnel) return 1.0;
  const double per_surface = std::pow(2.0 * std::sqrt(n) / (n + 1.0), 2);
  return std::pow(per_surface, 4);
}

double rate_density(const DispersionModel& dispersion,
                    const CrystalParams& crystal, ProcessBranch branch,
                    double theta_s, double idler_frequency_Hz, double theta_i,
                    double object_transmission, double phi_i) {
  const BranchKinematics kin(dispersion, crystal, branch);
  const double w2 = crystal.pump_waist_m * crystal.pump_waist_m;
  const double a = kin.k_s(idler_frequency_Hz) * std::abs(theta_s);
  const double b = kin.k_i(idler_frequency_Hz) * std::abs(theta_i);
  // exp(-w2/2 (a^2+b^2)) I0(w2 a b) = exp(-w2/2 (a-b)^2) * i0e(w2 a b)
  const double gauss = std::exp(-0.5 * w2 * (a - b) * (a - b)) *
                       bessel_i0_scaled(w2 * a * b);
  const double s = sinc(0.5 * kin.delta_kz(idler_frequency_Hz, theta_s,
                                           theta_i) *
                        crystal.length_m);
  return gauss * s * s *
         (1.0 + object_transmission * std::cos(phi_i));
}

AngularDensity idler_angular_density(const DispersionModel& dispersion,
                                     const CrystalParams& crystal,
                                     ProcessBranch branch, int points,
                                     double theta_max_rad,
                                     const QuadratureSpec& quad) {
  quad.validate();
  if (points < 2 || !(theta_max_rad > 0.0))
    throw DomainError("idler_angular_density: bad theta grid");

  const auto win =
      frequency_window(dispersion, crystal, branch, quad.window_lobes);
  const BranchKinematics kin(dispersion, crystal, branch);
  const double w2 = crystal.pump_waist_m * crystal.pump_waist_m;

  auto gamma_at = [&](double theta, int n_nodes) {
    const auto& rule = gauss_legendre(n_nodes);
    const double mid = 0.5 * (win.lo + win.hi);
    const double half = 0.5 * (win.hi - win.lo);
    double sum = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
      const double nu = mid + half * rule.nodes[i];
      const double b = kin.k_i(nu) * theta;
      const double s = sinc(0.5 * kin.delta_kz(nu, 0.0, theta) *
                            crystal.length_m);
      sum += rule.weights[i] * std::exp(-0.5 * w2 * b * b) * s * s;
    }
    return sum * half;
  };

  AngularDensity density;
  density.theta_i.resize(points);
  density.gamma.resize(points);
  for (int i = 0; i < points; ++i) {
    density.theta_i[i] = theta_max_rad * i / (points - 1);
    density.gamma[i] = gamma_at(density.theta_i[i], quad.n_omega);
  }
  if (quad.check_convergence) {
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
      const double refined = gamma_at(density.theta_i[i], 2 * quad.n_omega);
      const double scale = std::max(std::abs(refined), 1e-300);
      worst = std::max(worst, std::abs(refined - density.gamma[i]) / scale);
    }
    if (worst > quad.rel_tol) {
      std::ostringstream msg;
      msg << "idler_angular_density: quadrature not converged, achieved "
          << worst << " > " << quad.rel_tol;
      throw QuadratureError(msg.str(), worst);
    }
  }
  const double peak =
      *std::max_element(density.gamma.begin(), density.gamma.end());
  if (peak > 0.0)
    for (auto& g : density.gamma) g /= peak;
  return density;
}

InterferogramModel::InterferogramModel(const DispersionModel& dispersion,
                                       const CrystalParams& crystal,
                                       ProcessBranch branch,
                                       const ApertureModel& aperture,
                                       const QuadratureSpec& quad,
                                       const ObjectPlate& plate, double phi0)
    : branch_(branch), phi0_(phi0), phase_path_m_(plate.phase_path_m()),
      fringe_scale_(plate.fringe_scale()) {
  aperture.validate();
  quad.validate();
  crystal.validate(dispersion);
  if (plate.d_m < 0.0 || (plate.d_m > 0.0 && !(plate.n > 1.0)))
    throw DomainError("ObjectPlate: need d >= 0 and n > 1");

  const auto win =
      frequency_window(dispersion, crystal, branch, quad.window_lobes);
  nu0_ = win.nu0;
  const BranchKinematics kin(dispersion, crystal, branch);
  const double w2 = crystal.pump_waist_m * crystal.pump_waist_m;
  const double theta_grid_max = quad.theta_grid_max_rad > 0.0
                                    ? quad.theta_grid_max_rad
                                    : aperture.tir_cap_rad;
  if (theta_grid_max < aperture.theta_i_max_rad)
    throw DomainError("QuadratureSpec: theta grid smaller than the aperture");

  // Emission integral in the small-angle solid-angle measure theta dtheta,
  // split at the aperture edge so the step function stays exact.
  auto theta_integral = [&](double nu, double lo, double hi, int n_nodes) {
    const auto& rule = gauss_legendre(n_nodes);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double ki = kin.k_i(nu);
    const double dk0 = kin.delta_kz(nu, 0.0, 0.0);
    double sum = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
      const double th = mid + half * rule.nodes[i];
      const double b = ki * th;
      const double dkz = dk0 - kin.s_i * ki * 0.5 * th * th;
      const double s = sinc(0.5 * dkz * crystal.length_m);
      sum += rule.weights[i] * th * std::exp(-0.5 * w2 * b * b) * s * s;
    }
    return sum * half;
  };

  const auto& nu_rule = gauss_legendre(quad.n_omega);
  const double mid = 0.5 * (win.lo + win.hi);
  const double half = 0.5 * (win.hi - win.lo);
  nu_.resize(quad.n_omega);
  weight_.resize(quad.n_omega);
  pedestal_.resize(quad.n_omega);
  coherent_.resize(quad.n_omega);
  for (int i = 0; i < quad.n_omega; ++i) {
    const double nu = mid + half * nu_rule.nodes[i];
    nu_[i] = nu;
    const double n_th = thermal_occupation(nu, crystal.temperature_K);
    const double branch_weight =
        branch.conversion == Conversion::Stokes ? n_th + 1.0 : n_th;
    weight_[i] = nu_rule.weights[i] * half * branch_weight;
    coherent_[i] =
        theta_integral(nu, 0.0, aperture.theta_i_max_rad, quad.n_theta);
    pedestal_[i] = coherent_[i] + theta_integral(nu, aperture.theta_i_max_rad,
                                                 theta_grid_max, quad.n_theta);
  }
  norm_ = 0.0;
  for (int i = 0; i < quad.n_omega; ++i) norm_ += weight_[i] * pedestal_[i];
  if (!(norm_ > 0.0))
    throw QuadratureError("interferogram: vanishing pedestal", 0.0);
}

double InterferogramModel::rate(double delta_l_m) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nu_.size(); ++i) {
    const double phase = phi0_ + kTwoPi * nu_[i] / constants::speed_of_light *
                                     (phase_path_m_ - delta_l_m);
    sum += weight_[i] *
           (pedestal_[i] + fringe_scale_ * coherent_[i] * std::cos(phase));
  }
  return sum / norm_;
}

Interferogram InterferogramModel::evaluate(
    const std::vector<double>& delta_l_m) const {
  Interferogram scan;
  scan.branch = to_string(branch_.conversion);
  scan.delta_l_m = delta_l_m;
  scan.position_m.resize(delta_l_m.size());
  scan.rate.resize(delta_l_m.size());
  for (std::size_t i = 0; i < delta_l_m.size(); ++i) {
    scan.position_m[i] = 0.5 * delta_l_m[i];
    scan.rate[i] = rate(delta_l_m[i]);
  }
  scan.meta["collinear_root_THz"] = nu0_ / 1e12;
  scan.meta["normalization"] = "unit_pedestal";
  return scan;
}

Interferogram object_shifted_interferogram(const DispersionModel& dispersion,
                                           const CrystalParams& crystal,
                                           ProcessBranch branch,
                                           const std::vector<double>& delta_l_m,
                                           const ApertureModel& aperture,
                                           const QuadratureSpec& quad,
                                           const ObjectPlate& plate,
                                           double phi0) {
  if (delta_l_m.size() >= 2)
    for (std::size_t i = 1; i < delta_l_m.size(); ++i)
      if (!(delta_l_m[i] > delta_l_m[i - 1]))
        throw DomainError("interferogram: delta_l grid must increase");

  const InterferogramModel model(dispersion, crystal, branch, aperture, quad,
                                 plate, phi0);
  Interferogram scan = model.evaluate(delta_l_m);

  if (quad.check_convergence) {
    QuadratureSpec doubled = quad;
    doubled.n_omega *= 2;
    doubled.n_theta *= 2;
    doubled.check_convergence = false;
    const InterferogramModel refined(dispersion, crystal, branch, aperture,
                                     doubled, plate, phi0);
    double worst = 0.0;
    for (std::size_t i = 0; i < delta_l_m.size(); ++i) {
      const double a = refined.rate(delta_l_m[i]);
      const double scale = std::max(std::abs(a), 1e-300);
      worst = std::max(worst, std::abs(a - scan.rate[i]) / scale);
    }
    scan.meta["quadrature_rel_error"] = worst;
    if (worst > quad.rel_tol) {
      std::ostringstream msg;
      msg << "interferogram: quadrature not converged, achieved " << worst
          << " > " << quad.rel_tol;
      throw QuadratureError(msg.str(), worst);
    }
  }
  scan.meta["branch_direction"] =
      branch.direction == IdlerDirection::Forward ? "forward" : "backward";
  return scan;
}

Interferogram interferogram(const DispersionModel& dispersion,
                            const CrystalParams& crystal, ProcessBranch branch,
                            const std::vector<double>& delta_l_m,
                            const ApertureModel& aperture,
                            const QuadratureSpec& quad, double phi0) {
  return object_shifted_interferogram(dispersion, crystal, branch, delta_l_m,
                                      aperture, quad, ObjectPlate{}, phi0);
}

}  // namespace thzqs
