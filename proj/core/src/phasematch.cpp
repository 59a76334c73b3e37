#include "thzqs/phasematch.hpp"

#include <cmath>
#include <sstream>

#include "thzqs/constants.hpp"
#include "thzqs/errors.hpp"
#include "thzqs/numerics.hpp"

namespace thzqs {

namespace {
constexpr double kParaxialLimit = 0.35;  // rad
}

double CrystalParams::pump_frequency_Hz() const {
  return constants::speed_of_light / pump_wavelength_m;
}

void CrystalParams::validate(const DispersionModel& dispersion) const {
  if (!(length_m > 0) || !(poling_period_m > 0) || !(pump_wavelength_m > 0) ||
      !(pump_waist_m > 0) || temperature_K < 0)
    throw DomainError("CrystalParams: all parameters must be positive");
  const auto vis = dispersion.valid_range_Hz(Band::Visible);
  const double nu_p = pump_frequency_Hz();
  if (!(nu_p >= vis[0] && nu_p <= vis[1]))
    throw OutOfRangeError(
        "CrystalParams: pump wavelength outside visible-band validity");
}

std::string to_string(Conversion c) {
  return c == Conversion::Stokes ? "stokes" : "antistokes";
}

std::string ProcessBranch::label() const {
  return to_string(conversion) +
         (direction == IdlerDirection::Forward ? "_forward" : "_backward");
}

double delta_kz(const DispersionModel& dispersion, ProcessBranch branch,
                double idler_frequency_Hz, double theta_s, double theta_i,
                const CrystalParams& crystal) {
  if (std::abs(theta_s) >= kParaxialLimit || std::abs(theta_i) >= kParaxialLimit)
    throw DomainError("delta_kz: angle outside the paraxial regime");

  const double c = constants::speed_of_light;
  const double T = crystal.temperature_K;
  const double nu_p = crystal.pump_frequency_Hz();
  const double nu_s = branch.signal_frequency_Hz(nu_p, idler_frequency_Hz);

  const double k_p =
      dispersion.n_e(Band::Visible, nu_p, T) * 2.0 * constants::pi * nu_p / c;
  const double k_s =
      dispersion.n_e(Band::Visible, nu_s, T) * 2.0 * constants::pi * nu_s / c;
  const double k_i = dispersion.n_e(Band::Terahertz, idler_frequency_Hz, T) *
                     2.0 * constants::pi * idler_frequency_Hz / c;

  // Sign of the idler longitudinal term; the first-order grating vector
  // always carries the opposite sign so a root can exist.
  double s_i = branch.conversion == Conversion::Stokes ? -1.0 : 1.0;
  if (branch.direction == IdlerDirection::Backward) s_i = -s_i;
  const double grating = -s_i * 2.0 * constants::pi / crystal.poling_period_m;

  return k_p - k_s * (1.0 - 0.5 * theta_s * theta_s) +
         s_i * k_i * (1.0 - 0.5 * theta_i * theta_i) + grating;
}

double collinear_frequency(const DispersionModel& dispersion,
                           ProcessBranch branch, const CrystalParams& crystal,
                           double tolerance_Hz,
                           std::optional<std::array<double, 2>> window_Hz) {
  auto window = window_Hz.value_or(dispersion.valid_range_Hz(Band::Terahertz));
  const auto f = [&](double nu) {
    return delta_kz(dispersion, branch, nu, 0.0, 0.0, crystal);
  };

  // Locate the first sign change on a coarse scan, then bisect.
  const int kScanPoints = 256;
  const double step = (window[1] - window[0]) / kScanPoints;
  double lo = window[0];
  double flo = f(lo);
  double hi = lo;
  bool bracketed = false;
  for (int i = 1; i <= kScanPoints; ++i) {
    hi = window[0] + i * step;
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (flo * fhi < 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    flo = fhi;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "collinear_frequency(" << branch.label()
        << "): no sign change of delta_kz in [" << window[0] / 1e12 << ", "
        << window[1] / 1e12 << "] THz";
    throw NoRootError(msg.str());
  }

  while (hi - lo > tolerance_Hz) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (flo * fmid < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

SpectrumMap spectrum_map(const DispersionModel& dispersion,
                         const std::vector<ProcessBranch>& branches,
                         const SpectrumGrid& grid,
                         const CrystalParams& crystal) {
  const double c = constants::speed_of_light;
  const double T = crystal.temperature_K;
  const double nu_p = crystal.pump_frequency_Hz();
  const double G = 2.0 * constants::pi / crystal.poling_period_m;
  const double k_p =
      dispersion.n_e(Band::Visible, nu_p, T) * 2.0 * constants::pi * nu_p / c;

  SpectrumMap map;
  map.grid = grid;
  const std::size_t nth = grid.theta_s.size();
  const std::size_t nnu = grid.frequency_Hz.size();
  map.stokes.assign(nth * nnu, 0.0);
  map.antistokes.assign(nth * nnu, 0.0);

  for (const auto& branch : branches) {
    auto& sheet =
        branch.conversion == Conversion::Stokes ? map.stokes : map.antistokes;
    const double s_base = branch.conversion == Conversion::Stokes ? -1.0 : 1.0;
    const double s_i =
        branch.direction == IdlerDirection::Backward ? -s_base : s_base;
    const double grating = -s_i * G;

    for (std::size_t inu = 0; inu < nnu; ++inu) {
      const double nu_i = grid.frequency_Hz[inu];
      const double nu_s = branch.signal_frequency_Hz(nu_p, nu_i);
      const double k_s = dispersion.n_e(Band::Visible, nu_s, T) * 2.0 *
                         constants::pi * nu_s / c;
      const double k_i = dispersion.n_e(Band::Terahertz, nu_i, T) * 2.0 *
                         constants::pi * nu_i / c;
      const double n_th = thermal_occupation(nu_i, T);
      const double weight =
          branch.conversion == Conversion::Stokes ? n_th + 1.0 : n_th;
      if (weight == 0.0) continue;

      for (std::size_t it = 0; it < nth; ++it) {
        // Exact transverse momentum conservation k_s sin(th_s) = k_i sin(th_i).
        const double sin_ti =
            k_s * std::sin(std::abs(grid.theta_s[it])) / k_i;
        if (sin_ti > 1.0) continue;  // no real matched idler angle
        const double cos_ti = std::sqrt(1.0 - sin_ti * sin_ti);
        const double dk = k_p - k_s * std::cos(grid.theta_s[it]) +
                          s_i * k_i * cos_ti + grating;
        const double amp = sinc(0.5 * dk * crystal.length_m);
        sheet[it * nnu + inu] += weight * amp * amp;
      }
    }
  }
  return map;
}

}  // namespace thzqs
