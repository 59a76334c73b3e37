#ifndef THZQS_PHASEMATCH_HPP
#define THZQS_PHASEMATCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "thzqs/dispersion.hpp"

namespace thzqs {

/// Crystal and pump parameters; houses all phase-matching inputs.
struct CrystalParams {
  double length_m = 1e-3;
  double poling_period_m = 90e-6;
  double pump_wavelength_m = 659.58e-9;
  double pump_waist_m = 60e-6;
  double temperature_K = 293.0;

  double pump_frequency_Hz() const;
  /// Positivity checks plus pump wavelength inside visible-band validity.
  void validate(const DispersionModel& dispersion) const;
};

enum class Conversion { Stokes, AntiStokes };
enum class IdlerDirection { Forward, Backward };

std::string to_string(Conversion c);

/// Energy bookkeeping is fixed by the branch: Stokes w_s = w_p - w_i,
/// Anti-Stokes w_s = w_p + w_i.
struct ProcessBranch {
  Conversion conversion = Conversion::Stokes;
  IdlerDirection direction = IdlerDirection::Forward;

  double signal_frequency_Hz(double pump_Hz, double idler_Hz) const {
    return conversion == Conversion::Stokes ? pump_Hz - idler_Hz
                                            : pump_Hz + idler_Hz;
  }
  std::string label() const;
};

/// Quasi-phase-matched longitudinal mismatch in the paraxial expansion,
///   Stokes  forward : k_p - k_s(1-th_s^2/2) - k_i(1-th_i^2/2) + 2pi/Lambda
///   Stokes  backward: k_p - k_s(1-th_s^2/2) + k_i(1-th_i^2/2) - 2pi/Lambda
/// and with the k_i and grating signs swapped for Anti-Stokes.
/// Preconditions: |theta| < 0.35 rad, idler frequency inside the terahertz
/// band validity.
double delta_kz(const DispersionModel& dispersion, ProcessBranch branch,
                double idler_frequency_Hz, double theta_s, double theta_i,
                const CrystalParams& crystal);

/// Root of delta_kz(nu; theta_s = theta_i = 0) = 0, found by bisection to
/// tolerance_Hz. Throws NoRootError (reporting the scanned interval) if no
/// sign change exists in the window (defaults to the terahertz validity).
double collinear_frequency(const DispersionModel& dispersion,
                           ProcessBranch branch, const CrystalParams& crystal,
                           double tolerance_Hz = 1e8,
                           std::optional<std::array<double, 2>> window_Hz =
                               std::nullopt);

struct SpectrumGrid {
  std::vector<double> frequency_Hz;  // idler frequency shift, positive
  std::vector<double> theta_s;       // signal angle inside the crystal, rad
};

/// Relative-intensity map over (theta_s, frequency), one matrix per
/// conversion, each superposing the requested idler directions:
///   weight * sinc^2(delta_kz(nu, th_s, th_i*) L/2),
/// with th_i* the transverse-momentum-matched idler angle and weight
/// N_th + 1 (Stokes) or N_th (Anti-Stokes). Cells with no real matched
/// idler angle carry zero intensity. Row-major [theta][frequency].
struct SpectrumMap {
  SpectrumGrid grid;
  std::vector<double> stokes;
  std::vector<double> antistokes;

  double& at(std::vector<double>& m, std::size_t it, std::size_t inu) {
    return m[it * grid.frequency_Hz.size() + inu];
  }
};

SpectrumMap spectrum_map(const DispersionModel& dispersion,
                         const std::vector<ProcessBranch>& branches,
                         const SpectrumGrid& grid,
                         const CrystalParams& crystal);

}  // namespace thzqs

#endif
