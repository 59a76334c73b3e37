#ifndef THZQS_DISPERSION_HPP
#define THZQS_DISPERSION_HPP

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "thzqs/numerics.hpp"

namespace thzqs {

enum class Band { Visible, Terahertz };

std::string to_string(Band band);

/// Temperature-dependent Sellmeier-type fit for the extraordinary index of
/// 5 mol.% MgO-doped congruent LiNbO3 in the visible/near-IR
/// (coefficient layout of Gayer et al., Appl. Phys. B 91, 343 (2008)):
///   n^2 = a1 + b1 f + (a2 + b2 f)/(l^2 - (a3 + b3 f)^2)
///            + (a4 + b4 f)/(l^2 - a5^2) - a6 l^2,
/// with l the wavelength in um and f = (T/C - 24.5)(T/C + 570.82).
struct SellmeierCoefficients {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0;
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
  std::array<double, 2> valid_wavelength_um{0.5, 4.0};

  double evaluate(double wavelength_um, double temperature_K) const;
};

/// Tabulated extraordinary index in the terahertz band at a reference
/// temperature, cubic-spline interpolated, with a linear temperature slope.
struct ThzIndexTable {
  std::vector<double> frequency_THz;
  std::vector<double> n_e;
  double reference_temperature_K = 293.0;
  double dn_dT_per_K = 0.0;
  std::array<double, 2> valid_frequency_THz{0.0, 0.0};

  CubicSpline spline;
  void build();
  double evaluate(double frequency_THz_value, double temperature_K) const;
};

/// Extraordinary refractive-index provider for the pump/signal (visible)
/// and idler (terahertz) bands. Immutable after construction; safe for
/// concurrent reads.
class DispersionModel {
 public:
  static DispersionModel from_file(const std::filesystem::path& path);
  static DispersionModel from_string(const std::string& text,
                                     const std::string& origin = "<string>");

  /// Extraordinary index n_e(band, frequency, temperature). Throws
  /// OutOfRangeError outside the declared frequency validity of the band;
  /// never extrapolates silently.
  double n_e(Band band, double frequency_Hz, double temperature_K) const;

  /// Declared validity [lo, hi] in Hz.
  std::array<double, 2> valid_range_Hz(Band band) const;

  const SellmeierCoefficients& visible() const { return visible_; }
  const ThzIndexTable& terahertz() const { return thz_; }
  const std::string& source() const { return source_; }

 private:
  DispersionModel() = default;
  SellmeierCoefficients visible_;
  ThzIndexTable thz_;
  std::string source_;
};

/// Planck occupation N_th = 1/(exp(h nu / kB T) - 1); exactly 0 at T = 0.
/// Throws DomainError for frequency <= 0 or temperature < 0.
double thermal_occupation(double frequency_Hz, double temperature_K);

}  // namespace thzqs

#endif
