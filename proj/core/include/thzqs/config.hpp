#ifndef THZQS_CONFIG_HPP
#define THZQS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "thzqs/instrument.hpp"
#include "thzqs/multimode.hpp"
#include "thzqs/phasematch.hpp"

namespace thzqs {

struct SpectrumGridConfig {
  double nu_min_THz = 0.15;
  double nu_max_THz = 2.2;
  int nu_points = 165;
  double theta_s_max_rad = 0.02;
  int theta_points = 121;
};

/// Whole-run configuration. JSON keys carry explicit units; unknown keys are
/// rejected with their full path (strict schema). validate() checks the
/// assembled object before any computation runs.
struct RunConfig {
  CrystalParams crystal;
  std::string dispersion_file;  // resolved by the caller when empty
  std::vector<Conversion> branches{Conversion::Stokes, Conversion::AntiStokes};
  ApertureModel aperture;
  QuadratureSpec quadrature;
  ScanConfig scan;
  NoiseModel noise;
  ObjectPlate object;
  GainCurve gain;
  std::vector<double> powers_W{0.1, 0.2, 0.3, 0.4, 0.5};
  SpectrumGridConfig spectrum;
  double phi0_rad = 0.0;
  std::uint64_t seed = 12345;
  std::string out_dir = "out";

  static RunConfig defaults();
  /// Parse and strictly validate a JSON document; present keys override the
  /// defaults. Throws ConfigError with the offending key path.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::filesystem::path& path);

  nlohmann::json to_json() const;
  /// Cross-field validation (positive quantities, aperture below the TIR
  /// cap, integer point count, low-gain powers, nonempty branch set).
  void validate() const;
};

}  // namespace thzqs

#endif
