#ifndef THZQS_INSTRUMENT_HPP
#define THZQS_INSTRUMENT_HPP

#include <cstdint>
#include <vector>

#include "thzqs/interferogram.hpp"

namespace thzqs {

/// Piezo scan protocol and ROI geometry.
struct ScanConfig {
  double step_m = 10e-6;
  double span_m = 6.4e-3;
  double exposure_s = 0.5;
  int repeats = 30;
  int roi_pixels_x = 25;
  int roi_pixels_y = 10;
  /// Idler path-length at stage zero relative to the balanced position;
  /// delta_l(x) = 2x + path_offset.
  double path_offset_m = -4.4e-3;
  /// Stage position used by the induced-emission check.
  double fixed_position_m = 4.1e-3;

  void validate() const;
  int point_count() const;
  int roi_pixel_count() const { return roi_pixels_x * roi_pixels_y; }
  std::vector<double> positions() const;
  std::vector<double> delta_l() const;
};

/// Camera and laser noise. All randomness derives from the seed through
/// per-(point, repeat) substreams, so output is reproducible regardless of
/// evaluation order. shot_noise=false replaces Poisson sampling by its mean
/// (exact model recovery).
struct NoiseModel {
  double background_cps_per_pixel = 160.0;
  double dark_cps_per_pixel = 20.0;
  double readout_e_rms = 1.0;
  double laser_rel_rms = 0.01;
  double quantum_efficiency = 0.55;
  /// Incident signal photons per second per pixel at unit model rate.
  double calibration_cps_per_pixel = 20.0;
  bool shot_noise = true;
  std::uint64_t seed = 12345;

  void validate() const;
  static NoiseModel noiseless(std::uint64_t seed = 0);
};

/// Raw ROI-summed counts per point and repeat (integers while shot noise is
/// on), before background subtraction and calibration.
struct RawCounts {
  std::vector<std::vector<double>> signal_roi;
  std::vector<std::vector<double>> background_roi;
};

/// Idler path-length displacement for a mirror translation x (double pass).
inline double stage_to_path(double x_m) { return 2.0 * x_m; }

/// Simulate one averaged scan of the given model curve (rates aligned with
/// scan.positions()). Per point: ROI counts with shot + readout noise and a
/// per-repeat laser factor, an equal-size background ROI, background
/// subtraction, mean over repeats; sigma is the standard error.
Interferogram acquire_scan(const std::vector<double>& model_rate,
                           const std::string& branch, const ScanConfig& scan,
                           const NoiseModel& noise,
                           std::uint64_t stream_tag = 0,
                           RawCounts* raw = nullptr);

/// Same pipeline with the fringe removed (idler blocked): only the
/// conversion pedestal plus noise.
Interferogram blocked_idler_scan(const ScanConfig& scan,
                                 const NoiseModel& noise,
                                 double pedestal_rate = 1.0,
                                 const std::string& branch = "stokes",
                                 std::uint64_t stream_tag = 1);

/// Low-gain pump-power map V0(P) = v0_per_watt * P.
struct GainCurve {
  double v0_per_watt = 2e-3;
  double reference_power_W = 0.45;

  double v0(double power_W) const { return v0_per_watt * power_W; }
  void validate(const std::vector<double>& powers_W) const;
};

struct GainRow {
  double power_W;
  double mean_unblocked, sigma_unblocked;
  double mean_blocked, sigma_blocked;
  double ratio, ratio_sigma;
};

struct GainSweep {
  std::vector<GainRow> rows;
  double slope = 0, intercept = 0, r_squared = 0;  // unblocked rate vs power
};

/// Mean count rates at the fixed stage position for each pump power, idler
/// blocked and unblocked, with the unblocked/blocked ratio column and a
/// linear fit of the unblocked rate against power.
GainSweep gain_linearity_sweep(const std::vector<double>& powers_W,
                               const GainCurve& gain, double unblocked_rate,
                               double blocked_rate, const ScanConfig& scan,
                               const NoiseModel& noise, int measurements = 500);

}  // namespace thzqs

#endif
