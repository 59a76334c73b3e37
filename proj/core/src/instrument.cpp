#include "thzqs/instrument.hpp"

#include <cmath>
#include <random>

#include "thzqs/errors.hpp"
#include "thzqs/rng.hpp"

namespace thzqs {

namespace {

// Substream channels.
constexpr std::uint64_t kSignalChannel = 1;
constexpr std::uint64_t kBackgroundChannel = 2;
constexpr std::uint64_t kLaserChannel = 3;

double roi_counts(double mean, bool shot, std::mt19937_64& rng) {
  if (mean < 0.0) mean = 0.0;
  if (!shot) return mean;
  std::poisson_distribution<long long> poisson(mean);
  return static_cast<double>(poisson(rng));
}

struct LinearFit {
  double slope, intercept, r_squared;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  LinearFit fit{0.0, sy / n, 1.0};
  if (denom != 0.0) {
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace

void ScanConfig::validate() const {
  if (!(step_m > 0) || !(span_m > 0) || !(exposure_s > 0))
    throw DomainError("ScanConfig: step, span, exposure must be > 0");
  if (repeats < 1) throw DomainError("ScanConfig: repeats must be >= 1");
  if (roi_pixels_x < 1 || roi_pixels_y < 1)
    throw DomainError("ScanConfig: ROI must contain pixels");
  const double ratio = span_m / step_m;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw DomainError("ScanConfig: span/step must be an integer point count");
}

int ScanConfig::point_count() const {
  return static_cast<int>(std::round(span_m / step_m));
}

std::vector<double> ScanConfig::positions() const {
  validate();
  std::vector<double> x(point_count());
  for (int k = 0; k < point_count(); ++k) x[k] = k * step_m;
  return x;
}

std::vector<double> ScanConfig::delta_l() const {
  auto x = positions();
  for (auto& v : x) v = stage_to_path(v) + path_offset_m;
  return x;
}

void NoiseModel::validate() const {
  if (background_cps_per_pixel < 0 || dark_cps_per_pixel < 0 ||
      readout_e_rms < 0 || laser_rel_rms < 0 ||
      calibration_cps_per_pixel < 0)
    throw DomainError("NoiseModel: rates must be >= 0");
  if (quantum_efficiency <= 0 || quantum_efficiency > 1)
    throw DomainError("NoiseModel: quantum efficiency must be in (0, 1]");
}

NoiseModel NoiseModel::noiseless(std::uint64_t seed) {
  NoiseModel n;
  n.background_cps_per_pixel = 0.0;
  n.dark_cps_per_pixel = 0.0;
  n.readout_e_rms = 0.0;
  n.laser_rel_rms = 0.0;
  n.shot_noise = false;
  n.seed = seed;
  return n;
}

Interferogram acquire_scan(const std::vector<double>& model_rate,
                           const std::string& branch, const ScanConfig& scan,
                           const NoiseModel& noise, std::uint64_t stream_tag,
                           RawCounts* raw) {
  scan.validate();
  noise.validate();
  const int points = scan.point_count();
  if (static_cast<int>(model_rate.size()) != points)
    throw DomainError("acquire_scan: model curve not aligned with scan grid");

  const int pixels = scan.roi_pixel_count();
  const double tau = scan.exposure_s;
  const double pedestal_cps =
      noise.background_cps_per_pixel + noise.dark_cps_per_pixel;
  const double readout_roi = noise.readout_e_rms * std::sqrt(pixels);

  // One multiplicative laser factor per repeat.
  std::vector<double> laser(scan.repeats, 1.0);
  if (noise.laser_rel_rms > 0.0) {
    for (int r = 0; r < scan.repeats; ++r) {
      auto rng = substream(noise.seed, stream_tag * 8 + kLaserChannel, r);
      std::normal_distribution<double> gauss(0.0, 1.0);
      laser[r] = 1.0 + noise.laser_rel_rms * gauss(rng);
    }
  }

  if (raw) {
    raw->signal_roi.assign(points, std::vector<double>(scan.repeats, 0.0));
    raw->background_roi.assign(points, std::vector<double>(scan.repeats, 0.0));
  }

  Interferogram out;
  out.branch = branch;
  out.position_m = scan.positions();
  out.delta_l_m = scan.delta_l();
  out.rate.resize(points);
  out.rate_sigma.assign(points, 0.0);

  for (int k = 0; k < points; ++k) {
    const double signal_cps =
        noise.quantum_efficiency * noise.calibration_cps_per_pixel *
        model_rate[k];
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < scan.repeats; ++r) {
      auto rng_sig =
          substream(noise.seed, stream_tag * 8 + kSignalChannel, k, r);
      auto rng_bg =
          substream(noise.seed, stream_tag * 8 + kBackgroundChannel, k, r);
      std::normal_distribution<double> gauss(0.0, 1.0);

      double sig_counts = roi_counts(
          pixels * tau * (signal_cps * laser[r] + pedestal_cps),
          noise.shot_noise, rng_sig);
      double bg_counts =
          roi_counts(pixels * tau * pedestal_cps, noise.shot_noise, rng_bg);
      if (raw) {
        raw->signal_roi[k][r] = sig_counts;
        raw->background_roi[k][r] = bg_counts;
      }
      if (noise.readout_e_rms > 0.0) {
        sig_counts += readout_roi * gauss(rng_sig);
        bg_counts += readout_roi * gauss(rng_bg);
      }
      const double rate = (sig_counts - bg_counts) / (pixels * tau);
      sum += rate;
      sum_sq += rate * rate;
    }
    const double mean = sum / scan.repeats;
    out.rate[k] = mean;
    if (scan.repeats > 1) {
      const double var =
          (sum_sq - scan.repeats * mean * mean) / (scan.repeats - 1);
      out.rate_sigma[k] =
          std::sqrt(std::max(var, 0.0) / scan.repeats);  // standard error
    }
  }
  return out;
}

Interferogram blocked_idler_scan(const ScanConfig& scan,
                                 const NoiseModel& noise, double pedestal_rate,
                                 const std::string& branch,
                                 std::uint64_t stream_tag) {
  const std::vector<double> flat(scan.point_count(), pedestal_rate);
  return acquire_scan(flat, branch, scan, noise, stream_tag);
}

void GainCurve::validate(const std::vector<double>& powers_W) const {
  if (powers_W.empty())
    throw DomainError("GainCurve: empty power list");
  if (!(v0_per_watt > 0) || !(reference_power_W > 0))
    throw DomainError("GainCurve: map must be positive");
  for (double p : powers_W) {
    if (p < 0) throw DomainError("GainCurve: negative pump power");
    if (v0(p) > 1e-2)
      throw DomainError("GainCurve: V0(P) exceeds the low-gain bound 1e-2");
  }
}

GainSweep gain_linearity_sweep(const std::vector<double>& powers_W,
                               const GainCurve& gain, double unblocked_rate,
                               double blocked_rate, const ScanConfig& scan,
                               const NoiseModel& noise, int measurements) {
  gain.validate(powers_W);
  noise.validate();
  if (measurements < 2)
    throw DomainError("gain_linearity_sweep: need >= 2 measurements");

  ScanConfig point = scan;
  point.repeats = measurements;
  point.span_m = point.step_m;  // single stage position

  GainSweep sweep;
  std::vector<double> powers, means;
  for (std::size_t ip = 0; ip < powers_W.size(); ++ip) {
    const double scale = powers_W[ip] / gain.reference_power_W;

    const auto unblocked =
        acquire_scan({scale * unblocked_rate}, "stokes", point, noise,
                     0x100 + ip);
    const auto blocked =
        acquire_scan({scale * blocked_rate}, "stokes", point, noise,
                     0x200 + ip);

    GainRow row;
    row.power_W = powers_W[ip];
    row.mean_unblocked = unblocked.rate[0];
    row.sigma_unblocked = unblocked.rate_sigma[0];
    row.mean_blocked = blocked.rate[0];
    row.sigma_blocked = blocked.rate_sigma[0];
    if (row.mean_blocked != 0.0) {
      row.ratio = row.mean_unblocked / row.mean_blocked;
      const double ru = row.mean_unblocked == 0.0
                            ? 0.0
                            : row.sigma_unblocked / std::abs(row.mean_unblocked);
      const double rb = row.sigma_blocked / std::abs(row.mean_blocked);
      row.ratio_sigma = std::abs(row.ratio) * std::sqrt(ru * ru + rb * rb);
    } else {
      row.ratio = 0.0;
      row.ratio_sigma = 0.0;
    }
    sweep.rows.push_back(row);
    powers.push_back(row.power_W);
    means.push_back(row.mean_unblocked);
  }
  const auto fit = fit_line(powers, means);
  sweep.slope = fit.slope;
  sweep.intercept = fit.intercept;
  sweep.r_squared = fit.r_squared;
  return sweep;
}

}  // namespace thzqs
