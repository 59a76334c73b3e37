#include "thzqs/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "thzqs/constants.hpp"
#include "thzqs/errors.hpp"

namespace thzqs {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

std::vector<double> magnitude_spectrum(const std::vector<double>& y) {
  static std::mutex plan_mutex;  // FFTW plan creation is not thread-safe
  const int n = static_cast<int>(y.size());
  std::vector<double> in(y);
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::scoped_lock lock(plan_mutex);
    plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE);
  }
  // FFTW_ESTIMATE may clobber the input during planning; restore it.
  std::copy(y.begin(), y.end(), in.begin());
  fftw_execute(plan);
  {
    std::scoped_lock lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k)
    mag[k] = std::hypot(out[k][0], out[k][1]);
  return mag;
}

}  // namespace

FftPeak fft_peak(const Interferogram& scan, FftWindow window) {
  scan.validate();
  const std::size_t n = scan.size();
  if (n < 64) throw TooShortError("fft_peak: need >= 64 points");

  const double step =
      (scan.delta_l_m.back() - scan.delta_l_m.front()) / (n - 1);
  if (!(step > 0.0))
    throw NonUniformGridError("fft_peak: delta_l grid must increase");
  for (std::size_t k = 1; k < n; ++k) {
    const double d = scan.delta_l_m[k] - scan.delta_l_m[k - 1];
    if (std::abs(d - step) > 1e-6 * std::abs(step))
      throw NonUniformGridError("fft_peak: non-uniform delta_l grid");
  }

  const double mean =
      std::accumulate(scan.rate.begin(), scan.rate.end(), 0.0) / n;
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    y[k] = scan.rate[k] - mean;
    if (window == FftWindow::Hann)
      y[k] *= 0.5 * (1.0 - std::cos(2.0 * constants::pi * k / (n - 1)));
  }

  const auto mag = magnitude_spectrum(y);
  std::size_t peak = 1;
  for (std::size_t k = 2; k + 0 < mag.size(); ++k)
    if (mag[k] > mag[peak]) peak = k;

  double delta = 0.0;
  double amplitude = mag[peak];
  if (peak >= 1 && peak + 1 < mag.size()) {
    const double a = mag[peak - 1], b = mag[peak], c = mag[peak + 1];
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) {
      delta = 0.5 * (a - c) / denom;
      delta = std::clamp(delta, -0.5, 0.5);
      amplitude = b - 0.25 * (a - c) * delta;
    }
  }

  std::vector<double> floor_bins;
  for (std::size_t k = 1; k < mag.size(); ++k) {
    if (k + 2 >= peak && k <= peak + 2) continue;
    floor_bins.push_back(mag[k]);
  }
  const double floor = median_of(std::move(floor_bins));

  FftPeak result;
  result.cycles_per_m = (peak + delta) / (n * step);
  result.frequency_Hz = constants::speed_of_light * result.cycles_per_m;
  result.peak_amplitude = amplitude;
  result.noise_floor = floor;
  if (floor > 0.0)
    result.significance = amplitude / floor;
  else
    result.significance =
        amplitude > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  return result;
}

std::array<double, 6> initialize_fit(const Interferogram& scan) {
  scan.validate();
  const std::size_t n = scan.size();
  const auto& x = scan.position_m;

  const double y0 = median_of(scan.rate);

  // Fringe frequency from the FFT, converted to rad per meter of stage
  // travel through the actual delta_l(x) slope of this scan.
  const auto peak = fft_peak(scan, FftWindow::Hann);
  const double dl_dx = (scan.delta_l_m.back() - scan.delta_l_m.front()) /
                       (x.back() - x.front());
  const double v = 2.0 * constants::pi * peak.cycles_per_m * std::abs(dl_dx);

  std::vector<double> detrended(n);
  for (std::size_t k = 0; k < n; ++k) detrended[k] = scan.rate[k] - y0;
  std::vector<double> sorted(detrended);
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double q) {
    return sorted[static_cast<std::size_t>(q * (n - 1))];
  };
  const double amplitude = 0.5 * (quantile(0.95) - quantile(0.05));

  // Envelope profile: squared detrended signal smoothed over one fringe
  // period, noise pedestal removed.
  const double step = (x.back() - x.front()) / (n - 1);
  const double period = v > 0.0 ? 2.0 * constants::pi / v : 10.0 * step;
  const int half_window =
      std::max(1, static_cast<int>(std::round(0.5 * period / step)));
  std::vector<double> profile(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    int count = 0;
    const int lo = std::max<int>(0, static_cast<int>(k) - half_window);
    const int hi = std::min<int>(n - 1, static_cast<int>(k) + half_window);
    for (int j = lo; j <= hi; ++j, ++count) sum += detrended[j] * detrended[j];
    profile[k] = sum / count;
  }
  const double pedestal = median_of(profile);
  double mass = 0.0, first = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    profile[k] = std::max(profile[k] - pedestal, 0.0);
    mass += profile[k];
    first += profile[k] * x[k];
  }
  double x_c = mass > 0.0 ? first / mass : 0.5 * (x.front() + x.back());
  double second = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    second += profile[k] * (x[k] - x_c) * (x[k] - x_c);
  // The smoothed squared envelope is exp(-u^2/w^2); its RMS width is w/sqrt2.
  double omega = mass > 0.0 ? std::sqrt(2.0 * second / mass)
                            : 0.25 * (x.back() - x.front());
  if (!(omega > 0.0)) omega = 0.25 * (x.back() - x.front());

  // Phase by 1-D grid search with the other parameters held fixed.
  double best_phi = 0.0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int g = 0; g < 64; ++g) {
    const double phi = 2.0 * constants::pi * g / 64;
    double cost = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r =
          envelope_model({y0, amplitude, v, phi, x_c, omega}, x[k]) -
          scan.rate[k];
      cost += r * r;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_phi = phi;
    }
  }
  return {y0, amplitude, v, best_phi, x_c, omega};
}

ThicknessEstimate thickness_from_shift(const FitResult& reference,
                                       const FitResult& sample, double n,
                                       double sigma_n) {
  if (reference.branch != sample.branch)
    throw BranchMismatchError("thickness_from_shift: branch labels differ ('" +
                              reference.branch + "' vs '" + sample.branch +
                              "')");
  if (!reference.converged || !sample.converged)
    throw NotConvergedError("thickness_from_shift: fits did not converge");
  if (!(n > 1.0))
    throw DomainError("thickness_from_shift: refractive index must be > 1");

  ThicknessEstimate est;
  est.branch = reference.branch;
  est.n = n;
  est.sigma_n = sigma_n;
  est.delta_xc_m = sample.x_c - reference.x_c;
  est.sigma_xc_m = std::hypot(reference.sigma(4), sample.sigma(4));
  est.d_m = est.delta_xc_m / (n - 1.0);
  const double from_fit = est.sigma_xc_m / (n - 1.0);
  const double from_index =
      std::abs(est.delta_xc_m) * sigma_n / ((n - 1.0) * (n - 1.0));
  est.sigma_m = std::hypot(from_fit, from_index);
  est.negative = est.d_m < 0.0;
  return est;
}

namespace {

nlohmann::json fit_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["y0"] = fit.y0;
  j["amplitude"] = fit.amplitude;
  j["v_rad_per_m"] = fit.v;
  j["phi_rad"] = fit.phi;
  j["x_c_m"] = fit.x_c;
  j["omega_m"] = fit.omega;
  j["sigma"] = {fit.sigma(0), fit.sigma(1), fit.sigma(2),
                fit.sigma(3), fit.sigma(4), fit.sigma(5)};
  j["visibility"] = fit.visibility();
  j["cost"] = fit.cost;
  j["reduced_chi2"] = fit.reduced_chi2;
  j["iterations"] = fit.iterations;
  return j;
}

nlohmann::json fft_to_json(const FftPeak& p) {
  nlohmann::json j;
  j["cycles_per_m"] = p.cycles_per_m;
  j["frequency_THz"] = p.frequency_Hz / 1e12;
  j["peak_amplitude"] = p.peak_amplitude;
  j["noise_floor"] = p.noise_floor;
  j["significance"] = p.significance;
  return j;
}

}  // namespace

nlohmann::json SenseReport::to_json() const {
  nlohmann::json j;
  for (const auto& [branch, a] : branches) {
    nlohmann::json b;
    b["fft_reference"] = fft_to_json(a.fft_reference);
    b["fft_sample"] = fft_to_json(a.fft_sample);
    b["fit_reference"] = fit_to_json(a.fit_reference);
    b["fit_sample"] = fit_to_json(a.fit_sample);
    b["thickness_m"] = a.thickness.d_m;
    b["thickness_sigma_m"] = a.thickness.sigma_m;
    b["envelope_shift_m"] = a.thickness.delta_xc_m;
    b["envelope_shift_sigma_m"] = a.thickness.sigma_xc_m;
    b["negative_flagged"] = a.thickness.negative;
    j["branches"][branch] = b;
  }
  j["combined_thickness_m"] = combined_d_m;
  j["combined_thickness_sigma_m"] = combined_sigma_m;
  return j;
}

SenseReport sense_pipeline(
    const std::map<std::string, std::pair<Interferogram, Interferogram>>&
        reference_and_sample,
    double n, double sigma_n) {
  if (reference_and_sample.empty())
    throw DomainError("sense_pipeline: no branches given");

  SenseReport report;
  double weight_sum = 0.0, weighted_d = 0.0;
  bool all_weighted = true;
  for (const auto& [branch, scans] : reference_and_sample) {
    const auto& [reference, sample] = scans;
    if (reference.position_m != sample.position_m)
      throw DomainError("sense_pipeline(" + branch +
                        "): reference and sample scan grids differ");

    BranchAnalysis a;
    a.fft_reference = fft_peak(reference);
    a.fft_sample = fft_peak(sample);
    a.fit_reference = fit_envelope(reference);
    a.fit_sample = fit_envelope(sample);
    a.thickness = thickness_from_shift(a.fit_reference, a.fit_sample, n,
                                       sigma_n);
    if (a.thickness.sigma_m > 0.0) {
      const double w = 1.0 / (a.thickness.sigma_m * a.thickness.sigma_m);
      weight_sum += w;
      weighted_d += w * a.thickness.d_m;
    } else {
      all_weighted = false;
    }
    report.branches.emplace(branch, std::move(a));
  }
  if (all_weighted && weight_sum > 0.0) {
    report.combined_d_m = weighted_d / weight_sum;
    report.combined_sigma_m = std::sqrt(1.0 / weight_sum);
  } else {
    double sum = 0.0;
    for (const auto& [_, a] : report.branches) sum += a.thickness.d_m;
    report.combined_d_m = sum / report.branches.size();
    report.combined_sigma_m = 0.0;
  }
  return report;
}

}  // namespace thzqs
