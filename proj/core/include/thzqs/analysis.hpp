#ifndef THZQS_ANALYSIS_HPP
#define THZQS_ANALYSIS_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thzqs/interferogram.hpp"

namespace thzqs {

enum class FftWindow { None, Hann };

struct FftPeak {
  double cycles_per_m;     // fringe frequency per meter of delta_l
  double frequency_Hz;     // terahertz equivalent, c * cycles_per_m
  double peak_amplitude;   // quadratically interpolated magnitude
  double noise_floor;      // median magnitude away from the peak
  double significance;     // peak / floor (1 when the spectrum is empty)
};

/// Mean-subtracted, windowed FFT over the delta_l grid with the peak refined
/// by quadratic interpolation over 3 bins. Requires a uniform grid of at
/// least 64 points (NonUniformGrid/TooShort reported via errors).
FftPeak fft_peak(const Interferogram& scan, FftWindow window = FftWindow::Hann);

struct FitTracePoint {
  int iteration;
  double cost;
  double lambda;
  bool accepted;
};

/// f(x) = y0 + A sin(v x + phi) exp(-(x - x_c)^2 / (2 w^2)) in the stage
/// coordinate, with the 6x6 covariance from the Jacobian at the optimum
/// scaled by the reduced chi-square.
struct FitResult {
  double y0 = 0, amplitude = 0, v = 0, phi = 0, x_c = 0, omega = 0;
  Eigen::Matrix<double, 6, 6> covariance =
      Eigen::Matrix<double, 6, 6>::Zero();
  double cost = 0;           // sum of squared weighted residuals
  double reduced_chi2 = 0;
  bool converged = false;
  int iterations = 0;
  std::vector<FitTracePoint> trace;
  std::string branch;

  std::array<double, 6> parameters() const {
    return {y0, amplitude, v, phi, x_c, omega};
  }
  double sigma(int i) const { return std::sqrt(covariance(i, i)); }
  double visibility() const { return amplitude / y0; }
};

struct FitInit {
  std::optional<double> y0, amplitude, v, phi, x_c, omega;
};

/// Envelope-model evaluation and its analytic Jacobian (exposed for the
/// finite-difference gradient checks).
double envelope_model(const std::array<double, 6>& p, double x);
std::array<double, 6> envelope_jacobian(const std::array<double, 6>& p,
                                        double x);

/// Data-driven starting point: median level, FFT-seeded fringe frequency,
/// quantile amplitude, smoothed-profile centroid and RMS width, 1-D phase
/// grid search.
std::array<double, 6> initialize_fit(const Interferogram& scan);

/// Damped least squares (Levenberg-Marquardt) with monotone accepted-step
/// cost; converged when the relative cost change < 1e-10 or the step norm
/// < 1e-12. Throws EnvelopeAtEdgeError when the envelope peak sits on the
/// grid boundary and NotConvergedError (with its trace) past the iteration
/// cap.
FitResult fit_envelope(const Interferogram& scan, const FitInit& init = {});

struct ThicknessEstimate {
  double d_m = 0;
  double sigma_m = 0;
  double delta_xc_m = 0;
  double sigma_xc_m = 0;
  double n = 0, sigma_n = 0;
  std::string branch;
  bool negative = false;  // flagged when the signed estimate is < 0
};

/// d = delta_x_c / (n - 1) from the envelope-center shift in stage
/// coordinates; sigma combines the fit and index uncertainties in
/// quadrature.
ThicknessEstimate thickness_from_shift(const FitResult& reference,
                                       const FitResult& sample, double n,
                                       double sigma_n);

struct BranchAnalysis {
  FftPeak fft_reference, fft_sample;
  FitResult fit_reference, fit_sample;
  ThicknessEstimate thickness;
};

struct SenseReport {
  std::map<std::string, BranchAnalysis> branches;
  double combined_d_m = 0;
  double combined_sigma_m = 0;

  nlohmann::json to_json() const;
};

/// Full measurement pipeline over one or both branches; scans must share
/// the scan geometry per branch.
SenseReport sense_pipeline(
    const std::map<std::string, std::pair<Interferogram, Interferogram>>&
        reference_and_sample,
    double n, double sigma_n);

}  // namespace thzqs

#endif
