#include <cmath>

#include "thzqs/analysis.hpp"
#include "thzqs/constants.hpp"
#include "thzqs/errors.hpp"

namespace thzqs {

double envelope_model(const std::array<double, 6>& p, double x) {
  const double u = x - p[4];
  const double env = std::exp(-u * u / (2.0 * p[5] * p[5]));
  return p[0] + p[1] * std::sin(p[2] * x + p[3]) * env;
}

std::array<double, 6> envelope_jacobian(const std::array<double, 6>& p,
                                        double x) {
  const double u = x - p[4];
  const double w = p[5];
  const double env = std::exp(-u * u / (2.0 * w * w));
  const double s = std::sin(p[2] * x + p[3]);
  const double c = std::cos(p[2] * x + p[3]);
  return {1.0,
          s * env,
          p[1] * c * x * env,
          p[1] * c * env,
          p[1] * s * env * u / (w * w),
          p[1] * s * env * u * u / (w * w * w)};
}

namespace {

struct WeightedData {
  const std::vector<double>& x;
  const std::vector<double>& y;
  std::vector<double> weight;  // 1/sigma, or 1
};

double cost_of(const WeightedData& d, const std::array<double, 6>& p) {
  double cost = 0.0;
  for (std::size_t k = 0; k < d.x.size(); ++k) {
    const double r = (envelope_model(p, d.x[k]) - d.y[k]) * d.weight[k];
    cost += r * r;
  }
  return cost;
}

}  // namespace

FitResult fit_envelope(const Interferogram& scan, const FitInit& init) {
  scan.validate();
  const std::size_t m = scan.size();
  if (m < 16) throw FitError("fit_envelope: too few points");

  // Precondition: the envelope peak must lie inside the scan.
  {
    std::vector<double> sorted = scan.rate;
    std::nth_element(sorted.begin(), sorted.begin() + m / 2, sorted.end());
    const double median = sorted[m / 2];
    std::size_t argmax = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double v = std::abs(scan.rate[k] - median);
      if (v > best) {
        best = v;
        argmax = k;
      }
    }
    if (argmax == 0 || argmax + 1 == m)
      throw EnvelopeAtEdgeError(
          "fit_envelope: envelope peak at the scan boundary");
  }

  WeightedData data{scan.position_m, scan.rate, {}};
  data.weight.assign(m, 1.0);
  bool weighted = !scan.rate_sigma.empty();
  for (double s : scan.rate_sigma)
    if (!(s > 0.0)) weighted = false;
  if (weighted)
    for (std::size_t k = 0; k < m; ++k) data.weight[k] = 1.0 / scan.rate_sigma[k];

  auto p = initialize_fit(scan);
  const auto apply = [&](std::optional<double> v, int i) {
    if (v) p[i] = *v;
  };
  apply(init.y0, 0);
  apply(init.amplitude, 1);
  apply(init.v, 2);
  apply(init.phi, 3);
  apply(init.x_c, 4);
  apply(init.omega, 5);

  FitResult result;
  result.branch = scan.branch;

  const int kMaxIterations = 400;
  double lambda = 1e-3;
  double cost = cost_of(data, p);
  const double span =
      scan.position_m.back() - scan.position_m.front();

  Eigen::Matrix<double, 6, 6> jtj;
  Eigen::Matrix<double, 6, 1> jtr;

  int iter = 0;
  bool converged = false;
  for (; iter < kMaxIterations && !converged; ++iter) {
    jtj.setZero();
    jtr.setZero();
    for (std::size_t k = 0; k < m; ++k) {
      const auto j = envelope_jacobian(p, data.x[k]);
      const double wk = data.weight[k];
      const double r = (envelope_model(p, data.x[k]) - data.y[k]) * wk;
      for (int a = 0; a < 6; ++a) {
        jtr(a) += j[a] * wk * r;
        for (int b = a; b < 6; ++b) jtj(a, b) += j[a] * wk * j[b] * wk;
      }
    }
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < a; ++b) jtj(a, b) = jtj(b, a);

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      Eigen::Matrix<double, 6, 6> damped = jtj;
      for (int a = 0; a < 6; ++a)
        damped(a, a) += lambda * std::max(jtj(a, a), 1e-300);
      const Eigen::Matrix<double, 6, 1> step = damped.ldlt().solve(jtr);

      std::array<double, 6> trial = p;
      for (int a = 0; a < 6; ++a) trial[a] -= step(a);
      const bool feasible =
          trial[5] > 0.0 && trial[5] < 10.0 * span && std::isfinite(trial[5]);
      const double trial_cost =
          feasible ? cost_of(data, trial)
                   : std::numeric_limits<double>::infinity();

      result.trace.push_back({iter, trial_cost, lambda, trial_cost < cost});
      if (trial_cost < cost) {
        const double rel_drop = (cost - trial_cost) / std::max(cost, 1e-300);
        p = trial;
        cost = trial_cost;
        lambda = std::max(lambda * 0.3, 1e-14);
        accepted = true;
        if (rel_drop < 1e-10 || step.norm() < 1e-12) converged = true;
      } else {
        lambda *= 5.0;
        if (lambda > 1e14) break;
      }
    }
    if (!accepted) {
      // Stuck at a cost plateau: treat as converged if the gradient is flat.
      converged = true;
    }
  }

  // Fold the amplitude sign into the phase.
  if (p[1] < 0.0) {
    p[1] = -p[1];
    p[3] += constants::pi;
  }
  if (p[5] < 0.0) p[5] = -p[5];

  result.y0 = p[0];
  result.amplitude = p[1];
  result.v = p[2];
  result.phi = p[3];
  result.x_c = p[4];
  result.omega = p[5];
  result.cost = cost;
  result.iterations = iter;
  result.converged = converged;

  if (!converged)
    throw NotConvergedError("fit_envelope: no convergence after " +
                            std::to_string(iter) + " iterations (cost " +
                            std::to_string(cost) + ")");

  // Covariance from the Jacobian at the optimum, scaled by reduced chi2.
  jtj.setZero();
  for (std::size_t k = 0; k < m; ++k) {
    const auto j = envelope_jacobian(p, data.x[k]);
    const double wk = data.weight[k];
    for (int a = 0; a < 6; ++a)
      for (int b = a; b < 6; ++b) jtj(a, b) += j[a] * wk * j[b] * wk;
  }
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < a; ++b) jtj(a, b) = jtj(b, a);
  result.reduced_chi2 = m > 6 ? cost / (m - 6.0) : 0.0;
  Eigen::Matrix<double, 6, 6> cov =
      jtj.completeOrthogonalDecomposition().pseudoInverse() *
      result.reduced_chi2;
  result.covariance = 0.5 * (cov + cov.transpose());
  return result;
}

}  // namespace thzqs
