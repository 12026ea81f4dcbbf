#include "twistlab/ns_fit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace twistlab::spectral {

namespace {

// Incomplete-gamma-free theta for power laws:
// int_g^inf e^{-t l} d[c (l-g)^p] = c Gamma(p+1) t^{-p} e^{-t g}.
double power_law_theta(const vn::SpectralDensity& N, double t) {
  return N.coefficient() * std::tgamma(N.exponent() + 1.0) *
         std::pow(t, -N.exponent()) * std::exp(-t * N.gap());
}

struct SlopeFit {
  double slope = 0.0;
  double residual = 0.0;
  int points = 0;
};

SlopeFit log_log_slope(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  SlopeFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] <= 0.0) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  fit.points = n;
  if (n < 2) return fit;
  const double det = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] <= 0.0) continue;
    const double pred = intercept + fit.slope * std::log(xs[i]);
    fit.residual = std::max(fit.residual, std::abs(pred - std::log(ys[i])));
  }
  return fit;
}

}  // namespace

NSFit ns_fit(const vn::SpectralDensity& N, double b, double window_min,
             double window_max, int samples) {
  if (!(window_min > 0.0) || !(window_max > window_min))
    throw std::invalid_argument("ns_fit: empty window");
  NSFit out;
  out.window_min = window_min;
  out.window_max = window_max;

  std::vector<double> xs, ys;
  for (int i = 0; i < samples; ++i) {
    const double lambda =
        window_min *
        std::pow(window_max / window_min, double(i) / (samples - 1));
    xs.push_back(lambda);
    ys.push_back(N.value(lambda) - b);
  }

  bool all_zero = true;
  for (double y : ys)
    if (y > 1e-14) all_zero = false;
  if (all_zero) {
    out.gap_flag = true;
    // measured gap: where the density first exceeds b
    double lo = window_max, hi = window_max;
    while (N.value(hi) - b <= 1e-14 && hi < 1e12) hi *= 2.0;
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (N.value(mid) - b <= 1e-14)
        lo = mid;
      else
        hi = mid;
    }
    out.gap_value = hi;
    return out;
  }

  const auto fit = log_log_slope(xs, ys);
  out.alpha = fit.slope;
  out.alpha_bar = fit.slope;
  out.residual = fit.residual;
  return out;
}

double theta_function(const vn::SpectralDensity& N, double t,
                      double kernel_tol) {
  if (!(t > 0.0)) throw std::invalid_argument("theta_function: t <= 0");
  if (!N.is_step()) return power_law_theta(N, t);
  double theta = 0.0;
  for (const auto& j : N.jumps()) {
    if (j.lambda <= kernel_tol) continue;  // the kernel jump is excluded
    theta += j.height * std::exp(-t * j.lambda);
  }
  return theta;
}

double theta_decay_exponent(const vn::SpectralDensity& N, double t_min,
                            double t_max, int samples, double kernel_tol) {
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw std::invalid_argument("theta_decay_exponent: bad time window");
  std::vector<double> xs, ys;
  for (int i = 0; i < samples; ++i) {
    const double t =
        t_min * std::pow(t_max / t_min, double(i) / (samples - 1));
    xs.push_back(t);
    ys.push_back(theta_function(N, t, kernel_tol));
  }
  const auto fit = log_log_slope(xs, ys);
  return -fit.slope;
}

}  // namespace twistlab::spectral
