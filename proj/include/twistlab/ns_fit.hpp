#pragma once

#include "twistlab/spectral_density.hpp"

namespace twistlab::spectral {

// Power-law fit of a spectral density near zero.  alpha is reported as a
// gap flag (not a float) when N - b vanishes on the whole window.
struct NSFit {
  double alpha = 0.0;
  double alpha_bar = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  double residual = 0.0;
  bool gap_flag = false;
  double gap_value = 0.0;  // measured spectral gap when flagged
};

// Log-log least-squares slope of N(lambda) - b over a geometric grid inside
// [window_min, window_max].  Throws if the window is empty or inverted.
NSFit ns_fit(const vn::SpectralDensity& N, double b, double window_min,
             double window_max, int samples = 48);

// Theta function Theta(t) = int e^{-t lambda} dN over (0, infinity); the
// jump at zero (the kernel mass b) is excluded.  t must be positive.
double theta_function(const vn::SpectralDensity& N, double t,
                      double kernel_tol = 1e-10);

// Decay exponent of the theta function: least-squares slope of -log Theta
// against log t over a geometric grid of times.  Tauberian counterpart of
// ns_fit for power-law densities.
double theta_decay_exponent(const vn::SpectralDensity& N, double t_min,
                            double t_max, int samples = 32,
                            double kernel_tol = 1e-10);

}  // namespace twistlab::spectral
