#pragma once

#include <array>

#include "twistlab/complex.hpp"
#include "twistlab/spectral_density.hpp"

namespace twistlab::spectral {

// Exact Fourier-multiplier backend for the flat torus R^n / Z^n with a
// constant twist covector.  On the Fourier mode xi the twisted differential
// acts as exterior multiplication by eta = 2 pi i xi + s theta, and the
// Laplacian is block diagonal over modes.
struct MultiplierModel {
  int n = 1;
  std::array<double, 3> theta{0.0, 0.0, 0.0};
  double s = 1.0;

  MultiplierModel(int dim, std::array<double, 3> twist, double scale = 1.0)
      : n(dim), theta(twist), s(scale) {
    if (n < 1 || n > 3)
      throw std::invalid_argument("MultiplierModel: n must be 1..3");
  }

  double twist_norm2() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += theta[i] * theta[i];
    return s * s * t;
  }

  // Exterior multiplication by a complex covector, degree j -> j+1, in the
  // subset basis of Lambda^j ordered lexicographically.
  vn::Mat wedge_matrix(const Eigen::VectorXcd& eta, int degree) const;

  // Twisted Laplacian on one Fourier mode, degree j.
  vn::Mat symbol(const std::array<double, 3>& xi, int degree) const;

  // Lie-derivative symbol of the field dual to a constant covector alpha.
  vn::Mat lie_symbol(const std::array<double, 3>& alpha,
                     const std::array<double, 3>& xi, int degree) const;

  // Bottom of the L2 spectrum in any degree: rides at s^2 |theta|^2.
  double lambda0() const { return twist_norm2(); }
};

// Closed band-volume density of Delta_{s theta, j} per unit cell:
// N_j(lambda) = binom(n, j) vol{ t : |2 pi t|^2 + s^2|theta|^2 <= lambda }.
vn::SpectralDensity exact_flat_density(int n,
                                       const std::array<double, 3>& theta,
                                       int degree, double s = 1.0);

struct AnticommutatorReport {
  bool applicable = false;
  double first_order_defect = 0.0;   // vs L_V + L_V^* + 2 <alpha, beta>
  double second_order_defect = 0.0;  // vs |alpha|^2 id
  double expansion_defect = 0.0;     // full identity at sampled s
};

// Verifies Delta_{beta+s alpha} = Delta_beta + s (L_V + L_V^* + 2<a,b>)
//   + s^2 |alpha|^2 by assembling both sides on sampled Fourier modes; the
// polynomial coefficients are extracted from s in {0, 1, -1}.
AnticommutatorReport anticommutator_check(int n,
                                          const std::array<double, 3>& alpha,
                                          const std::array<double, 3>& beta,
                                          int degree, int mode_samples = 4);

// Degree-j extended cohomology data in the multiplier model: projective part
// always vanishes, and the torsion density is the gapless band density when
// the twist class is zero.
chain::ExtendedClass multiplier_extended_class(int n,
                                               const std::array<double, 3>& theta,
                                               int degree, double s = 1.0);

}  // namespace twistlab::spectral
