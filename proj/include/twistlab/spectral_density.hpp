#pragma once

#include <optional>
#include <ostream>
#include <utility>
#include <vector>

namespace twistlab::vn {

// Right-continuous nondecreasing function lambda -> N(lambda) with N = 0 on
// (-inf, 0).  Two representations: a finite step function with trace-weighted
// jumps (matrix backends) and the closed band-volume form
// N(lambda) = coefficient * (lambda - gap)^exponent for lambda >= gap
// (flat Fourier backend).
class SpectralDensity {
 public:
  struct Jump {
    double lambda = 0.0;
    double height = 0.0;
  };

  SpectralDensity() = default;

  // Builds a step density from (eigenvalue, trace weight) pairs; values are
  // merged when closer than merge_tol.
  static SpectralDensity step(std::vector<std::pair<double, double>> jumps,
                              double merge_tol = 0.0);

  static SpectralDensity power_law(double coefficient, double exponent,
                                   double gap = 0.0);

  bool is_step() const { return is_step_; }
  double value(double lambda) const;
  double total() const;  // N(+infinity); infinite for power laws

  // Mass strictly inside [0, tol]; used as the kernel weight b = N(0+).
  double mass_at_zero(double tol = 1e-10) const;

  const std::vector<Jump>& jumps() const { return jumps_; }
  double coefficient() const { return coefficient_; }
  double exponent() const { return exponent_; }
  double gap() const { return gap_; }

  // Pointwise sum (step densities only).
  SpectralDensity& operator+=(const SpectralDensity& other);
  SpectralDensity scaled(double factor) const;

  void write_csv(std::ostream& os, int closed_form_samples = 512,
                 double lambda_max = 1.0) const;

 private:
  bool is_step_ = true;
  std::vector<Jump> jumps_;      // sorted by lambda
  double coefficient_ = 0.0;
  double exponent_ = 1.0;
  double gap_ = 0.0;
};

struct DilationReport {
  bool dominated = false;   // F(lambda) <= G(C lambda) on (0, lambda0)
  double constant = 0.0;    // smallest sampled C that works
  bool equivalent = false;  // set by dilation_equivalent
};

// Decides F << G on a geometric sample of (0, lambda0), searching the
// constant over C in {1, 2, 4, ..., 2^20}.
DilationReport dilation_compare(const SpectralDensity& F,
                                const SpectralDensity& G, double lambda0,
                                int samples = 256);

DilationReport dilation_equivalent(const SpectralDensity& F,
                                   const SpectralDensity& G, double lambda0);

}  // namespace twistlab::vn
