#pragma once

#include "twistlab/hilbert_module.hpp"
#include "twistlab/spectral_density.hpp"

namespace twistlab::vn {

// An endomorphism of a Hilbertian module, i.e. an element of the commutant
// B_A(M).  Stored as one dense matrix per algebra block, compressed by the
// module projection: F_b = P_b F_b P_b.  Commutation with the left action
// of A holds structurally in this representation.
class AEndomorphism {
 public:
  AEndomorphism(HilbertianModule module, std::vector<Mat> blocks,
                bool check_compression = true);

  static AEndomorphism identity(const HilbertianModule& m);
  static AEndomorphism zero(const HilbertianModule& m);

  const HilbertianModule& module() const { return module_; }
  const std::vector<Mat>& blocks() const { return blocks_; }
  const Mat& block(std::size_t b) const { return blocks_[b]; }

  AEndomorphism adjoint() const;
  bool is_self_adjoint(double tol = 1e-10) const;

  friend AEndomorphism operator*(const AEndomorphism& f, const AEndomorphism& g);
  friend AEndomorphism operator+(const AEndomorphism& f, const AEndomorphism& g);
  friend AEndomorphism operator-(const AEndomorphism& f, const AEndomorphism& g);
  AEndomorphism scaled(Complex c) const;

 private:
  HilbertianModule module_;
  std::vector<Mat> blocks_;
};

// Canonical trace on the commutant, Tr_tau(f) = sum_i tau(f_ii) through any
// free embedding.  In the block representation this is
// sum_b (weight_b / d_b) * tr(F_b); independence of the embedding is a
// tested invariant.
Complex commutant_trace(const AEndomorphism& f);

// Spectral density of a self-adjoint endomorphism: N(lambda) = Tr_tau of the
// spectral projection for (-inf, lambda], computed by a full symmetric
// eigendecomposition per block restricted to the module's range.
// Throws if f fails the self-adjointness check.
SpectralDensity spectral_density(const AEndomorphism& f, double sa_tol = 1e-10);

// Eigenvalues restricted to the module range, with trace weights.
std::vector<std::pair<double, double>> weighted_spectrum(const AEndomorphism& f,
                                                         double sa_tol = 1e-10);

}  // namespace twistlab::vn
