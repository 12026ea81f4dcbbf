#pragma once

#include <functional>

#include "twistlab/endomorphism.hpp"

namespace twistlab::chain {

using vn::AEndomorphism;
using vn::AlgebraPtr;
using vn::Complex;
using vn::HilbertianModule;
using vn::Mat;
using vn::SpectralDensity;

// A degree-indexed map between modules of a complex (L_j -> L_{j+1} or any
// other pair), stored blockwise like an endomorphism but rectangular.
struct BlockMap {
  std::vector<Mat> blocks;  // one (d_b*k_to) x (d_b*k_from) matrix per block
};

// Finite complex of Hilbertian A-modules with bounded equivariant
// differentials d_j : L_j -> L_{j+1}, d_{j+1} d_j = 0.  All modules share
// one algebra; inner products are the standard tau-induced ones (metric
// weights, where present, are absorbed into the differentials by the
// geometry builders).
class FiniteComplex {
 public:
  FiniteComplex(std::vector<HilbertianModule> modules,
                std::vector<BlockMap> differentials);

  int top_degree() const { return static_cast<int>(modules_.size()) - 1; }
  const std::vector<HilbertianModule>& modules() const { return modules_; }
  const HilbertianModule& module(int j) const { return modules_.at(j); }
  const std::vector<BlockMap>& differentials() const { return differentials_; }

  // d_j as block matrices; zero-shaped maps for j = -1 and j = top.
  const BlockMap& differential(int j) const;
  bool has_differential(int j) const {
    return j >= 0 && j < static_cast<int>(differentials_.size());
  }

  const vn::VNAlgebra& algebra() const { return modules_.front().algebra(); }

 private:
  std::vector<HilbertianModule> modules_;
  std::vector<BlockMap> differentials_;
};

struct ValidationReport {
  bool valid = false;
  double max_d2_violation = 0.0;
  double max_compression_violation = 0.0;
};

// Checks d_{j+1} d_j = 0 and projection compression for every degree.
ValidationReport validate_complex(const FiniteComplex& c, double tol = 1e-10);

// Laplacian Delta_j = d_{j-1} d_{j-1}^* + d_j^* d_j as an endomorphism of L_j.
AEndomorphism laplacian(const FiniteComplex& c, int degree);

// L2 Betti number: trace of the projection onto the kernel of Delta_j,
// i.e. the trace-weighted count of Laplacian eigenvalues below kernel_tol.
double l2_betti(const FiniteComplex& c, int degree, double kernel_tol = 1e-10);

// Ratio (smallest retained eigenvalue) / kernel_tol; large values mean the
// kernel classification is unambiguous.
double kernel_gap_ratio(const FiniteComplex& c, int degree,
                        double kernel_tol = 1e-10);

struct DensitySplit {
  SpectralDensity F_prev;  // F_{k-1}
  double betti = 0.0;      // trace of Ker Delta_k
  SpectralDensity F;       // F_k
  SpectralDensity G;       // G_k from d_{k-1} d_{k-1}^*
  SpectralDensity N;       // spectral density of Delta_k
  double max_split_violation = 0.0;  // |N - (F_prev + b + F)| over the jumps
  double max_fg_violation = 0.0;     // nonzero singular value mismatch F/G
};

// F_k(lambda): trace-weighted count of nonzero singular values sigma of d_k
// with sigma^2 <= lambda (the sqrt-lambda membership convention), together
// with the checked identity N_k = F_{k-1} + b_k + F_k and F_j = G_{j+1}.
DensitySplit density_split(const FiniteComplex& c, int degree,
                           double kernel_tol = 1e-10);

struct EulerReport {
  double chi_modules = 0.0;  // sum (-1)^j dim_tau L_j
  double chi_betti = 0.0;    // sum (-1)^j betti_j
  bool equal = false;
};

EulerReport euler_identity(const FiniteComplex& c, double tol = 1e-8);

struct PartialSumReport {
  std::vector<double> lhs;  // sum_{j<=p} (-1)^{p-j} dim_tau L_j
  std::vector<double> rhs;  // sum_{j<=p} (-1)^{p-j} betti_j
  bool all_hold = false;
};

PartialSumReport morse_partial_sums(const FiniteComplex& c, double tol = 1e-8);

// Chain maps f : c1 -> c2 and g : c2 -> c1 with a homotopy T between g f and
// the identity of c1 (T_j : L_j(c1) -> L_{j-1}(c1)).
struct ChainHomotopyData {
  std::vector<BlockMap> f;
  std::vector<BlockMap> g;
  std::vector<BlockMap> T;  // T[j] : degree j -> degree j-1, T[0] unused
};

struct HomotopyDominationReport {
  bool maps_valid = false;
  double max_identity_violation = 0.0;
  bool dominated = true;      // F_k(c1) << F_k(c2) for all k
  double max_constant = 0.0;  // largest dilation constant over degrees
  bool betti_ok = true;       // betti_k(c1) <= betti_k(c2) + tol
};

// Verifies the chain-map and homotopy identities, then the Gromov-Shubin
// domination of the density functions and Betti numbers.
HomotopyDominationReport homotopy_dilation_check(const FiniteComplex& c1,
                                                 const FiniteComplex& c2,
                                                 const ChainHomotopyData& maps,
                                                 double lambda0,
                                                 double tol = 1e-8);

// Extended cohomology class: projective dimension plus near-zero torsion
// data of the attaching map.
struct ExtendedClass {
  double projective_dim = 0.0;
  SpectralDensity torsion_density;
  bool torsion_present = false;
};

// Decomposes the virtual module (d_in : C^{i-1} -> Z) into projective and
// torsion parts.  Z is the cocycle submodule, given as an orthonormal column
// basis per block; Im d_in must lie in Z (checked).  In a finite-dimensional
// model images are closed, so the torsion flag records absence rather than a
// fabricated density; the Fourier backend produces genuine torsion.
ExtendedClass extended_decompose(const BlockMap& d_in,
                                 const std::vector<Mat>& Z_basis,
                                 const vn::VNAlgebra& algebra,
                                 double kernel_tol = 1e-10);

// Convenience form: degree-i extended cohomology of a complex, Z = Ker d_i.
ExtendedClass extended_decompose(const FiniteComplex& c, int degree,
                                 double kernel_tol = 1e-10);

struct MuBounds {
  double lower = 0.0;                 // dim_tau of the projective part
  std::optional<int> factor_torsion;  // = 1 when the algebra is a factor
};

MuBounds mu_bounds(const ExtendedClass& e, bool algebra_is_factor);

}  // namespace twistlab::chain
