#pragma once

#include "twistlab/vn_algebra.hpp"

namespace twistlab::vn {

// A finitely generated Hilbertian module over a multi-matrix algebra,
// presented as the range of a self-adjoint idempotent acting in the
// commutant of the free module l2(A) (x) C^k.
//
// Block b of the free module carries the commutant matrix algebra of size
// d_b * k; the projection is stored blockwise in that representation.  The
// identity projection yields the free module of multiplicity k.
class HilbertianModule {
 public:
  HilbertianModule(AlgebraPtr algebra, int multiplicity,
                   std::vector<Mat> projection);

  static HilbertianModule free(AlgebraPtr algebra, int multiplicity);

  const VNAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  int multiplicity() const { return multiplicity_; }
  const std::vector<Mat>& projection() const { return projection_; }
  const Mat& projection(std::size_t b) const { return projection_[b]; }
  bool is_free() const { return free_; }

  // Commutant matrix size of block b (= d_b * multiplicity).
  int block_size(std::size_t b) const {
    return algebra_->block_dim(b) * multiplicity_;
  }

  // Orthonormal basis of the range of the block-b projection (columns).
  const Mat& range_basis(std::size_t b) const { return range_basis_[b]; }
  int range_dim(std::size_t b) const {
    return static_cast<int>(range_basis_[b].cols());
  }

  bool compatible_with(const HilbertianModule& other) const {
    return algebra_->same_shape(other.algebra());
  }

 private:
  AlgebraPtr algebra_;
  int multiplicity_;
  std::vector<Mat> projection_;
  std::vector<Mat> range_basis_;
  bool free_ = false;
};

// von Neumann dimension: trace of the module's defining projection.
// Additive over direct sums, real-valued, in [0, multiplicity].
double dim_tau(const HilbertianModule& m);

}  // namespace twistlab::vn
