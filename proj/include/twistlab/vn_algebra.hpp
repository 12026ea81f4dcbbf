#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace twistlab::vn {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// A finite direct sum of full matrix blocks M_{d}(C) with a weighted
// normalized trace.  tau(a) = sum_b weight_b * tr(a_b)/d_b, so tau(1) = 1
// whenever the weights sum to one.
class VNAlgebra {
 public:
  struct Block {
    int dim = 1;
    double weight = 1.0;
  };

  explicit VNAlgebra(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::invalid_argument("VNAlgebra: no blocks");
    double total = 0.0;
    for (const auto& b : blocks_) {
      if (b.dim < 1) throw std::invalid_argument("VNAlgebra: block dim < 1");
      if (b.weight <= 0.0)
        throw std::invalid_argument("VNAlgebra: block weight <= 0");
      total += b.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("VNAlgebra: weights must sum to 1");
  }

  // The scalars, A = C with trace the identity map.
  static std::shared_ptr<const VNAlgebra> trivial() {
    return std::make_shared<VNAlgebra>(std::vector<Block>{{1, 1.0}});
  }

  // Group algebra of Z/k decomposed into k characters (k 1x1 blocks of
  // weight 1/k).  The trace is evaluation at the identity element.
  static std::shared_ptr<const VNAlgebra> cyclic_group(int k) {
    if (k < 1) throw std::invalid_argument("cyclic_group: k < 1");
    return std::make_shared<VNAlgebra>(
        std::vector<Block>(k, Block{1, 1.0 / k}));
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  int block_dim(std::size_t b) const { return blocks_[b].dim; }
  double block_weight(std::size_t b) const { return blocks_[b].weight; }

  bool same_shape(const VNAlgebra& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      if (blocks_[b].dim != other.blocks_[b].dim ||
          std::abs(blocks_[b].weight - other.blocks_[b].weight) > 1e-12)
        return false;
    return true;
  }

 private:
  std::vector<Block> blocks_;
};

using AlgebraPtr = std::shared_ptr<const VNAlgebra>;

// An element of the algebra: one dense matrix per block.
struct AlgebraElement {
  std::vector<Mat> blocks;

  static AlgebraElement identity(const VNAlgebra& a) {
    AlgebraElement e;
    for (const auto& b : a.blocks())
      e.blocks.push_back(Mat::Identity(b.dim, b.dim));
    return e;
  }

  static AlgebraElement zero(const VNAlgebra& a) {
    AlgebraElement e;
    for (const auto& b : a.blocks()) e.blocks.push_back(Mat::Zero(b.dim, b.dim));
    return e;
  }

  AlgebraElement adjoint() const {
    AlgebraElement e;
    for (const auto& m : blocks) e.blocks.push_back(m.adjoint());
    return e;
  }
};

inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.blocks.size() != y.blocks.size())
    throw std::invalid_argument("AlgebraElement: block count mismatch");
  AlgebraElement z;
  for (std::size_t b = 0; b < x.blocks.size(); ++b)
    z.blocks.push_back(x.blocks[b] * y.blocks[b]);
  return z;
}

// Normalized trace tau on the algebra.  Throws on a shape mismatch between
// the element and the algebra's block structure.
Complex trace_tau(const VNAlgebra& algebra, const AlgebraElement& a);

}  // namespace twistlab::vn
