#pragma once

// Shared generators and independent oracles for the test suites.  Everything
// here stays out of the library: oracles must not share code with the
// implementation paths they check.

#include <random>
#include <vector>

#include "twistlab/complex.hpp"

namespace twistlab::testing {

using chain::BlockMap;
using chain::FiniteComplex;
using vn::AlgebraPtr;
using vn::Complex;
using vn::HilbertianModule;
using vn::Mat;
using vn::VNAlgebra;

inline std::mt19937 seeded(unsigned seed) { return std::mt19937(seed); }

inline Mat random_complex_matrix(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Mat random_unitary(int n, std::mt19937& rng) {
  Eigen::HouseholderQR<Mat> qr(random_complex_matrix(n, n, rng));
  return Mat(qr.householderQ());
}

inline AlgebraPtr random_algebra(std::mt19937& rng) {
  std::uniform_int_distribution<int> nblocks(1, 3);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> w(0.2, 1.0);
  const int nb = nblocks(rng);
  std::vector<VNAlgebra::Block> blocks(nb);
  double total = 0.0;
  for (auto& b : blocks) {
    b.dim = dim(rng);
    b.weight = w(rng);
    total += b.weight;
  }
  for (auto& b : blocks) b.weight /= total;
  return std::make_shared<VNAlgebra>(blocks);
}

// A random finite complex of free modules built from a rank normal form
// conjugated by random unitaries.  The construction fixes the betti numbers,
// so they serve as a frozen oracle.
struct RandomComplex {
  FiniteComplex complex;
  std::vector<double> betti;  // oracle values per degree
};

inline RandomComplex random_complex(AlgebraPtr alg, int degrees,
                                    std::mt19937& rng) {
  std::uniform_int_distribution<int> mult(1, 3);
  std::uniform_real_distribution<double> sigma(0.2, 2.0);

  std::vector<int> k(degrees + 1);
  for (auto& kk : k) kk = mult(rng);

  const std::size_t nb = alg->block_count();
  // ranks[j][b]: rank of d_j in block b; r_j + r_{j+1} <= n_{j+1}.
  std::vector<std::vector<int>> ranks(degrees, std::vector<int>(nb, 0));
  std::vector<double> betti(degrees + 1, 0.0);
  std::vector<BlockMap> diffs(degrees);

  for (std::size_t b = 0; b < nb; ++b) {
    const int d = alg->block_dim(b);
    const double w = alg->block_weight(b) / d;
    std::vector<int> n(degrees + 1);
    for (int j = 0; j <= degrees; ++j) n[j] = d * k[j];
    int prev = 0;
    for (int j = 0; j < degrees; ++j) {
      const int avail = std::min(n[j] - prev, n[j + 1]);
      ranks[j][b] =
          avail > 0 ? std::uniform_int_distribution<int>(0, avail)(rng) : 0;
      prev = ranks[j][b];
    }
    for (int j = 0; j <= degrees; ++j) {
      const int rj = j < degrees ? ranks[j][b] : 0;
      const int rprev = j > 0 ? ranks[j - 1][b] : 0;
      betti[j] += w * (n[j] - rj - rprev);
    }
    std::vector<Mat> u(degrees + 1);
    for (int j = 0; j <= degrees; ++j) u[j] = random_unitary(n[j], rng);
    for (int j = 0; j < degrees; ++j) {
      const int rprev = j > 0 ? ranks[j - 1][b] : 0;
      Mat core = Mat::Zero(n[j + 1], n[j]);
      for (int i = 0; i < ranks[j][b]; ++i)
        core(i, rprev + i) = sigma(rng);
      if (diffs[j].blocks.size() <= b) diffs[j].blocks.resize(b + 1);
      diffs[j].blocks[b] = u[j + 1] * core * u[j].adjoint();
    }
  }

  std::vector<HilbertianModule> modules;
  for (int j = 0; j <= degrees; ++j)
    modules.push_back(HilbertianModule::free(alg, k[j]));
  return RandomComplex{FiniteComplex(std::move(modules), std::move(diffs)),
                       std::move(betti)};
}

// Brute-force variational oracle for F_k(lambda): maximal trace dimension of
// a subspace of (Ker d)^perp on which ||d w|| <= sqrt(lambda) ||w||.  The
// search enumerates subsets of several bases (coordinate, right-singular and
// random ones); by the min-max principle no subspace can beat the
// singular-count, and the singular basis attains it.
inline double brute_force_F(const FiniteComplex& c, int degree, double lambda,
                            std::mt19937& rng) {
  const auto& alg = c.algebra();
  if (!c.has_differential(degree)) return 0.0;
  double total = 0.0;
  for (std::size_t b = 0; b < c.differential(degree).blocks.size(); ++b) {
    const Mat& dmat = c.differential(degree).blocks[b];
    const double w = alg.block_weight(b) / alg.block_dim(b);
    Eigen::JacobiSVD<Mat> svd(dmat, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-10) ++rank;
    if (rank == 0) continue;
    // Basis of (Ker d)^perp in domain coordinates.
    const Mat coker = svd.matrixV().leftCols(rank);

    std::vector<Mat> bases{Mat::Identity(rank, rank)};
    for (int t = 0; t < 4; ++t) bases.push_back(random_unitary(rank, rng));

    int best = 0;
    for (const auto& basis : bases) {
      for (unsigned mask = 1; mask < (1u << rank); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < rank; ++i)
          if (mask & (1u << i)) idx.push_back(i);
        if (static_cast<int>(idx.size()) <= best) continue;
        Mat span(rank, idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
          span.col(i) = basis.col(idx[i]);
        const Mat restricted = dmat * coker * span;
        Eigen::JacobiSVD<Mat> rsvd(restricted);
        if (rsvd.singularValues()[0] * rsvd.singularValues()[0] <=
            lambda + 1e-12)
          best = static_cast<int>(idx.size());
      }
    }
    total += w * best;
  }
  return total;
}

}  // namespace twistlab::testing
