#include "twistlab/complex.hpp"

#include <algorithm>
#include <cmath>

namespace twistlab::chain {

namespace {

// Trace weight of one commutant-matrix slot in block b.
double slot_weight(const vn::VNAlgebra& alg, std::size_t b) {
  return alg.block_weight(b) / alg.block_dim(b);
}

// Nonzero singular values of a block map with their trace weights.
std::vector<std::pair<double, double>> weighted_singular_values(
    const vn::VNAlgebra& alg, const BlockMap& d, double kernel_tol) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    if (d.blocks[b].size() == 0) continue;
    Eigen::JacobiSVD<Mat> svd(d.blocks[b]);
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      const double s = svd.singularValues()[i];
      if (s * s > kernel_tol) out.emplace_back(s, slot_weight(alg, b));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Mat compose_or_zero(const Mat& a, const Mat& b) {
  if (a.size() == 0 || b.size() == 0) return Mat();
  return a * b;
}

}  // namespace

FiniteComplex::FiniteComplex(std::vector<HilbertianModule> modules,
                             std::vector<BlockMap> differentials)
    : modules_(std::move(modules)), differentials_(std::move(differentials)) {
  if (modules_.empty()) throw std::invalid_argument("FiniteComplex: no modules");
  if (differentials_.size() + 1 != modules_.size())
    throw std::invalid_argument("FiniteComplex: need one differential per pair");
  for (std::size_t j = 0; j + 1 < modules_.size(); ++j) {
    if (!modules_[j].compatible_with(modules_[j + 1]))
      throw std::invalid_argument("FiniteComplex: algebra mismatch");
    const auto& d = differentials_[j];
    if (d.blocks.size() != modules_[j].projection().size())
      throw std::invalid_argument("FiniteComplex: differential block count");
    for (std::size_t b = 0; b < d.blocks.size(); ++b)
      if (d.blocks[b].rows() != modules_[j + 1].block_size(b) ||
          d.blocks[b].cols() != modules_[j].block_size(b))
        throw std::invalid_argument("FiniteComplex: differential shape");
  }
}

const BlockMap& FiniteComplex::differential(int j) const {
  static const BlockMap empty;
  if (j < 0 || j >= static_cast<int>(differentials_.size())) return empty;
  return differentials_[j];
}

ValidationReport validate_complex(const FiniteComplex& c, double tol) {
  ValidationReport rep;
  for (int j = 0; j + 1 < static_cast<int>(c.differentials().size()) + 1; ++j) {
    if (!c.has_differential(j) || !c.has_differential(j + 1)) continue;
    const auto& d0 = c.differential(j);
    const auto& d1 = c.differential(j + 1);
    for (std::size_t b = 0; b < d0.blocks.size(); ++b) {
      const Mat dd = compose_or_zero(d1.blocks[b], d0.blocks[b]);
      if (dd.size() != 0)
        rep.max_d2_violation = std::max(rep.max_d2_violation, dd.norm());
    }
  }
  // Differentials must be compressed by the projections on both sides.
  for (int j = 0; c.has_differential(j); ++j) {
    const auto& d = c.differential(j);
    const auto& from = c.module(j);
    const auto& to = c.module(j + 1);
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
      const Mat comp = to.projection(b) * d.blocks[b] * from.projection(b);
      rep.max_compression_violation =
          std::max(rep.max_compression_violation, (comp - d.blocks[b]).norm());
    }
  }
  rep.valid = rep.max_d2_violation <= tol && rep.max_compression_violation <= tol;
  return rep;
}

AEndomorphism laplacian(const FiniteComplex& c, int degree) {
  if (degree < 0 || degree > c.top_degree())
    throw std::invalid_argument("laplacian: degree out of range");
  const auto& m = c.module(degree);
  std::vector<Mat> blocks;
  for (std::size_t b = 0; b < m.projection().size(); ++b) {
    const int n = m.block_size(b);
    Mat delta = Mat::Zero(n, n);
    if (c.has_differential(degree)) {
      const Mat& d = c.differential(degree).blocks[b];
      delta += d.adjoint() * d;
    }
    if (c.has_differential(degree - 1)) {
      const Mat& d = c.differential(degree - 1).blocks[b];
      delta += d * d.adjoint();
    }
    blocks.push_back(std::move(delta));
  }
  return AEndomorphism(m, std::move(blocks), false);
}

double l2_betti(const FiniteComplex& c, int degree, double kernel_tol) {
  const auto eigs = weighted_spectrum(laplacian(c, degree));
  double b = 0.0;
  for (const auto& [lambda, w] : eigs)
    if (lambda < kernel_tol) b += w;
  return b;
}

double kernel_gap_ratio(const FiniteComplex& c, int degree, double kernel_tol) {
  const auto eigs = weighted_spectrum(laplacian(c, degree));
  for (const auto& [lambda, w] : eigs)
    if (lambda >= kernel_tol) return lambda / kernel_tol;
  return std::numeric_limits<double>::infinity();
}

DensitySplit density_split(const FiniteComplex& c, int degree,
                           double kernel_tol) {
  if (degree < 0 || degree > c.top_degree())
    throw std::invalid_argument("density_split: degree out of range");
  const auto& alg = c.algebra();
  DensitySplit out;

  auto to_density = [](const std::vector<std::pair<double, double>>& svs) {
    std::vector<std::pair<double, double>> jumps;
    jumps.reserve(svs.size());
    for (const auto& [s, w] : svs) jumps.emplace_back(s * s, w);
    return SpectralDensity::step(std::move(jumps), 0.0);
  };

  const auto sv_k = c.has_differential(degree)
                        ? weighted_singular_values(alg, c.differential(degree),
                                                   kernel_tol)
                        : std::vector<std::pair<double, double>>{};
  const auto sv_prev =
      c.has_differential(degree - 1)
          ? weighted_singular_values(alg, c.differential(degree - 1), kernel_tol)
          : std::vector<std::pair<double, double>>{};

  out.F = to_density(sv_k);
  out.F_prev = to_density(sv_prev);
  out.betti = l2_betti(c, degree, kernel_tol);
  out.N = spectral_density(laplacian(c, degree));

  // G_k is the density of d_{k-1} d_{k-1}^* away from its kernel; its
  // nonzero singular values agree with F_{k-1} exactly.
  if (c.has_differential(degree - 1)) {
    BlockMap gd;
    for (const auto& m : c.differential(degree - 1).blocks)
      gd.blocks.push_back(m.adjoint());
    const auto sv_g = weighted_singular_values(alg, gd, kernel_tol);
    out.G = to_density(sv_g);
    out.max_fg_violation = 0.0;
    if (sv_g.size() != sv_prev.size()) {
      out.max_fg_violation = std::numeric_limits<double>::infinity();
    } else {
      for (std::size_t i = 0; i < sv_g.size(); ++i)
        out.max_fg_violation = std::max(
            out.max_fg_violation, std::abs(sv_g[i].first - sv_prev[i].first));
    }
  }

  // N_k = F_{k-1} + b_k + F_k pointwise.  Probe midway between consecutive
  // jump positions so eigensolver jitter in the positions is tolerated;
  // jumps closer than the jitter scale count as simultaneous.
  std::vector<double> pos{0.0};
  for (const auto& j : out.N.jumps()) pos.push_back(j.lambda);
  for (const auto& j : out.F.jumps()) pos.push_back(j.lambda);
  for (const auto& j : out.F_prev.jumps()) pos.push_back(j.lambda);
  std::sort(pos.begin(), pos.end());
  double scale = 1.0;
  for (double p : pos) scale = std::max(scale, std::abs(p));
  std::vector<double> probes;
  for (std::size_t i = 0; i + 1 < pos.size(); ++i)
    if (pos[i + 1] - pos[i] > 1e-6 * scale)
      probes.push_back(0.5 * (pos[i] + pos[i + 1]));
  probes.push_back(pos.back() + scale);
  for (double lambda : probes) {
    const double lhs = out.N.value(lambda);
    const double rhs =
        out.F_prev.value(lambda) + out.betti + out.F.value(lambda);
    out.max_split_violation =
        std::max(out.max_split_violation, std::abs(lhs - rhs));
  }
  return out;
}

EulerReport euler_identity(const FiniteComplex& c, double tol) {
  EulerReport rep;
  for (int j = 0; j <= c.top_degree(); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    rep.chi_modules += sign * dim_tau(c.module(j));
    rep.chi_betti += sign * l2_betti(c, j);
  }
  rep.equal = std::abs(rep.chi_modules - rep.chi_betti) <= tol;
  return rep;
}

PartialSumReport morse_partial_sums(const FiniteComplex& c, double tol) {
  PartialSumReport rep;
  rep.all_hold = true;
  std::vector<double> m, bb;
  for (int j = 0; j <= c.top_degree(); ++j) {
    m.push_back(dim_tau(c.module(j)));
    bb.push_back(l2_betti(c, j));
  }
  for (int p = 0; p <= c.top_degree(); ++p) {
    double lhs = 0.0, rhs = 0.0;
    for (int j = 0; j <= p; ++j) {
      const double sign = ((p - j) % 2 == 0) ? 1.0 : -1.0;
      lhs += sign * m[j];
      rhs += sign * bb[j];
    }
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    if (lhs < rhs - tol) rep.all_hold = false;
  }
  return rep;
}

namespace {

// Applies a chain map between complexes degreewise; maps[j] : c_from(j) -> c_to(j).
double chain_map_violation(const FiniteComplex& from, const FiniteComplex& to,
                           const std::vector<BlockMap>& f) {
  double v = 0.0;
  for (int j = 0; from.has_differential(j); ++j) {
    for (std::size_t b = 0; b < f[j].blocks.size(); ++b) {
      const Mat lhs = f[j + 1].blocks[b] * from.differential(j).blocks[b];
      const Mat rhs = to.differential(j).blocks[b] * f[j].blocks[b];
      v = std::max(v, (lhs - rhs).norm());
    }
  }
  return v;
}

}  // namespace

HomotopyDominationReport homotopy_dilation_check(const FiniteComplex& c1,
                                                 const FiniteComplex& c2,
                                                 const ChainHomotopyData& maps,
                                                 double lambda0, double tol) {
  HomotopyDominationReport rep;
  const int n1 = c1.top_degree();
  if (static_cast<int>(maps.f.size()) != n1 + 1 ||
      static_cast<int>(maps.g.size()) != n1 + 1)
    throw std::invalid_argument("homotopy_dilation_check: map count mismatch");

  double viol = chain_map_violation(c1, c2, maps.f);
  viol = std::max(viol, chain_map_violation(c2, c1, maps.g));

  // Homotopy identity: Id - g f = T d + d T on c1.
  for (int j = 0; j <= n1; ++j) {
    for (std::size_t b = 0; b < maps.f[j].blocks.size(); ++b) {
      const int n = c1.module(j).block_size(b);
      Mat lhs = c1.module(j).projection(b) -
                maps.g[j].blocks[b] * maps.f[j].blocks[b];
      Mat rhs = Mat::Zero(n, n);
      if (j + 1 <= n1 && c1.has_differential(j) &&
          static_cast<int>(maps.T.size()) > j + 1 &&
          !maps.T[j + 1].blocks.empty())
        rhs += maps.T[j + 1].blocks[b] * c1.differential(j).blocks[b];
      if (j - 1 >= 0 && c1.has_differential(j - 1) &&
          static_cast<int>(maps.T.size()) > j && !maps.T[j].blocks.empty())
        rhs += c1.differential(j - 1).blocks[b] * maps.T[j].blocks[b];
      viol = std::max(viol, (lhs - rhs).norm());
    }
  }
  rep.max_identity_violation = viol;
  rep.maps_valid = viol <= tol;
  if (!rep.maps_valid) {
    rep.dominated = false;
    rep.betti_ok = false;
    return rep;
  }

  for (int k = 0; k <= n1; ++k) {
    const auto s1 = density_split(c1, k);
    const auto s2 = density_split(c2, std::min(k, c2.top_degree()));
    const auto cmp = vn::dilation_compare(s1.F, s2.F, lambda0);
    if (!cmp.dominated) rep.dominated = false;
    rep.max_constant = std::max(rep.max_constant, cmp.constant);
    if (s1.betti > s2.betti + tol) rep.betti_ok = false;
  }
  return rep;
}

ExtendedClass extended_decompose(const BlockMap& d_in,
                                 const std::vector<Mat>& Z_basis,
                                 const vn::VNAlgebra& algebra,
                                 double kernel_tol) {
  ExtendedClass out;
  std::vector<std::pair<double, double>> torsion_jumps;
  for (std::size_t b = 0; b < d_in.blocks.size(); ++b) {
    const Mat& d = d_in.blocks[b];
    const Mat& z = Z_basis[b];
    const double w = slot_weight(algebra, b);

    // Containment Im d_in <= Z.
    if (d.size() != 0 && z.size() != 0) {
      const Mat resid = d - z * (z.adjoint() * d);
      if (resid.norm() > 1e-8 * std::max(1.0, d.norm()))
        throw std::invalid_argument(
            "extended_decompose: image not contained in the cocycle module");
    } else if (d.size() != 0 && d.norm() > 1e-12) {
      throw std::invalid_argument(
          "extended_decompose: image not contained in the cocycle module");
    }

    double rank = 0.0;
    if (d.size() != 0) {
      Eigen::JacobiSVD<Mat> svd(d);
      for (int i = 0; i < svd.singularValues().size(); ++i) {
        const double s = svd.singularValues()[i];
        if (s * s > kernel_tol) {
          rank += 1.0;
          torsion_jumps.emplace_back(s * s, w);
        }
      }
    }
    out.projective_dim += w * (static_cast<double>(z.cols()) - rank);
  }
  out.torsion_density = SpectralDensity::step(std::move(torsion_jumps), 0.0);
  // Finite-dimensional images are closed: the torsion density has a spectral
  // gap above zero, so no torsion part is present.
  out.torsion_present = false;
  return out;
}

ExtendedClass extended_decompose(const FiniteComplex& c, int degree,
                                 double kernel_tol) {
  if (degree < 0 || degree > c.top_degree())
    throw std::invalid_argument("extended_decompose: degree out of range");
  const auto& m = c.module(degree);
  std::vector<Mat> z_basis;
  for (std::size_t b = 0; b < m.projection().size(); ++b) {
    if (!c.has_differential(degree)) {
      z_basis.push_back(m.range_basis(b));
      continue;
    }
    // Kernel of d restricted to the module range.
    const Mat& q = m.range_basis(b);
    const Mat d = c.differential(degree).blocks[b] * q;
    Eigen::JacobiSVD<Mat> svd(d, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] * svd.singularValues()[i] > kernel_tol) ++rank;
    z_basis.push_back(q * svd.matrixV().rightCols(q.cols() - rank));
  }
  BlockMap d_in;
  if (c.has_differential(degree - 1))
    d_in = c.differential(degree - 1);
  else
    for (std::size_t b = 0; b < m.projection().size(); ++b)
      d_in.blocks.push_back(Mat::Zero(m.block_size(b), 0));
  return extended_decompose(d_in, z_basis, c.algebra(), kernel_tol);
}

MuBounds mu_bounds(const ExtendedClass& e, bool algebra_is_factor) {
  MuBounds out;
  out.lower = e.projective_dim;
  if (algebra_is_factor && e.torsion_present) out.factor_torsion = 1;
  return out;
}

}  // namespace twistlab::chain
