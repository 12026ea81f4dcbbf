#include "twistlab/endomorphism.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace twistlab::vn {

Complex trace_tau(const VNAlgebra& algebra, const AlgebraElement& a) {
  if (a.blocks.size() != algebra.block_count())
    throw std::invalid_argument("trace_tau: block count mismatch");
  Complex t = 0.0;
  for (std::size_t b = 0; b < a.blocks.size(); ++b) {
    const int d = algebra.block_dim(b);
    if (a.blocks[b].rows() != d || a.blocks[b].cols() != d)
      throw std::invalid_argument("trace_tau: block dimension mismatch");
    t += algebra.block_weight(b) * a.blocks[b].trace() / static_cast<double>(d);
  }
  return t;
}

HilbertianModule::HilbertianModule(AlgebraPtr algebra, int multiplicity,
                                   std::vector<Mat> projection)
    : algebra_(std::move(algebra)),
      multiplicity_(multiplicity),
      projection_(std::move(projection)) {
  if (!algebra_) throw std::invalid_argument("HilbertianModule: null algebra");
  if (multiplicity_ < 1)
    throw std::invalid_argument("HilbertianModule: multiplicity < 1");
  if (projection_.size() != algebra_->block_count())
    throw std::invalid_argument("HilbertianModule: projection block count");

  free_ = true;
  range_basis_.resize(projection_.size());
  for (std::size_t b = 0; b < projection_.size(); ++b) {
    const int n = block_size(b);
    const Mat& p = projection_[b];
    if (p.rows() != n || p.cols() != n)
      throw std::invalid_argument("HilbertianModule: projection size");
    if ((p - p.adjoint()).norm() > 1e-12 * std::max(1.0, p.norm()) + 1e-12)
      throw std::invalid_argument("HilbertianModule: projection not self-adjoint");
    if ((p * p - p).norm() > 1e-12 * std::max(1.0, p.norm()) + 1e-12)
      throw std::invalid_argument("HilbertianModule: projection not idempotent");
    if ((p - Mat::Identity(n, n)).norm() > 1e-12) free_ = false;

    Eigen::SelfAdjointEigenSolver<Mat> es(p);
    // Eigenvalues of an idempotent are 0/1; keep the 1-eigenspace.
    int rank = 0;
    for (int i = 0; i < n; ++i)
      if (es.eigenvalues()[i] > 0.5) ++rank;
    range_basis_[b] = es.eigenvectors().rightCols(rank);
  }
}

HilbertianModule HilbertianModule::free(AlgebraPtr algebra, int multiplicity) {
  std::vector<Mat> proj;
  for (const auto& blk : algebra->blocks())
    proj.push_back(Mat::Identity(blk.dim * multiplicity, blk.dim * multiplicity));
  return HilbertianModule(std::move(algebra), multiplicity, std::move(proj));
}

double dim_tau(const HilbertianModule& m) {
  double d = 0.0;
  for (std::size_t b = 0; b < m.projection().size(); ++b)
    d += m.algebra().block_weight(b) * m.projection(b).real().trace() /
         m.algebra().block_dim(b);
  return d;
}

AEndomorphism::AEndomorphism(HilbertianModule module, std::vector<Mat> blocks,
                             bool check_compression)
    : module_(std::move(module)), blocks_(std::move(blocks)) {
  if (blocks_.size() != module_.algebra().block_count())
    throw std::invalid_argument("AEndomorphism: block count mismatch");
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const int n = module_.block_size(b);
    if (blocks_[b].rows() != n || blocks_[b].cols() != n)
      throw std::invalid_argument("AEndomorphism: block size mismatch");
    if (check_compression && !module_.is_free()) {
      const Mat& p = module_.projection(b);
      const Mat compressed = p * blocks_[b] * p;
      if ((compressed - blocks_[b]).norm() >
          1e-10 * std::max(1.0, blocks_[b].norm()))
        throw std::invalid_argument(
            "AEndomorphism: matrix not compressed by the module projection");
    }
  }
}

AEndomorphism AEndomorphism::identity(const HilbertianModule& m) {
  std::vector<Mat> blocks = m.projection();
  return AEndomorphism(m, std::move(blocks), false);
}

AEndomorphism AEndomorphism::zero(const HilbertianModule& m) {
  std::vector<Mat> blocks;
  for (std::size_t b = 0; b < m.projection().size(); ++b)
    blocks.push_back(Mat::Zero(m.block_size(b), m.block_size(b)));
  return AEndomorphism(m, std::move(blocks), false);
}

AEndomorphism AEndomorphism::adjoint() const {
  std::vector<Mat> blocks;
  for (const auto& m : blocks_) blocks.push_back(m.adjoint());
  return AEndomorphism(module_, std::move(blocks), false);
}

bool AEndomorphism::is_self_adjoint(double tol) const {
  for (const auto& m : blocks_)
    if ((m - m.adjoint()).norm() > tol * std::max(1.0, m.norm())) return false;
  return true;
}

AEndomorphism operator*(const AEndomorphism& f, const AEndomorphism& g) {
  std::vector<Mat> blocks;
  for (std::size_t b = 0; b < f.blocks_.size(); ++b)
    blocks.push_back(f.blocks_[b] * g.blocks_[b]);
  return AEndomorphism(f.module_, std::move(blocks), false);
}

AEndomorphism operator+(const AEndomorphism& f, const AEndomorphism& g) {
  std::vector<Mat> blocks;
  for (std::size_t b = 0; b < f.blocks_.size(); ++b)
    blocks.push_back(f.blocks_[b] + g.blocks_[b]);
  return AEndomorphism(f.module_, std::move(blocks), false);
}

AEndomorphism operator-(const AEndomorphism& f, const AEndomorphism& g) {
  std::vector<Mat> blocks;
  for (std::size_t b = 0; b < f.blocks_.size(); ++b)
    blocks.push_back(f.blocks_[b] - g.blocks_[b]);
  return AEndomorphism(f.module_, std::move(blocks), false);
}

AEndomorphism AEndomorphism::scaled(Complex c) const {
  std::vector<Mat> blocks;
  for (const auto& m : blocks_) blocks.push_back(c * m);
  return AEndomorphism(module_, std::move(blocks), false);
}

Complex commutant_trace(const AEndomorphism& f) {
  Complex t = 0.0;
  const auto& alg = f.module().algebra();
  for (std::size_t b = 0; b < f.blocks().size(); ++b)
    t += alg.block_weight(b) * f.block(b).trace() /
         static_cast<double>(alg.block_dim(b));
  return t;
}

std::vector<std::pair<double, double>> weighted_spectrum(const AEndomorphism& f,
                                                         double sa_tol) {
  if (!f.is_self_adjoint(sa_tol))
    throw std::invalid_argument("weighted_spectrum: operator not self-adjoint");
  std::vector<std::pair<double, double>> eigs;
  const auto& m = f.module();
  const auto& alg = m.algebra();
  for (std::size_t b = 0; b < f.blocks().size(); ++b) {
    const double w = alg.block_weight(b) / alg.block_dim(b);
    Mat restricted = f.block(b);
    if (!m.is_free()) {
      const Mat& q = m.range_basis(b);
      restricted = q.adjoint() * f.block(b) * q;
    }
    if (restricted.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Mat> es(restricted,
                                          Eigen::EigenvaluesOnly);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      eigs.emplace_back(es.eigenvalues()[i], w);
  }
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

SpectralDensity spectral_density(const AEndomorphism& f, double sa_tol) {
  return SpectralDensity::step(weighted_spectrum(f, sa_tol), 0.0);
}

SpectralDensity SpectralDensity::step(
    std::vector<std::pair<double, double>> jumps, double merge_tol) {
  std::sort(jumps.begin(), jumps.end());
  SpectralDensity d;
  d.is_step_ = true;
  for (const auto& [lambda, h] : jumps) {
    if (h == 0.0) continue;
    if (!d.jumps_.empty() && lambda - d.jumps_.back().lambda <= merge_tol)
      d.jumps_.back().height += h;
    else
      d.jumps_.push_back({lambda, h});
  }
  return d;
}

SpectralDensity SpectralDensity::power_law(double coefficient, double exponent,
                                           double gap) {
  SpectralDensity d;
  d.is_step_ = false;
  d.coefficient_ = coefficient;
  d.exponent_ = exponent;
  d.gap_ = gap;
  return d;
}

double SpectralDensity::value(double lambda) const {
  if (is_step_) {
    double n = 0.0;
    for (const auto& j : jumps_) {
      if (j.lambda > lambda) break;
      n += j.height;
    }
    return n;
  }
  if (lambda < gap_) return 0.0;
  return coefficient_ * std::pow(lambda - gap_, exponent_);
}

double SpectralDensity::total() const {
  if (!is_step_) return std::numeric_limits<double>::infinity();
  double n = 0.0;
  for (const auto& j : jumps_) n += j.height;
  return n;
}

double SpectralDensity::mass_at_zero(double tol) const {
  if (!is_step_) return 0.0;  // closed forms carry no atoms
  double n = 0.0;
  for (const auto& j : jumps_) {
    if (j.lambda > tol) break;
    n += j.height;
  }
  return n;
}

SpectralDensity& SpectralDensity::operator+=(const SpectralDensity& other) {
  if (!is_step_ || !other.is_step_)
    throw std::invalid_argument("SpectralDensity: sum needs step densities");
  std::vector<std::pair<double, double>> all;
  for (const auto& j : jumps_) all.emplace_back(j.lambda, j.height);
  for (const auto& j : other.jumps_) all.emplace_back(j.lambda, j.height);
  *this = step(std::move(all), 0.0);
  return *this;
}

SpectralDensity SpectralDensity::scaled(double factor) const {
  SpectralDensity d = *this;
  if (d.is_step_) {
    for (auto& j : d.jumps_) j.height *= factor;
  } else {
    d.coefficient_ *= factor;
  }
  return d;
}

void SpectralDensity::write_csv(std::ostream& os, int closed_form_samples,
                                double lambda_max) const {
  os << "lambda,N\n";
  char buf[80];
  if (is_step_) {
    double n = 0.0;
    for (const auto& j : jumps_) {
      n += j.height;
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", j.lambda, n);
      os << buf;
    }
  } else {
    for (int i = 0; i <= closed_form_samples; ++i) {
      const double lambda = lambda_max * i / closed_form_samples;
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", lambda, value(lambda));
      os << buf;
    }
  }
}

DilationReport dilation_compare(const SpectralDensity& F,
                                const SpectralDensity& G, double lambda0,
                                int samples) {
  if (!(lambda0 > 0.0))
    throw std::invalid_argument("dilation_compare: empty sample range");
  // Geometric grid over (0, lambda0) plus the jump points of F inside it,
  // so step features are not skipped.
  std::vector<double> grid;
  const double lo = lambda0 * 1e-9;
  for (int i = 0; i < samples; ++i)
    grid.push_back(lo * std::pow(lambda0 / lo, double(i) / (samples - 1)));
  if (F.is_step())
    for (const auto& j : F.jumps())
      if (j.lambda > 0.0 && j.lambda < lambda0) grid.push_back(j.lambda);

  DilationReport rep;
  const double slack = 1e-9;
  for (int p = 0; p <= 20; ++p) {
    const double c = std::ldexp(1.0, p);
    bool ok = true;
    for (double lambda : grid) {
      if (F.value(lambda) > G.value(c * lambda) + slack) {
        ok = false;
        break;
      }
    }
    if (ok) {
      rep.dominated = true;
      rep.constant = c;
      break;
    }
  }
  return rep;
}

DilationReport dilation_equivalent(const SpectralDensity& F,
                                   const SpectralDensity& G, double lambda0) {
  DilationReport fg = dilation_compare(F, G, lambda0);
  DilationReport gf = dilation_compare(G, F, lambda0);
  DilationReport rep;
  rep.dominated = fg.dominated;
  rep.constant = std::max(fg.constant, gf.constant);
  rep.equivalent = fg.dominated && gf.dominated;
  return rep;
}

}  // namespace twistlab::vn
