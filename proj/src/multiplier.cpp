#include "twistlab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace twistlab::spectral {

namespace {

// Subsets of {0..n-1} of size j in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int j) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == j) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

int subset_index(const std::vector<std::vector<int>>& list,
                 const std::vector<int>& s) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i] == s) return static_cast<int>(i);
  return -1;
}

double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    default: throw std::invalid_argument("unit_ball_volume: n must be 1..3");
  }
}

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

vn::Mat MultiplierModel::wedge_matrix(const Eigen::VectorXcd& eta,
                                      int degree) const {
  const auto from = subsets(n, degree);
  const auto to = subsets(n, degree + 1);
  vn::Mat m = vn::Mat::Zero(static_cast<int>(to.size()),
                            static_cast<int>(from.size()));
  for (std::size_t c = 0; c < from.size(); ++c) {
    for (int i = 0; i < n; ++i) {
      if (std::find(from[c].begin(), from[c].end(), i) != from[c].end())
        continue;
      std::vector<int> target = from[c];
      int below = 0;
      for (int x : target)
        if (x < i) ++below;
      target.insert(std::lower_bound(target.begin(), target.end(), i), i);
      const int r = subset_index(to, target);
      const double sign = below % 2 == 0 ? 1.0 : -1.0;
      m(r, static_cast<int>(c)) += sign * eta[i];
    }
  }
  return m;
}

vn::Mat MultiplierModel::symbol(const std::array<double, 3>& xi,
                                int degree) const {
  Eigen::VectorXcd eta(n);
  for (int i = 0; i < n; ++i)
    eta[i] = vn::Complex(s * theta[i], 2.0 * M_PI * xi[i]);
  const int dim = static_cast<int>(binom(n, degree));
  vn::Mat lap = vn::Mat::Zero(dim, dim);
  if (degree < n) {
    const vn::Mat e = wedge_matrix(eta, degree);
    lap += e.adjoint() * e;
  }
  if (degree > 0) {
    const vn::Mat e = wedge_matrix(eta, degree - 1);
    lap += e * e.adjoint();
  }
  return lap;
}

vn::Mat MultiplierModel::lie_symbol(const std::array<double, 3>& alpha,
                                    const std::array<double, 3>& xi,
                                    int degree) const {
  // Constant coefficient field on flat space: L_V acts on a Fourier mode as
  // the scalar 2 pi i <alpha, xi> in every form degree.
  double dot = 0.0;
  for (int i = 0; i < n; ++i) dot += alpha[i] * xi[i];
  const int dim = static_cast<int>(binom(n, degree));
  return vn::Complex(0.0, 2.0 * M_PI * dot) * vn::Mat::Identity(dim, dim);
}

vn::SpectralDensity exact_flat_density(int n,
                                       const std::array<double, 3>& theta,
                                       int degree, double s) {
  if (n < 1 || n > 3)
    throw std::invalid_argument("exact_flat_density: n must be 1..3");
  if (degree < 0 || degree > n)
    throw std::invalid_argument("exact_flat_density: bad degree");
  double t2 = 0.0;
  for (int i = 0; i < n; ++i) t2 += theta[i] * theta[i];
  const double gap = s * s * t2;
  const double coefficient = static_cast<double>(binom(n, degree)) *
                             unit_ball_volume(n) /
                             std::pow(2.0 * M_PI, n);
  return vn::SpectralDensity::power_law(coefficient, 0.5 * n, gap);
}

AnticommutatorReport anticommutator_check(int n,
                                          const std::array<double, 3>& alpha,
                                          const std::array<double, 3>& beta,
                                          int degree, int mode_samples) {
  AnticommutatorReport rep;
  rep.applicable = true;
  double ab = 0.0, a2 = 0.0;
  for (int i = 0; i < n; ++i) {
    ab += alpha[i] * beta[i];
    a2 += alpha[i] * alpha[i];
  }

  auto family = [&](double s, const std::array<double, 3>& xi) {
    std::array<double, 3> sum{};
    for (int i = 0; i < n; ++i) sum[i] = beta[i] + s * alpha[i];
    return MultiplierModel(n, sum, 1.0).symbol(xi, degree);
  };

  std::vector<std::array<double, 3>> modes;
  for (int q = 0; q < mode_samples; ++q) {
    std::array<double, 3> xi{};
    for (int i = 0; i < n; ++i)
      xi[i] = -1.3 + 2.6 * ((q * (i + 2) + i + 1) % 7) / 6.0;
    modes.push_back(xi);
  }
  modes.push_back({0.0, 0.0, 0.0});

  MultiplierModel base(n, beta, 1.0);
  for (const auto& xi : modes) {
    const vn::Mat at0 = family(0.0, xi);
    const vn::Mat at1 = family(1.0, xi);
    const vn::Mat atm = family(-1.0, xi);
    const vn::Mat first = 0.5 * (at1 - atm);
    const vn::Mat second = 0.5 * (at1 + atm) - at0;

    const vn::Mat lie = base.lie_symbol(alpha, xi, degree);
    const int dim = static_cast<int>(at0.rows());
    const vn::Mat first_expected =
        lie + lie.adjoint() + 2.0 * ab * vn::Mat::Identity(dim, dim);
    const vn::Mat second_expected = a2 * vn::Mat::Identity(dim, dim);

    rep.first_order_defect =
        std::max(rep.first_order_defect,
                 (first - first_expected).cwiseAbs().maxCoeff());
    rep.second_order_defect =
        std::max(rep.second_order_defect,
                 (second - second_expected).cwiseAbs().maxCoeff());
    for (double sv : {0.37, 1.7, -2.2}) {
      const vn::Mat lhs = family(sv, xi);
      const vn::Mat rhs = at0 + sv * first_expected + sv * sv * second_expected;
      rep.expansion_defect = std::max(
          rep.expansion_defect, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return rep;
}

chain::ExtendedClass multiplier_extended_class(
    int n, const std::array<double, 3>& theta, int degree, double s) {
  if (degree < 1 || degree > n)
    throw std::invalid_argument("multiplier_extended_class: bad degree");
  chain::ExtendedClass out;
  out.projective_dim = 0.0;  // flat band spectrum carries no L2 kernel
  // Torsion density of the attaching map d : C^{i-1} -> Z^i away from its
  // kernel: on each mode the wedge by eta has rank binom(n-1, i-1) with
  // squared singular value |eta|^2, so the density is a scaled band volume.
  double t2 = 0.0;
  for (int i = 0; i < n; ++i) t2 += theta[i] * theta[i];
  const double gap = s * s * t2;
  const double coefficient = static_cast<double>(binom(n - 1, degree - 1)) *
                             unit_ball_volume(n) / std::pow(2.0 * M_PI, n);
  out.torsion_density =
      vn::SpectralDensity::power_law(coefficient, 0.5 * n, gap);
  out.torsion_present = gap <= 1e-12;
  return out;
}

}  // namespace twistlab::spectral
