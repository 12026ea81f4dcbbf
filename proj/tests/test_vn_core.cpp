#include "doctest.h"

#include <random>

#include "twistlab/endomorphism.hpp"

using namespace twistlab::vn;

namespace {

std::mt19937 rng_for(const char* tag) {
  std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
  return std::mt19937(seq);
}

Mat random_matrix(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

AlgebraElement random_element(const VNAlgebra& a, std::mt19937& rng) {
  AlgebraElement e;
  for (const auto& b : a.blocks()) e.blocks.push_back(random_matrix(b.dim, b.dim, rng));
  return e;
}

Mat random_unitary(int n, std::mt19937& rng) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(n, n, rng));
  Mat q = qr.householderQ();
  return q;
}

// Projection onto a random r-dimensional subspace.
Mat random_projection(int n, int r, std::mt19937& rng) {
  Mat u = random_unitary(n, rng).leftCols(r);
  return u * u.adjoint();
}

}  // namespace

TEST_CASE("trace_tau is normalized and matches block weights") {
  VNAlgebra m2({{2, 1.0}});
  CHECK(trace_tau(m2, AlgebraElement::identity(m2)) == Complex(1.0));

  AlgebraElement diag10 = AlgebraElement::zero(m2);
  diag10.blocks[0](0, 0) = 1.0;
  CHECK(trace_tau(m2, diag10).real() == doctest::Approx(0.5).epsilon(1e-14));

  // Group algebra of Z/2: two characters of weight 1/2; tau(x + y g) = x.
  VNAlgebra z2({{1, 0.5}, {1, 0.5}});
  const double x = 0.37, y = -1.25;
  AlgebraElement a = AlgebraElement::zero(z2);
  a.blocks[0](0, 0) = x + y;
  a.blocks[1](0, 0) = x - y;
  CHECK(trace_tau(z2, a).real() == doctest::Approx(x).epsilon(1e-14));
}

TEST_CASE("trace_tau rejects shape mismatch and is tracial/faithful") {
  VNAlgebra a({{2, 0.25}, {3, 0.75}});
  AlgebraElement bad = AlgebraElement::identity(*VNAlgebra::trivial());
  CHECK_THROWS_AS(trace_tau(a, bad), std::invalid_argument);

  auto rng = rng_for("tau-trace");
  for (int trial = 0; trial < 20; ++trial) {
    AlgebraElement x = random_element(a, rng);
    AlgebraElement y = random_element(a, rng);
    const Complex xy = trace_tau(a, x * y);
    const Complex yx = trace_tau(a, y * x);
    CHECK(std::abs(xy - yx) < 1e-12);
    // Positivity and faithfulness on a nonzero element.
    const Complex pos = trace_tau(a, x.adjoint() * x);
    CHECK(pos.real() > 0.0);
    CHECK(std::abs(pos.imag()) < 1e-12);
  }
}

TEST_CASE("dim_tau of free, projected and zero modules") {
  auto alg = std::make_shared<VNAlgebra>(
      std::vector<VNAlgebra::Block>{{2, 1.0}});
  auto free3 = HilbertianModule::free(alg, 3);
  CHECK(dim_tau(free3) == doctest::Approx(3.0).epsilon(1e-14));

  // diag(1, 0) in the commutant of l2(M2) = M2: dim 0.5.
  Mat p = Mat::Zero(2, 2);
  p(0, 0) = 1.0;
  HilbertianModule half(alg, 1, {p});
  CHECK(dim_tau(half) == doctest::Approx(0.5).epsilon(1e-14));

  HilbertianModule zero(alg, 1, {Mat::Zero(2, 2)});
  CHECK(dim_tau(zero) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("dim_tau is additive over direct sums") {
  auto rng = rng_for("dim-additive");
  auto alg = std::make_shared<VNAlgebra>(
      std::vector<VNAlgebra::Block>{{2, 0.5}, {1, 0.5}});
  const Mat p1 = random_projection(4, 2, rng);
  const Mat q1 = random_projection(2, 1, rng);
  const Mat p2 = random_projection(2, 1, rng);
  const Mat q2 = random_projection(1, 1, rng);
  HilbertianModule m1(alg, 2, {p1, q1});
  HilbertianModule m2(alg, 1, {p2, q2});

  // Direct sum as a block-diagonal projection of multiplicity 3.
  auto embed = [](const Mat& a, const Mat& b) {
    Mat s = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    s.topLeftCorner(a.rows(), a.cols()) = a;
    s.bottomRightCorner(b.rows(), b.cols()) = b;
    return s;
  };
  HilbertianModule sum(alg, 3, {embed(p1, p2), embed(q1, q2)});
  CHECK(dim_tau(sum) ==
        doctest::Approx(dim_tau(m1) + dim_tau(m2)).epsilon(1e-12));
}

TEST_CASE("commutant_trace basics and cyclicity") {
  auto triv = VNAlgebra::trivial();
  auto free3 = HilbertianModule::free(triv, 3);
  CHECK(commutant_trace(AEndomorphism::identity(free3)).real() ==
        doctest::Approx(3.0).epsilon(1e-14));

  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 1.0;
  AEndomorphism rank1(free3, {d});
  CHECK(commutant_trace(rank1).real() == doctest::Approx(1.0).epsilon(1e-14));

  auto rng = rng_for("commutant-cyclic");
  auto alg = std::make_shared<VNAlgebra>(
      std::vector<VNAlgebra::Block>{{2, 0.3}, {3, 0.7}});
  auto free2 = HilbertianModule::free(alg, 2);
  AEndomorphism f(free2, {random_matrix(4, 4, rng), random_matrix(6, 6, rng)});
  AEndomorphism g(free2, {random_matrix(4, 4, rng), random_matrix(6, 6, rng)});
  CHECK(std::abs(commutant_trace(f * g) - commutant_trace(g * f)) < 1e-12);
}

TEST_CASE("commutant_trace is independent of the free embedding") {
  auto rng = rng_for("embedding-free");
  auto alg = std::make_shared<VNAlgebra>(
      std::vector<VNAlgebra::Block>{{2, 1.0}});
  const Mat p = random_projection(4, 2, rng);
  HilbertianModule m(alg, 2, {p});
  const Mat f0 = p * random_matrix(4, 4, rng) * p;
  AEndomorphism f(m, {f0});
  const Complex t0 = commutant_trace(f);

  // Embed into a larger free module, conjugated by a commutant unitary.
  const Mat u = random_unitary(6, rng);
  Mat pbig = Mat::Zero(6, 6);
  pbig.topLeftCorner(4, 4) = p;
  Mat fbig = Mat::Zero(6, 6);
  fbig.topLeftCorner(4, 4) = f0;
  HilbertianModule m2(alg, 3, {u * pbig * u.adjoint()});
  AEndomorphism f2(m2, {u * fbig * u.adjoint()});
  CHECK(std::abs(commutant_trace(f2) - t0) < 1e-10);
}

TEST_CASE("spectral_density steps and scaling") {
  auto triv = VNAlgebra::trivial();
  auto free2 = HilbertianModule::free(triv, 2);
  auto id_density = spectral_density(AEndomorphism::identity(free2));
  CHECK(id_density.value(0.999) == doctest::Approx(0.0));
  CHECK(id_density.value(1.0) == doctest::Approx(2.0));

  Mat d = Mat::Zero(2, 2);
  d(1, 1) = 3.0;
  auto dens = spectral_density(AEndomorphism(free2, {d}));
  CHECK(dens.value(-0.1) == doctest::Approx(0.0));
  CHECK(dens.value(0.0) == doctest::Approx(1.0));
  CHECK(dens.value(2.9) == doctest::Approx(1.0));
  CHECK(dens.value(3.0) == doctest::Approx(2.0));

  // f + f (direct sum) doubles the density pointwise.
  auto rng = rng_for("density-sum");
  Mat h = random_matrix(3, 3, rng);
  h = (h + h.adjoint()).eval();
  auto free3 = HilbertianModule::free(triv, 3);
  auto f = AEndomorphism(free3, {h});
  auto single = spectral_density(f);
  Mat hh = Mat::Zero(6, 6);
  hh.topLeftCorner(3, 3) = h;
  hh.bottomRightCorner(3, 3) = h;
  auto doubled = spectral_density(
      AEndomorphism(HilbertianModule::free(triv, 6), {hh}));
  for (const auto& j : single.jumps()) {
    CHECK(doubled.value(j.lambda + 1e-9) ==
          doctest::Approx(2.0 * single.value(j.lambda + 1e-9)).epsilon(1e-10));
  }
}

TEST_CASE("spectral_density rejects non-self-adjoint input") {
  auto rng = rng_for("nonsa");
  auto free2 = HilbertianModule::free(VNAlgebra::trivial(), 2);
  Mat m = random_matrix(2, 2, rng);
  m(0, 1) += 10.0;  // assuredly not Hermitian
  CHECK_THROWS_AS(spectral_density(AEndomorphism(free2, {m})),
                  std::invalid_argument);
}

TEST_CASE("spectral_density invariant under commutant conjugation") {
  auto rng = rng_for("density-conj");
  auto alg = std::make_shared<VNAlgebra>(
      std::vector<VNAlgebra::Block>{{2, 0.5}, {1, 0.5}});
  auto m = HilbertianModule::free(alg, 2);
  Mat h0 = random_matrix(4, 4, rng);
  h0 = (h0 + h0.adjoint()).eval();
  Mat h1 = random_matrix(2, 2, rng);
  h1 = (h1 + h1.adjoint()).eval();
  AEndomorphism f(m, {h0, h1});
  const Mat u0 = random_unitary(4, rng);
  const Mat u1 = random_unitary(2, rng);
  AEndomorphism g(m, {u0 * h0 * u0.adjoint(), u1 * h1 * u1.adjoint()});
  auto df = spectral_density(f);
  auto dg = spectral_density(g);
  for (const auto& j : df.jumps())
    CHECK(dg.value(j.lambda + 1e-8) ==
          doctest::Approx(df.value(j.lambda + 1e-8)).epsilon(1e-9));
}

TEST_CASE("dilation_compare: identity, sqrt dilation, incomparable") {
  std::vector<std::pair<double, double>> jf, jg;
  // Step approximations of F = sqrt(lambda), G = sqrt(lambda/4) on (0, 1].
  for (int i = 1; i <= 400; ++i) {
    const double lambda = i / 400.0;
    jf.emplace_back(lambda, std::sqrt(lambda) - std::sqrt((i - 1) / 400.0));
    jg.emplace_back(lambda,
                    std::sqrt(lambda / 4) - std::sqrt((i - 1) / 400.0 / 4));
  }
  auto F = SpectralDensity::step(jf);
  auto G = SpectralDensity::step(jg);

  auto self = dilation_compare(F, F, 1.0);
  CHECK(self.dominated);
  CHECK(self.constant == doctest::Approx(1.0));

  auto fg = dilation_compare(F, G, 0.25);
  CHECK(fg.dominated);
  CHECK(fg.constant == doctest::Approx(4.0));

  // F has mass at 0+, G vanishes near 0: not comparable.
  auto atom = SpectralDensity::step({{0.0, 1.0}});
  auto gapped = SpectralDensity::step({{0.5, 1.0}});
  auto bad = dilation_compare(atom, gapped, 0.25);
  CHECK_FALSE(bad.dominated);

  CHECK_THROWS_AS(dilation_compare(F, G, 0.0), std::invalid_argument);
}

TEST_CASE("dilation_compare is reflexive and transitive on samples") {
  auto rng = rng_for("dilation-props");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::pair<double, double>> ja, jb, jc;
    for (int i = 0; i < 30; ++i) {
      ja.emplace_back(u(rng), u(rng));
      jb.emplace_back(0.5 * u(rng), u(rng) + 0.5);
      jc.emplace_back(0.25 * u(rng), u(rng) + 1.0);
    }
    auto A = SpectralDensity::step(ja);
    auto B = SpectralDensity::step(jb);
    auto C = SpectralDensity::step(jc);
    CHECK(dilation_compare(A, A, 1.0).dominated);
    auto ab = dilation_compare(A, B, 1.0);
    auto bc = dilation_compare(B, C, 1.0);
    if (ab.dominated && bc.dominated) {
      auto ac = dilation_compare(A, C, 1.0);
      CHECK(ac.dominated);
      CHECK(ac.constant <= ab.constant * bc.constant + 1e-9);
    }
  }
}
