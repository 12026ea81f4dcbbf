#include "doctest.h"

#include "test_support.hpp"
#include "twistlab/twisted.hpp"

using namespace twistlab;
using namespace twistlab::geom;

namespace {

double grid_betti(const FlatTorusGrid& grid, const AnalyticCocycle& theta,
                  int degree) {
  auto L = spectral::assemble_twisted_laplacian(
      grid, theta, AnalyticCocycle::harmonic(grid.n, {0, 0}), 0.0, degree);
  return spectral::twisted_density(L).mass_at_zero();
}

}  // namespace

TEST_CASE("circle grid: untwisted and twisted cohomology") {
  FlatTorusGrid circle(1, {16, 1});
  auto zero = AnalyticCocycle::harmonic(1, {0.0, 0.0});
  CHECK(grid_betti(circle, zero, 0) == doctest::Approx(1.0));
  CHECK(grid_betti(circle, zero, 1) == doctest::Approx(1.0));

  // Nontrivial real holonomy kills the cohomology of the local system.
  auto period1 = AnalyticCocycle::harmonic(1, {1.0, 0.0});
  CHECK(grid_betti(circle, period1, 0) == doctest::Approx(0.0));
  CHECK(grid_betti(circle, period1, 1) == doctest::Approx(0.0));

  CHECK_THROWS_AS(FlatTorusGrid(1, {4, 1}), std::invalid_argument);
}

TEST_CASE("torus grid: betti numbers, d2, euler characteristic") {
  FlatTorusGrid torus(2, {16, 16});
  auto zero = AnalyticCocycle::harmonic(2, {0.0, 0.0});
  CHECK(grid_betti(torus, zero, 0) == doctest::Approx(1.0));
  CHECK(grid_betti(torus, zero, 1) == doctest::Approx(2.0));
  CHECK(grid_betti(torus, zero, 2) == doctest::Approx(1.0));

  AnalyticCocycle wavy = zero;
  wavy.periods = {0.7, -0.4};
  wavy.exact.terms.push_back({1, 0, 0.3, 0.0});
  wavy.exact.terms.push_back({1, 1, 0.0, -0.2});
  auto c = build_torus_grid_complex(torus, wavy, 1.0, 1.7);
  CHECK(grid_d2_violation(c) < 1e-12);

  CHECK(torus.vertices() - torus.edges() + torus.faces() == 0);
}

TEST_CASE("grid laplacian bottom approaches the twist norm") {
  // circle, s theta with s = 2, unit period: lambda0 -> 4 within 1 percent
  FlatTorusGrid circle(1, {512, 1});
  auto unit = AnalyticCocycle::harmonic(1, {1.0, 0.0});
  auto L = spectral::assemble_twisted_laplacian(
      circle, AnalyticCocycle::harmonic(1, {0, 0}), unit, 2.0, 0);
  const double bottom = spectral::lambda0(L, false);
  CHECK(std::abs(bottom - 4.0) / 4.0 < 0.01);

  // torus theta = (3, 4) on a modest grid: within 2 percent of 25
  FlatTorusGrid torus(2, {48, 48});
  auto t34 = AnalyticCocycle::harmonic(2, {3.0, 4.0});
  auto L2 = spectral::assemble_twisted_laplacian(
      torus, AnalyticCocycle::harmonic(2, {0, 0}), t34, 1.0, 0);
  const double b2 = spectral::lambda0(L2, false);
  CHECK(std::abs(b2 - 25.0) / 25.0 < 0.02);
}

TEST_CASE("block torus complex over a group algebra") {
  FlatTorusGrid circle(1, {12, 1});
  auto alg = vn::VNAlgebra::cyclic_group(2);
  auto fiber = vn::HilbertianModule::free(alg, 1);
  auto zero = AnalyticCocycle::harmonic(1, {0.0, 0.0});
  auto complex = build_torus_block_complex(circle, zero, fiber);
  REQUIRE(chain::validate_complex(complex).valid);
  CHECK(chain::l2_betti(complex, 0) == doctest::Approx(1.0));
  CHECK(chain::l2_betti(complex, 1) == doctest::Approx(1.0));
  CHECK(dim_tau(complex.module(0)) == doctest::Approx(12.0));
}

TEST_CASE("genus surfaces: construction, euler characteristic, refinement") {
  for (int g = 1; g <= 3; ++g) {
    auto mesh = genus_surface(g);
    CHECK(mesh.euler_characteristic() == 2 - 2 * g);
    CHECK(static_cast<int>(mesh.basis_loops.size()) == 2 * g);
  }
  for (int r = 1; r <= 2; ++r) {
    auto mesh = genus_surface(2, r);
    CHECK(mesh.euler_characteristic() == -2);
  }
  CHECK_THROWS_AS(genus_surface(0), std::invalid_argument);
}

TEST_CASE("harmonic_twist reproduces prescribed periods") {
  auto mesh = genus_surface(2, 1);
  Eigen::VectorXd periods(4);
  periods << 0.9, -0.3, 0.45, 1.7;
  auto theta = harmonic_twist(mesh, periods);
  for (int l = 0; l < 4; ++l)
    CHECK(loop_period(mesh, theta, mesh.basis_loops[l]) ==
          doctest::Approx(periods[l]).epsilon(1e-12));
  // coboundary vanishes on every face
  for (const auto& face : mesh.faces) {
    double sum = 0.0;
    for (const auto& step : face)
      sum += step.sign * theta.edge_values[step.edge];
    CHECK(std::abs(sum) < 1e-12);
  }

  auto zero = harmonic_twist(mesh, Eigen::VectorXd::Zero(4));
  CHECK(zero.edge_values.norm() < 1e-12);
}

TEST_CASE("surface complexes: local system cohomology") {
  auto triv = vn::VNAlgebra::trivial();
  auto fiber = vn::HilbertianModule::free(triv, 1);

  SUBCASE("genus 1 untwisted is the torus") {
    auto mesh = genus_surface(1);
    auto theta = harmonic_twist(mesh, Eigen::VectorXd::Zero(2));
    auto c = build_surface_complex(mesh, theta, fiber);
    REQUIRE(chain::validate_complex(c).valid);
    CHECK(chain::l2_betti(c, 0) == doctest::Approx(1.0));
    CHECK(chain::l2_betti(c, 1) == doctest::Approx(2.0));
    CHECK(chain::l2_betti(c, 2) == doctest::Approx(1.0));
    CHECK(chain::euler_identity(c).equal);
  }

  SUBCASE("genus 2 untwisted and twisted") {
    auto mesh = genus_surface(2, 1);
    auto zero = harmonic_twist(mesh, Eigen::VectorXd::Zero(4));
    auto c0 = build_surface_complex(mesh, zero, fiber);
    CHECK(chain::l2_betti(c0, 0) == doctest::Approx(1.0));
    CHECK(chain::l2_betti(c0, 1) == doctest::Approx(4.0));
    CHECK(chain::l2_betti(c0, 2) == doctest::Approx(1.0));

    Eigen::VectorXd periods(4);
    periods << 0.8, 0.15, -0.6, 0.35;
    auto theta = harmonic_twist(mesh, periods);
    auto c = build_surface_complex(mesh, theta, fiber);
    REQUIRE(chain::validate_complex(c).valid);
    CHECK(chain::l2_betti(c, 0) == doctest::Approx(0.0));
    CHECK(chain::l2_betti(c, 1) == doctest::Approx(2.0));
    CHECK(chain::l2_betti(c, 2) == doctest::Approx(0.0));
    auto euler = chain::euler_identity(c);
    CHECK(euler.equal);
    CHECK(euler.chi_betti == doctest::Approx(-2.0));
  }

  SUBCASE("unitary scalar twist via a character fiber") {
    auto mesh = genus_surface(2);
    auto zero = harmonic_twist(mesh, Eigen::VectorXd::Zero(4));
    auto cut = integer_cut_cocycle(mesh, 0);
    auto betti = tower_betti(mesh, zero, cut, 5);
    // One character is trivial (betti (1,4,1)), four are generic (0,2,0):
    // normalized (1/5)(1, 4 + 2*4, 1) = (0.2, 2.4, 0.2).
    CHECK(betti[0] == doctest::Approx(0.2));
    CHECK(betti[1] == doctest::Approx(2.4));
    CHECK(betti[2] == doctest::Approx(0.2));
  }
}

TEST_CASE("fiber scaling multiplies betti by dim_tau") {
  auto mesh = genus_surface(2);
  Eigen::VectorXd periods(4);
  periods << 0.5, 0.0, 0.0, 0.0;
  auto theta = harmonic_twist(mesh, periods);
  auto triv = vn::VNAlgebra::trivial();
  auto fiber2 = vn::HilbertianModule::free(triv, 2);
  auto c = build_surface_complex(mesh, theta, fiber2);
  CHECK(chain::l2_betti(c, 1) == doctest::Approx(4.0));  // 2 * dim_tau E
}

TEST_CASE("integer cut cocycles and cyclic covers") {
  auto mesh = genus_surface(2);
  auto cut = integer_cut_cocycle(mesh, 0);
  auto theta = harmonic_twist(mesh, Eigen::VectorXd::Zero(4));

  SUBCASE("k = 1 is the identity cover") {
    auto cover = build_cover(mesh, theta, cut, 1);
    CHECK(cover.mesh.num_vertices == mesh.num_vertices);
    CHECK(cover.mesh.num_edges() == mesh.num_edges());
    CHECK(cover.mesh.num_faces() == mesh.num_faces());
  }

  SUBCASE("euler characteristic multiplies") {
    for (int k = 2; k <= 8; k += 3) {
      auto cover = build_cover(mesh, theta, cut, k);
      CHECK(cover.mesh.euler_characteristic() == -2 * k);
      // deck action is a free permutation of vertices
      std::vector<char> seen(cover.mesh.num_vertices, 0);
      for (int v = 0; v < cover.mesh.num_vertices; ++v) {
        CHECK(cover.deck_vertex_map[v] != v);
        seen[cover.deck_vertex_map[v]] = 1;
      }
      CHECK(std::count(seen.begin(), seen.end(), char(1)) ==
            cover.mesh.num_vertices);
    }
  }

  SUBCASE("zero direction is rejected") {
    std::vector<int> zero_cut(mesh.num_edges(), 0);
    CHECK_THROWS_AS(build_cover(mesh, theta, zero_cut, 3),
                    std::invalid_argument);
  }
}

TEST_CASE("tower betti agrees with the explicit cover complex") {
  auto mesh = genus_surface(2);
  Eigen::VectorXd periods(4);
  periods << 0.0, 0.7, 0.0, 0.0;  // generic twist transverse to the cut
  auto theta = harmonic_twist(mesh, periods);
  auto cut = integer_cut_cocycle(mesh, 0);
  auto triv = vn::VNAlgebra::trivial();
  auto fiber = vn::HilbertianModule::free(triv, 1);

  for (int k : {2, 3}) {
    auto tower = tower_betti(mesh, theta, cut, k);
    auto cover = build_cover(mesh, theta, cut, k);
    auto cc = build_surface_complex(cover.mesh, cover.twist, fiber);
    REQUIRE(chain::validate_complex(cc).valid);
    for (int j = 0; j <= 2; ++j)
      CHECK(chain::l2_betti(cc, j) ==
            doctest::Approx(k * tower[j]).epsilon(1e-8));
  }
}

TEST_CASE("normalized tower b1 is 2 for generic twists, 2 + 2/k untwisted") {
  auto mesh = genus_surface(2);
  auto cut = integer_cut_cocycle(mesh, 0);
  Eigen::VectorXd periods(4);
  periods << 0.45, 0.9, -0.2, 0.6;
  auto theta = harmonic_twist(mesh, periods);
  auto zero = harmonic_twist(mesh, Eigen::VectorXd::Zero(4));
  for (int k : {1, 2, 4, 8}) {
    auto twisted = tower_betti(mesh, theta, cut, k);
    CHECK(twisted[0] == doctest::Approx(0.0));
    CHECK(twisted[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(twisted[2] == doctest::Approx(0.0));
    auto untwisted = tower_betti(mesh, zero, cut, k);
    CHECK(untwisted[1] == doctest::Approx(2.0 + 2.0 / k).epsilon(1e-10));
  }
}

TEST_CASE("gauge conjugation on grids and surfaces") {
  SUBCASE("grid: h = 0 gives identical operators") {
    FlatTorusGrid circle(1, {24, 1});
    auto theta = AnalyticCocycle::harmonic(1, {0.5, 0.0});
    TrigPoly zero;
    auto rep = spectral::gauge_check(circle, theta, zero);
    CHECK(rep.conjugation_violation < 1e-14);
    CHECK(rep.kernels_match);
  }

  SUBCASE("circle with a sin profile gauge") {
    FlatTorusGrid circle(1, {32, 1});
    auto theta = AnalyticCocycle::harmonic(1, {0.8, 0.0});
    TrigPoly h;
    h.terms.push_back({1, 0, 0.0, 0.3});  // 0.3 sin(2 pi x)
    auto rep = spectral::gauge_check(circle, theta, h);
    CHECK(rep.conjugation_violation < 1e-10);
    CHECK(rep.kernels_match);
    CHECK(rep.densities_equivalent);
  }

  SUBCASE("torus grid with a two-mode gauge") {
    FlatTorusGrid torus(2, {12, 12});
    auto theta = AnalyticCocycle::harmonic(2, {0.4, -0.7});
    TrigPoly h;
    h.terms.push_back({1, 0, 0.2, 0.0});
    h.terms.push_back({0, 1, 0.0, -0.15});
    auto rep = spectral::gauge_check(torus, theta, h);
    CHECK(rep.conjugation_violation < 1e-10);
    CHECK(rep.kernels_match);
  }

  SUBCASE("random gauge on the genus-2 mesh") {
    auto mesh = genus_surface(2, 1);
    Eigen::VectorXd periods(4);
    periods << 0.3, -0.5, 0.1, 0.9;
    auto theta = harmonic_twist(mesh, periods);
    auto fiber = vn::HilbertianModule::free(vn::VNAlgebra::trivial(), 1);
    auto rng = testing::seeded(7);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    Eigen::VectorXd h(mesh.num_vertices);
    for (int v = 0; v < mesh.num_vertices; ++v) h[v] = u(rng);
    auto rep = spectral::gauge_check(mesh, theta, h, fiber);
    CHECK(rep.conjugation_violation < 1e-10);
    CHECK(rep.kernels_match);
    for (int j = 0; j <= 2; ++j)
      CHECK(rep.betti_base[j] ==
            doctest::Approx(rep.betti_gauged[j]).epsilon(1e-8));
  }
}

TEST_CASE("hodge star on torus grids") {
  SUBCASE("involution and intertwining, harmonic twist") {
    FlatTorusGrid torus(2, {12, 12});
    auto theta = AnalyticCocycle::harmonic(2, {0.9, -1.3});
    for (int j = 0; j <= 2; ++j) {
      auto rep = spectral::hodge_star_check(torus, theta, j, 1.0, 30);
      CHECK(rep.star_involution_defect < 1e-14);
      CHECK(rep.intertwining_defect < 1e-10);
      CHECK(rep.isospectrality_defect < 1e-8);
    }
  }

  SUBCASE("circle: degree 0 versus degree 1") {
    FlatTorusGrid circle(1, {64, 1});
    auto theta = AnalyticCocycle::harmonic(1, {1.4, 0.0});
    auto rep = spectral::hodge_star_check(circle, theta, 0, 1.0, 40);
    CHECK(rep.intertwining_defect < 1e-10);
    CHECK(rep.isospectrality_defect < 1e-8);
  }
}

TEST_CASE("surface duality through the dual complex") {
  auto mesh = genus_surface(2, 1);
  Eigen::VectorXd periods(4);
  periods << 0.6, -0.25, 0.4, 0.1;
  auto theta = harmonic_twist(mesh, periods);
  auto fiber = vn::HilbertianModule::free(vn::VNAlgebra::trivial(), 1);
  for (int j = 0; j <= 2; ++j)
    CHECK(spectral::surface_duality_defect(mesh, theta, fiber, j) < 1e-8);

  // complementary betti numbers on the dual complex
  auto dual = dual_surface_complex(mesh, theta, fiber);
  REQUIRE(chain::validate_complex(dual).valid);
  auto primal = build_surface_complex(mesh, theta, fiber);
  for (int j = 0; j <= 2; ++j)
    CHECK(chain::l2_betti(dual, j) ==
          doctest::Approx(chain::l2_betti(primal, 2 - j)).epsilon(1e-9));
}

TEST_CASE("metric rescaling leaves betti fixed and dilates densities") {
  auto mesh = genus_surface(2);
  mesh.edge_lengths.assign(mesh.num_edges(), 1.0);
  Eigen::VectorXd periods(4);
  periods << 0.5, 0.3, 0.0, 0.0;
  auto theta = harmonic_twist(mesh, periods);
  auto fiber = vn::HilbertianModule::free(vn::VNAlgebra::trivial(), 1);
  auto base = build_surface_complex(mesh, theta, fiber);

  for (double c : {0.5, 2.0}) {
    SurfaceMesh scaled = mesh;
    for (auto& l : scaled.edge_lengths) l *= c;
    auto sc = build_surface_complex(scaled, theta, fiber);
    for (int j = 0; j <= 2; ++j) {
      CHECK(chain::l2_betti(sc, j) ==
            doctest::Approx(chain::l2_betti(base, j)).epsilon(1e-8));
      auto cmp = vn::dilation_equivalent(
          vn::spectral_density(chain::laplacian(base, j)),
          vn::spectral_density(chain::laplacian(sc, j)), 50.0);
      CHECK(cmp.equivalent);
      const double bound = std::pow(std::max(c, 1.0 / c), 4.0);
      CHECK(cmp.constant <= 2.0 * bound);  // sampled constant is a power of 2
    }
  }
}
