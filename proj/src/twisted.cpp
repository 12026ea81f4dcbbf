#include "twistlab/twisted.hpp"

#include "twistlab/multiplier.hpp"

#include <algorithm>
#include <cmath>

namespace twistlab::spectral {

namespace {

AnalyticCocycle combine(const AnalyticCocycle& beta, const AnalyticCocycle& alpha,
                        double s) {
  AnalyticCocycle out = beta;
  out.periods[0] += s * alpha.periods[0];
  out.periods[1] += s * alpha.periods[1];
  for (auto term : alpha.exact.terms) {
    term.c *= s;
    term.s *= s;
    out.exact.terms.push_back(term);
  }
  return out;
}

std::vector<double> low_spectrum(const TwistedLaplacian& L, int count) {
  if (L.sparse) return numerics::lowest_eigenvalues(*L.sparse, count);
  auto eigs = vn::weighted_spectrum(*L.dense);
  std::vector<double> vals;
  for (const auto& [lambda, w] : eigs) vals.push_back(lambda);
  if (static_cast<int>(vals.size()) > count) vals.resize(count);
  return vals;
}

}  // namespace

TwistedLaplacian assemble_twisted_laplacian(const FlatTorusGrid& grid,
                                            const AnalyticCocycle& beta,
                                            const AnalyticCocycle& alpha,
                                            double s, int degree,
                                            double fiber_dim) {
  if (degree < 0 || degree > grid.n)
    throw std::invalid_argument("assemble_twisted_laplacian: bad degree");
  const AnalyticCocycle total = combine(beta, alpha, s);
  GridComplex c = geom::build_torus_grid_complex(grid, total, fiber_dim, 1.0);
  TwistedLaplacian L;
  L.degree = degree;
  L.s = s;
  L.fiber_dim = fiber_dim;
  L.sparse = geom::grid_laplacian(c, degree);
  return L;
}

TwistedLaplacian assemble_twisted_laplacian(const SurfaceMesh& mesh,
                                            const MeshCocycle& theta,
                                            const vn::HilbertianModule& fiber,
                                            double s, int degree) {
  if (degree < 0 || degree > 2)
    throw std::invalid_argument("assemble_twisted_laplacian: bad degree");
  auto complex = geom::build_surface_complex(mesh, theta, fiber, s);
  TwistedLaplacian L;
  L.degree = degree;
  L.s = s;
  L.fiber_dim = dim_tau(fiber);
  L.dense = chain::laplacian(complex, degree);
  return L;
}

SpectralDensity twisted_density(const TwistedLaplacian& L, int dense_cap) {
  if (L.dense) return vn::spectral_density(*L.dense);
  if (!L.sparse) throw std::invalid_argument("twisted_density: empty operator");
  if (L.sparse->rows() > dense_cap)
    throw std::invalid_argument(
        "twisted_density: operator too large for a dense decomposition");
  auto vals = numerics::dense_eigenvalues(*L.sparse);
  std::vector<std::pair<double, double>> jumps;
  jumps.reserve(vals.size());
  for (double v : vals) jumps.emplace_back(v, L.fiber_dim);
  return SpectralDensity::step(std::move(jumps), 0.0);
}

double lambda0(const TwistedLaplacian& L, bool exclude_kernel,
               double kernel_tol) {
  auto vals = low_spectrum(L, 8);
  int k = 8;
  while (exclude_kernel &&
         std::none_of(vals.begin(), vals.end(),
                      [&](double v) { return v >= kernel_tol; }) &&
         k < 1024 && L.sparse) {
    k *= 2;
    vals = low_spectrum(L, k);
  }
  for (double v : vals)
    if (!exclude_kernel || v >= kernel_tol) return v;
  return std::numeric_limits<double>::infinity();
}

namespace {

double sparse_max_abs(const SparseReal& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseReal::InnerIterator it(m, k); it; ++it)
      v = std::max(v, std::abs(it.value()));
  return v;
}

// Cell centers of a grid, per degree, in coordinate units.
std::vector<std::array<double, 2>> grid_centers(const FlatTorusGrid& grid,
                                                int degree) {
  std::vector<std::array<double, 2>> centers;
  if (grid.n == 1) {
    const double h = 1.0 / grid.res[0];
    for (int i = 0; i < grid.res[0]; ++i)
      centers.push_back({(i + (degree == 1 ? 0.5 : 0.0)) * h, 0.0});
    return centers;
  }
  const int N1 = grid.res[0], N2 = grid.res[1];
  const double h1 = 1.0 / N1, h2 = 1.0 / N2;
  auto push_all = [&](double ox, double oy) {
    for (int j = 0; j < N2; ++j)
      for (int i = 0; i < N1; ++i)
        centers.push_back({(i + ox) * h1, (j + oy) * h2});
  };
  if (degree == 0) {
    push_all(0.0, 0.0);
  } else if (degree == 1) {
    push_all(0.5, 0.0);  // x edges
    push_all(0.0, 0.5);  // y edges
  } else {
    push_all(0.5, 0.5);
  }
  return centers;
}

}  // namespace

GaugeReport gauge_check(const FlatTorusGrid& grid, const AnalyticCocycle& theta,
                        const geom::TrigPoly& h, double s) {
  AnalyticCocycle gauged = theta;
  for (const auto& t : h.terms) gauged.exact.terms.push_back(t);

  GridComplex base = geom::build_torus_grid_complex(grid, theta, 1.0, s);
  GridComplex shifted = geom::build_torus_grid_complex(grid, gauged, 1.0, s);

  GaugeReport rep;
  double osc_min = std::numeric_limits<double>::infinity(), osc_max = -osc_min;
  for (std::size_t j = 0; j < base.d.size(); ++j) {
    const auto from = grid_centers(grid, static_cast<int>(j));
    const auto to = grid_centers(grid, static_cast<int>(j) + 1);
    Eigen::VectorXd efrom(from.size()), eto(to.size());
    for (std::size_t i = 0; i < from.size(); ++i) {
      const double hv = h.value(from[i][0], from[i][1]);
      efrom[i] = std::exp(s * hv);
      osc_min = std::min(osc_min, hv);
      osc_max = std::max(osc_max, hv);
    }
    for (std::size_t i = 0; i < to.size(); ++i)
      eto[i] = std::exp(s * h.value(to[i][0], to[i][1]));
    SparseReal conjugated =
        eto.cwiseInverse().asDiagonal() * base.d[j] * efrom.asDiagonal();
    rep.conjugation_violation = std::max(
        rep.conjugation_violation, sparse_max_abs(SparseReal(
                                        conjugated - shifted.d[j])));
  }

  rep.kernels_match = true;
  rep.densities_equivalent = true;
  for (int j = 0; j <= grid.n; ++j) {
    TwistedLaplacian lb{j, s, 1.0, geom::grid_laplacian(base, j), {}};
    TwistedLaplacian lg{j, s, 1.0, geom::grid_laplacian(shifted, j), {}};
    auto db = twisted_density(lb);
    auto dg = twisted_density(lg);
    rep.betti_base.push_back(db.mass_at_zero());
    rep.betti_gauged.push_back(dg.mass_at_zero());
    if (std::abs(rep.betti_base.back() - rep.betti_gauged.back()) > 1e-8)
      rep.kernels_match = false;
    // dilatational equivalence with constant bounded by exp(2 osc(s h))
    auto cmp = vn::dilation_equivalent(db, dg, 10.0);
    rep.densities_equivalent = rep.densities_equivalent && cmp.equivalent;
    rep.dilation_constant = std::max(rep.dilation_constant, cmp.constant);
  }
  rep.dilation_bound = std::exp(2.0 * s * (osc_max - osc_min));
  return rep;
}

GaugeReport gauge_check(const SurfaceMesh& mesh, const MeshCocycle& theta,
                        const Eigen::VectorXd& h,
                        const vn::HilbertianModule& fiber, double s) {
  if (h.size() != mesh.num_vertices)
    throw std::invalid_argument("gauge_check: gauge size mismatch");
  MeshCocycle gauged = theta;
  for (int e = 0; e < mesh.num_edges(); ++e)
    gauged.edge_values[e] += h[mesh.edges[e].second] - h[mesh.edges[e].first];

  auto cb = geom::build_surface_complex(mesh, theta, fiber, s);
  auto cg = geom::build_surface_complex(mesh, gauged, fiber, s);

  GaugeReport rep;
  // Gauge exponents at cell basepoints: vertices themselves, edge tails,
  // face walk-starting corners.
  std::vector<double> face_base(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& step = mesh.faces[f].front();
    face_base[f] =
        step.sign > 0 ? h[mesh.edges[step.edge].first]
                      : h[mesh.edges[step.edge].second];
  }
  const auto& alg = fiber.algebra();
  for (std::size_t b = 0; b < alg.block_count(); ++b) {
    const int m = alg.block_dim(b) * fiber.multiplicity();
    auto expand = [&](const std::vector<double>& source, int count) {
      Eigen::VectorXcd out(count * m);
      for (int i = 0; i < count; ++i)
        out.segment(i * m, m).setConstant(std::exp(s * source[i]));
      return out;
    };
    std::vector<double> hv(h.data(), h.data() + h.size());
    std::vector<double> he(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) he[e] = h[mesh.edges[e].first];
    const auto E0 = expand(hv, mesh.num_vertices);
    const auto E1 = expand(he, mesh.num_edges());
    const auto E2 = expand(face_base, mesh.num_faces());
    const vn::Mat c0 = E1.cwiseInverse().asDiagonal() *
                       cb.differential(0).blocks[b] * E0.asDiagonal();
    const vn::Mat c1 = E2.cwiseInverse().asDiagonal() *
                       cb.differential(1).blocks[b] * E1.asDiagonal();
    rep.conjugation_violation = std::max(
        rep.conjugation_violation,
        std::max((c0 - cg.differential(0).blocks[b]).cwiseAbs().maxCoeff(),
                 (c1 - cg.differential(1).blocks[b]).cwiseAbs().maxCoeff()));
  }

  rep.kernels_match = true;
  rep.densities_equivalent = true;
  for (int j = 0; j <= 2; ++j) {
    const double bb = chain::l2_betti(cb, j);
    const double bg = chain::l2_betti(cg, j);
    rep.betti_base.push_back(bb);
    rep.betti_gauged.push_back(bg);
    if (std::abs(bb - bg) > 1e-8) rep.kernels_match = false;
    auto cmp = vn::dilation_equivalent(
        vn::spectral_density(chain::laplacian(cb, j)),
        vn::spectral_density(chain::laplacian(cg, j)), 10.0);
    rep.densities_equivalent = rep.densities_equivalent && cmp.equivalent;
    rep.dilation_constant = std::max(rep.dilation_constant, cmp.constant);
  }
  const double osc = h.maxCoeff() - h.minCoeff();
  rep.dilation_bound = std::exp(2.0 * s * osc);
  return rep;
}

StarReport hodge_star_check(const FlatTorusGrid& grid,
                            const AnalyticCocycle& theta, int degree,
                            double s, int eig_count) {
  AnalyticCocycle minus = theta;
  minus.periods[0] = -minus.periods[0];
  minus.periods[1] = -minus.periods[1];
  for (auto& t : minus.exact.terms) {
    t.c = -t.c;
    t.s = -t.s;
  }
  StarReport rep;
  const int co_degree = grid.n - degree;
  GridComplex cp = geom::build_torus_grid_complex(grid, theta, 1.0, s);
  GridComplex cm = geom::build_torus_grid_complex(grid, minus, 1.0, s);
  SparseReal Ap = geom::grid_laplacian(cp, degree);
  SparseReal Am = geom::grid_laplacian(cm, co_degree);

  const SparseReal star = geom::grid_hodge_star(grid, degree);
  const SparseReal star_back = geom::grid_hodge_star(grid, co_degree);
  const double sign = (degree * co_degree) % 2 == 0 ? 1.0 : -1.0;
  SparseReal ss = SparseReal(star_back * star);
  SparseReal eye(ss.rows(), ss.cols());
  eye.setIdentity();
  rep.star_involution_defect = sparse_max_abs(SparseReal(ss - sign * eye));
  rep.intertwining_defect =
      sparse_max_abs(SparseReal(SparseReal(star * Ap) - SparseReal(Am * star)));

  auto ep = numerics::lowest_eigenvalues(Ap, eig_count);
  auto em = numerics::lowest_eigenvalues(Am, eig_count);
  for (std::size_t i = 0; i < std::min(ep.size(), em.size()); ++i)
    rep.isospectrality_defect =
        std::max(rep.isospectrality_defect, std::abs(ep[i] - em[i]));
  return rep;
}

double surface_duality_defect(const SurfaceMesh& mesh, const MeshCocycle& theta,
                              const vn::HilbertianModule& fiber, int degree,
                              double s) {
  auto primal = geom::build_surface_complex(mesh, theta, fiber, s);
  auto dual = geom::dual_surface_complex(mesh, theta, fiber, s);
  auto ep = vn::weighted_spectrum(chain::laplacian(primal, degree));
  auto em = vn::weighted_spectrum(chain::laplacian(dual, 2 - degree));
  if (ep.size() != em.size())
    return std::numeric_limits<double>::infinity();
  double defect = 0.0;
  for (std::size_t i = 0; i < ep.size(); ++i)
    defect = std::max(defect, std::abs(ep[i].first - em[i].first));
  return defect;
}

SemicontinuityReport multiplier_vanishing_scan(
    int n, const std::vector<std::array<double, 2>>& classes, int degree) {
  SemicontinuityReport rep;
  rep.vanishing_ok = true;
  for (const auto& c : classes) {
    const auto density =
        exact_flat_density(n, {c[0], c[1], 0.0}, degree, 1.0);
    const double atom = density.value(0.0);
    rep.values.push_back(atom);
    if (atom > 1e-12) rep.vanishing_ok = false;
  }
  rep.usc_ok = true;
  return rep;
}

SemicontinuityReport surface_semicontinuity_scan(
    const SurfaceMesh& mesh, const std::vector<Eigen::VectorXd>& period_list,
    const std::vector<int>& cut, int k, int degree, double tol) {
  SemicontinuityReport rep;
  for (const auto& periods : period_list) {
    auto theta = geom::harmonic_twist(mesh, periods);
    rep.values.push_back(geom::tower_betti(mesh, theta, cut, k)[degree]);
  }
  // Upper semicontinuity along the scan: a value may exceed its neighbors
  // (an upward jump at special classes) but must not sit below them.
  rep.usc_ok = true;
  double off_value = std::numeric_limits<double>::infinity();
  for (double v : rep.values) off_value = std::min(off_value, v);
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    if (rep.values[i] > off_value + tol)
      rep.jump_indices.push_back(static_cast<int>(i));
    const double left = i > 0 ? rep.values[i - 1] : rep.values[i];
    const double right =
        i + 1 < rep.values.size() ? rep.values[i + 1] : rep.values[i];
    if (rep.values[i] < std::max(left, right) - tol &&
        rep.values[i] < off_value - tol)
      rep.usc_ok = false;
  }
  return rep;
}

}  // namespace twistlab::spectral
