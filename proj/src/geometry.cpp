#include "twistlab/torus_grid.hpp"

#include <vector>

namespace twistlab::geom {

namespace {

using Triplet = Eigen::Triplet<double>;

// Holonomy weight for the hop from cell center p to cell center p + delta.
double hop(const AnalyticCocycle& theta, double s,
           const std::array<double, 2>& p, const std::array<double, 2>& delta) {
  return std::exp(-s * theta.segment_integral(p, delta));
}

}  // namespace

GridComplex build_torus_grid_complex(const FlatTorusGrid& grid,
                                     const AnalyticCocycle& theta,
                                     double fiber_dim, double s) {
  if (theta.n != grid.n)
    throw std::invalid_argument("build_torus_grid_complex: dimension mismatch");
  GridComplex c{grid, fiber_dim, {}, theta, s};

  if (grid.n == 1) {
    const int N = grid.res[0];
    const double h = 1.0 / N;
    const double inv_len = 1.0 / grid.spacing(0);
    SparseReal d0(N, N);
    std::vector<Triplet> t;
    t.reserve(2 * N);
    for (int i = 0; i < N; ++i) {
      const std::array<double, 2> tail{i * h, 0.0};
      const std::array<double, 2> head{(i + 1) * h, 0.0};
      // edge i runs tail -> head; weights transport into the edge center
      t.emplace_back(i, (i + 1) % N,
                     inv_len * hop(theta, s, head, {-0.5 * h, 0.0}));
      t.emplace_back(i, i, -inv_len * hop(theta, s, tail, {0.5 * h, 0.0}));
    }
    d0.setFromTriplets(t.begin(), t.end());
    c.d.push_back(std::move(d0));
    return c;
  }

  const int N1 = grid.res[0], N2 = grid.res[1];
  const double h1 = 1.0 / N1, h2 = 1.0 / N2;
  const double il1 = 1.0 / grid.spacing(0), il2 = 1.0 / grid.spacing(1);
  const int V = N1 * N2;
  auto vid = [&](int i, int j) { return ((i + N1) % N1) + N1 * ((j + N2) % N2); };
  auto xid = [&](int i, int j) { return vid(i, j); };
  auto yid = [&](int i, int j) { return V + vid(i, j); };

  SparseReal d0(2 * V, V);
  {
    std::vector<Triplet> t;
    t.reserve(4 * V);
    for (int j = 0; j < N2; ++j)
      for (int i = 0; i < N1; ++i) {
        const std::array<double, 2> v{i * h1, j * h2};
        const std::array<double, 2> vx{(i + 1) * h1, j * h2};
        const std::array<double, 2> vy{i * h1, (j + 1) * h2};
        t.emplace_back(xid(i, j), vid(i + 1, j),
                       il1 * hop(theta, s, vx, {-0.5 * h1, 0.0}));
        t.emplace_back(xid(i, j), vid(i, j),
                       -il1 * hop(theta, s, v, {0.5 * h1, 0.0}));
        t.emplace_back(yid(i, j), vid(i, j + 1),
                       il2 * hop(theta, s, vy, {0.0, -0.5 * h2}));
        t.emplace_back(yid(i, j), vid(i, j),
                       -il2 * hop(theta, s, v, {0.0, 0.5 * h2}));
      }
    d0.setFromTriplets(t.begin(), t.end());
  }

  SparseReal d1(V, 2 * V);
  {
    std::vector<Triplet> t;
    t.reserve(4 * V);
    for (int j = 0; j < N2; ++j)
      for (int i = 0; i < N1; ++i) {
        // boundary of face (i, j): bottom and right positive, top and left
        // negative; transports run from edge centers to the face center
        const std::array<double, 2> bottom{(i + 0.5) * h1, j * h2};
        const std::array<double, 2> top{(i + 0.5) * h1, (j + 1) * h2};
        const std::array<double, 2> left{i * h1, (j + 0.5) * h2};
        const std::array<double, 2> right{(i + 1) * h1, (j + 0.5) * h2};
        t.emplace_back(vid(i, j), xid(i, j),
                       il2 * hop(theta, s, bottom, {0.0, 0.5 * h2}));
        t.emplace_back(vid(i, j), xid(i, j + 1),
                       -il2 * hop(theta, s, top, {0.0, -0.5 * h2}));
        t.emplace_back(vid(i, j), yid(i + 1, j),
                       il1 * hop(theta, s, right, {-0.5 * h1, 0.0}));
        t.emplace_back(vid(i, j), yid(i, j),
                       -il1 * hop(theta, s, left, {0.5 * h1, 0.0}));
      }
    d1.setFromTriplets(t.begin(), t.end());
  }
  c.d.push_back(std::move(d0));
  c.d.push_back(std::move(d1));
  return c;
}

SparseReal grid_laplacian(const GridComplex& c, int degree) {
  if (degree < 0 || degree > c.top_degree())
    throw std::invalid_argument("grid_laplacian: degree out of range");
  const int n = c.dim(degree);
  SparseReal lap(n, n);
  if (degree < static_cast<int>(c.d.size()))
    lap += SparseReal(SparseReal(c.d[degree].transpose()) * c.d[degree]);
  if (degree - 1 >= 0)
    lap += SparseReal(c.d[degree - 1] *
                      SparseReal(c.d[degree - 1].transpose()));
  return lap;
}

double grid_d2_violation(const GridComplex& c) {
  double v = 0.0;
  for (std::size_t j = 0; j + 1 < c.d.size(); ++j) {
    SparseReal dd = SparseReal(c.d[j + 1] * c.d[j]);
    for (int k = 0; k < dd.outerSize(); ++k)
      for (SparseReal::InnerIterator it(dd, k); it; ++it)
        v = std::max(v, std::abs(it.value()));
  }
  return v;
}

chain::FiniteComplex build_torus_block_complex(
    const FlatTorusGrid& grid, const AnalyticCocycle& theta,
    const vn::HilbertianModule& fiber, double s) {
  if (!fiber.is_free())
    throw std::invalid_argument(
        "build_torus_block_complex: fiber must be a free module");
  GridComplex scalar = build_torus_grid_complex(grid, theta, 1.0, s);
  const auto& alg = fiber.algebra();

  std::vector<vn::HilbertianModule> modules;
  for (int degree = 0; degree <= grid.n; ++degree)
    modules.push_back(vn::HilbertianModule::free(
        fiber.algebra_ptr(), fiber.multiplicity() * grid.cells(degree)));

  std::vector<chain::BlockMap> diffs;
  for (std::size_t j = 0; j < scalar.d.size(); ++j) {
    chain::BlockMap bm;
    for (std::size_t b = 0; b < alg.block_count(); ++b) {
      const int m = alg.block_dim(b) * fiber.multiplicity();
      vn::Mat big = vn::Mat::Zero(scalar.d[j].rows() * m,
                                  scalar.d[j].cols() * m);
      for (int k = 0; k < scalar.d[j].outerSize(); ++k)
        for (SparseReal::InnerIterator it(scalar.d[j], k); it; ++it)
          big.block(it.row() * m, it.col() * m, m, m) =
              it.value() * vn::Mat::Identity(m, m);
      bm.blocks.push_back(std::move(big));
    }
    diffs.push_back(std::move(bm));
  }
  return chain::FiniteComplex(std::move(modules), std::move(diffs));
}

SparseReal grid_hodge_star(const FlatTorusGrid& grid, int degree) {
  if (degree < 0 || degree > grid.n)
    throw std::invalid_argument("grid_hodge_star: degree out of range");
  std::vector<Triplet> t;
  if (grid.n == 1) {
    const int N = grid.res[0];
    SparseReal star(N, N);
    for (int i = 0; i < N; ++i) t.emplace_back(i, i, 1.0);
    star.setFromTriplets(t.begin(), t.end());
    return star;
  }
  const int V = grid.res[0] * grid.res[1];
  if (degree == 0 || degree == 2) {
    SparseReal star(V, V);
    for (int i = 0; i < V; ++i) t.emplace_back(i, i, 1.0);
    star.setFromTriplets(t.begin(), t.end());
    return star;
  }
  // degree 1: dx -> dy, dy -> -dx on matching cells
  SparseReal star(2 * V, 2 * V);
  for (int i = 0; i < V; ++i) {
    t.emplace_back(V + i, i, 1.0);
    t.emplace_back(i, V + i, -1.0);
  }
  star.setFromTriplets(t.begin(), t.end());
  return star;
}

}  // namespace twistlab::geom
