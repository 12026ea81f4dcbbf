#pragma once

#include <Eigen/Sparse>

#include "twistlab/cocycle.hpp"
#include "twistlab/complex.hpp"

namespace twistlab::geom {

using SparseReal = Eigen::SparseMatrix<double>;

// Periodic cubical grid on the flat torus R^n / Z^n, n in {1, 2}, with a
// constant diagonal metric.  Axis i is divided into res[i] cells of
// coordinate width 1/res[i] and metric length sqrt(metric[i])/res[i].
struct FlatTorusGrid {
  int n = 1;
  std::array<int, 2> res{16, 16};
  std::array<double, 2> metric{1.0, 1.0};

  static constexpr int kMinResolution = 8;

  FlatTorusGrid(int dim, std::array<int, 2> resolution,
                std::array<double, 2> metric_coeff = {1.0, 1.0})
      : n(dim), res(resolution), metric(metric_coeff) {
    if (n != 1 && n != 2)
      throw std::invalid_argument("FlatTorusGrid: dimension must be 1 or 2");
    for (int i = 0; i < n; ++i) {
      if (res[i] < kMinResolution)
        throw std::invalid_argument("FlatTorusGrid: resolution below floor");
      if (metric[i] <= 0.0)
        throw std::invalid_argument("FlatTorusGrid: metric must be positive");
    }
  }

  int vertices() const { return n == 1 ? res[0] : res[0] * res[1]; }
  int edges() const { return n == 1 ? res[0] : 2 * res[0] * res[1]; }
  int faces() const { return n == 1 ? 0 : res[0] * res[1]; }
  int cells(int degree) const {
    switch (degree) {
      case 0: return vertices();
      case 1: return edges();
      case 2: return faces();
      default: return 0;
    }
  }
  double spacing(int axis) const {
    return std::sqrt(metric[axis]) / res[axis];
  }
  // Norm of a constant covector in the inverse metric.
  double covector_norm2(const std::array<double, 2>& theta) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += theta[i] * theta[i] / metric[i];
    return s;
  }
};

// Cochain complex of a torus grid with coefficients in the holonomy local
// system of a closed analytic 1-form.  Metric weights are absorbed into the
// differentials, so adjoints are plain transposes; the fiber acts by
// scalars, entering only through its trace dimension.
struct GridComplex {
  FlatTorusGrid grid;
  double fiber_dim = 1.0;             // dim_tau of the (scalar) fiber
  std::vector<SparseReal> d;          // d[j] : C^j -> C^{j+1}
  AnalyticCocycle twist;              // the form used in assembly
  double twist_scale = 1.0;

  int top_degree() const { return grid.n; }
  int dim(int degree) const { return grid.cells(degree); }
};

// Builds the twisted grid complex of s * theta.  Throws if the resolution is
// below the accuracy floor (enforced by FlatTorusGrid).
GridComplex build_torus_grid_complex(const FlatTorusGrid& grid,
                                     const AnalyticCocycle& theta,
                                     double fiber_dim = 1.0, double s = 1.0);

// Sparse twisted Laplacian of the grid complex in one degree.
SparseReal grid_laplacian(const GridComplex& c, int degree);

// Largest-coordinate check: max violation of d.d = 0 over all degrees.
double grid_d2_violation(const GridComplex& c);

// Dense materialization of a grid complex over a free fiber module; entries
// are the scalar holonomy weights tensored with the fiber identity.  Sizes
// grow with fiber blocks, so this path is for small grids.
chain::FiniteComplex build_torus_block_complex(
    const FlatTorusGrid& grid, const AnalyticCocycle& theta,
    const vn::HilbertianModule& fiber, double s = 1.0);

// Hodge star on grid complexes: signed index pairing of j-cells with
// complementary (n-j)-cells of the dual (half-shifted) grid.  Returns the
// permutation-with-signs matrix C^j(theta) -> C^{n-j}(-theta); the
// intertwining property with the two Laplacians is measured by tests, and is
// exact for harmonic twists.
SparseReal grid_hodge_star(const FlatTorusGrid& grid, int degree);

}  // namespace twistlab::geom
