#pragma once

#include <optional>

#include "twistlab/eigensolver.hpp"
#include "twistlab/surface.hpp"
#include "twistlab/torus_grid.hpp"

namespace twistlab::spectral {

using geom::AnalyticCocycle;
using geom::FlatTorusGrid;
using geom::GridComplex;
using geom::MeshCocycle;
using geom::SparseReal;
using geom::SurfaceMesh;
using vn::SpectralDensity;

// Assembled twisted Laplacian Delta_{beta + s alpha, j}.  Grid models keep a
// sparse scalar operator (fiber entering through its trace dimension); mesh
// models keep the dense block endomorphism.
struct TwistedLaplacian {
  int degree = 0;
  double s = 1.0;
  double fiber_dim = 1.0;
  std::optional<SparseReal> sparse;
  std::optional<vn::AEndomorphism> dense;

  int dim() const {
    return sparse ? static_cast<int>(sparse->rows()) : -1;
  }
};

TwistedLaplacian assemble_twisted_laplacian(const FlatTorusGrid& grid,
                                            const AnalyticCocycle& beta,
                                            const AnalyticCocycle& alpha,
                                            double s, int degree,
                                            double fiber_dim = 1.0);

TwistedLaplacian assemble_twisted_laplacian(const SurfaceMesh& mesh,
                                            const MeshCocycle& theta,
                                            const vn::HilbertianModule& fiber,
                                            double s, int degree);

// Step spectral density via eigendecomposition weighted by commutant traces.
// Sparse operators are densified below `dense_cap` rows and rejected above.
SpectralDensity twisted_density(const TwistedLaplacian& L, int dense_cap = 4200);

// Bottom of the spectrum, optionally excluding the numerical kernel.
double lambda0(const TwistedLaplacian& L, bool exclude_kernel,
               double kernel_tol = 1e-10);

struct GaugeReport {
  double conjugation_violation = 0.0;  // |D_{theta+dh} - E^{-1} D_theta E|
  bool kernels_match = false;
  std::vector<double> betti_base;
  std::vector<double> betti_gauged;
  bool densities_equivalent = false;
  double dilation_constant = 0.0;
  double dilation_bound = 0.0;  // exp(2 osc(s h))
};

// Prop-2.1-style gauge check on a torus grid: replacing theta by theta + dh
// conjugates the twisted coboundary by the positive diagonal exp(s h) at the
// cell centers.  Uses dense densities, so keep the grid moderate.
GaugeReport gauge_check(const FlatTorusGrid& grid, const AnalyticCocycle& theta,
                        const geom::TrigPoly& h, double s = 1.0);

// Same check on a surface mesh with a per-vertex gauge function.
GaugeReport gauge_check(const SurfaceMesh& mesh, const MeshCocycle& theta,
                        const Eigen::VectorXd& h,
                        const vn::HilbertianModule& fiber, double s = 1.0);

struct StarReport {
  double star_involution_defect = 0.0;   // |star(n-j) star(j) -+ id|
  double intertwining_defect = 0.0;      // |star Delta_theta - Delta_-theta star|
  double isospectrality_defect = 0.0;    // matched low eigenvalue lists
};

// Hodge-star pairing Delta_{theta, j} vs Delta_{-theta, n-j} on a torus
// grid, both operators assembled independently.  Exact for harmonic twists.
StarReport hodge_star_check(const FlatTorusGrid& grid,
                            const AnalyticCocycle& theta, int degree,
                            double s = 1.0, int eig_count = 40);

// Dual-complex Poincare pairing on a surface: eigenvalues of the primal
// degree-j Laplacian against degree (2-j) of the dual complex carrying -theta.
double surface_duality_defect(const SurfaceMesh& mesh, const MeshCocycle& theta,
                              const vn::HilbertianModule& fiber, int degree,
                              double s = 1.0);

struct SemicontinuityReport {
  std::vector<double> values;   // b at each scanned class
  bool vanishing_ok = false;    // multiplier scan: b^0 = b^n = 0 everywhere
  bool usc_ok = false;          // no downward jump at the marked class
  std::vector<int> jump_indices;  // classes where b exceeds the off-class value
};

// Multiplier-model vanishing scan (Lemma 5.1 shape): checks that the flat
// band densities carry no atom at zero for each scanned class.
SemicontinuityReport multiplier_vanishing_scan(
    int n, const std::vector<std::array<double, 2>>& classes, int degree);

// Surface scan of normalized tower Betti numbers along a line of classes
// through zero; reports upper semicontinuity and the location of the jumps.
SemicontinuityReport surface_semicontinuity_scan(
    const SurfaceMesh& mesh, const std::vector<Eigen::VectorXd>& period_list,
    const std::vector<int>& cut, int k, int degree, double tol = 1e-6);

}  // namespace twistlab::spectral
