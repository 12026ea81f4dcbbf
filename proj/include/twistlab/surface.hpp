#pragma once

#include <Eigen/Sparse>

#include "twistlab/cocycle.hpp"
#include "twistlab/complex.hpp"

namespace twistlab::geom {

// Closed oriented surface as a Delta-complex: cells may be glued to each
// other, so a face boundary is a closed walk of signed edge instances.
struct SurfaceMesh {
  struct EdgeRef {
    int edge = 0;
    int sign = 1;  // +1 traversed tail->head, -1 head->tail
  };

  int genus = 0;
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;       // (tail, head)
  std::vector<std::vector<EdgeRef>> faces;      // oriented boundary walks
  std::vector<double> edge_lengths;             // empty = combinatorial metric
  std::vector<std::vector<EdgeRef>> basis_loops;  // 2g homology basis walks

  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int euler_characteristic() const {
    return num_vertices - num_edges() + num_faces();
  }
};

// Flat 4g-gon gluing of the closed orientable genus-g surface, coned from a
// center vertex, with `refine` rounds of barycentric-style subdivision
// (0..3).  The 2g word edges survive refinement as stored basis loops made
// of chains of refined edges.
SurfaceMesh genus_surface(int genus, int refine = 0);

// Verifies that the boundary walks are closed and coherently oriented.
void validate_mesh(const SurfaceMesh& mesh);

// A 1-cocycle with prescribed periods over the stored basis loops; values on
// the remaining edges are propagated so every face-boundary sum vanishes
// exactly.  Periods integrate back to the inputs (within 1e-12).
MeshCocycle harmonic_twist(const SurfaceMesh& mesh,
                           const Eigen::VectorXd& periods);

// Period of a cocycle along a closed walk given by signed edge instances.
double loop_period(const SurfaceMesh& mesh, const MeshCocycle& theta,
                   const std::vector<SurfaceMesh::EdgeRef>& loop);

// Twisted cochain complex of the local system exp(-theta) (x) fiber.
// Optional per-edge algebra elements compose a unitary fiber representation
// with the scalar holonomy (cover towers and twist experiments).
chain::FiniteComplex build_surface_complex(
    const SurfaceMesh& mesh, const MeshCocycle& theta,
    const vn::HilbertianModule& fiber, double s = 1.0,
    const std::vector<vn::AlgebraElement>* edge_unitaries = nullptr);

// Integer 1-cocycle with period 1 along the chosen basis loop and 0 along
// the others; used as the layer-shift function of cyclic covers.
std::vector<int> integer_cut_cocycle(const SurfaceMesh& mesh, int basis_index);

struct CoverResult {
  SurfaceMesh mesh;                 // k-fold cover, cells multiplied by k
  MeshCocycle twist;                // pullback of the base twist
  std::vector<int> deck_vertex_map; // image of each vertex under the deck map
};

// k-fold cyclic cover along an integer cut cocycle.  Throws when the cut has
// zero period pairing with every loop (no covering direction).
CoverResult build_cover(const SurfaceMesh& base, const MeshCocycle& theta,
                        const std::vector<int>& cut, int k);

// Normalized tower Betti numbers of the k-fold cyclic cover: computed via
// the character decomposition of the deck group, i.e. the complex with fiber
// l2(Z/k) and per-edge deck characters.  Returns b_j / k for j = 0..2.
std::vector<double> tower_betti(const SurfaceMesh& mesh,
                                const MeshCocycle& theta,
                                const std::vector<int>& cut, int k,
                                double s = 1.0);

// Dual-complex realization of Poincare duality: the twisted complex of the
// dual cell structure with twist -theta, whose degree-j Laplacian pairs with
// the primal degree-(n-j) one.  Built from the transposed incidence with the
// inverse holonomy weights.
chain::FiniteComplex dual_surface_complex(
    const SurfaceMesh& mesh, const MeshCocycle& theta,
    const vn::HilbertianModule& fiber, double s = 1.0);

}  // namespace twistlab::geom
