#pragma once

#include <optional>
#include <vector>

#include "warplab/mesh.hpp"
#include "warplab/model_space.hpp"

namespace warplab {

struct CutSimplex {
  std::size_t simplex = 0;
  double fraction = 0.0;  // share of the simplex volume with r < t
};

/// One (m-1)-simplex of the interpolated level set r = t, with its corners in parameter
/// coordinates (wrap undone relative to the parent simplex) and induced (m-1)-volume.
struct BoundaryFacet {
  std::size_t parent = 0;
  std::vector<Vec> corners;
  double area = 0.0;
};

class ExtrinsicBallMesh {
 public:
  const MeshedSubmanifold* parent = nullptr;
  double t = 0.0;
  std::vector<std::size_t> interior_simplices;
  std::vector<CutSimplex> cut_simplices;
  std::vector<BoundaryFacet> boundary_elements;

  bool empty() const { return interior_simplices.empty() && cut_simplices.empty(); }
};

/// Clips every simplex against the linear interpolant of r at level t.
ExtrinsicBallMesh extrinsic_ball(const MeshedSubmanifold& M, double t);
double volume(const ExtrinsicBallMesh& B);
double area(const ExtrinsicBallMesh& B);

/// Boundary area of the ball split by the connected component of {r >= t} each facet
/// borders, largest first.
std::vector<double> boundary_area_per_end(const ExtrinsicBallMesh& B);

struct EndsScan {
  std::vector<double> radii;
  std::vector<int> counts;
  std::optional<int> stabilized_count;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// Number of connected components of the simplices with every vertex at r >= t.
int count_components_outside(const MeshedSubmanifold& M, double t);

/// Counts at each radius; the count is declared stable when the trailing run of equal
/// counts spans at least `window_fraction` of the scanned range.
EndsScan count_ends(const MeshedSubmanifold& M, const std::vector<double>& radii, int threads = 1,
                    double window_fraction = 0.3);

struct VertexExtremum {
  double value = 0.0;
  std::size_t vertex = 0;
  std::size_t samples = 0;
};

/// Minimum of grad_r_tangent over vertices with t_lo <= r <= t_hi. DomainError if no vertex
/// qualifies.
VertexExtremum critical_point_scan(const MeshedSubmanifold& M, double t_lo, double t_hi);

/// Minimum eigenvalue of the restricted Hessian of F(r) over vertices with r_lo <= r <= r_hi.
/// DomainError if no vertex qualifies.
VertexExtremum convexity_scan(const MeshedSubmanifold& M, const ParametricImmersion& I, double r_lo, double r_hi,
                              const RadialFunction& F, int threads = 1);

}  // namespace warplab
