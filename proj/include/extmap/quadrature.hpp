#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "extmap/curve.hpp"

namespace extmap {

enum class MeshKind { trapezoid, panel };

/// Parameter interval of one quadrature panel.
struct Panel {
    double lo;
    double hi;
};

/// Quadrature discretization of a curve: parameter nodes, positive weights,
/// and cached curve data. Nodes are strictly increasing in [0, period) and
/// never coincide with corner parameters. Immutable once built.
struct QuadratureMesh {
    Curve curve;
    MeshKind kind = MeshKind::trapezoid;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<Complex> p;
    std::vector<Complex> dp;
    std::vector<Complex> ddp;
    std::vector<Panel> panels;  // empty for trapezoid meshes
    int gauss_order = 0;
    int refinement_level = 0;

    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule of order q on [-1,1], nodes ascending. Newton
/// iteration on the Legendre recurrence, converged to ~1e-15.
void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w);

/// Periodic trapezoid mesh with n equispaced nodes; smooth curves only.
QuadratureMesh trapezoid_mesh(const Curve& curve, int n);

/// Composite Gauss-Legendre panel mesh. Breakpoints are forced at t = 0 and
/// at every corner parameter; each side (arc between consecutive breakpoints)
/// is divided into base_panels_per_side equal panels of gauss_order nodes.
QuadratureMesh panel_mesh(const Curve& curve, int base_panels_per_side, int gauss_order);

/// Splits every panel adjacent to a corner parameter (on either side, period
/// wrap included) into two equal halves. Non-adjacent panels are unchanged.
QuadratureMesh refine_corners(const QuadratureMesh& mesh);

/// Parameter-space quadrature sum  sum_j w_j f_j. Callers include the p'
/// factor when integrating over dz.
Complex integrate(const QuadratureMesh& mesh, std::span<const Complex> f);

nlohmann::json mesh_summary(const QuadratureMesh& mesh);

/// CSV columns: t, w, Re p, Im p.
void write_mesh_csv(const QuadratureMesh& mesh, std::ostream& out);

}  // namespace extmap
