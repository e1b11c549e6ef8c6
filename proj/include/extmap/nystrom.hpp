#pragma once

#include <Eigen/Core>
#include <span>

#include "extmap/quadrature.hpp"

namespace extmap {

/// Neumann kernel of the double-layer potential in parametric form,
///   k(t,tau) = (1/pi) Im[ p'(tau) / (p(t) - p(tau)) ],  t != tau,
///   k(t,t)   = -(1/2pi) Im[ p''(t) / p'(t) ],
/// which is continuous across the diagonal on smooth arcs and constant
/// (-1/2pi) on circles. Neither argument may be a corner parameter.
double neumann_kernel(const Curve& curve, double t, double tau);

/// d/dt of the off-diagonal kernel:
///   -(1/pi) Im[ p'(tau) p'(t) / (p(t) - p(tau))^2 ].
/// Termwise singular as t -> tau; callers keep t away from tau.
double neumann_kernel_dt(const Curve& curve, double t, double tau);

/// Nystrom matrix A[i][j] = delta_ij - w_j k(t_i, t_j). Real for all
/// geometries.
Eigen::MatrixXd assemble(const QuadratureMesh& mesh);

/// Complex Nystrom density phi* solving  A phi = -2 p  on the mesh nodes.
struct DensitySolution {
    static constexpr double rhs_scale = -2.0;

    QuadratureMesh mesh;
    std::vector<Complex> phi;
    double residual_norm = 0.0;
    double condition_estimate = 0.0;
    bool ill_conditioned = false;
};

/// Assembles and solves the Nystrom system with a pivoted dense LU. The
/// real matrix is factored once and reused for the real and imaginary
/// right-hand sides; one step of iterative refinement keeps the residual
/// at roundoff. A condition estimate above 1e12 sets the ill_conditioned
/// diagnostic.
DensitySolution solve_density(const QuadratureMesh& mesh);

/// Nystrom interpolation  phi*(t) = -2 p(t) + sum_j w_j k(t, t_j) phi*_j.
/// Reproduces the solved values at the nodes.
Complex interpolate_density(const DensitySolution& sol, double t);

/// Derivative of the Nystrom interpolant. Off the nodes this differentiates
/// the interpolation formula termwise; at the nodes it switches to spectral
/// differentiation of the periodic nodal sequence. Trapezoid meshes only.
Complex interpolate_density_derivative(const DensitySolution& sol, double t);

struct PointValue {
    Complex value;
    bool near_boundary = false;  // set when the naive-quadrature guard trips
};

/// Double-layer potential at an interior point,
///   D phi(x) = -Re[(1/2pi i) sum_j w_j phi_j p'_j / (p_j - x)]
/// for real densities, applied componentwise to complex ones. Throws
/// std::domain_error when x is not inside the curve; sets near_boundary when
/// dist(x, boundary) < 5 x local node spacing.
PointValue apply_dlp(const QuadratureMesh& mesh, std::span<const Complex> density, Complex x);

/// Discrete winding number of the sampled boundary around x.
int discrete_winding(const QuadratureMesh& mesh, Complex x);

}  // namespace extmap
