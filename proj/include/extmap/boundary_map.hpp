#pragma once

#include <iosfwd>
#include <optional>

#include "extmap/nystrom.hpp"

namespace extmap {

/// Boundary correspondence data recovered from a density solution. psi has
/// unit modulus by construction; theta is the continuous increasing lift of
/// arg psi with theta at the first node in [0, 2pi); theta_prime (with
/// respect to arc length) is present for trapezoid meshes only.
struct BoundaryMap {
    DensitySolution density;
    std::vector<Complex> phi_tilde;
    std::vector<Complex> psi;
    std::vector<double> theta;
    std::optional<std::vector<double>> theta_prime;
    double alpha1 = 0.0;   // leading Laurent coefficient, > 0
    Complex alpha0;        // constant Laurent coefficient
    Complex mean_corr;     // c = (1/2pi i) contour integral of phi/z
    double theta_prime_imag_residual = 0.0;  // |Im(-i phi~'/phi~)| diagnostic

    const QuadratureMesh& mesh() const { return density.mesh; }
};

/// c = (1/2pi i) sum_j w_j phi_j p'_j / p_j; equals -alpha0/alpha1 up to
/// discretization error. Requires the origin inside the curve.
Complex mean_correction(const QuadratureMesh& mesh, std::span<const Complex> phi);

/// Full recovery pipeline: mean correction, normalization to psi and theta,
/// alpha1 = 2/mean|phi~|, alpha0 = -alpha1 c, plus theta' on trapezoid
/// meshes.
BoundaryMap compute_boundary_map(const DensitySolution& sol);

/// theta' with respect to arc length at the nodes (trapezoid meshes only).
std::vector<double> theta_prime(const BoundaryMap& map);

/// Off-node boundary value of the computed map: Nystrom interpolation of the
/// density, mean correction, normalization.
Complex boundary_psi_at(const BoundaryMap& map, double t);

/// Exterior map value by the Cauchy integral,
///   Psi(z0) = alpha1 z0 + alpha0 - (1/2pi i) sum_j w_j psi_j p'_j/(p_j - z0).
/// Throws std::domain_error unless z0 is exterior; near_boundary set by the
/// naive-quadrature distance guard.
PointValue eval_exterior(const BoundaryMap& map, Complex z0);

/// m-th Faber polynomial at an interior point via double-layer potentials of
/// the densities cos(m theta), sin(m theta):  P_m = -2 D(cos m theta) -
/// 2i D(sin m theta); m = 0 uses the constant density -1 and returns ~1.
PointValue faber_dlp(const BoundaryMap& map, int m, Complex z0);

/// CSV columns: t, Re p, Im p, theta, Re Psi, Im Psi, theta_prime (blank for
/// panel meshes).
void write_boundary_map_csv(const BoundaryMap& map, std::ostream& out);

nlohmann::json boundary_map_header(const BoundaryMap& map);

}  // namespace extmap
