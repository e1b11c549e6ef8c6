#include "extmap/boundary_map.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "extmap/fourier.hpp"
#include "extmap/io.hpp"

namespace extmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_to_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;  // rounding at the seam
    return r;
}

}  // namespace

Complex mean_correction(const QuadratureMesh& mesh, std::span<const Complex> phi) {
    if (phi.size() != mesh.size())
        throw std::invalid_argument("mean_correction: density length mismatch");
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < mesh.size(); ++j)
        acc += mesh.weights[j] * phi[j] * mesh.dp[j] / mesh.p[j];
    return acc / Complex(0.0, kTwoPi);
}

BoundaryMap compute_boundary_map(const DensitySolution& sol) {
    const QuadratureMesh& mesh = sol.mesh;
    const std::size_t n = mesh.size();

    BoundaryMap map;
    map.density = sol;
    map.mean_corr = mean_correction(mesh, sol.phi);

    map.phi_tilde.resize(n);
    map.psi.resize(n);
    map.theta.resize(n);
    double mod_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const Complex pt = sol.phi[j] + map.mean_corr;
        const double mod = std::abs(pt);
        if (mod < 1e-13)
            throw std::runtime_error("compute_boundary_map: degenerate density (upstream solve failed)");
        map.phi_tilde[j] = pt;
        map.psi[j] = -pt / mod;
        mod_sum += mod;
    }
    map.alpha1 = 2.0 / (mod_sum / static_cast<double>(n));
    map.alpha0 = -map.alpha1 * map.mean_corr;

    // continuous increasing lift of arg psi, first node in [0, 2pi)
    map.theta[0] = wrap_to_2pi(std::arg(map.psi[0]));
    for (std::size_t j = 1; j < n; ++j) {
        const double inc = std::arg(map.psi[j] / map.psi[j - 1]);
        if (std::abs(inc) >= std::numbers::pi - 1e-12)
            throw std::runtime_error(
                "compute_boundary_map: angular step >= pi between nodes; refine the mesh");
        map.theta[j] = map.theta[j - 1] + inc;
    }

    if (mesh.kind == MeshKind::trapezoid) {
        const std::vector<Complex> dphi = fourier_derivative(map.phi_tilde, mesh.curve.period());
        std::vector<double> tp(n);
        double imag_res = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Complex q = Complex(0.0, -1.0) * dphi[j] / map.phi_tilde[j];
            imag_res = std::max(imag_res, std::abs(q.imag()));
            tp[j] = q.real() / std::abs(mesh.dp[j]);
        }
        map.theta_prime = std::move(tp);
        map.theta_prime_imag_residual = imag_res;
    }
    return map;
}

std::vector<double> theta_prime(const BoundaryMap& map) {
    if (!map.theta_prime)
        throw std::invalid_argument("theta_prime: unsupported on panel meshes");
    return *map.theta_prime;
}

Complex boundary_psi_at(const BoundaryMap& map, double t) {
    const Complex pt = interpolate_density(map.density, t) + map.mean_corr;
    const double mod = std::abs(pt);
    if (mod < 1e-13) throw std::runtime_error("boundary_psi_at: degenerate interpolated density");
    return -pt / mod;
}

PointValue eval_exterior(const BoundaryMap& map, Complex z0) {
    const QuadratureMesh& mesh = map.mesh();
    if (discrete_winding(mesh, z0) != 0)
        throw std::domain_error("eval_exterior: point is not in the exterior domain");

    std::size_t nearest = 0;
    double dist = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        const double d = std::abs(mesh.p[j] - z0);
        if (d < dist) {
            dist = d;
            nearest = j;
        }
    }
    const double spacing =
        std::abs(mesh.p[(nearest + 1) % mesh.size()] - mesh.p[nearest]);
    const bool near = dist < 5.0 * spacing;

    Complex sum(0.0, 0.0);
    for (std::size_t j = 0; j < mesh.size(); ++j)
        sum += mesh.weights[j] * map.psi[j] * mesh.dp[j] / (mesh.p[j] - z0);
    const Complex value = map.alpha1 * z0 + map.alpha0 - sum / Complex(0.0, kTwoPi);
    return {value, near};
}

PointValue faber_dlp(const BoundaryMap& map, int m, Complex z0) {
    if (m < 0) throw std::invalid_argument("faber_dlp: m must be >= 0");
    const QuadratureMesh& mesh = map.mesh();
    const std::size_t n = mesh.size();

    if (m == 0) {
        const std::vector<Complex> ones(n, Complex(-1.0, 0.0));
        return apply_dlp(mesh, ones, z0);
    }
    std::vector<Complex> density(n);
    for (std::size_t j = 0; j < n; ++j)
        density[j] = Complex(std::cos(m * map.theta[j]), std::sin(m * map.theta[j]));
    const PointValue d = apply_dlp(mesh, density, z0);
    return {-2.0 * d.value, d.near_boundary};
}

void write_boundary_map_csv(const BoundaryMap& map, std::ostream& out) {
    const QuadratureMesh& mesh = map.mesh();
    out << "t,re_p,im_p,theta,re_psi,im_psi,theta_prime\n";
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        out << format_full(mesh.nodes[j]) << ',' << format_full(mesh.p[j].real()) << ','
            << format_full(mesh.p[j].imag()) << ',' << format_full(map.theta[j]) << ','
            << format_full(map.psi[j].real()) << ',' << format_full(map.psi[j].imag()) << ',';
        if (map.theta_prime) out << format_full((*map.theta_prime)[j]);
        out << '\n';
    }
}

nlohmann::json boundary_map_header(const BoundaryMap& map) {
    const QuadratureMesh& mesh = map.mesh();
    return {{"curve", mesh.curve.descriptor()},
            {"mesh", mesh_summary(mesh)},
            {"n", mesh.size()},
            {"alpha1", map.alpha1},
            {"alpha0", {map.alpha0.real(), map.alpha0.imag()}},
            {"mean_correction", {map.mean_corr.real(), map.mean_corr.imag()}},
            {"residual_norm", map.density.residual_norm},
            {"condition_estimate", map.density.condition_estimate},
            {"theta_prime_imag_residual", map.theta_prime_imag_residual}};
}

}  // namespace extmap
