#include "extmap/nystrom.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "extmap/fourier.hpp"

namespace extmap {

namespace {

constexpr double kPi = std::numbers::pi;

double periodic_gap(double t, double tau, double period) {
    double d = std::fmod(std::abs(t - tau), period);
    return std::min(d, period - d);
}

// Exact corner hits only: deeply refined meshes place legitimate nodes
// within ~1e-12 of a corner parameter.
void check_not_corner(const Curve& curve, double t) {
    if (!curve.has_corners()) return;
    const double tol = 1e-14 * curve.period();
    for (double c : curve.corners()) {
        if (periodic_gap(t, c, curve.period()) <= tol)
            throw std::invalid_argument("kernel evaluated at a corner parameter");
    }
}

// chord length between node j and its successor (wrap-aware)
double local_spacing(const QuadratureMesh& mesh, std::size_t j) {
    const std::size_t n = mesh.size();
    return std::abs(mesh.p[(j + 1) % n] - mesh.p[j]);
}

}  // namespace

double neumann_kernel(const Curve& curve, double t, double tau) {
    check_not_corner(curve, t);
    check_not_corner(curve, tau);

    const double beta = curve.period();
    if (periodic_gap(t, tau, beta) <= 1e-9 * beta) {
        const CurvePoint c = curve.eval(tau);
        return -std::imag(c.ddp / c.dp) / (2.0 * kPi);
    }
    const Complex pt = curve.point(t);
    const CurvePoint c = curve.eval(tau);
    const Complex diff = pt - c.p;
    if (std::abs(diff) <= 1e-13 * (1.0 + std::abs(pt)))
        throw std::runtime_error("neumann_kernel: distinct parameters map to the same point");
    return std::imag(c.dp / diff) / kPi;
}

double neumann_kernel_dt(const Curve& curve, double t, double tau) {
    check_not_corner(curve, t);
    check_not_corner(curve, tau);
    const CurvePoint a = curve.eval(t);
    const CurvePoint b = curve.eval(tau);
    const Complex diff = a.p - b.p;
    if (std::abs(diff) <= 1e-13 * (1.0 + std::abs(a.p)))
        throw std::runtime_error("neumann_kernel_dt: parameters too close");
    return -std::imag(b.dp * a.dp / (diff * diff)) / kPi;
}

Eigen::MatrixXd assemble(const QuadratureMesh& mesh) {
    const std::size_t n = mesh.size();
    Eigen::MatrixXd A(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double k;
            if (i == j) {
                k = -std::imag(mesh.ddp[j] / mesh.dp[j]) / (2.0 * kPi);
            } else {
                const Complex diff = mesh.p[i] - mesh.p[j];
                k = std::imag(mesh.dp[j] / diff) / kPi;
            }
            A(i, j) = (i == j ? 1.0 : 0.0) - mesh.weights[j] * k;
        }
    }
    return A;
}

DensitySolution solve_density(const QuadratureMesh& mesh) {
    const std::size_t n = mesh.size();
    const Eigen::MatrixXd A = assemble(mesh);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

    Eigen::MatrixXd b(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        b(i, 0) = DensitySolution::rhs_scale * mesh.p[i].real();
        b(i, 1) = DensitySolution::rhs_scale * mesh.p[i].imag();
    }

    Eigen::MatrixXd x = lu.solve(b);
    x += lu.solve(b - A * x);  // one refinement step
    const double residual = (b - A * x).cwiseAbs().maxCoeff();

    DensitySolution sol;
    sol.mesh = mesh;
    sol.phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.phi[i] = Complex(x(i, 0), x(i, 1));
    sol.residual_norm = residual;
    const double rcond = lu.rcond();
    sol.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    sol.ill_conditioned = sol.condition_estimate > 1e12;
    if (sol.ill_conditioned)
        std::cerr << "solve_density: ill-conditioned Nystrom system, condition estimate "
                  << sol.condition_estimate << "\n";
    return sol;
}

Complex interpolate_density(const DensitySolution& sol, double t) {
    const QuadratureMesh& mesh = sol.mesh;
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < mesh.size(); ++j)
        acc += mesh.weights[j] * neumann_kernel(mesh.curve, t, mesh.nodes[j]) * sol.phi[j];
    return DensitySolution::rhs_scale * mesh.curve.point(t) + acc;
}

Complex interpolate_density_derivative(const DensitySolution& sol, double t) {
    const QuadratureMesh& mesh = sol.mesh;
    if (mesh.kind != MeshKind::trapezoid)
        throw std::invalid_argument(
            "interpolate_density_derivative: only trapezoid meshes are supported");

    const double beta = mesh.curve.period();
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        if (periodic_gap(t, mesh.nodes[j], beta) <= 1e-9 * beta) {
            // uniform grid: spectral differentiation of the nodal sequence
            const std::vector<Complex> d = fourier_derivative(sol.phi, beta);
            return d[j];
        }
    }
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < mesh.size(); ++j)
        acc += mesh.weights[j] * neumann_kernel_dt(mesh.curve, t, mesh.nodes[j]) * sol.phi[j];
    return DensitySolution::rhs_scale * mesh.curve.eval(t).dp + acc;
}

int discrete_winding(const QuadratureMesh& mesh, Complex x) {
    const std::size_t n = mesh.size();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        total += std::arg((mesh.p[(j + 1) % n] - x) / (mesh.p[j] - x));
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

PointValue apply_dlp(const QuadratureMesh& mesh, std::span<const Complex> density, Complex x) {
    if (density.size() != mesh.size())
        throw std::invalid_argument("apply_dlp: density length does not match node count");
    if (discrete_winding(mesh, x) != 1)
        throw std::domain_error("apply_dlp: point is not inside the curve");

    std::size_t nearest = 0;
    double dist = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        const double d = std::abs(mesh.p[j] - x);
        if (d < dist) {
            dist = d;
            nearest = j;
        }
    }
    const bool near = dist < 5.0 * local_spacing(mesh, nearest);

    // componentwise Cauchy sums for the real and imaginary density parts
    Complex sum_re(0.0, 0.0), sum_im(0.0, 0.0);
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        const Complex c = mesh.weights[j] * mesh.dp[j] / (mesh.p[j] - x);
        sum_re += density[j].real() * c;
        sum_im += density[j].imag() * c;
    }
    const Complex i2pi(0.0, 2.0 * kPi);
    return {Complex(-std::real(sum_re / i2pi), -std::real(sum_im / i2pi)), near};
}

}  // namespace extmap
