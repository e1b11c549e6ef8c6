#include "extmap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "extmap/io.hpp"

namespace extmap {

namespace {

void cache_curve_data(QuadratureMesh& mesh) {
    const std::size_t n = mesh.nodes.size();
    mesh.p.resize(n);
    mesh.dp.resize(n);
    mesh.ddp.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const CurvePoint cp = mesh.curve.eval(mesh.nodes[j]);
        mesh.p[j] = cp.p;
        mesh.dp[j] = cp.dp;
        mesh.ddp[j] = cp.ddp;
    }
}

void populate_panels(QuadratureMesh& mesh) {
    std::vector<double> gx, gw;
    gauss_legendre(mesh.gauss_order, gx, gw);
    const int q = mesh.gauss_order;
    mesh.nodes.clear();
    mesh.weights.clear();
    mesh.nodes.reserve(mesh.panels.size() * q);
    mesh.weights.reserve(mesh.panels.size() * q);
    for (const Panel& panel : mesh.panels) {
        const double mid = 0.5 * (panel.lo + panel.hi);
        const double half = 0.5 * (panel.hi - panel.lo);
        for (int i = 0; i < q; ++i) {
            mesh.nodes.push_back(mid + half * gx[i]);
            mesh.weights.push_back(half * gw[i]);
        }
    }
    cache_curve_data(mesh);
}

bool near_corner(double t, const std::vector<double>& corners, double period) {
    const double tol = 1e-12 * period;
    for (double c : corners) {
        double d = std::fmod(std::abs(t - c), period);
        d = std::min(d, period - d);
        if (d <= tol) return true;
    }
    return false;
}

}  // namespace

void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
    if (q < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    x.assign(q, 0.0);
    w.assign(q, 0.0);
    const int half = (q + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi-style initial guess for the i-th root of P_q
        double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < q; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = q * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[q - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[q - 1 - i] = w[i];
    }
}

QuadratureMesh trapezoid_mesh(const Curve& curve, int n) {
    if (curve.has_corners())
        throw std::invalid_argument("trapezoid_mesh: curve has corners, use panel_mesh");
    if (n < 4) throw std::invalid_argument("trapezoid_mesh: need n >= 4");

    QuadratureMesh mesh;
    mesh.curve = curve;
    mesh.kind = MeshKind::trapezoid;
    const double beta = curve.period();
    mesh.nodes.resize(n);
    mesh.weights.assign(n, beta / n);
    for (int j = 0; j < n; ++j) mesh.nodes[j] = beta * (static_cast<double>(j) / n);
    cache_curve_data(mesh);
    return mesh;
}

QuadratureMesh panel_mesh(const Curve& curve, int base_panels_per_side, int gauss_order) {
    if (gauss_order < 2) throw std::invalid_argument("panel_mesh: gauss order must be >= 2");
    if (base_panels_per_side < 1)
        throw std::invalid_argument("panel_mesh: need at least one panel per side");

    const double beta = curve.period();

    // breakpoints: t = 0 plus all corner parameters, sides wrap to beta
    std::vector<double> breaks = curve.corners();
    if (breaks.empty() || breaks.front() > 0.0) breaks.insert(breaks.begin(), 0.0);
    breaks.push_back(beta);

    QuadratureMesh mesh;
    mesh.curve = curve;
    mesh.kind = MeshKind::panel;
    mesh.gauss_order = gauss_order;
    mesh.refinement_level = 0;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double lo = breaks[s], hi = breaks[s + 1];
        for (int i = 0; i < base_panels_per_side; ++i) {
            const double a = lo + (hi - lo) * (static_cast<double>(i) / base_panels_per_side);
            const double b = (i + 1 == base_panels_per_side)
                                 ? hi
                                 : lo + (hi - lo) * (static_cast<double>(i + 1) / base_panels_per_side);
            mesh.panels.push_back({a, b});
        }
    }
    populate_panels(mesh);
    return mesh;
}

QuadratureMesh refine_corners(const QuadratureMesh& mesh) {
    if (mesh.kind != MeshKind::panel)
        throw std::invalid_argument("refine_corners: only panel meshes can be refined");

    const double beta = mesh.curve.period();
    const std::vector<double>& corners = mesh.curve.corners();

    QuadratureMesh out;
    out.curve = mesh.curve;
    out.kind = MeshKind::panel;
    out.gauss_order = mesh.gauss_order;
    out.refinement_level = mesh.refinement_level + 1;
    out.panels.reserve(mesh.panels.size() + 2 * corners.size());
    for (const Panel& panel : mesh.panels) {
        const bool adjacent =
            near_corner(panel.lo, corners, beta) || near_corner(panel.hi, corners, beta);
        if (adjacent && panel.hi - panel.lo > 2e-15 * beta) {
            const double mid = 0.5 * (panel.lo + panel.hi);
            out.panels.push_back({panel.lo, mid});
            out.panels.push_back({mid, panel.hi});
        } else {
            out.panels.push_back(panel);
        }
    }
    populate_panels(out);
    return out;
}

Complex integrate(const QuadratureMesh& mesh, std::span<const Complex> f) {
    if (f.size() != mesh.size())
        throw std::invalid_argument("integrate: value count does not match node count");
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) acc += mesh.weights[j] * f[j];
    return acc;
}

nlohmann::json mesh_summary(const QuadratureMesh& mesh) {
    nlohmann::json j{{"kind", mesh.kind == MeshKind::trapezoid ? "trapezoid" : "panel"},
                     {"n", mesh.size()},
                     {"refinement_level", mesh.refinement_level}};
    if (mesh.kind == MeshKind::panel) {
        j["gauss_order"] = mesh.gauss_order;
        nlohmann::json breaks = nlohmann::json::array();
        for (const Panel& panel : mesh.panels) breaks.push_back(panel.lo);
        j["breakpoints"] = std::move(breaks);
    }
    return j;
}

void write_mesh_csv(const QuadratureMesh& mesh, std::ostream& out) {
    out << "t,w,re_p,im_p\n";
    for (std::size_t j = 0; j < mesh.size(); ++j) {
        out << format_full(mesh.nodes[j]) << ',' << format_full(mesh.weights[j]) << ','
            << format_full(mesh.p[j].real()) << ',' << format_full(mesh.p[j].imag()) << '\n';
    }
}

}  // namespace extmap
