#include "extmap/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "extmap/io.hpp"

namespace extmap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

// Continuous lift of arg((p(t)^2 - 1)) from t = 0, where the value is a^2 > 0.
// |p^2 - 1| = a^2 identically on the oval, so only the angle needs tracking.
double cassini_angle(const Curve& curve, double a, double t) {
    (void)a;
    const int steps = std::max(64, static_cast<int>(std::ceil(std::abs(t) / kTwoPi * 1024.0)));
    double angle = 0.0;
    Complex prev = curve.point(0.0) * curve.point(0.0) - 1.0;
    for (int i = 1; i <= steps; ++i) {
        const double s = t * (static_cast<double>(i) / steps);
        const Complex cur = curve.point(s) * curve.point(s) - 1.0;
        angle += std::arg(cur / prev);
        prev = cur;
    }
    return angle;
}

const PolygonShape* as_square(const Curve& curve) {
    const auto* poly = std::get_if<PolygonShape>(&curve.shape());
    if (!poly || poly->vertices.size() != 4) return nullptr;
    const double s = std::abs(poly->vertices[0].real());
    if (s <= 0.0) return nullptr;
    for (const Complex& v : poly->vertices) {
        if (std::abs(std::abs(v.real()) - s) > 1e-14 * s) return nullptr;
        if (std::abs(std::abs(v.imag()) - s) > 1e-14 * s) return nullptr;
    }
    return poly;
}

// theta(d) ~ theta_corner + A d^{2/3} near an exterior right-angle corner;
// two-node extrapolation removes the leading singular term.
double extrapolate_corner_theta(double d1, double theta1, double d2, double theta2) {
    const double g1 = std::cbrt(d1 * d1);  // d^{2/3}
    const double g2 = std::cbrt(d2 * d2);
    const double slope = (theta2 - theta1) / (g2 - g1);
    return theta1 - slope * g1;
}

struct RowInput {
    int n_or_level;
    QuadratureMesh mesh;
};

}  // namespace

bool has_analytic_reference(const Curve& curve) {
    return !std::holds_alternative<PolygonShape>(curve.shape());
}

Complex analytic_boundary_map(const Curve& curve, double t) {
    if (const auto* c = std::get_if<CircleShape>(&curve.shape()))
        return curve.point(t) / c->r;
    if (std::holds_alternative<EllipseShape>(curve.shape()))
        return std::polar(1.0, t);
    if (const auto* c = std::get_if<CassiniShape>(&curve.shape()))
        return std::polar(1.0, 0.5 * cassini_angle(curve, c->a, t));
    throw std::invalid_argument("analytic_boundary_map: no analytic reference for this curve");
}

std::optional<double> analytic_alpha1(const Curve& curve) {
    if (const auto* c = std::get_if<CircleShape>(&curve.shape())) return 1.0 / c->r;
    if (const auto* e = std::get_if<EllipseShape>(&curve.shape())) return 2.0 / (e->a + 1.0);
    if (const auto* c = std::get_if<CassiniShape>(&curve.shape())) return 1.0 / c->a;
    return std::nullopt;
}

double boundary_error(const BoundaryMap& map, const Curve& curve, int samples) {
    if (!has_analytic_reference(curve))
        throw std::invalid_argument("boundary_error: no analytic reference for this curve");
    const double beta = curve.period();
    double sup = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = beta * (static_cast<double>(k) / samples);
        sup = std::max(sup, std::abs(boundary_psi_at(map, t) - analytic_boundary_map(curve, t)));
    }
    return sup;
}

Complex faber_oracle(const BoundaryMap& map, int m, Complex z0) {
    if (m < 1) throw std::invalid_argument("faber_oracle: m must be >= 1");
    const QuadratureMesh& mesh = map.mesh();
    Complex sum(0.0, 0.0);
    for (std::size_t j = 0; j < mesh.size(); ++j)
        sum += mesh.weights[j] * std::pow(map.psi[j], m) * mesh.dp[j] / (mesh.p[j] - z0);
    return sum / Complex(0.0, kTwoPi);
}

double square_corner_symmetry(const BoundaryMap& map) {
    const QuadratureMesh& mesh = map.mesh();
    const PolygonShape* poly = as_square(mesh.curve);
    if (!poly || mesh.kind != MeshKind::panel)
        throw std::invalid_argument(
            "square_corner_symmetry: needs a panel mesh on the origin-centered square");

    const double beta = mesh.curve.period();
    const std::size_t n = mesh.size();
    double dev = 0.0;

    // corner-image angles by one-sided extrapolation along the adjacent panels
    for (std::size_t k = 0; k < 4; ++k) {
        const double c = poly->corner_params[k];
        const double nominal = std::arg(poly->vertices[k]);

        // nodes below the corner (parameter wraps at c = 0)
        const double below = (c == 0.0) ? beta : c;
        std::size_t hi = 0;
        while (hi < n && mesh.nodes[hi] < below) ++hi;
        // hi is the first node index >= below boundary; need the two before it
        const std::size_t b1 = (hi == 0 ? n : hi) - 1;
        const std::size_t b2 = (b1 == 0 ? n : b1) - 1;
        const double minus = extrapolate_corner_theta(below - mesh.nodes[b1], map.theta[b1],
                                                      below - mesh.nodes[b2], map.theta[b2]);

        // nodes above the corner
        std::size_t lo = 0;
        while (lo < n && mesh.nodes[lo] <= c) ++lo;
        if (lo + 1 >= n) lo = 0;
        const double plus = extrapolate_corner_theta(mesh.nodes[lo] - c, map.theta[lo],
                                                     mesh.nodes[lo + 1] - c, map.theta[lo + 1]);

        dev = std::max(dev, circular_distance(minus, nominal));
        dev = std::max(dev, circular_distance(plus, nominal));
    }

    // quarter-turn symmetry at nodes: identical panel structure per side
    if (n % 4 == 0) {
        const std::size_t per_side = n / 4;
        for (std::size_t j = 0; j < per_side; j += std::max<std::size_t>(1, per_side / 64)) {
            const double delta = map.theta[j + per_side] - map.theta[j];
            dev = std::max(dev, std::abs(delta - kPi / 2.0));
        }
    }
    return dev;
}

ConvergenceReport convergence_study(const Curve& curve, const StudyOptions& opt) {
    ConvergenceReport report;
    report.curve = curve.descriptor();
    report.sample_count = opt.samples;
    report.self_convergence = !has_analytic_reference(curve);

    const double beta = curve.period();
    std::vector<RowInput> inputs;

    if (!curve.has_corners()) {
        std::vector<int> ns = opt.n_values;
        if (ns.empty()) ns = {4, 8, 16, 32, 64, 128, 256, 512};
        std::sort(ns.begin(), ns.end());
        for (int n : ns) inputs.push_back({n, trapezoid_mesh(curve, n)});
    } else {
        QuadratureMesh mesh = panel_mesh(curve, opt.base_panels_per_side, opt.gauss_order);
        for (int level = 0; level <= opt.max_refinements; ++level) {
            inputs.push_back({level, mesh});
            if (level < opt.max_refinements) mesh = refine_corners(mesh);
        }
    }

    report.rows.resize(inputs.size());

    // reference samples for self-convergence: offset to avoid corners
    std::vector<double> sample_ts(opt.samples);
    for (int k = 0; k < opt.samples; ++k)
        sample_ts[k] = beta * ((k + 0.5) / static_cast<double>(opt.samples));

    std::vector<Complex> reference_psi;
    const bool is_square = !curve.has_corners() ? false : (as_square(curve) != nullptr);
    if (report.self_convergence) {
        // deepest level solved first; its samples are the reference
        RowInput& deepest = inputs.back();
        ConvergenceRow& row = report.rows.back();
        row.n_or_level = deepest.n_or_level;
        row.reference_row = true;
        const auto start = std::chrono::steady_clock::now();
        try {
            const DensitySolution sol = solve_density(deepest.mesh);
            const BoundaryMap map = compute_boundary_map(sol);
            reference_psi.resize(sample_ts.size());
            for (std::size_t k = 0; k < sample_ts.size(); ++k)
                reference_psi[k] = boundary_psi_at(map, sample_ts[k]);
            row.condition_estimate = sol.condition_estimate;
            if (is_square) row.corner_symmetry = square_corner_symmetry(map);
        } catch (const std::exception& e) {
            row.ok = false;
            row.message = e.what();
        }
        row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!row.ok)
            return report;  // no reference: remaining rows would be meaningless
    }

    const std::size_t todo = report.self_convergence ? inputs.size() - 1 : inputs.size();
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < todo; i = next.fetch_add(1)) {
            const RowInput& in = inputs[i];
            ConvergenceRow& row = report.rows[i];
            row.n_or_level = in.n_or_level;
            const auto start = std::chrono::steady_clock::now();
            try {
                const DensitySolution sol = solve_density(in.mesh);
                const BoundaryMap map = compute_boundary_map(sol);
                row.condition_estimate = sol.condition_estimate;
                if (report.self_convergence) {
                    double sup = 0.0;
                    for (std::size_t k = 0; k < sample_ts.size(); ++k)
                        sup = std::max(sup,
                                       std::abs(boundary_psi_at(map, sample_ts[k]) - reference_psi[k]));
                    row.sup_error = sup;
                    if (is_square) row.corner_symmetry = square_corner_symmetry(map);
                } else {
                    row.sup_error = boundary_error(map, curve, opt.samples);
                    if (const auto exact = analytic_alpha1(curve))
                        row.alpha1_error = std::abs(map.alpha1 - *exact);
                }
            } catch (const std::exception& e) {
                row.ok = false;
                row.message = e.what();
            }
            row.runtime_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };

    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    return report;
}

void write_report_csv(const ConvergenceReport& report, std::ostream& out) {
    out << "n_or_level,sup_error,alpha1_error,condition_estimate,corner_symmetry\n";
    for (const ConvergenceRow& row : report.rows) {
        out << row.n_or_level << ',';
        if (!row.reference_row && std::isfinite(row.sup_error)) out << format_full(row.sup_error);
        out << ',';
        if (std::isfinite(row.alpha1_error)) out << format_full(row.alpha1_error);
        out << ',';
        if (row.condition_estimate > 0.0) out << format_full(row.condition_estimate);
        out << ',';
        if (std::isfinite(row.corner_symmetry)) out << format_full(row.corner_symmetry);
        out << '\n';
    }
}

nlohmann::json report_json(const ConvergenceReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ConvergenceRow& row : report.rows) {
        nlohmann::json r{{"n_or_level", row.n_or_level},
                         {"runtime_seconds", row.runtime_seconds},
                         {"ok", row.ok}};
        if (!row.reference_row && std::isfinite(row.sup_error)) r["sup_error"] = row.sup_error;
        if (std::isfinite(row.alpha1_error)) r["alpha1_error"] = row.alpha1_error;
        if (row.condition_estimate > 0.0) r["condition_estimate"] = row.condition_estimate;
        if (std::isfinite(row.corner_symmetry)) r["corner_symmetry"] = row.corner_symmetry;
        if (row.reference_row) r["reference"] = true;
        if (!row.message.empty()) r["message"] = row.message;
        rows.push_back(std::move(r));
    }
    return {{"curve", report.curve},
            {"sample_count", report.sample_count},
            {"self_convergence", report.self_convergence},
            {"rows", std::move(rows)}};
}

}  // namespace extmap
