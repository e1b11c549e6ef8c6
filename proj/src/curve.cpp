#include "extmap/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace extmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CurvePoint eval_circle(const CircleShape& c, double t) {
    const Complex e = std::polar(1.0, t);
    return {c.r * e, Complex(0.0, c.r) * e, -c.r * e};
}

CurvePoint eval_ellipse(const EllipseShape& e, double t) {
    const double ct = std::cos(t), st = std::sin(t);
    const Complex p(e.a * ct, st);
    return {p, Complex(-e.a * st, ct), -p};
}

CurvePoint eval_cassini(const CassiniShape& cs, double t) {
    const double a4 = cs.a * cs.a * cs.a * cs.a;
    const double c2 = std::cos(2.0 * t), s2 = std::sin(2.0 * t);
    const double c4 = std::cos(4.0 * t), s4 = std::sin(4.0 * t);

    const double S = std::sqrt(a4 - s2 * s2);
    const double sigma = c2 + S;                       // > 0 for a > 1
    const double dS = -s4 / S;
    const double dsigma = -2.0 * s2 + dS;
    const double ddS = -4.0 * c4 / S - s4 * s4 / (S * S * S);
    const double ddsigma = -4.0 * c2 + ddS;

    const double rho = std::sqrt(sigma);
    const double drho = dsigma / (2.0 * rho);
    const double ddrho = ddsigma / (2.0 * rho) - drho * drho / rho;

    const Complex e = std::polar(1.0, t);
    return {rho * e, Complex(drho, rho) * e, Complex(ddrho - rho, 2.0 * drho) * e};
}

// Point evaluation is anchored to the nearest endpoint of the edge so that
// differences p(t) - p(tau) stay accurate for parameters very close to a
// shared corner (needed by deeply refined corner meshes).
CurvePoint eval_polygon(const PolygonShape& poly, double t, double period) {
    double u = std::fmod(t, period);
    if (u < 0.0) u += period;

    const auto& cum = poly.corner_params;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::size_t k = (it == cum.begin()) ? 0 : static_cast<std::size_t>(it - cum.begin() - 1);

    const double s = u - cum[k];
    Complex pos;
    if (s <= 0.5 * poly.edge_len[k]) {
        pos = poly.vertices[k] + s * poly.edge_dir[k];
    } else {
        const std::size_t k1 = (k + 1) % poly.vertices.size();
        const double end = cum[k] + poly.edge_len[k];
        pos = poly.vertices[k1] - (end - u) * poly.edge_dir[k];
    }
    return {pos, poly.edge_dir[k], Complex(0.0, 0.0)};
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

int orientation_sign(Complex a, Complex b, Complex c) {
    const double v = cross(b - a, c - a);
    const double scale = std::abs(b - a) * std::abs(c - a);
    if (std::abs(v) <= 1e-14 * (1.0 + scale)) return 0;
    return v > 0.0 ? 1 : -1;
}

bool on_segment(Complex a, Complex b, Complex q) {
    if (orientation_sign(a, b, q) != 0) return false;
    return std::min(a.real(), b.real()) - 1e-14 <= q.real() &&
           q.real() <= std::max(a.real(), b.real()) + 1e-14 &&
           std::min(a.imag(), b.imag()) - 1e-14 <= q.imag() &&
           q.imag() <= std::max(a.imag(), b.imag()) + 1e-14;
}

bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
    const int o1 = orientation_sign(p1, p2, q1);
    const int o2 = orientation_sign(p1, p2, q2);
    const int o3 = orientation_sign(q1, q2, p1);
    const int o4 = orientation_sign(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

// Crossing-number test; the origin must be strictly inside with a margin.
bool origin_strictly_inside(const std::vector<Complex>& v) {
    const std::size_t n = v.size();
    double min_edge_dist = std::numeric_limits<double>::max();
    int crossings = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = v[i], b = v[(i + 1) % n];
        // distance from origin to segment ab
        const Complex d = b - a;
        const double len2 = std::norm(d);
        double s = len2 > 0.0 ? -(a.real() * d.real() + a.imag() * d.imag()) / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        min_edge_dist = std::min(min_edge_dist, std::abs(a + s * d));
        // horizontal ray to +infinity
        if ((a.imag() > 0.0) != (b.imag() > 0.0)) {
            const double x = a.real() + (b.real() - a.real()) * (-a.imag()) / (b.imag() - a.imag());
            if (x > 0.0) ++crossings;
        }
    }
    double scale = 0.0;
    for (const Complex& z : v) scale = std::max(scale, std::abs(z));
    return (crossings % 2 == 1) && min_edge_dist > 1e-12 * scale;
}

void check_closed_and_winding(const Curve& curve) {
    const double beta = curve.period();
    const Complex p0 = curve.point(0.0);
    const Complex pb = curve.point(beta);
    if (std::abs(p0 - pb) > 1e-13 * (1.0 + std::abs(p0)))
        throw std::logic_error("curve fails closure check");

    // discrete winding about 0 by argument summation
    const int m = 512;
    double total = 0.0;
    Complex prev = curve.point(beta * (0.5 / m));
    for (int j = 1; j <= m; ++j) {
        const Complex cur = curve.point(beta * ((j + 0.5) / m));
        total += std::arg(cur / prev);
        prev = cur;
    }
    const long winding = std::lround(total / kTwoPi);
    if (winding != 1)
        throw std::invalid_argument("curve is not positively oriented about the origin");
}

}  // namespace

Curve::Curve() : Curve(CircleShape{1.0}, kTwoPi, {}) {}

Curve::Curve(CurveShape shape, double period, std::vector<double> corners)
    : shape_(std::move(shape)), period_(period), corners_(std::move(corners)) {}

CurvePoint Curve::eval(double t) const {
    return std::visit(
        [&](const auto& s) -> CurvePoint {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleShape>) return eval_circle(s, t);
            else if constexpr (std::is_same_v<T, EllipseShape>) return eval_ellipse(s, t);
            else if constexpr (std::is_same_v<T, CassiniShape>) return eval_cassini(s, t);
            else return eval_polygon(s, t, period_);
        },
        shape_);
}

Curve make_circle(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("make_circle: radius must be positive");
    Curve c(CircleShape{r}, kTwoPi, {});
    check_closed_and_winding(c);
    return c;
}

Curve make_ellipse(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("make_ellipse: semi-axis must be positive");
    Curve c(EllipseShape{a}, kTwoPi, {});
    check_closed_and_winding(c);
    return c;
}

Curve make_cassini(double a) {
    if (!(a > 1.0)) throw std::invalid_argument("make_cassini: requires a > 1");
    Curve c(CassiniShape{a}, kTwoPi, {});
    check_closed_and_winding(c);
    return c;
}

Curve make_polygon(const std::vector<Complex>& vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) throw std::invalid_argument("make_polygon: need at least 3 vertices");

    double scale = 0.0;
    for (const Complex& v : vertices) scale = std::max(scale, std::abs(v));

    PolygonShape poly;
    poly.vertices = vertices;
    poly.edge_dir.resize(n);
    poly.edge_len.resize(n);
    poly.corner_params.resize(n);

    double area2 = 0.0;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = vertices[i], b = vertices[(i + 1) % n];
        const double len = std::abs(b - a);
        if (len <= 1e-14 * (1.0 + scale))
            throw std::invalid_argument("make_polygon: repeated vertex / zero-length edge");
        poly.corner_params[i] = t;
        poly.edge_len[i] = len;
        poly.edge_dir[i] = (b - a) / len;
        area2 += cross(a, b);
        t += len;
    }
    const double period = t;

    if (area2 <= 0.0)
        throw std::invalid_argument("make_polygon: vertices must be counterclockwise");

    // no inward cusps: the direction may not reverse at a vertex
    for (std::size_t i = 0; i < n; ++i) {
        const Complex u = poly.edge_dir[i], w = poly.edge_dir[(i + 1) % n];
        const double turn = std::arg(w / u);
        if (std::abs(turn) >= std::numbers::pi - 1e-9)
            throw std::invalid_argument("make_polygon: inward cusp at vertex");
    }

    // simplicity: no two non-adjacent edges intersect
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                                   vertices[(j + 1) % n]))
                throw std::invalid_argument("make_polygon: self-intersecting polygon");
        }
    }

    if (!origin_strictly_inside(vertices))
        throw std::invalid_argument("make_polygon: origin must lie strictly inside");

    std::vector<double> corners = poly.corner_params;
    return Curve(std::move(poly), period, std::move(corners));
}

nlohmann::json Curve::descriptor() const {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleShape>)
                return {{"family", "circle"}, {"r", s.r}};
            else if constexpr (std::is_same_v<T, EllipseShape>)
                return {{"family", "ellipse"}, {"a", s.a}};
            else if constexpr (std::is_same_v<T, CassiniShape>)
                return {{"family", "cassini"}, {"a", s.a}};
            else {
                nlohmann::json verts = nlohmann::json::array();
                for (const Complex& v : s.vertices) verts.push_back({v.real(), v.imag()});
                return {{"family", "polygon"}, {"vertices", verts}};
            }
        },
        shape_);
}

Curve Curve::from_descriptor(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "circle") return make_circle(j.at("r").get<double>());
    if (family == "ellipse") return make_ellipse(j.at("a").get<double>());
    if (family == "cassini") return make_cassini(j.at("a").get<double>());
    if (family == "polygon") {
        std::vector<Complex> verts;
        for (const auto& v : j.at("vertices"))
            verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        return make_polygon(verts);
    }
    throw std::invalid_argument("unknown curve family: " + family);
}

}  // namespace extmap
