#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "json.hpp"

namespace extmap {

using Complex = std::complex<double>;

/// Position and first two parametric derivatives at one curve point.
struct CurvePoint {
    Complex p;
    Complex dp;
    Complex ddp;
};

struct CircleShape {
    double r;
};

struct EllipseShape {
    double a;  // semi-axes (a, 1)
};

struct CassiniShape {
    double a;  // |z-1||z+1| = a^2
};

struct PolygonShape {
    std::vector<Complex> vertices;       // counterclockwise
    std::vector<double> corner_params;   // cumulative arc length of each vertex
    std::vector<Complex> edge_dir;       // unit direction of each edge
    std::vector<double> edge_len;
};

using CurveShape = std::variant<CircleShape, EllipseShape, CassiniShape, PolygonShape>;

/// Closed, positively oriented, piecewise-C2 parametric curve with the origin
/// in its inner component. Immutable after construction; safe to share across
/// threads.
class Curve {
public:
    Curve();  // unit circle

    double period() const { return period_; }
    const std::vector<double>& corners() const { return corners_; }
    bool has_corners() const { return !corners_.empty(); }
    const CurveShape& shape() const { return shape_; }

    CurvePoint eval(double t) const;
    Complex point(double t) const { return eval(t).p; }

    /// Small JSON record naming the family and its parameters,
    /// e.g. {"family":"ellipse","a":2.0}.
    nlohmann::json descriptor() const;
    static Curve from_descriptor(const nlohmann::json& j);

private:
    Curve(CurveShape shape, double period, std::vector<double> corners);

    friend Curve make_circle(double r);
    friend Curve make_ellipse(double a);
    friend Curve make_cassini(double a);
    friend Curve make_polygon(const std::vector<Complex>& vertices);

    CurveShape shape_;
    double period_;
    std::vector<double> corners_;
};

/// p(t) = r e^{it}. Rejects r <= 0.
Curve make_circle(double r);

/// p(t) = a cos t + i sin t. Rejects a <= 0; a = 1 is the unit circle.
Curve make_ellipse(double a);

/// Oval of Cassini, p(t) = (cos 2t + sqrt(a^4 - sin^2 2t))^{1/2} e^{it}.
/// Rejects a <= 1.
Curve make_cassini(double a);

/// Simple counterclockwise polygon parametrized by arc length (unit speed on
/// each edge), period = perimeter, corners at the vertex parameters. The
/// origin must lie strictly inside; inward cusps are rejected.
Curve make_polygon(const std::vector<Complex>& vertices);

}  // namespace extmap
