#include "extmap/curve.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

using namespace extmap;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

const std::vector<Complex> kUnitSquare = {
    {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}};
}  // namespace

TEST_CASE("ellipse evaluation") {
    const Curve e2 = make_ellipse(2.0);
    const CurvePoint at0 = e2.eval(0.0);
    CHECK(std::abs(at0.p - Complex(2.0, 0.0)) < 1e-15);
    CHECK(std::abs(at0.dp - Complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(at0.ddp - Complex(-2.0, 0.0)) < 1e-15);

    // a = 1 degenerates to the unit circle
    CHECK(std::abs(make_ellipse(1.0).point(kPi / 2.0) - Complex(0.0, 1.0)) < 1e-15);

    const Complex quarter = e2.point(kPi / 4.0);
    CHECK(std::abs(quarter - Complex(std::sqrt(2.0), std::sqrt(2.0) / 2.0)) < 1e-15);

    CHECK(e2.period() == Approx(2.0 * kPi));
    CHECK(e2.corners().empty());
    CHECK_THROWS_AS(make_ellipse(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_ellipse(-2.0), std::invalid_argument);
}

TEST_CASE("cassini evaluation") {
    const Curve c2 = make_cassini(2.0);
    CHECK(std::abs(c2.point(0.0) - Complex(std::sqrt(5.0), 0.0)) < 1e-14);
    CHECK(std::abs(c2.point(kPi / 2.0) - Complex(0.0, std::sqrt(3.0))) < 1e-14);
    CHECK_THROWS_AS(make_cassini(1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_cassini(0.5), std::invalid_argument);

    // analytic derivative against the central-difference oracle
    const Curve c = make_cassini(1.25);
    const auto pos = [&](double t) { return c.point(t); };
    const Complex fd = oracle::central_diff(pos, 0.7, 1e-5);
    CHECK(std::abs(c.eval(0.7).dp - fd) < 1e-8);
}

TEST_CASE("circle evaluation") {
    CHECK(std::abs(make_circle(1.0).point(kPi) - Complex(-1.0, 0.0)) < 1e-15);
    CHECK(make_circle(2.0).period() == Approx(2.0 * kPi));  // winding checked at construction
    CHECK(make_circle(0.5).corners().empty());
    CHECK_THROWS_AS(make_circle(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_circle(-1.0), std::invalid_argument);
}

TEST_CASE("polygon construction") {
    const Curve sq = make_polygon(kUnitSquare);
    CHECK(sq.period() == Approx(4.0));
    REQUIRE(sq.corners().size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(sq.corners()[k] == Approx(double(k)));
    CHECK(std::abs(sq.point(0.5) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(sq.point(2.5) - Complex(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(sq.eval(1.5).dp - Complex(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(sq.eval(1.5).ddp) == 0.0);

    CHECK_NOTHROW(make_polygon({{1.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0}}));

    // clockwise input rejected
    CHECK_THROWS_AS(make_polygon({{0.5, -0.5}, {-0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}}),
                    std::invalid_argument);
    // origin outside rejected
    CHECK_THROWS_AS(make_polygon({{1.0, 1.0}, {2.0, 1.0}, {2.0, 2.0}, {1.0, 2.0}}),
                    std::invalid_argument);
    // self-intersection rejected
    CHECK_THROWS_AS(make_polygon({{1.0, -1.0}, {-1.0, 1.0}, {1.0, 1.0}, {-1.0, -1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_polygon({{1.0, 0.0}, {0.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("built-in curves close up and wind once") {
    const std::vector<Curve> curves = {make_circle(1.0), make_circle(2.5), make_ellipse(2.0),
                                       make_ellipse(10.0), make_cassini(1.25), make_cassini(5.0),
                                       make_polygon(kUnitSquare)};
    auto gen = oracle::rng();
    for (const Curve& c : curves) {
        std::uniform_real_distribution<double> dist(0.0, c.period());
        for (int i = 0; i < 100; ++i) {
            const double t = dist(gen);
            const Complex a = c.point(t);
            const Complex b = c.point(t + c.period());
            CHECK(std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("analytic derivatives match finite differences") {
    const std::vector<Curve> curves = {make_circle(1.5), make_ellipse(2.0), make_ellipse(5.0),
                                       make_cassini(1.25), make_cassini(2.0)};
    auto gen = oracle::rng();
    for (const Curve& c : curves) {
        std::uniform_real_distribution<double> dist(0.0, c.period());
        const auto pos = [&](double t) { return c.point(t); };
        for (int i = 0; i < 100; ++i) {
            const double t = dist(gen);
            const CurvePoint cp = c.eval(t);
            const Complex d1 = oracle::central_diff(pos, t, 1e-6);
            const Complex d2 = oracle::second_diff(pos, t, 1e-5);
            CHECK(std::abs(cp.dp - d1) <= 1e-7 * (1.0 + std::abs(cp.dp)));
            CHECK(std::abs(cp.ddp - d2) <= 1e-4 * (1.0 + std::abs(cp.ddp)));
        }
    }
}

TEST_CASE("descriptor round trip") {
    const Curve e = make_ellipse(2.0);
    CHECK(e.descriptor() == nlohmann::json({{"family", "ellipse"}, {"a", 2.0}}));
    const Curve back = Curve::from_descriptor(e.descriptor());
    CHECK(std::abs(back.point(0.3) - e.point(0.3)) == 0.0);

    const Curve sq = make_polygon(kUnitSquare);
    const Curve sq2 = Curve::from_descriptor(sq.descriptor());
    CHECK(sq2.period() == Approx(4.0));
    CHECK(sq2.corners() == sq.corners());

    CHECK_THROWS_AS(Curve::from_descriptor({{"family", "heptagram"}}), std::invalid_argument);
}
