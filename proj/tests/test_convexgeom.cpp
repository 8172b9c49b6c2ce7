#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mixlap/convexgeom.hpp"

using namespace mixlap;

namespace {

ConvexPolygon regular_ngon(int n, double r = 1.0) {
    std::vector<Vec2> v(n);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * i / n;
        v[i] = {r * std::cos(th), r * std::sin(th)};
    }
    return ConvexPolygon(std::move(v));
}

}  // namespace

TEST_CASE("area and perimeter closed forms") {
    ConvexPolygon square({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    CHECK(area(square) == Catch::Approx(4.0));
    CHECK(perimeter(square) == Catch::Approx(8.0));
    auto ngon = regular_ngon(720);
    CHECK(area(ngon) == Catch::Approx(M_PI).epsilon(1e-4));
    CHECK(perimeter(ngon) == Catch::Approx(2 * M_PI).epsilon(1e-4));
}

TEST_CASE("constructor rejects bad polygons") {
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}}), std::invalid_argument);
    // clockwise
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 1}, {1, 0}}), std::invalid_argument);
    // reflex vertex
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {2, 0}, {1, 0.1}, {2, 2}, {0, 2}}),
                    std::invalid_argument);
    // collinear
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), std::invalid_argument);
}

TEST_CASE("Chebyshev in-ball of simple shapes") {
    ConvexPolygon square({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    Ball b = chebyshev_inball(square);
    CHECK(b.radius == Catch::Approx(1.0).margin(1e-9));
    CHECK(b.center.x == Catch::Approx(1.0).margin(1e-7));
    CHECK(b.center.y == Catch::Approx(1.0).margin(1e-7));

    // 3-4-5 right triangle: inradius (a + b - c)/2 = 1
    ConvexPolygon tri({{0, 0}, {4, 0}, {0, 3}});
    Ball bt = chebyshev_inball(tri);
    CHECK(bt.radius == Catch::Approx(1.0).margin(1e-9));
    CHECK(bt.center.x == Catch::Approx(1.0).margin(1e-7));
    CHECK(bt.center.y == Catch::Approx(1.0).margin(1e-7));

    auto ngon = regular_ngon(256);
    CHECK(chebyshev_inball(ngon).radius ==
          Catch::Approx(std::cos(M_PI / 256)).margin(1e-9));
}

TEST_CASE("minimal enclosing ball of simple shapes") {
    ConvexPolygon square({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    Ball b = min_enclosing_ball(square);
    CHECK(b.radius == Catch::Approx(std::sqrt(2.0)).margin(1e-9));
    auto ngon = regular_ngon(64, 2.5);
    CHECK(min_enclosing_ball(ngon).radius == Catch::Approx(2.5).margin(1e-9));
}

TEST_CASE("min ball encloses, in-ball is enclosed, on random polygons") {
    std::mt19937 rng(314);
    for (int rep = 0; rep < 50; ++rep) {
        auto p = random_convex_polygon(rng);
        Ball in = chebyshev_inball(p);
        Ball out = min_enclosing_ball(p);
        CHECK(in.radius > 0.0);
        CHECK(out.radius >= in.radius - 1e-12);
        for (const Vec2& v : p.vertices)
            REQUIRE(norm(v - out.center) <= out.radius * (1.0 + 1e-9) + 1e-12);
        // in-ball center at distance >= r from every edge line
        const auto& vs = p.vertices;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            Vec2 a = vs[i], b2 = vs[(i + 1) % vs.size()];
            Vec2 t = (1.0 / norm(b2 - a)) * (b2 - a);
            REQUIRE(cross(t, in.center - a) >= in.radius - 1e-9);
        }
    }
}

TEST_CASE("ball sandwich certificate on random polygons") {
    std::mt19937 rng(2718);
    for (int rep = 0; rep < 50; ++rep) {
        auto p = random_convex_polygon(rng);
        auto cert = ball_sandwich(p, chebyshev_inball(p));
        CHECK(cert.delta >= 0.0);
        CHECK(cert.eps_in >= -1e-12);
        CHECK(cert.outer_defect >= -1e-12);
        CHECK(cert.excess_area >= -1e-12);
        // outer ball really contains every vertex
        for (const Vec2& v : p.vertices)
            REQUIRE(norm(v - cert.outer.center) <= cert.outer.radius + 1e-12);
    }
    // misuse: inner ball not contained
    ConvexPolygon square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK_THROWS_AS(ball_sandwich(square, Ball{{0.5, 0.5}, 2.0}), std::invalid_argument);
}

TEST_CASE("Bonnesen inequality on random polygons and its equality limit") {
    std::mt19937 rng(137);
    for (int rep = 0; rep < 200; ++rep) {
        auto p = random_convex_polygon(rng);
        auto d = bonnesen_deficit(p, chebyshev_inball(p));
        REQUIRE(d.lhs >= d.rhs - 1e-12);
    }
    // equality gap vanishes along a polygonized-disk refinement
    double prev = 1e300;
    for (int n : {16, 64, 256}) {
        auto d = bonnesen_deficit(regular_ngon(n), chebyshev_inball(regular_ngon(n)));
        const double gap = d.lhs - d.rhs;
        CHECK(gap >= -1e-12);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("hull counterexample closed forms match the polygon") {
    for (double delta : {1e-2, 1e-3}) {
        auto hc = hull_counterexample(delta, 4096);
        CHECK(hc.tangent_length ==
              Catch::Approx(std::sqrt(2 * delta + delta * delta)).epsilon(1e-12));
        // shoelace area of the polygonization approaches pi + added_area
        CHECK(area(hc.polygon) == Catch::Approx(M_PI + hc.added_area).margin(1e-5));
        // apex is a vertex, distance 1 + delta from the origin
        double far = 0.0;
        for (const Vec2& v : hc.polygon.vertices) far = std::max(far, norm(v));
        CHECK(far == Catch::Approx(1.0 + delta).epsilon(1e-12));
        // added area scales like delta^{3/2} (kite minus sector expansion)
        CHECK(hc.added_area ==
              Catch::Approx(std::pow(2 * delta, 1.5) / 3.0).epsilon(0.05));
    }
}

TEST_CASE("bump counterexample certificates") {
    for (double delta : {1e-2, 1e-3}) {
        auto body = bump_counterexample(delta);
        double kmin = 1e300, kmax = -1e300, gmax = 0.0;
        for (int q = 0; q < 2048; ++q) {
            double th = -M_PI + 2 * M_PI * q / 2048.0;
            double k = curvature(body, th);
            kmin = std::min(kmin, k);
            kmax = std::max(kmax, k);
            gmax = std::max(gmax, body.g_of(th));
        }
        CHECK(kmin >= 0.25);
        CHECK(kmax <= 2.0);
        CHECK(gmax == Catch::Approx(1.0 + body.c * delta).epsilon(1e-12));
        CHECK(body.excess_area() > 0.0);
        CHECK(body.excess_area() <= 4.0 * std::pow(delta, 1.5));
    }
    // flat profile limit: unit circle has curvature 1
    auto body = bump_counterexample(1e-2);
    CHECK(curvature(body, M_PI) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bump profile derivatives match finite differences") {
    const double eps = 1e-6;
    for (double t : {-0.7, -0.2, 0.1, 0.5, 0.9}) {
        const double fd1 = (RadialBody::bump(t + eps) - RadialBody::bump(t - eps)) / (2 * eps);
        CHECK(RadialBody::bump_d1(t) == Catch::Approx(fd1).epsilon(1e-5));
        const double fd2 = (RadialBody::bump_d1(t + eps) - RadialBody::bump_d1(t - eps)) / (2 * eps);
        CHECK(RadialBody::bump_d2(t) == Catch::Approx(fd2).epsilon(1e-5));
    }
}

TEST_CASE("radial body converts to a rasterizable shape") {
    auto body = bump_counterexample(1e-2);
    ShapeSpec spec = body.to_shape();
    CHECK(spec.kind == ShapeKind::Radial);
    CHECK(spec.contains(Vec2{0.99, 0.0}));
    CHECK_FALSE(spec.contains(Vec2{1.02, 0.0}));
}
