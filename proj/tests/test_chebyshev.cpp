#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gfilt/chebyshev.hpp"
#include "gfilt/errors.hpp"
#include "gfilt/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <sstream>

using namespace gfilt;

namespace {

const ScalarField h1 = [](std::span<const double> t) { return (2.25 - t[0]) * (3.0 + t[0]); };
const Cube cube01({Interval{0.0, 2.0}});

MultiPoly random_poly(Rng& rng, const Cube& cube, std::size_t degree) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < cube.dims(); ++k) total *= degree + 1;
    std::vector<double> coeffs(total);
    for (auto& c : coeffs) c = rng.uniform(-1.0, 1.0);
    return MultiPoly(cube, std::vector<std::size_t>(cube.dims(), degree), std::move(coeffs));
}

} // namespace

TEST_CASE("chebyshev nodes: closed forms") {
    const auto single = chebyshev_nodes(0, {0.0, 2.0});
    REQUIRE(single.size() == 1);
    CHECK(single[0] == doctest::Approx(1.0).epsilon(1e-15));

    const auto pair = chebyshev_nodes(1, {-1.0, 1.0});
    CHECK(pair[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(pair[1] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));

    const auto three = chebyshev_nodes(2, {0.0, 2.0});
    CHECK(three[0] == doctest::Approx(1.8660254037844386).epsilon(1e-12));
    CHECK(three[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(three[2] == doctest::Approx(0.1339745962155614).epsilon(1e-12));

    for (std::size_t m = 0; m <= 6; ++m)
        for (double t : chebyshev_nodes(m, {0.0, 2.0})) {
            CHECK(t > 0.0);
            CHECK(t < 2.0);
        }
    CHECK_THROWS_AS(chebyshev_nodes(3, {1.0, 1.0}), Error);
}

TEST_CASE("interpolant of 1/h1 at M=0 is the constant 1/5") {
    const MultiPoly c0 = interpolate_reciprocal(h1, cube01, 0);
    REQUIRE(c0.coeffs().size() == 1);
    CHECK(c0.coeffs()[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(c0(0.37) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("interpolating a constant gives the constant reciprocal") {
    const ScalarField c = [](std::span<const double>) { return 4.0; };
    for (std::size_t m : {0u, 1u, 3u}) {
        const MultiPoly p = interpolate_reciprocal(c, cube01, m);
        for (double t : {0.0, 0.31, 1.7, 2.0}) CHECK(p(t) == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("bivariate interpolant matches 1/h at every tensor node") {
    const ScalarField h = [](std::span<const double> t) { return 1.0 + t[0] + t[1]; };
    const Cube cube({Interval{0.0, 2.0}, Interval{0.0, 2.0}});
    const MultiPoly c1 = interpolate_reciprocal(h, cube, 1);
    const auto nodes = chebyshev_nodes(1, {0.0, 2.0});
    for (double a : nodes)
        for (double b : nodes) {
            const std::vector<double> t = {a, b};
            CHECK(c1(t) == doctest::Approx(1.0 / h(t)).epsilon(1e-12));
        }
}

TEST_CASE("interpolation property holds to 1e-11 relative (random polynomials)") {
    Rng rng(5);
    for (std::size_t d : {1u, 2u}) {
        std::vector<Interval> ivs(d, Interval{0.5, 3.0});
        const Cube cube(ivs);
        for (std::size_t m : {1u, 3u, 6u}) {
            // h strictly positive on the cube so 1/h is smooth
            MultiPoly base = random_poly(rng, cube, 2);
            std::vector<double> coeffs(base.coeffs().begin(), base.coeffs().end());
            coeffs[0] += 6.0;
            const MultiPoly h(cube, base.degrees(), coeffs);
            const MultiPoly c = interpolate_reciprocal(h, m);

            const auto nodes = chebyshev_nodes(m, cube.interval(0));
            double max_err = 0.0, max_val = 0.0;
            std::vector<double> t(d);
            std::vector<std::size_t> idx(d, 0);
            const std::size_t total = static_cast<std::size_t>(std::pow(m + 1.0, d));
            for (std::size_t lin = 0; lin < total; ++lin) {
                for (std::size_t k = 0; k < d; ++k) t[k] = nodes[idx[k]];
                const double want = 1.0 / h(t);
                max_err = std::max(max_err, std::abs(c(t) - want));
                max_val = std::max(max_val, std::abs(want));
                for (std::size_t k = d; k-- > 0;) {
                    if (++idx[k] <= m) break;
                    idx[k] = 0;
                }
            }
            CHECK(max_err < 1e-11 * max_val);
        }
    }
}

TEST_CASE("reciprocal singularity at a node is rejected") {
    // vanishes exactly at the M=0 node t = 1
    const ScalarField bad = [](std::span<const double> t) { return t[0] - 1.0; };
    CHECK_THROWS_AS(interpolate_reciprocal(bad, cube01, 0), Error);
    CHECK_THROWS_AS(chebyshev_series_reciprocal(
                        [](std::span<const double> t) { return t[0] - 1.0; }, cube01, 0, 65),
                    Error);
}

TEST_CASE("truncated series: degree-0 sup error matches the reference value 1.0463") {
    const MultiPoly s0 = chebyshev_series_reciprocal(h1, cube01, 0);
    CHECK(sup_error(h1, s0, cube01, 10001) == doctest::Approx(1.0463).epsilon(5e-4));
}

TEST_CASE("truncated series of a constant is exact") {
    const ScalarField c = [](std::span<const double>) { return 2.5; };
    const MultiPoly s = chebyshev_series_reciprocal(c, cube01, 2);
    CHECK(s.coeffs()[0] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(std::abs(s.coeffs()[1]) < 1e-14);
    CHECK(sup_error(c, s, cube01, 101) < 1e-14);
}

TEST_CASE("truncated series: degree-4 sup error matches the reference value 0.0728") {
    const MultiPoly s4 = chebyshev_series_reciprocal(h1, cube01, 4);
    CHECK(sup_error(h1, s4, cube01, 10001) == doctest::Approx(0.0728).epsilon(5e-3));
}

TEST_CASE("series coefficients are stable under quadrature refinement") {
    const MultiPoly a = chebyshev_series_reciprocal(h1, cube01, 4, 64);
    const MultiPoly b = chebyshev_series_reciprocal(h1, cube01, 4, 128);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i)
        CHECK(std::abs(a.coeffs()[i] - b.coeffs()[i]) < 1e-10);
    CHECK_THROWS_AS(chebyshev_series_reciprocal(h1, cube01, 4, 16), Error);
}

TEST_CASE("evaluate: corner value of the pure T1*T1 polynomial") {
    const Cube cube({Interval{0.0, 2.0}, Interval{-1.0, 3.0}});
    MultiPoly p(cube, {1, 1}, {0.0, 0.0, 0.0, 1.0});
    const std::vector<double> corner = {2.0, 3.0};
    CHECK(p(corner) == doctest::Approx(1.0).epsilon(1e-14));
    bool extrapolated = false;
    const std::vector<double> outside = {2.5, 0.0};
    (void)p(outside, &extrapolated);
    CHECK(extrapolated);
    (void)p(corner, &extrapolated);
    CHECK(!extrapolated);
}

TEST_CASE("evaluate agrees with the monomial-expansion oracle") {
    Rng rng(17);
    for (std::size_t d : {1u, 2u}) {
        std::vector<Interval> ivs(d, Interval{0.0, 2.0});
        const Cube cube(ivs);
        for (std::size_t degree : {2u, 5u, 8u}) {
            const MultiPoly p = random_poly(rng, cube, degree);
            const auto mono = oracles::to_monomial(p, /*centered=*/true);
            // error relative to the polynomial's scale over the sample,
            // not to pointwise values that cancellation can make tiny
            double max_abs = 0.0, max_diff = 0.0;
            for (int rep = 0; rep < 100; ++rep) {
                std::vector<double> t(d);
                for (std::size_t k = 0; k < d; ++k)
                    t[k] = rng.uniform(cube.interval(k).lo, cube.interval(k).hi);
                const double a = p(t);
                max_abs = std::max(max_abs, std::abs(a));
                max_diff = std::max(max_diff, std::abs(a - mono.evaluate(t)));
            }
            CHECK(max_diff <= 1e-11 * std::max(1.0, max_abs));
        }
    }
}

TEST_CASE("sup_error: M=0 interpolant error is 0.75, attained at t=2") {
    const MultiPoly c0 = interpolate_reciprocal(h1, cube01, 0);
    const auto detail = sup_error_detail(h1, c0, cube01, 10001);
    CHECK(detail.value == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(detail.argmax[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sup_error: M=4 interpolant matches the reference value 0.0595") {
    const MultiPoly c4 = interpolate_reciprocal(h1, cube01, 4);
    CHECK(sup_error(h1, c4, cube01, 10001) == doctest::Approx(0.0595).epsilon(2e-3));
}

TEST_CASE("a degree-50 interpolant of an analytic reciprocal is numerically exact") {
    const MultiPoly c = interpolate_reciprocal(h1, cube01, 50);
    CHECK(sup_error(h1, c, cube01, 10001) < 1e-10);
}

TEST_CASE("b~_M decays strictly for M = 0..4 and exponentially through M = 8") {
    std::vector<double> sup;
    for (std::size_t m = 0; m <= 8; ++m)
        sup.push_back(sup_error(h1, interpolate_reciprocal(h1, cube01, m), cube01, 10001));
    for (std::size_t m = 0; m < 4; ++m) CHECK(sup[m + 1] < sup[m]);
    // least-squares slope of log b~_M against M
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t m = 0; m <= 8; ++m) {
        const double x = static_cast<double>(m), y = std::log(sup[m]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (9 * sxy - sx * sy) / (9 * sxx - sx * sx);
    CHECK(slope < 0.0);
}

TEST_CASE("sup_error flags h vanishing on the certification grid") {
    const ScalarField bad = [](std::span<const double> t) { return t[0] - 0.5; };
    const MultiPoly any = MultiPoly::constant(cube01, 1.0);
    CHECK_THROWS_AS(sup_error(bad, any, cube01, 5), Error);
}

TEST_CASE("grid_range finds extrema of a monotone function") {
    const auto r = grid_range(h1, cube01, 10001);
    CHECK(r.lo == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(r.hi == doctest::Approx(6.75).epsilon(1e-12));
}

TEST_CASE("multipoly serialization round trip at full precision") {
    Rng rng(23);
    const Cube cube({Interval{0.0, 2.0}, Interval{0.0, 2.0}});
    const MultiPoly p = random_poly(rng, cube, 3);
    std::stringstream ss;
    write_multipoly(ss, p);
    const MultiPoly back = read_multipoly(ss);
    CHECK(back.dims() == 2);
    CHECK(back.degrees() == p.degrees());
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        CHECK(back.coeffs()[i] == p.coeffs()[i]); // bit-exact through 17 digits
}

TEST_CASE("cube and multipoly validation") {
    CHECK_THROWS_AS(Cube({Interval{1.0, 1.0}}), Error);
    CHECK_THROWS_AS(Cube({}), Error);
    CHECK_THROWS_AS(MultiPoly(cube01, {2}, {1.0, 2.0}), Error); // wrong tensor size
    const MultiPoly p = MultiPoly::constant(cube01, 1.0);
    const std::vector<double> wrong_arity = {0.5, 0.5};
    CHECK_THROWS_AS(p(wrong_arity), Error);
}
