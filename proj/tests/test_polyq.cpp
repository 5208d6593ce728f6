#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "singp/polyq.hpp"

using namespace singp;

namespace {

Poly from_ints(std::initializer_list<long> cs) {
    std::vector<Rational> v;
    for (long c : cs) v.emplace_back(c);
    return Poly(std::move(v));
}

} // namespace

TEST_CASE("poly arithmetic basics") {
    Poly p = from_ints({1, 2, 3});  // 1 + 2x + 3x^2
    Poly q = from_ints({0, 1});     // x
    CHECK((p * q).degree() == 3);
    CHECK((p + q).coeff(1) == 3);
    CHECK((p - p).is_zero());
    CHECK(p.eval(Rational(2)) == 17);
    CHECK(p.derivative() == from_ints({2, 6}));
}

TEST_CASE("gcd and squarefree part") {
    Poly x = Poly::x();
    Poly f = (x - Poly::constant(1)) * (x - Poly::constant(1)) * (x + Poly::constant(2));
    Poly g = squarefree_part(f);
    CHECK(g.degree() == 2);
    CHECK(g.eval(Rational(1)) == 0);
    CHECK(g.eval(Rational(-2)) == 0);
    Poly h = poly_gcd(f, f.derivative());
    CHECK(h.degree() == 1);
    CHECK(h.eval(Rational(1)) == 0);
}

TEST_CASE("sturm root counting") {
    // (x-1)(x+1)(x-3) has roots -1, 1, 3
    Poly f = (Poly::x() - Poly::constant(1)) * (Poly::x() + Poly::constant(1)) *
             (Poly::x() - Poly::constant(3));
    SturmChain chain(f);
    CHECK(chain.count_roots(Rational(-2), Rational(4)) == 3);
    CHECK(chain.count_roots(Rational(0), Rational(2)) == 1);
    CHECK(chain.count_roots(Rational(-2), Rational(0)) == 1);
    CHECK(chain.count_roots(Rational(4), Rational(10)) == 0);
    // multiplicities are collapsed
    Poly g = f * f;
    SturmChain chain2(g);
    CHECK(chain2.count_roots(Rational(-2), Rational(4)) == 3);
}

TEST_CASE("root isolation") {
    // 20x^2 - 36x + 15: roots (9 +- sqrt(6))/10
    Poly f = from_ints({15, -36, 20});
    auto roots = isolate_roots(f, Rational(0), Rational(1));
    REQUIRE(roots.size() == 1);
    double r = Rational((roots[0].lo + roots[0].hi) / 2).get_d();
    CHECK_THAT(r, Catch::Matchers::WithinAbs((9.0 - std::sqrt(6.0)) / 10.0, 1e-6));

    // root exactly at an endpoint of the search interval
    Poly g = Poly::x() * (Poly::x() - Poly::constant(Rational(1, 2)));
    auto roots2 = isolate_roots(g, Rational(0), Rational(1));
    REQUIRE(roots2.size() == 2);
    CHECK(roots2[0].exact());
    CHECK(roots2[0].lo == 0);
}

TEST_CASE("rational root detection") {
    Poly f = from_ints({1, 8, 16});  // (4x+1)^2
    auto r = rational_root_in(f, Rational(-1), Rational(1));
    REQUIRE(r.has_value());
    CHECK(*r == Rational(-1, 4));
    Poly g = from_ints({-2, 0, 1});  // x^2 - 2, irrational roots
    CHECK(!rational_root_in(g, Rational(0), Rational(2)).has_value());
}

TEST_CASE("exact minimization on an interval") {
    SECTION("strictly positive quadratic") {
        Poly f = from_ints({2, 0, 1});  // x^2 + 2
        auto m = minimize_on_interval(f, Rational(-1), Rational(1));
        CHECK(m.sign == 1);
        CHECK(m.lo == 2);
        CHECK(m.hi == 2);
    }
    SECTION("tangent minimum is detected as exactly zero") {
        Poly f = from_ints({1, 8, 16});  // (4x+1)^2, min 0 at x = -1/4
        auto m = minimize_on_interval(f, Rational(-1), Rational(1));
        CHECK(m.sign == 0);
        CHECK(m.lo == 0);
        CHECK(m.hi == 0);
        CHECK(m.argmin_lo <= Rational(-1, 4));
        CHECK(m.argmin_hi >= Rational(-1, 4));
    }
    SECTION("negative dip") {
        Poly f = from_ints({0, 0, 1}) - Poly::constant(Rational(1, 100));  // x^2 - 1/100
        auto m = minimize_on_interval(f, Rational(-1), Rational(1));
        CHECK(m.sign == -1);
        CHECK(m.lo <= Rational(-1, 100));
        CHECK(m.hi >= Rational(-1, 100));
    }
    SECTION("minimum at interval endpoint") {
        Poly f = from_ints({0, 1});  // x
        auto m = minimize_on_interval(f, Rational(-1), Rational(1));
        CHECK(m.sign == -1);
        CHECK(m.lo == -1);
        CHECK(m.hi == -1);
        CHECK(m.argmin_lo == -1);
    }
    SECTION("zero polynomial") {
        auto m = minimize_on_interval(Poly(), Rational(-1), Rational(1));
        CHECK(m.sign == 0);
    }
    SECTION("irrational critical point gets a tight certified enclosure") {
        // p = x^3 - x: critical points +-1/sqrt(3); min on [-1,1] = -2/(3 sqrt 3)
        Poly f = from_ints({0, -1, 0, 1});
        auto m = minimize_on_interval(f, Rational(-1), Rational(1));
        CHECK(m.sign == -1);
        double expected = -2.0 / (3.0 * std::sqrt(3.0));
        CHECK(m.lo.get_d() <= expected);
        CHECK(m.hi.get_d() >= expected);
        CHECK(Rational(m.hi - m.lo).get_d() < 1e-9);
    }
}

TEST_CASE("minimization agrees with brute-force sampling on random polynomials") {
    std::mt19937_64 rng(20260801);
    std::uniform_int_distribution<int> deg(1, 6);
    std::uniform_int_distribution<long> num(-8, 8);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> cs(static_cast<std::size_t>(deg(rng)) + 1);
        for (auto& c : cs) c = Rational(num(rng), 4);
        Poly f(std::move(cs));
        auto m = minimize_on_interval(f, Rational(-1), Rational(1));
        // dense sample can never undershoot a certified lower bound
        double best = 1e300;
        for (int i = 0; i <= 2000; ++i) {
            double x = -1.0 + 2.0 * i / 2000.0;
            best = std::min(best, f.eval(x));
        }
        CHECK(best >= m.lo.get_d() - 1e-9);
        CHECK(best <= m.hi.get_d() + 1e-3);
        if (m.sign > 0) CHECK(best > -1e-12);
        if (m.sign < 0) CHECK(m.lo < 0);
    }
}

TEST_CASE("chebyshev basis") {
    auto T = chebyshev_basis(4);
    CHECK(T[2] == Poly(std::vector<Rational>{-1, 0, 2}));
    CHECK(T[3] == Poly(std::vector<Rational>{0, -3, 0, 4}));
    // T_k(cos u) = cos(k u)
    double u = 0.7;
    CHECK_THAT(T[4].eval(std::cos(u)), Catch::Matchers::WithinAbs(std::cos(4 * u), 1e-12));
}
