#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>
#include <random>

#include "singp/dist.hpp"
#include "test_util.hpp"

using namespace singp;

TEST_CASE("discrete distribution invariants") {
    CHECK_THROWS_AS(DiscreteDist({{0, Rational(1, 2)}}), DomainError);
    CHECK_THROWS_AS(DiscreteDist({{0, Rational(1, 2)}, {0, Rational(1, 2)}}), DomainError);
    CHECK_THROWS_AS(DiscreteDist({{0, Rational(3, 2)}, {1, Rational(-1, 2)}}), DomainError);
    auto d = DiscreteDist::lazy_coin(Rational(1, 2));
    CHECK(d.prob_of(0) == Rational(1, 2));
    CHECK(d.prob_of(1) == Rational(1, 4));
    CHECK(d.is_symmetric());
    CHECK(!DiscreteDist({{0, Rational(1, 2)}, {1, Rational(1, 2)}}).is_symmetric());
}

TEST_CASE("symmetric distribution invariants") {
    CHECK_THROWS_AS(SymmetricDist(Rational(1, 2), {{1, Rational(1, 2)}}), DomainError);
    CHECK_THROWS_AS(SymmetricDist(Rational(1, 2), {{-1, Rational(1, 4)}}), DomainError);
    auto s = SymmetricDist(Rational(1, 2), {{1, Rational(1, 4)}});
    CHECK(s.mu() == Rational(1, 2));
    CHECK(s.to_dist() == DiscreteDist::lazy_coin(Rational(1, 2)));
    CHECK(SymmetricDist::from_dist(DiscreteDist::bernoulli()).zero_prob() == 0);
    // zero-probability pairs are dropped
    auto t = SymmetricDist(Rational(1, 2), {{1, Rational(1, 4)}, {2, Rational(0)}});
    CHECK(t.pairs().size() == 1);
}

TEST_CASE("char_fn_symmetric examples") {
    // gamma^{1/2} -> 1/2 + (1/2) cos(2 pi t)
    auto p = char_fn_symmetric(SymmetricDist::from_dist(DiscreteDist::lazy_coin(Rational(1, 2))));
    CHECK(p.coeff(0) == Rational(1, 2));
    CHECK(p.coeff(1) == Rational(1, 2));
    CHECK(p.value_at_zero() == 1);

    // point mass at 0 -> constant 1
    auto q = char_fn_symmetric(SymmetricDist());
    CHECK(q == CosinePoly::constant(Rational(1)));

    // +-2 w.p. 1/8 each, 0 w.p. 3/4 -> 3/4 + (1/4) cos(4 pi t)
    auto r = char_fn_symmetric(SymmetricDist(Rational(3, 4), {{2, Rational(1, 8)}}));
    CHECK(r.coeff(0) == Rational(3, 4));
    CHECK(r.coeff(2) == Rational(1, 4));
    CHECK(r.coeff(1) == 0);
}

TEST_CASE("abs_char_sq examples") {
    // Bernoulli: 1/2 + (1/2) cos(4 pi t)
    auto p = abs_char_sq(DiscreteDist::bernoulli());
    CHECK(p.coeff(0) == Rational(1, 2));
    CHECK(p.coeff(2) == Rational(1, 2));

    // gamma^mu: (1 - 2mu + 3/2 mu^2) + 2(1-mu)mu cos(2 pi t) + (mu^2/2) cos(4 pi t)
    for (Rational mu : {Rational(1, 4), Rational(1, 2), Rational(4, 5)}) {
        auto q = abs_char_sq(DiscreteDist::lazy_coin(mu));
        CHECK(q.coeff(0) == 1 - 2 * mu + Rational(3, 2) * mu * mu);
        CHECK(q.coeff(1) == 2 * (1 - mu) * mu);
        CHECK(q.coeff(2) == mu * mu / 2);
    }

    // +-2,+-1 each w.p. mu/4, 0 w.p. 1-mu
    for (Rational mu : {Rational(16, 25), Rational(1, 3)}) {
        auto q = abs_char_sq(DiscreteDist::pm2(mu));
        CHECK(q.coeff(0) == 1 - 2 * mu + Rational(5, 4) * mu * mu);
        CHECK(q.coeff(1) == mu - Rational(3, 4) * mu * mu);
        CHECK(q.coeff(2) == mu - Rational(7, 8) * mu * mu);
        CHECK(q.coeff(3) == mu * mu / 4);
        CHECK(q.coeff(4) == mu * mu / 8);
    }
}

TEST_CASE("cosine polynomial evaluation") {
    CosinePoly p({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
    CHECK_THAT(p.eval(0.0), Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(p.eval(0.5), Catch::Matchers::WithinAbs(0.0, 1e-15));

    // Exponent-1 polynomial of the +-2,+-1 distribution at mu = 16/25
    // vanishes where cos(2 pi t) = -1/4.
    Rational mu(16, 25);
    CosinePoly f({{0, 1 - mu}, {1, mu / 2}, {2, mu / 2}});
    double t = std::acos(-0.25) / (2 * std::numbers::pi);
    CHECK_THAT(f.eval(t), Catch::Matchers::WithinAbs(0.0, 1e-15));
}

TEST_CASE("min_on_period examples") {
    SECTION("1/2 + 1/2 cos(2 pi t) has minimum 0 at t = 1/2") {
        CosinePoly p({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
        auto m = min_on_period(p);
        CHECK(m.sign == 0);
        CHECK(m.lo == 0);
        CHECK_THAT(m.argmin_t, Catch::Matchers::WithinAbs(0.5, 1e-12));
    }
    SECTION("3/4 + 1/4 cos(4 pi t) has minimum 1/2") {
        CosinePoly p({{0, Rational(3, 4)}, {2, Rational(1, 4)}});
        auto m = min_on_period(p);
        CHECK(m.sign == 1);
        CHECK(m.exact);
        CHECK(m.lo == Rational(1, 2));
    }
    SECTION("boundary certificate polynomial touches zero") {
        Rational mu(16, 25);
        CosinePoly p({{0, 1 - mu}, {1, mu / 2}, {2, mu / 2}});
        auto m = min_on_period(p);
        CHECK(m.sign == 0);
        CHECK(m.lo == 0);
        CHECK(m.arg_c_lo <= Rational(-1, 4));
        CHECK(m.arg_c_hi >= Rational(-1, 4));
    }
}

TEST_CASE("char_fn_symmetric matches direct expectation") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = testutil::random_symmetric(rng);
        auto p = char_fn_symmetric(s);
        auto full = s.to_dist();
        std::uniform_real_distribution<double> td(0.0, 1.0);
        for (int i = 0; i < 5; ++i) {
            double t = td(rng);
            double direct = 0;
            for (const auto& a : full.atoms())
                direct += a.prob.get_d() *
                          std::cos(2 * std::numbers::pi * static_cast<double>(a.value) * t);
            CHECK_THAT(p.eval(t), Catch::Matchers::WithinAbs(direct, 1e-12));
        }
    }
}

TEST_CASE("abs_char_sq matches |E e(alpha t)|^2") {
    std::mt19937_64 rng(102);
    for (int trial = 0; trial < 200; ++trial) {
        auto d = testutil::random_dist(rng);
        auto p = abs_char_sq(d);
        std::uniform_real_distribution<double> td(0.0, 1.0);
        for (int i = 0; i < 5; ++i) {
            double t = td(rng);
            std::complex<double> e(0, 0);
            for (const auto& a : d.atoms()) {
                double ang = 2 * std::numbers::pi * static_cast<double>(a.value) * t;
                e += a.prob.get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            CHECK_THAT(p.eval(t), Catch::Matchers::WithinAbs(std::norm(e), 1e-12));
        }
    }
}

TEST_CASE("abs_char_sq is pointwise nonnegative") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 1000; ++trial) {
        auto p = abs_char_sq(testutil::random_dist(rng));
        for (int i = 0; i < 10000; ++i) {
            double t = static_cast<double>(i) / 10000.0;
            if (p.eval(t) < -1e-12) {
                FAIL("abs_char_sq negative at t=" << t);
            }
        }
    }
}

TEST_CASE("min_on_period agrees with dense-grid minimization") {
    std::mt19937_64 rng(104);
    std::uniform_int_distribution<int> nfreq(1, 8);
    std::uniform_int_distribution<long> num(-4, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::map<long long, Rational> cs;
        int k = nfreq(rng);
        for (int i = 0; i <= k; ++i) cs[i] = Rational(num(rng), 16);
        CosinePoly p(std::move(cs));
        auto m = min_on_period(p);
        double gm = testutil::grid_min(p, 1000000);
        CHECK(gm >= m.lo.get_d() - 1e-9);
        CHECK(gm <= m.hi.get_d() + 1e-9);
    }
}

TEST_CASE("cosine polynomial products and powers") {
    // cos^2(2 pi t) = 1/2 + 1/2 cos(4 pi t)
    CosinePoly c({{1, Rational(1)}});
    auto sq = c * c;
    CHECK(sq.coeff(0) == Rational(1, 2));
    CHECK(sq.coeff(2) == Rational(1, 2));
    auto p4 = c.pow(4);
    // cos^4 = 3/8 + 1/2 cos(2.) + 1/8 cos(4.) in doubled angle: check numerically
    for (double t : {0.1, 0.3, 0.77}) {
        double lhs = std::pow(std::cos(2 * std::numbers::pi * t), 4);
        CHECK_THAT(p4.eval(t), Catch::Matchers::WithinAbs(lhs, 1e-12));
    }
}

TEST_CASE("scaling atom values") {
    auto d = DiscreteDist::lazy_coin(Rational(1, 2)).scaled(3);
    CHECK(d.prob_of(3) == Rational(1, 4));
    CHECK(d.prob_of(1) == 0);
    CHECK_THROWS_AS(d.scaled(0), DomainError);
}
