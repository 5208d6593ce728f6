#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "singp/certify.hpp"
#include "test_util.hpp"

using namespace singp;

namespace {

// gamma^mu certified by itself (exponent 1, valid for mu <= 1/2).
Certificate gamma_self_cert(const Rational& mu) {
    SymmetricDist beta = SymmetricDist::from_dist(DiscreteDist::lazy_coin(mu));
    Rational p = 1 - mu;
    Rational q = mu > 0 ? std::min(Rational(mu / 2), p) : p;
    return Certificate(p, q, 1, beta);
}

// The exponent-2 witness for gamma^mu: 0 w.p. 1-2mu+3/2mu^2, +-1 w.p. (1-mu)mu,
// +-2 w.p. mu^2/4.
Certificate gamma_exp2_cert(const Rational& mu) {
    Rational p = 1 - 2 * mu + Rational(3, 2) * mu * mu;
    std::vector<SymmetricDist::Pair> pairs;
    if ((1 - mu) * mu > 0) pairs.push_back({1, (1 - mu) * mu});
    if (mu > 0) pairs.push_back({2, mu * mu / 4});
    SymmetricDist beta(p, std::move(pairs));
    Rational q = std::min(beta.min_atom_prob(), p);
    return Certificate(p, q, 2, beta);
}

} // namespace

TEST_CASE("certificate construction invariants") {
    SymmetricDist beta(Rational(1, 2), {{1, Rational(1, 4)}});
    CHECK_THROWS_AS(Certificate(Rational(3, 4), Rational(1, 4), 1, beta), DomainError);
    CHECK_THROWS_AS(Certificate(Rational(1, 2), Rational(2, 3), 1, beta), DomainError);
    CHECK_THROWS_AS(Certificate(Rational(1, 2), Rational(1, 4), 0, beta), DomainError);
    CHECK_NOTHROW(Certificate(Rational(1, 2), Rational(1, 4), 1, beta));
}

TEST_CASE("verify: gamma^mu is (1-mu)-bounded of exponent 1 for mu <= 1/2") {
    for (Rational mu : {Rational(1, 10), Rational(1, 4), Rational(1, 2)}) {
        auto alpha = DiscreteDist::lazy_coin(mu);
        auto rep = verify(alpha, gamma_self_cert(mu));
        CHECK(rep.valid);
        CHECK(rep.slack_sign >= 0);
    }
    // beyond 1/2 the characteristic function goes negative and the
    // self-certificate fails
    Rational mu(3, 4);
    auto rep = verify(DiscreteDist::lazy_coin(mu), gamma_self_cert(mu));
    CHECK(!rep.valid);
    CHECK(rep.slack_sign < 0);
}

TEST_CASE("verify: Bernoulli exponent-1 certificate with p = 3/4") {
    auto alpha = DiscreteDist::bernoulli();
    SymmetricDist beta(Rational(3, 4), {{2, Rational(1, 8)}});
    Certificate cert(Rational(3, 4), Rational(1, 8), 1, beta);
    auto rep = verify(alpha, cert);
    CHECK(rep.valid);
    // equality exactly where (cos 2 pi t - 1)^2 = 0
    CHECK(rep.slack_sign == 0);
    CHECK(rep.slack_lo == 0);
    CHECK(rep.slack_exact);
}

TEST_CASE("verify: Bernoulli exponent-2 certificate with p = 1/2") {
    auto alpha = DiscreteDist::bernoulli();
    SymmetricDist beta(Rational(1, 2), {{2, Rational(1, 4)}});
    Certificate cert(Rational(1, 2), Rational(1, 4), 2, beta);
    auto rep = verify(alpha, cert);
    CHECK(rep.valid);
    CHECK(rep.slack_sign == 0);  // the two sides are identical polynomials
}

TEST_CASE("verify: no admissible beta with p = 0.7 works for Bernoulli at exponent 1") {
    auto alpha = DiscreteDist::bernoulli();
    Rational p(7, 10);
    for (auto beta : {SymmetricDist(p, {{1, Rational(3, 20)}}),
                      SymmetricDist(p, {{2, Rational(3, 20)}}),
                      SymmetricDist(p, {{1, Rational(3, 40)}, {2, Rational(3, 40)}})}) {
        Certificate cert(p, beta.min_atom_prob(), 1, beta);
        auto rep = verify(alpha, cert);
        CHECK(!rep.valid);
    }
    // and the LP search cannot reach p below 3/4 either
    auto found = find_certificate(alpha, 1, 8);
    REQUIRE(found.certificate.has_value());
    CHECK(found.certificate->p.get_d() > 0.75 - 1e-6);
}

TEST_CASE("verify rejects odd exponents for asymmetric alpha") {
    DiscreteDist alpha({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
    SymmetricDist beta(Rational(1, 2), {{1, Rational(1, 4)}});
    Certificate cert(Rational(1, 2), Rational(1, 4), 1, beta);
    CHECK_THROWS_AS(verify(alpha, cert), UnsupportedExponentError);
    // exponent 2 is fine
    Certificate cert2(Rational(1, 2), Rational(1, 4), 2, beta);
    CHECK_NOTHROW(verify(alpha, cert2));
}

TEST_CASE("strict margin clause") {
    auto alpha = DiscreteDist::lazy_coin(Rational(1, 4));
    SymmetricDist beta = SymmetricDist::from_dist(alpha);
    // E e(beta t) = 3/4 + 1/4 cos: minimum 1/2, so margin 1/4 holds and 1/2 fails
    Certificate ok(Rational(3, 4), Rational(1, 8), 1, beta, Rational(1, 4));
    CHECK(verify(alpha, ok).valid);
    Certificate bad(Rational(3, 4), Rational(1, 8), 1, beta, Rational(1, 2));
    CHECK(!verify(alpha, bad).valid);
}

TEST_CASE("find_certificate reproduces the closed-form optima") {
    SECTION("Bernoulli, exponent 2: p = 1/2") {
        auto res = find_certificate(DiscreteDist::bernoulli(), 2, 4);
        REQUIRE(res.certificate.has_value());
        CHECK_THAT(res.certificate->p.get_d(), Catch::Matchers::WithinAbs(0.5, 1e-6));
        CHECK(res.report.valid);
    }
    SECTION("gamma^{1/4}, exponent 1: p = 3/4") {
        auto res = find_certificate(DiscreteDist::lazy_coin(Rational(1, 4)), 1, 1);
        REQUIRE(res.certificate.has_value());
        CHECK_THAT(res.certificate->p.get_d(), Catch::Matchers::WithinAbs(0.75, 1e-6));
    }
    SECTION("pm2 distribution at mu = 16/25, exponent 1: p = 9/25") {
        auto res = find_certificate(DiscreteDist::pm2(Rational(16, 25)), 1, 2);
        REQUIRE(res.certificate.has_value());
        CHECK_THAT(res.certificate->p.get_d(), Catch::Matchers::WithinAbs(9.0 / 25.0, 1e-6));
    }
}

TEST_CASE("certificate_bound") {
    SymmetricDist b2(Rational(1, 2), {{2, Rational(1, 4)}});
    Certificate c2(Rational(1, 2), Rational(1, 4), 2, b2);
    CHECK_THAT(certificate_bound(c2, 10), Catch::Matchers::WithinRel(std::pow(2.0, -5.0), 1e-12));

    SymmetricDist b1(Rational(3, 4), {{2, Rational(1, 8)}});
    Certificate c1(Rational(3, 4), Rational(1, 8), 1, b1);
    CHECK_THAT(certificate_bound(c1, 4), Catch::Matchers::WithinRel(std::pow(0.75, 4.0), 1e-12));

    Certificate c3(Rational(1, 2), Rational(1, 4), 1,
                   SymmetricDist(Rational(1, 2), {{1, Rational(1, 4)}}));
    CHECK_THAT(certificate_bound(c3, 8), Catch::Matchers::WithinRel(std::pow(2.0, -8.0), 1e-12));
}

TEST_CASE("verify agrees with dense-grid comparison") {
    std::mt19937_64 rng(2027);
    int checked = 0;
    while (checked < 500) {
        auto alpha = testutil::random_dist(rng, 3, 2);
        auto beta = testutil::random_symmetric(rng, 2, 3);
        if (beta.zero_prob() == 0) continue;
        int r = static_cast<int>(rng() % 2) + 1;
        if (r == 1 && !alpha.is_symmetric()) continue;
        Rational p = beta.zero_prob();
        if (alpha.max_prob() > p) continue;
        Rational q = beta.min_atom_prob();
        if (q <= 0 || q > p) continue;
        Certificate cert(p, q, r, beta);
        auto rep = verify(alpha, cert);
        // independent grid check of clause (iii)
        CosinePoly rhs = char_fn_symmetric(beta);
        CosinePoly slack = r == 2 ? rhs - abs_char_sq(alpha) : rhs - char_fn(alpha);
        double gm = testutil::grid_min(slack, 1u << 20);
        if (r == 1) gm = std::min(gm, testutil::grid_min(rhs + char_fn(alpha), 1u << 20));
        if (rep.slack_sign >= 0) {
            CHECK(gm >= -1e-9);
        } else {
            CHECK(gm < 1e-9);
            CHECK(rep.slack_lo < 0);
        }
        ++checked;
    }
}

TEST_CASE("scaling invariance of the verify verdict") {
    std::mt19937_64 rng(2028);
    int done = 0;
    while (done < 100) {
        auto alpha = testutil::random_dist(rng, 3, 2);
        auto beta = testutil::random_symmetric(rng, 2, 2);
        if (beta.zero_prob() == 0) continue;
        Rational p = beta.zero_prob();
        if (alpha.max_prob() > p) continue;
        Rational q = beta.min_atom_prob();
        if (q <= 0 || q > p) continue;
        Certificate cert(p, q, 2, beta);
        bool base = verify(alpha, cert).valid;
        long long s = static_cast<long long>(rng() % 3) + 2;
        Certificate scaled_cert(p, q, 2, beta.scaled(s));
        CHECK(verify(alpha.scaled(s), scaled_cert).valid == base);
        ++done;
    }
}

TEST_CASE("exponent-2 certificate of gamma^mu: exact majorization holds everywhere, "
          "clause (i) only at isolated mu") {
    struct Case { Rational mu; bool clause_i; };
    // max(1-mu, mu/2) <= 1-2mu+3/2mu^2 holds only at mu in {0, 2/3, 1}
    for (Case c : {Case{Rational(1, 20), false}, Case{Rational(1, 2), false},
                   Case{Rational(2, 3), true}, Case{Rational(9, 10), false},
                   Case{Rational(1), true}}) {
        auto rep = verify(DiscreteDist::lazy_coin(c.mu), gamma_exp2_cert(c.mu));
        CHECK(rep.slack_sign == 0);  // the two sides agree identically
        CHECK(rep.majorization.pass);
        CHECK(rep.max_atom.pass == c.clause_i);
        CHECK(rep.valid == c.clause_i);
    }
}

TEST_CASE("rescaling a valid certificate toward larger p keeps it valid") {
    std::mt19937_64 rng(2029);
    std::uniform_int_distribution<long> mu_num(5, 50);
    for (int i = 0; i < 100; ++i) {
        Rational mu(mu_num(rng), 100);
        mu.canonicalize();
        auto alpha = DiscreteDist::lazy_coin(mu);
        Certificate cert = gamma_self_cert(mu);
        REQUIRE(verify(alpha, cert).valid);
        // raise p by shrinking the certificate's mu
        Rational mu_c = cert.beta.mu();
        std::uniform_int_distribution<long> sc(10, 99);
        Rational scale(sc(rng), 100);
        scale.canonicalize();
        Rational mu_smaller = mu_c * scale;
        if (mu_smaller == 0) continue;
        SymmetricDist shrunk = cert.beta.with_mu(mu_smaller);
        Rational p2 = shrunk.zero_prob();
        Rational q2 = std::min(shrunk.min_atom_prob(), p2);
        Certificate larger(p2, q2, 1, shrunk);
        CHECK(verify(alpha, larger).valid);
    }
}

TEST_CASE("find_certificate output always passes verify") {
    std::mt19937_64 rng(2030);
    for (int i = 0; i < 10; ++i) {
        auto alpha = testutil::random_dist(rng, 3, 2);
        auto res = find_certificate(alpha, 2, 6);
        if (res.certificate) {
            CHECK(res.report.majorization.pass);
            auto rep = verify(alpha, *res.certificate);
            CHECK(rep.majorization.pass);
            CHECK(rep.beta_bracket.pass);
        }
    }
}
