#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "singp/dist.hpp"
#include "singp/lp.hpp"

namespace singp {

// A (p, q, r, beta) witness that a random variable is p-bounded of exponent r:
//   (i)   max_x Pr(alpha = x) <= p,
//   (ii)  q <= Pr(beta = x) <= p for every atom x of beta,
//   (iii) |E e(alpha t)|^r <= E e(beta t) for all t,
// where beta is symmetric with Pr(beta = 0) = p. strict_margin > 0 requests
// the stronger E e(beta t) > strict_margin everywhere.
struct Certificate {
    Rational p;
    Rational q;
    int r = 1;
    SymmetricDist beta;
    Rational strict_margin = Rational(0);

    Certificate() = default;
    Certificate(Rational p_, Rational q_, int r_, SymmetricDist beta_,
                Rational margin = Rational(0))
        : p(std::move(p_)), q(std::move(q_)), r(r_), beta(std::move(beta_)),
          strict_margin(std::move(margin)) {
        if (p <= 0 || p > 1) throw DomainError("certificate requires 0 < p <= 1");
        if (q <= 0 || q > p) throw DomainError("certificate requires 0 < q <= p");
        if (r < 1) throw DomainError("certificate exponent must be positive");
        if (beta.zero_prob() != p)
            throw DomainError("beta must take value 0 with probability p");
        if (strict_margin < 0) throw DomainError("strict margin must be nonnegative");
    }

    Rational mu() const { return 1 - p; }
};

struct ClauseReport {
    bool pass = false;
    std::string detail;
};

struct CertificateReport {
    bool valid = false;
    ClauseReport max_atom;       // Definition clause (i)
    ClauseReport beta_bracket;   // Definition clause (ii)
    ClauseReport majorization;   // Definition clause (iii)
    ClauseReport margin;         // strict positivity, when requested
    int slack_sign = 0;          // exact sign of min_t (rhs - lhs)
    Rational slack_lo, slack_hi; // certified enclosure of the minimal slack
    bool slack_exact = false;
    Rational worst_c_lo, worst_c_hi;  // cos(2 pi t) at the argmin
    double worst_t = 0;
    Rational worst_t_rational;
};

namespace detail {

// |E e(alpha t)|^r as a cosine polynomial. Even r always works; odd r needs a
// real characteristic function, i.e. symmetric alpha, and returns phi^r whose
// absolute value is the left side.
inline CosinePoly char_power(const DiscreteDist& alpha, int r) {
    if (r % 2 == 0) return abs_char_sq(alpha).pow(static_cast<unsigned>(r / 2));
    if (!alpha.is_symmetric())
        throw UnsupportedExponentError(
            "odd exponent requires a symmetric distribution (real characteristic function)");
    return char_fn(alpha).pow(static_cast<unsigned>(r));
}

} // namespace detail

inline CertificateReport verify(const DiscreteDist& alpha, const Certificate& cert) {
    CertificateReport rep;

    Rational amax = alpha.max_prob();
    rep.max_atom.pass = amax <= cert.p;
    rep.max_atom.detail = "max atom " + amax.get_str() + " vs p " + cert.p.get_str();

    Rational bmin = cert.beta.min_atom_prob();
    Rational bmax = cert.beta.max_atom_prob();
    rep.beta_bracket.pass = cert.q <= bmin && bmax <= cert.p;
    rep.beta_bracket.detail =
        "atom probabilities in [" + bmin.get_str() + ", " + bmax.get_str() + "], need [" +
        cert.q.get_str() + ", " + cert.p.get_str() + "]";

    CosinePoly rhs = char_fn_symmetric(cert.beta);
    CosinePoly lhs = detail::char_power(alpha, cert.r);

    auto take = [&rep](const MinOnPeriod& m) {
        rep.slack_sign = m.sign;
        rep.slack_lo = m.lo;
        rep.slack_hi = m.hi;
        rep.slack_exact = m.exact;
        rep.worst_c_lo = m.arg_c_lo;
        rep.worst_c_hi = m.arg_c_hi;
        rep.worst_t = m.argmin_t;
        rep.worst_t_rational = rationalize(m.argmin_t);
    };
    if (cert.r % 2 == 0) {
        take(min_on_period(rhs - lhs));
    } else {
        // |phi^r| <= rhs is the pair of one-sided checks rhs -+ phi^r >= 0.
        auto m1 = min_on_period(rhs - lhs);
        auto m2 = min_on_period(rhs + lhs);
        take(m1.lo <= m2.lo ? m1 : m2);
        rep.slack_sign = std::min(m1.sign, m2.sign);
        if (rep.slack_sign == 0) {
            rep.slack_lo = rep.slack_hi = 0;
            rep.slack_exact = true;
        }
    }
    rep.majorization.pass = rep.slack_sign >= 0;
    rep.majorization.detail = "minimal slack in [" + rep.slack_lo.get_str() + ", " +
                              rep.slack_hi.get_str() + "]";

    rep.margin.pass = true;
    if (cert.strict_margin > 0) {
        auto m = min_on_period(rhs - CosinePoly::constant(cert.strict_margin));
        rep.margin.pass = m.sign > 0;
        rep.margin.detail = "E e(beta t) - margin has minimum sign " + std::to_string(m.sign);
    }

    rep.valid = rep.max_atom.pass && rep.beta_bracket.pass && rep.majorization.pass &&
                rep.margin.pass;
    return rep;
}

// Upper bound (p^{1/r})^n from a valid certificate; the o(1) correction is
// unknown at finite n and intentionally not modeled.
inline double certificate_bound(const Certificate& cert, long n) {
    if (n < 1) throw DomainError("n must be positive");
    return std::pow(cert.p.get_d(), static_cast<double>(n) / cert.r);
}

struct FindOptions {
    std::size_t grid = 4096;        // proposal grid for the LP
    Rational q_floor = Rational(1, 1000000);
    int max_cut_rounds = 16;        // exact-argmin cutting planes after the grid LP
    int max_backoff = 40;           // multiplicative mu reductions, Remark-style
    double rational_tol = 1e-11;    // snap LP weights to rationals at this tolerance
};

struct FindResult {
    std::optional<Certificate> certificate;
    CertificateReport report;
    double lp_mu = 0;        // LP optimum before exact repair
    int cut_rounds = 0;
    int backoff_steps = 0;
};

namespace detail {

// The search can only influence beta; clause (i) compares alpha against the
// achieved p and is reported, not enforced, by the search loop.
inline bool search_accepts(const CertificateReport& rep) {
    return rep.beta_bracket.pass && rep.majorization.pass && rep.margin.pass;
}

} // namespace detail

// Searches for a certificate for alpha of exponent r with pair values in
// 1..support_bound: maximize mu subject to the grid-sampled majorization,
// then repair against the exact Sturm verifier (extra cutting planes at the
// exact worst t, then multiplicative mu back-off).
inline FindResult find_certificate(const DiscreteDist& alpha, int r, long support_bound,
                                   const FindOptions& opt = {}) {
    if (support_bound < 1) throw DomainError("support bound must be positive");
    CosinePoly lhs_poly = detail::char_power(alpha, r);
    if (lhs_poly.max_freq() > support_bound)
        throw DomainError("support bound " + std::to_string(support_bound) +
                          " below max frequency " + std::to_string(lhs_poly.max_freq()) +
                          " of |char fn|^r");

    const std::size_t B = static_cast<std::size_t>(support_bound);
    std::vector<double> ts;
    ts.reserve(opt.grid);
    for (std::size_t i = 0; i < opt.grid; ++i)
        ts.push_back(static_cast<double>(i) / static_cast<double>(opt.grid));

    FindResult out;

    auto build_and_solve = [&]() -> Simplex::Result {
        std::vector<std::vector<double>> G;
        std::vector<double> h;
        for (double t : ts) {
            // (1 - mu) + sum_s 2 w_s cos(2 pi s t) >= |phi|^r(t), mu = 2 sum w_s
            std::vector<double> row(B);
            for (std::size_t s = 0; s < B; ++s)
                row[s] = 2.0 - 2.0 * std::cos(2 * std::numbers::pi * static_cast<double>(s + 1) * t);
            G.push_back(std::move(row));
            h.push_back(1.0 - std::fabs(lhs_poly.eval(t)));
        }
        for (std::size_t s = 0; s < B; ++s) {
            // atom probability w_s <= p = 1 - 2 sum w
            std::vector<double> row(B, 2.0);
            row[s] += 1.0;
            G.push_back(std::move(row));
            h.push_back(1.0);
        }
        return Simplex::solve_max_leq(G, h, std::vector<double>(B, 1.0));
    };

    auto candidate_from = [&](const std::vector<double>& w) -> std::optional<Certificate> {
        std::vector<SymmetricDist::Pair> pairs;
        Rational total(0);
        for (std::size_t s = 0; s < B; ++s) {
            if (w[s] < opt.q_floor.get_d()) continue;  // tiny mass folds into the zero atom
            Rational ws = rationalize(w[s], opt.rational_tol);
            if (ws <= 0) continue;
            pairs.push_back({static_cast<long long>(s + 1), ws});
            total += 2 * ws;
        }
        if (total >= 1) return std::nullopt;  // numeric overshoot; caller backs off
        Rational p = 1 - total;
        SymmetricDist beta(p, std::move(pairs));
        Rational q = beta.min_atom_prob();
        if (q > p) q = p;
        if (q <= 0) return std::nullopt;
        return Certificate(p, q, r, std::move(beta));
    };

    Simplex::Result lp = build_and_solve();
    if (lp.status != Simplex::Status::Optimal) return out;
    out.lp_mu = 2 * lp.value;

    std::vector<double> w = lp.x;
    for (int round = 0;; ++round) {
        auto cand = candidate_from(w);
        if (cand) {
            CertificateReport rep = verify(alpha, *cand);
            if (detail::search_accepts(rep)) {
                out.certificate = std::move(cand);
                out.report = std::move(rep);
                return out;
            }
            if (round >= opt.max_cut_rounds) break;
            // cut at the exact worst t and re-solve
            double c_mid = Rational((rep.worst_c_lo + rep.worst_c_hi) / 2).get_d();
            double worst = std::acos(std::clamp(c_mid, -1.0, 1.0)) / (2 * std::numbers::pi);
            ts.push_back(worst);
            out.cut_rounds = round + 1;
        } else if (round >= opt.max_cut_rounds) {
            break;
        }
        lp = build_and_solve();
        if (lp.status != Simplex::Status::Optimal) return out;
        w = lp.x;
    }

    // Remark-style repair: shrink mu multiplicatively and re-verify.
    const Rational step = 1 - Rational(1, 1 << 20);
    auto cand = candidate_from(w);
    if (!cand) return out;
    SymmetricDist beta = cand->beta;
    Rational mu = beta.mu();
    for (int k = 1; k <= opt.max_backoff; ++k) {
        mu *= step;
        SymmetricDist shrunk = beta.with_mu(mu);
        Rational p = shrunk.zero_prob();
        Rational q = std::min(shrunk.min_atom_prob(), p);
        if (q <= 0) break;
        Certificate c(p, q, r, shrunk);
        CertificateReport rep = verify(alpha, c);
        out.backoff_steps = k;
        if (detail::search_accepts(rep)) {
            out.certificate = std::move(c);
            out.report = std::move(rep);
            return out;
        }
    }
    return out;
}

// Drops high support values whose removal does not cost optimality, so equal
// optima resolve to the same certificate on every run.
inline FindResult find_certificate_minimal_support(const DiscreteDist& alpha, int r,
                                                   long support_bound,
                                                   const FindOptions& opt = {}) {
    FindResult best = find_certificate(alpha, r, support_bound, opt);
    if (!best.certificate) return best;
    double best_mu = best.certificate->mu().get_d();
    for (long b = support_bound - 1; b >= 1; --b) {
        if (b < best.certificate->beta.pairs().empty()
                ? 1
                : best.certificate->beta.pairs().back().value)
            break;
        FindResult trial = find_certificate(alpha, r, b, opt);
        if (trial.certificate && trial.certificate->mu().get_d() >= best_mu - 1e-9)
            best = std::move(trial);
        else
            break;
    }
    return best;
}

} // namespace singp
