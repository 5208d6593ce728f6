#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "singp/dist.hpp"
#include "singp/rational.hpp"

namespace singp {

// Exact decimal expansion of sqrt(q) truncated to `digits` significant digits.
inline std::string sqrt_decimal(const Rational& q, int digits) {
    if (q < 0) throw DomainError("sqrt of negative rational");
    if (q == 0) return "0";
    // scale so that the integer sqrt carries digits + guard significant digits
    int guard = 6;
    int sig = digits + guard;
    // value ~ 10^(e/2) where e is the decimal exponent of q
    Rational t = q;
    int e = 0;
    while (t >= 100) { t /= 100; ++e; }
    while (t < 1) { t *= 100; --e; }
    // q = t * 100^e with t in [1, 100): sqrt(q) = sqrt(t) * 10^e, sqrt(t) in [1, 10)
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(2 * sig));
    Integer n = t.get_num() * scale / t.get_den();
    Integer root = sqrt(n);  // floor: sig+1 leading digits are exact
    std::string ds = root.get_str();
    // sqrt(t) = ds scaled by 10^{-sig}, one integer digit
    if (static_cast<int>(ds.size()) > digits) ds = ds.substr(0, static_cast<std::size_t>(digits));
    int point = 1 + e;  // digits before the decimal point
    std::string out;
    if (point <= 0) {
        out = "0.";
        out.append(static_cast<std::size_t>(-point), '0');
        out += ds;
    } else if (point >= static_cast<int>(ds.size())) {
        out = ds;
        out.append(static_cast<std::size_t>(point) - ds.size(), '0');
    } else {
        out = ds.substr(0, static_cast<std::size_t>(point)) + "." +
              ds.substr(static_cast<std::size_t>(point));
    }
    return out;
}

// One bound curve value at a given mu: either an exact rational or the square
// root of an exact rational.
struct BoundBase {
    std::string name;
    Rational radicand;
    bool is_sqrt = false;

    double value() const {
        return is_sqrt ? std::sqrt(radicand.get_d()) : radicand.get_d();
    }
    // 12-significant-digit decimal, exact arithmetic until the final string
    std::string decimal(int digits = 12) const {
        return is_sqrt ? sqrt_decimal(radicand, digits) : rat_to_decimal(radicand, digits);
    }
};

inline void check_mu_domain(const Rational& mu) {
    if (mu < 0 || mu > 1) throw DomainError("mu must lie in [0,1]");
}

// Upper-bound bases for the lazy-coin matrix: 1-mu on [0,1/2],
// (2mu+1)/4 on [1/2,1], and sqrt(1-2mu+(3/2)mu^2) everywhere.
inline std::vector<BoundBase> upper_bounds_gamma(const Rational& mu) {
    check_mu_domain(mu);
    std::vector<BoundBase> out;
    if (mu <= Rational(1, 2)) out.push_back({"upper_exp1_left", 1 - mu, false});
    if (mu >= Rational(1, 2)) out.push_back({"upper_exp1_right", (2 * mu + 1) / 4, false});
    out.push_back({"upper_exp2", 1 - 2 * mu + Rational(3, 2) * mu * mu, true});
    return out;
}

// Lower-bound bases: one all-zero row, and a two-row equality dependency.
inline std::vector<BoundBase> lower_bounds_gamma(const Rational& mu) {
    check_mu_domain(mu);
    return {{"lower_zero_row", 1 - mu, false},
            {"lower_two_row", 1 - 2 * mu + Rational(3, 2) * mu * mu, false}};
}

// Exact algebraic number (a + b sqrt(d)) / c.
struct QuadraticSurd {
    long a = 0, b = 0, d = 0, c = 1;

    double value() const {
        return (static_cast<double>(a) + b * std::sqrt(static_cast<double>(d))) / c;
    }
    // Exact check that A x^2 + B x + C = 0.
    bool satisfies(long A, long B, long C) const {
        // A(a^2 + b^2 d) + B a c + C c^2 must vanish along with (2Aab + Bbc)
        Integer ra = Integer(A) * (Integer(a) * a + Integer(b) * b * d) + Integer(B) * a * c +
                     Integer(C) * c * c;
        Integer rb = Integer(2) * A * a * b + Integer(B) * b * c;
        return ra == 0 && rb == 0;
    }
    std::string decimal(int digits = 12) const;
};

struct Crossing {
    std::string curve_a, curve_b;
    bool is_rational = true;
    Rational rational_value;
    QuadraticSurd surd;      // meaningful when !is_rational
    long A = 0, B = 0, C = 0;  // defining quadratic A mu^2 + B mu + C = 0 (surd case)

    double value() const { return is_rational ? rational_value.get_d() : surd.value(); }
};

// Exact crossings of the Figure 1 curves.
inline std::vector<Crossing> crossing_points() {
    std::vector<Crossing> out;
    Crossing c1;
    c1.curve_a = "upper_exp1_left";
    c1.curve_b = "upper_exp1_right";
    c1.rational_value = Rational(1, 2);
    out.push_back(c1);
    Crossing c2;
    c2.curve_a = "upper_exp1_right";
    c2.curve_b = "upper_exp2";
    c2.is_rational = false;
    // (2mu+1)/4 = sqrt(1-2mu+3/2 mu^2)  <=>  20 mu^2 - 36 mu + 15 = 0 on [1/2, 1]
    c2.surd = {9, -1, 6, 10};
    c2.A = 20;
    c2.B = -36;
    c2.C = 15;
    out.push_back(c2);
    Crossing c3;
    c3.curve_a = "lower_zero_row";
    c3.curve_b = "lower_two_row";
    c3.rational_value = Rational(2, 3);
    out.push_back(c3);
    return out;
}

struct DependencyBound {
    Rational per_column;         // max over patterns of P(sum_i lambda_i a_i = 0)
    Rational probability;        // per_column^n
    std::vector<long> pattern;   // maximizing coefficients
};

// Exact probability that k i.i.d. rows of length n satisfy a fixed integer
// dependency, maximized over primitive all-nonzero coefficient vectors with
// entries in [-2, 2] (up to overall sign).
inline DependencyBound dependency_lower_bound(const DiscreteDist& dist, int k, long n,
                                              long long budget = 50'000'000) {
    if (k < 1 || k > 5) throw DomainError("k must lie in 1..5");
    if (n < 1) throw DomainError("n must be positive");

    std::vector<std::vector<long>> patterns;
    std::vector<long> cur(static_cast<std::size_t>(k));
    const std::vector<long> entries{-2, -1, 1, 2};
    auto gen = [&](auto&& self, int pos) -> void {
        if (pos == k) {
            if (cur[0] < 0) return;  // sign normalization
            long g = 0;
            for (long v : cur) g = std::gcd(g, std::labs(v));
            if (g != 1) return;
            patterns.push_back(cur);
            return;
        }
        for (long v : entries) {
            cur[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1);
        }
    };
    gen(gen, 0);

    long long conv_cost = 1;
    for (int i = 0; i < k; ++i) conv_cost *= static_cast<long long>(dist.size()) * 5;
    if (conv_cost * static_cast<long long>(patterns.size()) > budget)
        throw ResourceError("dependency search exceeds budget");

    DependencyBound best;
    best.per_column = -1;
    for (const auto& pat : patterns) {
        // distribution of sum lambda_i a_i by exact convolution
        std::map<long long, Rational> acc{{0, Rational(1)}};
        for (long lam : pat) {
            std::map<long long, Rational> next;
            for (const auto& [v, p] : acc)
                for (const auto& atom : dist.atoms()) next[v + lam * atom.value] += p * atom.prob;
            acc = std::move(next);
        }
        auto it = acc.find(0);
        Rational hit = it == acc.end() ? Rational(0) : it->second;
        if (hit > best.per_column) {
            best.per_column = hit;
            best.pattern = pat;
        }
    }
    best.probability = rat_pow(best.per_column, static_cast<unsigned long>(n));
    return best;
}

// Tabular data backing Figures 1 and 2. Every cell is a decimal string with
// 12 significant digits; cells outside a curve's domain are empty.
struct FigureTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline FigureTable emit_figure(int figure, long resolution) {
    if (resolution < 2) throw DomainError("resolution must be at least 2");
    if (figure != 1 && figure != 2) throw DomainError("figure must be 1 or 2");
    FigureTable table;
    table.header = {"mu", "upper_exp1", "upper_exp2", "lower_zero_row", "lower_two_row"};

    std::vector<Rational> grid;
    for (long i = 0; i < resolution; ++i) {
        Rational mu(i, resolution - 1);
        mu.canonicalize();
        grid.push_back(mu);
    }
    for (const Rational& bp :
         figure == 1 ? std::vector<Rational>{{1, 2}, {2, 3}}
                     : std::vector<Rational>{{1, 2}, {16, 25}, {4, 5}}) {
        if (std::find(grid.begin(), grid.end(), bp) == grid.end()) grid.push_back(bp);
    }
    std::sort(grid.begin(), grid.end());

    for (const Rational& mu : grid) {
        std::vector<std::string> row;
        row.push_back(rat_to_decimal(mu, 12));
        if (figure == 1) {
            Rational u1 = mu <= Rational(1, 2) ? Rational(1 - mu) : Rational((2 * mu + 1) / 4);
            row.push_back(rat_to_decimal(u1, 12));
            row.push_back(sqrt_decimal(1 - 2 * mu + Rational(3, 2) * mu * mu, 12));
            row.push_back(rat_to_decimal(1 - mu, 12));
            row.push_back(rat_to_decimal(1 - 2 * mu + Rational(3, 2) * mu * mu, 12));
        } else {
            // exponent-1 curve exists only while the characteristic function
            // stays nonnegative, i.e. mu <= 16/25
            if (mu <= Rational(16, 25))
                row.push_back(rat_to_decimal(1 - mu, 12));
            else
                row.push_back("");
            row.push_back(sqrt_decimal(1 - 2 * mu + Rational(5, 4) * mu * mu, 12));
            row.push_back(rat_to_decimal(1 - mu, 12));
            row.push_back(rat_to_decimal(1 - 2 * mu + Rational(5, 4) * mu * mu, 12));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::string QuadraticSurd::decimal(int digits) const {
    // (a + b sqrt(d))/c via one long integer sqrt with guard digits
    int sig = digits + 8;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(2 * sig));
    Integer root = sqrt(Integer(d) * scale);  // sqrt(d) * 10^sig, floored
    Integer p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(sig));
    Rational v(Integer(a) * p10 + Integer(b) * root, Integer(c) * p10);
    v.canonicalize();
    return rat_to_decimal(v, digits);
}

} // namespace singp
