#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "singp/polyq.hpp"
#include "singp/rational.hpp"

namespace singp {

// A finitely supported random variable over the integers with exact rational
// probabilities. Atoms are kept sorted by value; probabilities are strictly
// positive and sum to one.
class DiscreteDist {
public:
    struct Atom {
        long long value;
        Rational prob;
        bool operator==(const Atom&) const = default;
    };

    DiscreteDist() : atoms_{{0, Rational(1)}} {}

    explicit DiscreteDist(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        for (auto& a : atoms_) a.prob.canonicalize();
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.value < b.value; });
        Rational total(0);
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (atoms_[i].prob <= 0) throw DomainError("atom probability must be positive");
            if (i > 0 && atoms_[i].value == atoms_[i - 1].value)
                throw DomainError("atom values must be distinct");
            total += atoms_[i].prob;
        }
        if (total != 1) throw DomainError("atom probabilities must sum to 1, got " + total.get_str());
    }

    static DiscreteDist point_mass(long long v) { return DiscreteDist({{v, Rational(1)}}); }

    // Fair +-1 coin.
    static DiscreteDist bernoulli() {
        return DiscreteDist({{-1, Rational(1, 2)}, {1, Rational(1, 2)}});
    }

    // 0 with probability 1-mu, +-1 each with probability mu/2.
    static DiscreteDist lazy_coin(const Rational& mu) {
        if (mu < 0 || mu > 1) throw DomainError("mu must lie in [0,1]");
        std::vector<Atom> atoms;
        if (mu < 1) atoms.push_back({0, 1 - mu});
        if (mu > 0) {
            atoms.push_back({-1, mu / 2});
            atoms.push_back({1, mu / 2});
        }
        return DiscreteDist(std::move(atoms));
    }

    // 0 with probability 1-mu, each of +-1, +-2 with probability mu/4.
    static DiscreteDist pm2(const Rational& mu) {
        if (mu < 0 || mu > 1) throw DomainError("mu must lie in [0,1]");
        std::vector<Atom> atoms;
        if (mu < 1) atoms.push_back({0, 1 - mu});
        if (mu > 0)
            for (long long v : {-2LL, -1LL, 1LL, 2LL}) atoms.push_back({v, mu / 4});
        return DiscreteDist(std::move(atoms));
    }

    // Uniform on {-k, ..., k}.
    static DiscreteDist uniform_range(long long k) {
        if (k < 0) throw DomainError("k must be nonnegative");
        std::vector<Atom> atoms;
        for (long long v = -k; v <= k; ++v) atoms.push_back({v, Rational(1, static_cast<long>(2 * k + 1))});
        return DiscreteDist(std::move(atoms));
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    Rational prob_of(long long v) const {
        for (const auto& a : atoms_)
            if (a.value == v) return a.prob;
        return Rational(0);
    }

    Rational max_prob() const {
        Rational m(0);
        for (const auto& a : atoms_) m = std::max(m, a.prob);
        return m;
    }

    bool is_symmetric() const {
        for (const auto& a : atoms_)
            if (prob_of(-a.value) != a.prob) return false;
        return true;
    }

    // Multiplies every atom value by s (s != 0).
    DiscreteDist scaled(long long s) const {
        if (s == 0) throw DomainError("scale must be nonzero");
        std::vector<Atom> atoms = atoms_;
        for (auto& a : atoms) a.value *= s;
        return DiscreteDist(std::move(atoms));
    }

    bool operator==(const DiscreteDist&) const = default;

private:
    std::vector<Atom> atoms_;
};

// A symmetric integer random variable stored as a zero mass plus +-b pairs.
// pair_prob(s) is the probability of each of +b_s and -b_s, i.e. mu*p_s/2.
class SymmetricDist {
public:
    struct Pair {
        long long value;  // b_s > 0
        Rational prob;    // probability of each sign
        bool operator==(const Pair&) const = default;
    };

    SymmetricDist() : zero_prob_(1) {}

    SymmetricDist(Rational zero_prob, std::vector<Pair> pairs)
        : zero_prob_(std::move(zero_prob)), pairs_(std::move(pairs)) {
        zero_prob_.canonicalize();
        for (auto& p : pairs_) p.prob.canonicalize();
        // Zero-probability pairs are dropped so boundary parameters collapse
        // to the smaller support.
        pairs_.erase(std::remove_if(pairs_.begin(), pairs_.end(),
                                    [](const Pair& p) { return p.prob == 0; }),
                     pairs_.end());
        std::sort(pairs_.begin(), pairs_.end(),
                  [](const Pair& a, const Pair& b) { return a.value < b.value; });
        if (zero_prob_ < 0) throw DomainError("zero probability must be nonnegative");
        Rational total = zero_prob_;
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            if (pairs_[i].value <= 0) throw DomainError("pair values must be positive");
            if (pairs_[i].prob < 0) throw DomainError("pair probabilities must be nonnegative");
            if (i > 0 && pairs_[i].value == pairs_[i - 1].value)
                throw DomainError("pair values must be distinct");
            total += 2 * pairs_[i].prob;
        }
        if (total != 1) throw DomainError("symmetric distribution must have total mass 1");
    }

    // Reads a symmetric DiscreteDist into zero/pair form.
    static SymmetricDist from_dist(const DiscreteDist& d) {
        if (!d.is_symmetric()) throw DomainError("distribution is not symmetric");
        std::vector<Pair> pairs;
        for (const auto& a : d.atoms())
            if (a.value > 0) pairs.push_back({a.value, a.prob});
        return SymmetricDist(d.prob_of(0), std::move(pairs));
    }

    const Rational& zero_prob() const { return zero_prob_; }
    const std::vector<Pair>& pairs() const { return pairs_; }
    Rational mu() const { return 1 - zero_prob_; }

    DiscreteDist to_dist() const {
        std::vector<DiscreteDist::Atom> atoms;
        if (zero_prob_ > 0) atoms.push_back({0, zero_prob_});
        for (const auto& p : pairs_) {
            atoms.push_back({p.value, p.prob});
            atoms.push_back({-p.value, p.prob});
        }
        return DiscreteDist(std::move(atoms));
    }

    // Same shape with the zero mass moved to 1 - new_mu; pair probabilities
    // scale by new_mu / mu.
    SymmetricDist with_mu(const Rational& new_mu) const {
        Rational m = mu();
        if (m == 0) {
            if (new_mu != 0) throw DomainError("cannot rescale a point mass to positive mu");
            return *this;
        }
        std::vector<Pair> pairs = pairs_;
        for (auto& p : pairs) p.prob = p.prob * new_mu / m;
        return SymmetricDist(1 - new_mu, std::move(pairs));
    }

    Rational min_atom_prob() const {
        Rational m = zero_prob_ > 0 ? zero_prob_ : Rational(2);
        for (const auto& p : pairs_) m = std::min(m, p.prob);
        return m == 2 ? Rational(0) : m;
    }

    Rational max_atom_prob() const {
        Rational m = zero_prob_;
        for (const auto& p : pairs_) m = std::max(m, p.prob);
        return m;
    }

    SymmetricDist scaled(long long s) const {
        if (s == 0) throw DomainError("scale must be nonzero");
        std::vector<Pair> pairs = pairs_;
        for (auto& p : pairs) p.value = std::abs(p.value * s);
        return SymmetricDist(zero_prob_, std::move(pairs));
    }

    bool operator==(const SymmetricDist&) const = default;

private:
    Rational zero_prob_;
    std::vector<Pair> pairs_;
};

// Real trigonometric polynomial c_0 + sum_k c_k cos(2 pi k t) with exact
// rational coefficients. Even and 1-periodic in t by construction.
class CosinePoly {
public:
    CosinePoly() = default;
    explicit CosinePoly(std::map<long long, Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static CosinePoly constant(const Rational& v) {
        return CosinePoly(std::map<long long, Rational>{{0, v}});
    }

    const std::map<long long, Rational>& coeffs() const { return c_; }
    Rational coeff(long long k) const {
        auto it = c_.find(k);
        return it == c_.end() ? Rational(0) : it->second;
    }
    long long max_freq() const { return c_.empty() ? 0 : c_.rbegin()->first; }

    Rational value_at_zero() const {
        Rational s(0);
        for (const auto& [k, v] : c_) s += v;
        return s;
    }

    double eval(double t) const {
        double s = 0;
        for (const auto& [k, v] : c_)
            s += v.get_d() * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) * t);
        return s;
    }

    // 2 pi sum k |c_k|: a bound on |d/dt| over the period.
    Rational derivative_bound_over_two_pi() const {
        Rational s(0);
        for (const auto& [k, v] : c_) s += Rational(static_cast<long>(k)) * Rational(abs(v));
        return s;
    }

    friend CosinePoly operator+(const CosinePoly& a, const CosinePoly& b) {
        std::map<long long, Rational> r = a.c_;
        for (const auto& [k, v] : b.c_) r[k] += v;
        return CosinePoly(std::move(r));
    }
    friend CosinePoly operator-(const CosinePoly& a, const CosinePoly& b) {
        std::map<long long, Rational> r = a.c_;
        for (const auto& [k, v] : b.c_) r[k] -= v;
        return CosinePoly(std::move(r));
    }
    friend CosinePoly operator*(const Rational& s, const CosinePoly& a) {
        std::map<long long, Rational> r = a.c_;
        for (auto& [k, v] : r) v *= s;
        return CosinePoly(std::move(r));
    }

    // Product expansion via cos A cos B = (cos(A+B) + cos(A-B)) / 2.
    friend CosinePoly operator*(const CosinePoly& a, const CosinePoly& b) {
        std::map<long long, Rational> r;
        for (const auto& [j, aj] : a.c_)
            for (const auto& [k, bk] : b.c_) {
                Rational half = aj * bk / 2;
                r[j + k] += half;
                r[std::llabs(j - k)] += half;
            }
        return CosinePoly(std::move(r));
    }

    CosinePoly pow(unsigned e) const {
        CosinePoly acc = CosinePoly::constant(Rational(1));
        CosinePoly base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    // Expansion in c = cos(2 pi t) via Chebyshev polynomials: cos(2 pi k t) = T_k(c).
    Poly to_chebyshev() const {
        auto T = chebyshev_basis(static_cast<std::size_t>(std::max(0LL, max_freq())));
        Poly out;
        for (const auto& [k, v] : c_) out = out + v * T[static_cast<std::size_t>(k)];
        return out;
    }

    bool operator==(const CosinePoly&) const = default;

private:
    void trim() {
        for (auto& [k, v] : c_) v.canonicalize();
        for (auto it = c_.begin(); it != c_.end();) {
            if (it->first < 0) throw DomainError("cosine frequency must be nonnegative");
            if (it->second == 0 && it->first != 0) it = c_.erase(it); else ++it;
        }
        if (c_.empty()) c_[0] = 0;
    }
    std::map<long long, Rational> c_;
};

// E e(beta t) = 1 - mu + mu sum_s p_s cos(2 pi b_s t), with exact coefficients.
inline CosinePoly char_fn_symmetric(const SymmetricDist& d) {
    std::map<long long, Rational> c;
    c[0] = d.zero_prob();
    for (const auto& p : d.pairs()) c[p.value] += 2 * p.prob;
    return CosinePoly(std::move(c));
}

// |E e(alpha t)|^2 as a cosine polynomial: the characteristic function of the
// symmetrized difference alpha - alpha' with alpha' an independent copy.
inline CosinePoly abs_char_sq(const DiscreteDist& d) {
    std::map<long long, Rational> c;
    const auto& atoms = d.atoms();
    Rational diag(0);
    for (const auto& a : atoms) diag += a.prob * a.prob;
    c[0] = diag;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            c[std::llabs(atoms[i].value - atoms[j].value)] += 2 * atoms[i].prob * atoms[j].prob;
    return CosinePoly(std::move(c));
}

// Characteristic function of a symmetric distribution as a cosine polynomial.
// For asymmetric inputs the characteristic function is not real; use
// abs_char_sq instead.
inline CosinePoly char_fn(const DiscreteDist& d) {
    return char_fn_symmetric(SymmetricDist::from_dist(d));
}

// Result of the exact global minimization of a cosine polynomial over one
// period. The substitution c = cos(2 pi t) maps the period onto [-1, 1].
struct MinOnPeriod {
    int sign = 0;            // exact sign of the minimum
    Rational lo, hi;         // certified enclosure of the minimum value
    bool exact = false;
    Rational arg_c_lo, arg_c_hi;  // enclosure of a minimizing c = cos(2 pi t)
    double argmin_t = 0;          // convenience: t = acos(c)/(2 pi), midpoint

    std::string describe_argmin() const {
        return "cos(2*pi*t) in [" + arg_c_lo.get_str() + ", " + arg_c_hi.get_str() + "]";
    }
};

inline MinOnPeriod min_on_period(const CosinePoly& p,
                                 const Rational& value_tol = Rational(1, Integer(1) << 40)) {
    Poly g = p.to_chebyshev();
    MinResult mr = minimize_on_interval(g, Rational(-1), Rational(1), value_tol);
    MinOnPeriod out;
    out.sign = mr.sign;
    out.lo = mr.lo;
    out.hi = mr.hi;
    out.exact = mr.exact;
    out.arg_c_lo = mr.argmin_lo;
    out.arg_c_hi = mr.argmin_hi;
    double c_mid = Rational((mr.argmin_lo + mr.argmin_hi) / 2).get_d();
    c_mid = std::clamp(c_mid, -1.0, 1.0);
    out.argmin_t = std::acos(c_mid) / (2 * std::numbers::pi);
    return out;
}

} // namespace singp
