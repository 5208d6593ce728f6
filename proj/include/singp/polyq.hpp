#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "singp/rational.hpp"

namespace singp {

// Dense univariate polynomial with exact rational coefficients.
// coeff(i) is the coefficient of x^i; trailing zeros are trimmed.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
        for (auto& v : c_) v.canonicalize();
        trim();
    }
    static Poly constant(const Rational& v) { return Poly(std::vector<Rational>{v}); }
    static Poly x() { return Poly({Rational(0), Rational(1)}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Rational& coeff(std::size_t i) const {
        static const Rational zero(0);
        return i < c_.size() ? c_[i] : zero;
    }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& lead() const { return c_.back(); }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double eval(double x) const {
        double acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Rational& s, const Poly& a) {
        std::vector<Rational> r = a.c_;
        for (auto& v : r) v *= s;
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a) { return Rational(-1) * a; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    // Euclidean remainder of *this by d (d nonzero).
    Poly rem(const Poly& d) const {
        Poly r = *this;
        while (!r.is_zero() && r.degree() >= d.degree()) {
            Rational f = r.lead() / d.lead();
            int shift = r.degree() - d.degree();
            std::vector<Rational> sub(static_cast<std::size_t>(shift) + d.c_.size(), Rational(0));
            for (std::size_t i = 0; i < d.c_.size(); ++i) sub[static_cast<std::size_t>(shift) + i] = f * d.c_[i];
            r = r - Poly(std::move(sub));
        }
        return r;
    }

    Poly divexact(const Poly& d) const {
        Poly r = *this;
        std::vector<Rational> q(r.is_zero() ? 0 : static_cast<std::size_t>(std::max(0, r.degree() - d.degree() + 1)),
                                Rational(0));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            Rational f = r.lead() / d.lead();
            int shift = r.degree() - d.degree();
            q[static_cast<std::size_t>(shift)] = f;
            std::vector<Rational> sub(static_cast<std::size_t>(shift) + d.c_.size(), Rational(0));
            for (std::size_t i = 0; i < d.c_.size(); ++i) sub[static_cast<std::size_t>(shift) + i] = f * d.c_[i];
            r = r - Poly(std::move(sub));
        }
        return Poly(std::move(q));
    }

    // Scales so the leading coefficient becomes 1.
    Poly monic() const {
        if (is_zero()) return *this;
        return Rational(1) / lead() * *this;
    }

    // Scales by a positive constant so the leading coefficient has absolute
    // value 1. Safe inside Sturm chains, where signs carry the information.
    Poly normalized() const {
        if (is_zero()) return *this;
        return Rational(1) / abs(lead()) * *this;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a.rem(b).monic();
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// p with all repeated factors collapsed to multiplicity one.
inline Poly squarefree_part(const Poly& p) {
    if (p.degree() <= 0) return p;
    Poly g = poly_gcd(p, p.derivative());
    if (g.degree() == 0) return p;
    return p.divexact(g);
}

// Sturm chain for root counting. count_roots(a, b) counts distinct real
// roots in the half-open interval (a, b].
class SturmChain {
public:
    explicit SturmChain(const Poly& p) {
        Poly f = squarefree_part(p);
        seq_.push_back(f);
        if (f.degree() >= 1) {
            seq_.push_back(f.derivative());
            while (seq_.back().degree() >= 1) {
                Poly r = -(seq_[seq_.size() - 2].rem(seq_.back()));
                if (r.is_zero()) break;
                seq_.push_back(r.normalized());
            }
        }
    }

    int sign_changes(const Rational& x) const {
        int changes = 0, prev = 0;
        for (const auto& p : seq_) {
            Rational v = p.eval(x);
            int s = sgn(v);
            if (s != 0) {
                if (prev != 0 && s != prev) ++changes;
                prev = s;
            }
        }
        return changes;
    }

    int count_roots(const Rational& a, const Rational& b) const {
        return sign_changes(a) - sign_changes(b);
    }

private:
    static int sgn(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
    std::vector<Poly> seq_;
};

struct RootInterval {
    Rational lo, hi;              // root lies in (lo, hi], or lo == hi for an exact root
    bool exact() const { return lo == hi; }
};

// Isolates the distinct real roots of p inside [a, b] into disjoint intervals,
// each refined by bisection until its width is at most `width`.
inline std::vector<RootInterval> isolate_roots(const Poly& p, const Rational& a, const Rational& b,
                                               const Rational& width = Rational(1, 1 << 20)) {
    std::vector<RootInterval> out;
    if (p.degree() <= 0) return out;
    Poly f = squarefree_part(p);
    if (f.eval(a) == 0) out.push_back({a, a});
    SturmChain chain(f);
    std::vector<std::pair<Rational, Rational>> stack{{a, b}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        int n = chain.count_roots(lo, hi);
        if (n == 0) continue;
        if (n == 1) {
            Rational l = lo, h = hi;
            while (h - l > width) {
                Rational mid = (l + h) / 2;
                if (f.eval(mid) == 0) { l = mid; h = mid; break; }
                if (chain.count_roots(l, mid) == 1) h = mid; else l = mid;
            }
            out.push_back({l, h});
            continue;
        }
        Rational mid = (lo + hi) / 2;
        if (f.eval(mid) == 0) out.push_back({mid, mid});
        stack.push_back({lo, mid});
        stack.push_back({mid, hi});
    }
    std::sort(out.begin(), out.end(), [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
    // An exact root found at a bisection midpoint is also counted by the
    // half-open interval ending there; drop such duplicates.
    std::vector<RootInterval> dedup;
    for (const auto& ri : out) {
        bool dup = false;
        for (const auto& e : dedup) {
            if (e.exact() && !ri.exact() && ri.lo < e.lo && e.lo <= ri.hi) dup = true;
            if (ri.exact() && e.exact() && e.lo == ri.lo) dup = true;
            if (!e.exact() && ri.exact() && e.lo < ri.lo && ri.lo <= e.hi) dup = true;
        }
        if (!dup) dedup.push_back(ri);
    }
    return dedup;
}

// Tries the rational-root theorem on the squarefree part of p, restricted to
// candidates inside [a, b]. Only attempted when the cleared integer
// coefficients are small enough to enumerate divisors cheaply.
inline std::optional<Rational> rational_root_in(const Poly& p, const Rational& a, const Rational& b) {
    Poly f = squarefree_part(p);
    if (f.degree() < 1) return std::nullopt;
    if (f.eval(Rational(0)) == 0 && a <= 0 && 0 <= b) return Rational(0);
    // clear denominators
    Integer den = 1;
    for (const auto& c : f.coeffs()) den = den / gcd(den, c.get_den()) * c.get_den();
    std::vector<Integer> ic(f.coeffs().size());
    for (std::size_t i = 0; i < ic.size(); ++i) {
        Rational t = f.coeffs()[i] * Rational(den);
        ic[i] = t.get_num();
    }
    std::size_t low = 0;
    while (low < ic.size() && ic[low] == 0) ++low;  // factor out x^low (root 0 handled above)
    Integer a0 = abs(ic[low]), an = abs(ic.back());
    if (a0 > 1000000 || an > 1000000) return std::nullopt;
    auto divisors = [](unsigned long n) {
        std::vector<unsigned long> d;
        for (unsigned long i = 1; i * i <= n; ++i)
            if (n % i == 0) { d.push_back(i); d.push_back(n / i); }
        return d;
    };
    for (unsigned long u : divisors(a0.get_ui()))
        for (unsigned long v : divisors(an.get_ui()))
            for (int s : {1, -1}) {
                Rational r(static_cast<long>(u) * s, static_cast<long>(v));
                r.canonicalize();
                if (r < a || r > b) continue;
                if (f.eval(r) == 0) return r;
            }
    return std::nullopt;
}

// Global minimum of p over [a, b], decided with exact arithmetic.
//   sign     : -1, 0, +1 -- the exact sign of the minimum
//   lo, hi   : certified rational enclosure of the minimum value
//   argmin_lo, argmin_hi : interval containing a minimizing point
struct MinResult {
    int sign = 0;
    Rational lo, hi;
    Rational argmin_lo, argmin_hi;
    bool exact = false;  // lo == hi
};

inline MinResult minimize_on_interval(const Poly& p, const Rational& a, const Rational& b,
                                      const Rational& value_tol = Rational(1, Integer(1) << 40)) {
    MinResult res;
    if (p.degree() <= 0) {
        Rational v = p.eval(a);
        res.lo = res.hi = v;
        res.sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
        res.argmin_lo = a;
        res.argmin_hi = b;
        res.exact = true;
        return res;
    }

    // The minimum is attained at an endpoint or at a critical point, so the
    // exact sign of the minimum is the worst sign among those values:
    //  - endpoint values are rational, compare directly;
    //  - an exact/rational critical point gives a rational value;
    //  - otherwise the critical point rho satisfies p(rho) = 0 iff gcd(p, p')
    //    has a root in its isolating bracket, and when p(rho) != 0 the bracket
    //    can be refined until it is root-free for p, pinning the sign.
    Rational va = p.eval(a), vb = p.eval(b);
    bool any_negative = va < 0 || vb < 0;
    bool any_zero = va == 0 || vb == 0;

    struct Cand {
        Rational vlo, vhi;  // enclosure of p at this candidate
        Rational xlo, xhi;
    };
    std::vector<Cand> cands;
    cands.push_back({va, va, a, a});
    cands.push_back({vb, vb, b, b});

    Poly d = p.derivative();
    Poly common = poly_gcd(p, d);
    SturmChain pchain(p);
    SturmChain cchain(common);
    SturmChain dchain(d);
    // Lipschitz bound for p on [a,b] via coefficients of p'.
    Rational bound_abs = std::max(abs(a), abs(b));
    Rational lip(0);
    {
        Rational powx(1);
        for (const auto& c : d.coeffs()) {
            lip += abs(c) * powx;
            powx *= bound_abs;
        }
    }

    for (auto& ri : isolate_roots(d, a, b)) {
        if (ri.lo <= a && !ri.exact()) ri.lo = a;  // clamp; roots live in (a,b]
        if (ri.exact()) {
            Rational v = p.eval(ri.lo);
            if (v < 0) any_negative = true;
            if (v == 0) any_zero = true;
            cands.push_back({v, v, ri.lo, ri.lo});
            continue;
        }
        if (auto r = rational_root_in(d, ri.lo, ri.hi)) {
            Rational v = p.eval(*r);
            if (v < 0) any_negative = true;
            if (v == 0) any_zero = true;
            cands.push_back({v, v, *r, *r});
            continue;
        }
        Rational l = ri.lo, h = ri.hi;
        if (common.degree() >= 1 && (cchain.count_roots(l, h) > 0)) {
            // rho is a shared root of p and p': the critical value is exactly 0
            any_zero = true;
            cands.push_back({Rational(0), Rational(0), l, h});
            continue;
        }
        // p(rho) != 0: refine until p has no root in the bracket, then the
        // sign of p is constant there and equals sign(p(h)).
        while (pchain.count_roots(l, h) > 0 || lip * (h - l) > value_tol) {
            Rational mid = (l + h) / 2;
            if (d.eval(mid) == 0) { l = mid; h = mid; break; }
            if (dchain.count_roots(l, mid) >= 1) h = mid; else l = mid;
        }
        if (l == h) {
            Rational v = p.eval(l);
            if (v < 0) any_negative = true;
            if (v == 0) any_zero = true;
            cands.push_back({v, v, l, l});
            continue;
        }
        Rational vh = p.eval(h);
        if (vh < 0) any_negative = true;
        Rational vmin = std::min(p.eval(l), vh);
        cands.push_back({vmin - lip * (h - l), vmin, l, h});
    }
    res.sign = any_negative ? -1 : (any_zero ? 0 : 1);

    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i].vlo < cands[best].vlo) best = i;
    res.lo = cands[best].vlo;
    res.hi = cands[best].vhi;
    res.argmin_lo = cands[best].xlo;
    res.argmin_hi = cands[best].xhi;
    if (res.sign == 0) {
        res.lo = res.hi = 0;
        res.exact = true;
    } else {
        if (res.sign > 0 && res.lo < 0) res.lo = 0;  // sign is exact; clip the enclosure
        res.exact = (res.lo == res.hi);
    }
    return res;
}

// Chebyshev polynomials of the first kind, T_0 .. T_n.
inline std::vector<Poly> chebyshev_basis(std::size_t n) {
    std::vector<Poly> T;
    T.push_back(Poly::constant(Rational(1)));
    if (n >= 1) T.push_back(Poly::x());
    for (std::size_t k = 2; k <= n; ++k)
        T.push_back(Rational(2) * (Poly::x() * T[k - 1]) - T[k - 2]);
    return T;
}

} // namespace singp
