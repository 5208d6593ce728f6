#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "singp/certify.hpp"
#include "singp/fieldq.hpp"

namespace singp {

// Hyperplane { x : x . normal = 0 } in (Z/Q)^n.
struct HyperplaneQ {
    PrimeField field;
    std::vector<std::uint64_t> normal;

    HyperplaneQ(PrimeField f, std::vector<std::uint64_t> a) : field(f), normal(std::move(a)) {
        bool nonzero = false;
        for (auto& v : normal) {
            v %= field.q();
            nonzero |= v != 0;
        }
        if (!nonzero) throw DomainError("hyperplane normal must be nonzero");
    }

    std::size_t n() const { return normal.size(); }

    bool contains(const std::vector<std::uint64_t>& x) const {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < normal.size(); ++j)
            s = field.add(s, field.mul(normal[j], x[j] % field.q()));
        return s == 0;
    }
};

// One random row: per-coordinate distributions alpha_j with their certified
// symmetric majorants beta_j, sharing mu = 1 - p, q and the exponent r.
class RowModel {
public:
    RowModel(std::vector<DiscreteDist> alphas, std::vector<SymmetricDist> betas, Rational q,
             int r, Rational eps0 = Rational(1, 100))
        : alphas_(std::move(alphas)), betas_(std::move(betas)), q_(std::move(q)), r_(r),
          eps0_(std::move(eps0)) {
        if (alphas_.empty() || alphas_.size() != betas_.size())
            throw DomainError("row model needs matching alpha/beta coordinates");
        if (r_ < 1) throw DomainError("exponent must be positive");
        mu_ = betas_[0].mu();
        for (const auto& b : betas_) {
            if (b.mu() != mu_) throw DomainError("all beta_j must share the same mu");
            if (q_ > b.min_atom_prob()) throw DomainError("q exceeds a beta atom probability");
            if (b.max_atom_prob() > 1 - mu_)
                throw DomainError("a beta atom probability exceeds p");
        }
        if (mu_bar() < 0) throw DomainError("mu_bar negative: eps0 too large");
    }

    static RowModel iid(std::size_t n, const DiscreteDist& alpha, const SymmetricDist& beta,
                        Rational q, int r, Rational eps0 = Rational(1, 100)) {
        return RowModel(std::vector<DiscreteDist>(n, alpha),
                        std::vector<SymmetricDist>(n, beta), std::move(q), r, std::move(eps0));
    }

    std::size_t n() const { return alphas_.size(); }
    const std::vector<DiscreteDist>& alphas() const { return alphas_; }
    const std::vector<SymmetricDist>& betas() const { return betas_; }
    const DiscreteDist& alpha(std::size_t j) const { return alphas_[j]; }
    const SymmetricDist& beta(std::size_t j) const { return betas_[j]; }
    const Rational& mu() const { return mu_; }
    Rational p() const { return 1 - mu_; }
    const Rational& q() const { return q_; }
    int r() const { return r_; }
    const Rational& eps0() const { return eps0_; }
    Rational mu_bar() const { return mu_ - eps0_ / 100; }

    SymmetricDist beta_bar(std::size_t j) const { return betas_[j].with_mu(mu_bar()); }

private:
    std::vector<DiscreteDist> alphas_;
    std::vector<SymmetricDist> betas_;
    Rational mu_, q_;
    int r_;
    Rational eps0_;
};

struct HalaszParams {
    Rational eps_m1 = Rational(1, 100);  // strict positivity margin
    Rational eps1 = Rational(1, 100);
    Rational eps2 = Rational(0);         // 0: derive from the smallness condition below
    double c_m = 0.01;
    double c0 = 0.03;                    // must exceed 1/100 + c_m; stored, not asserted

    // Largest eps2 of the form 2^-k with 1 - eps2^{1 - mu_bar/mu} / eps1 >= 1/2.
    // The exponent 1 - mu_bar/mu is typically tiny, so k can run into the
    // tens of thousands; the exact rational handles that fine even though
    // the double value underflows to zero.
    Rational resolve_eps2(const Rational& mu_bar, const Rational& mu) const {
        if (eps2 > 0) return eps2;
        Rational expo = 1 - mu_bar / mu;
        if (expo <= 0) throw DomainError("mu_bar must be strictly below mu");
        // need 2^{-k expo} <= eps1/2, i.e. k >= log2(2/eps1) / expo
        double k_min = std::log2(2.0 / eps1.get_d()) / expo.get_d();
        long k = static_cast<long>(std::ceil(k_min)) + 2;  // guard digits
        if (k < 1) k = 1;
        return Rational(1, Integer(1) << static_cast<unsigned long>(k));
    }
};

// Exact distribution of sum_j coord_j * a_j over Z/Q by convolution.
inline std::vector<Rational> convolve_mod_q(const std::vector<DiscreteDist>& coords,
                                            const HyperplaneQ& V,
                                            std::uint64_t q_budget = 1 << 20) {
    const std::uint64_t Q = V.field.q();
    if (Q > q_budget) throw ResourceError("modulus too large for exact convolution");
    if (coords.size() != V.n()) throw DomainError("coordinate/normal size mismatch");
    std::vector<Rational> cur(Q, Rational(0)), next(Q, Rational(0));
    cur[0] = 1;
    for (std::size_t j = 0; j < coords.size(); ++j) {
        std::uint64_t a = V.normal[j];
        if (a == 0) continue;  // zero coordinate never moves the sum
        for (auto& v : next) v = 0;
        for (std::uint64_t x = 0; x < Q; ++x) {
            if (cur[x] == 0) continue;
            for (const auto& atom : coords[j].atoms()) {
                std::uint64_t shift = V.field.mul(V.field.reduce_signed(atom.value), a);
                next[V.field.add(x, shift)] += cur[x] * atom.prob;
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

// Pr(sum_j coord_j a_j = 0 mod Q), exactly.
inline Rational hit_probability(const std::vector<DiscreteDist>& coords, const HyperplaneQ& V,
                                std::uint64_t q_budget = 1 << 20) {
    return convolve_mod_q(coords, V, q_budget)[0];
}

inline Rational hit_probability(const RowModel& model, const HyperplaneQ& V,
                                std::uint64_t q_budget = 1 << 20) {
    return hit_probability(model.alphas(), V, q_budget);
}

// Same probability through the character-sum identity
// Pr = (1/Q) sum_xi prod_j E e_Q(alpha_j a_j xi), recovered as an exact
// rational: the true value has denominator dividing the product of the
// atom-probability denominators.
inline Rational hit_probability_fourier(const std::vector<DiscreteDist>& coords,
                                        const HyperplaneQ& V) {
    const std::uint64_t Q = V.field.q();
    if (coords.size() != V.n()) throw DomainError("coordinate/normal size mismatch");
    long double acc = 0;
    for (std::uint64_t xi = 0; xi < Q; ++xi) {
        std::complex<long double> prod(1, 0);
        for (std::size_t j = 0; j < coords.size(); ++j) {
            std::complex<long double> e(0, 0);
            for (const auto& atom : coords[j].atoms()) {
                std::uint64_t va =
                    V.field.mul(V.field.reduce_signed(atom.value), V.field.mul(V.normal[j], xi));
                long double ang =
                    2.0L * std::numbers::pi_v<long double> * static_cast<long double>(va) /
                    static_cast<long double>(Q);
                e += static_cast<long double>(atom.prob.get_d()) *
                     std::complex<long double>(std::cos(ang), std::sin(ang));
            }
            prod *= e;
        }
        acc += prod.real();
    }
    Integer den(1);
    for (const auto& c : coords) {
        Integer l(1);
        for (const auto& atom : c.atoms()) l = l / gcd(l, atom.prob.get_den()) * atom.prob.get_den();
        den *= l;
    }
    long double scaled = acc / static_cast<long double>(Q) * den.get_d();
    long double rounded = std::roundl(scaled);
    if (fabsl(scaled - rounded) > 0.25L)
        throw PrecisionError("character sum too far from a rational of the expected denominator");
    Integer num(static_cast<long>(rounded));
    Rational out(num, den);
    out.canonicalize();
    return out;
}

// Combinatorial dimension d of V: the unique a/n with
// p^{n - d + 1/n} < max_i Pr(X_i in V) <= p^{n - d}, or 0 when the maximum is
// at most p^n. Compares exact n-th powers, so no roots are taken.
inline Rational combinatorial_dimension(const Rational& hit_prob, const Rational& p,
                                        std::size_t n) {
    if (p <= 0 || p >= 1) throw DomainError("p must lie in (0,1)");
    if (hit_prob < 0 || hit_prob > 1) throw DomainError("hit probability out of range");
    const unsigned long nn = static_cast<unsigned long>(n);
    Rational hp_n = rat_pow(hit_prob, nn);
    if (hp_n <= rat_pow(p, nn * nn)) return Rational(0);
    // find the unique a in 1..n^2 with p^{n^2-a+1} < hp^n <= p^{n^2-a}
    unsigned long lo = 1, hi = nn * nn;
    while (lo < hi) {
        unsigned long mid = (lo + hi) / 2;
        if (hp_n <= rat_pow(p, nn * nn - mid)) hi = mid; else lo = mid + 1;
    }
    Rational d(static_cast<long>(lo), static_cast<long>(n));
    d.canonicalize();
    return d;
}

// Coordinate range of the k-th of r roughly equal segments (1-based k),
// returned as 0-based [start, end).
inline std::pair<std::size_t, std::size_t> segment_range(std::size_t n, int r, int k) {
    if (k < 1 || k > r) throw DomainError("segment index out of range");
    std::size_t start = static_cast<std::size_t>((static_cast<long long>(k) - 1) * n / r);
    std::size_t end = static_cast<std::size_t>(static_cast<long long>(k) * n / r);
    return {start, end};
}

// Distributions of the segment vector Z*_k: beta-bar entries inside the
// segment, deterministic zero outside.
inline std::vector<DiscreteDist> segment_vector(const RowModel& model, int k) {
    auto [start, end] = segment_range(model.n(), model.r(), k);
    std::vector<DiscreteDist> out;
    out.reserve(model.n());
    for (std::size_t j = 0; j < model.n(); ++j)
        out.push_back(j >= start && j < end ? model.beta_bar(j).to_dist()
                                            : DiscreteDist::point_mass(0));
    return out;
}

struct ExceptionalReport {
    bool exceptional = false;
    int witness_k = 0;           // segment witnessing unexceptionality (1-based), 0 if none
    Rational x_hit;              // max_i Pr(X_i in V) (rows are exchangeable here)
    std::vector<Rational> z_hits;  // Pr(Z*_k in V) for k = 1..r
};

// Verbatim classification: V is unexceptional when some segment vector
// concentrates more than 1/eps1 times as sharply as the rows.
inline ExceptionalReport classify_exceptional(const RowModel& model, const HyperplaneQ& V,
                                              const HalaszParams& params,
                                              std::uint64_t q_budget = 1 << 20) {
    ExceptionalReport rep;
    rep.x_hit = hit_probability(model, V, q_budget);
    rep.exceptional = true;
    for (int k = 1; k <= model.r(); ++k) {
        Rational z = hit_probability(segment_vector(model, k), V, q_budget);
        rep.z_hits.push_back(z);
        if (rep.exceptional && rep.x_hit < params.eps1 * z) {
            rep.exceptional = false;
            rep.witness_k = k;
        }
    }
    return rep;
}

// E e_Q(beta_j a_j xi) = 1 - mu + mu sum_s p_s cos(2 pi b_s a_j xi / Q).
inline double beta_factor(const SymmetricDist& beta, std::uint64_t a_xi, const PrimeField& field) {
    double s = beta.zero_prob().get_d();
    for (const auto& pr : beta.pairs()) {
        std::uint64_t arg = field.mul(field.reduce_signed(pr.value), a_xi);
        s += 2 * pr.prob.get_d() *
             std::cos(2 * std::numbers::pi * static_cast<double>(arg) / static_cast<double>(field.q()));
    }
    return s;
}

inline double f_j_eval(const RowModel& model, const HyperplaneQ& V, std::size_t j,
                       std::uint64_t xi) {
    double base = beta_factor(model.beta(j), V.field.mul(V.normal[j], xi % V.field.q()), V.field);
    if (base < 0) {
        if (base < -1e-12)
            throw NegativeBaseError("characteristic factor negative: certificate lacks margin");
        base = 0;
    }
    return std::pow(base, 1.0 / model.r());
}

inline double f_eval(const RowModel& model, const HyperplaneQ& V, std::uint64_t xi) {
    double prod = 1;
    for (std::size_t j = 0; j < model.n(); ++j) prod *= f_j_eval(model, V, j, xi);
    return prod;
}

// log f(xi); -inf when some factor vanishes. Avoids underflow in the
// Lemma-floor comparisons, whose right side is astronomically small.
inline double log_f_eval(const RowModel& model, const HyperplaneQ& V, std::uint64_t xi) {
    double acc = 0;
    for (std::size_t j = 0; j < model.n(); ++j) {
        double base = beta_factor(model.beta(j), V.field.mul(V.normal[j], xi % V.field.q()), V.field);
        if (base < 0) {
            if (base < -1e-12)
                throw NegativeBaseError("characteristic factor negative: certificate lacks margin");
            base = 0;
        }
        if (base == 0) return -std::numeric_limits<double>::infinity();
        acc += std::log(base) / model.r();
    }
    return acc;
}

inline double g_k_eval(const RowModel& model, const HyperplaneQ& V, int k, std::uint64_t xi) {
    auto [start, end] = segment_range(model.n(), model.r(), k);
    double prod = 1;
    for (std::size_t j = start; j < end; ++j) {
        double base =
            beta_factor(model.beta_bar(j), V.field.mul(V.normal[j], xi % V.field.q()), V.field);
        if (base < 0) {
            if (base < -1e-12)
                throw NegativeBaseError("characteristic factor negative: certificate lacks margin");
            base = 0;
        }
        prod *= std::pow(base, 1.0 / model.r());
    }
    return prod;
}

// The spectrum Lambda = { xi : f(xi) >= eps2 }, enumerated exactly over Z/Q.
// Deterministic under any worker count: ranges are merged in order.
inline std::vector<std::uint64_t> spectrum(const RowModel& model, const HyperplaneQ& V,
                                           const Rational& eps2, int threads = 1,
                                           std::uint64_t q_budget = 1 << 20) {
    const std::uint64_t Q = V.field.q();
    if (Q > q_budget) throw ResourceError("modulus too large for spectrum enumeration");
    if (eps2 <= 0) throw DomainError("eps2 must be positive");
    threads = std::max(1, threads);
    // an eps2 below double range still excludes exact zeros of f
    const double thresh = std::max(eps2.get_d(), std::numeric_limits<double>::min());
    std::vector<std::vector<std::uint64_t>> chunks(static_cast<std::size_t>(threads));
    auto work = [&](int w) {
        std::uint64_t begin = Q * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(threads);
        std::uint64_t stop = Q * (static_cast<std::uint64_t>(w) + 1) / static_cast<std::uint64_t>(threads);
        for (std::uint64_t xi = begin; xi < stop; ++xi)
            if (f_eval(model, V, xi) >= thresh) chunks[static_cast<std::size_t>(w)].push_back(xi);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    std::vector<std::uint64_t> out;
    for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
    return out;
}

// ||x||_Lambda^2 = (1/|Lambda|^2) sum_{xi,xi'} || x (xi - xi') / Q ||^2,
// computed exactly in integer arithmetic.
inline Rational lambda_norm_sq(std::uint64_t x, const std::vector<std::uint64_t>& lambda,
                               const PrimeField& field) {
    if (lambda.empty()) throw DomainError("spectrum must be nonempty");
    const std::uint64_t Q = field.q();
    // multiset of differences
    std::map<std::uint64_t, long long> diff_count;
    for (std::uint64_t a : lambda)
        for (std::uint64_t b : lambda) diff_count[field.sub(a % Q, b % Q)] += 1;
    Integer num(0);
    for (const auto& [d, cnt] : diff_count) {
        std::uint64_t y = field.mul(x % Q, d);
        std::uint64_t dist = std::min(y, Q - y);  // distance of y/Q to the nearest integer, times Q
        num += Integer(static_cast<unsigned long>(cnt)) *
               Integer(static_cast<unsigned long>(dist)) * Integer(static_cast<unsigned long>(dist));
    }
    Integer den = Integer(static_cast<unsigned long>(lambda.size()));
    den = den * den * Integer(static_cast<unsigned long>(Q)) * Integer(static_cast<unsigned long>(Q));
    Rational out(num, den);
    out.canonicalize();
    return out;
}

inline double lambda_norm(std::uint64_t x, const std::vector<std::uint64_t>& lambda,
                          const PrimeField& field) {
    return std::sqrt(lambda_norm_sq(x, lambda, field).get_d());
}

// Bohr set { x : ||x||_Lambda < threshold } by enumeration.
inline std::vector<std::uint64_t> bohr_set(const std::vector<std::uint64_t>& lambda,
                                           const PrimeField& field,
                                           const Rational& threshold = Rational(1, 100)) {
    const std::uint64_t Q = field.q();
    std::map<std::uint64_t, long long> diff_count;
    for (std::uint64_t a : lambda)
        for (std::uint64_t b : lambda) diff_count[field.sub(a % Q, b % Q)] += 1;
    // ||x||^2 < t^2  <=>  sum cnt*dist(x d)^2 * den(t^2) < |L|^2 Q^2 num(t^2)
    Rational t2 = threshold * threshold;
    Integer rhs = Integer(static_cast<unsigned long>(lambda.size()));
    rhs = rhs * rhs * Integer(static_cast<unsigned long>(Q)) * Integer(static_cast<unsigned long>(Q)) *
          t2.get_num();
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < Q; ++x) {
        Integer lhs(0);
        for (const auto& [d, cnt] : diff_count) {
            std::uint64_t y = field.mul(x, d);
            std::uint64_t dist = std::min(y, Q - y);
            lhs += Integer(static_cast<unsigned long>(cnt)) *
                   Integer(static_cast<unsigned long>(dist)) *
                   Integer(static_cast<unsigned long>(dist));
        }
        if (lhs * t2.get_den() < rhs) out.push_back(x);
    }
    return out;
}

// Iterated sumset {a1 + ... + ak : ai in A} over Z/Q.
inline std::vector<std::uint64_t> iterated_sumset(const std::vector<std::uint64_t>& a, int k,
                                                  const PrimeField& field) {
    if (k < 1) throw DomainError("sumset order must be positive");
    const std::uint64_t Q = field.q();
    std::vector<bool> cur(Q, false);
    for (std::uint64_t v : a) cur[v % Q] = true;
    for (int step = 1; step < k; ++step) {
        std::vector<bool> next(Q, false);
        for (std::uint64_t x = 0; x < Q; ++x) {
            if (!cur[x]) continue;
            for (std::uint64_t v : a) next[field.add(x, v % Q)] = true;
        }
        cur = std::move(next);
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < Q; ++x)
        if (cur[x]) out.push_back(x);
    return out;
}

// C_LOE: numeric maximum of sqrt(q k / r) * int_0^1 (1 - 2q + 2q cos 2 pi t)^{k/r} dt
// over k, with a 1.05 safety factor. q above 1/4 is clamped: any smaller
// positive q is also a valid Definition constant, and the integrand must stay
// nonnegative.
inline double loe_constant(const Rational& q_in, int r) {
    double q = std::min(q_in.get_d(), 0.25);
    if (q <= 0) throw DomainError("q must be positive");
    const int N = 1 << 13;  // trapezoid on a periodic integrand
    auto integral = [&](double kr) {
        double s = 0;
        for (int i = 0; i < N; ++i) {
            double t = static_cast<double>(i) / N;
            double base = 1 - 2 * q + 2 * q * std::cos(2 * std::numbers::pi * t);
            s += std::pow(std::max(0.0, base), kr);
        }
        return s / N;
    };
    double best = 0;
    auto consider = [&](long long k) {
        double v = std::sqrt(q * static_cast<double>(k) / r) *
                   integral(static_cast<double>(k) / r);
        best = std::max(best, v);
    };
    for (long long k = 1; k <= 64; ++k) consider(k);
    for (long long k = 128; k <= (1 << 16); k *= 2) consider(k);
    best = std::max(best, 1.0 / (2 * std::sqrt(std::numbers::pi)));  // k -> infinity limit
    return 1.05 * best;
}

// Littlewood-Offord bound C_LOE sqrt(r / (q k)) for a weight vector with k
// nonzero entries.
inline double loe_bound(const RowModel& model, std::size_t k_nonzero) {
    if (k_nonzero == 0) throw DomainError("need at least one nonzero weight");
    double c = loe_constant(model.q(), model.r());
    double q = std::min(model.q().get_d(), 0.25);
    return c * std::sqrt(static_cast<double>(model.r()) / (q * static_cast<double>(k_nonzero)));
}

// max_x Pr(sum_j alpha_j v_j = x), exactly, by convolution over the integers.
inline Rational loe_exact(const RowModel& model, const std::vector<long long>& weights) {
    if (weights.size() != model.n()) throw DomainError("weight vector has wrong length");
    std::map<long long, Rational> cur{{0, Rational(1)}};
    for (std::size_t j = 0; j < model.n(); ++j) {
        if (weights[j] == 0) continue;
        std::map<long long, Rational> next;
        for (const auto& [v, p] : cur)
            for (const auto& atom : model.alpha(j).atoms())
                next[v + weights[j] * atom.value] += p * atom.prob;
        cur = std::move(next);
    }
    Rational best(0);
    for (const auto& [v, p] : cur) best = std::max(best, p);
    return best;
}

// The segment-version Odlyzko bound (p + eps0/100)^(len - d) for a segment of
// length len against a subspace of dimension d.
inline double weighted_odlyzko_bound(const RowModel& model, int k, std::size_t subspace_dim) {
    auto [start, end] = segment_range(model.n(), model.r(), k);
    std::size_t len = end - start;
    if (subspace_dim >= len) return 1.0;
    double base = Rational(model.p() + model.eps0() / 100).get_d();
    return std::pow(base, static_cast<double>(len - subspace_dim));
}

struct SpectrumReport {
    std::vector<std::uint64_t> lambda;
    Rational eps2;
    double sum_f = 0;                 // sum of f over Lambda
    Rational hit;                     // Pr(X in V)
    std::vector<Rational> z_hits;     // Pr(Z*_k in V)
    bool exceptional = false;
    double lower_floor = 0;           // eps2 |Lambda|
    double upper_holder = 0;          // Q prod_k Pr(Z*_k)^{1/r}
    double lower_exceptional = 0;     // Q Pr(X in V) (1 - eps2^{1-mu_bar/mu}/eps1)
    bool sandwich_lower_ok = false;
    bool sandwich_upper_ok = false;
    bool sandwich_exceptional_ok = true;
};

// The finite spectrum sandwich: eps2 |Lambda| <= sum_Lambda f <= Q prod_k
// Pr(Z*_k)^{1/r}, plus the exceptional-case lower bound.
inline SpectrumReport spectrum_report(const RowModel& model, const HyperplaneQ& V,
                                      const HalaszParams& params, int threads = 1,
                                      std::uint64_t q_budget = 1 << 20) {
    SpectrumReport rep;
    rep.eps2 = params.resolve_eps2(model.mu_bar(), model.mu());
    rep.lambda = spectrum(model, V, rep.eps2, threads, q_budget);
    for (std::uint64_t xi : rep.lambda) rep.sum_f += f_eval(model, V, xi);
    auto cls = classify_exceptional(model, V, params, q_budget);
    rep.hit = cls.x_hit;
    rep.z_hits = cls.z_hits;
    rep.exceptional = cls.exceptional;

    const double Q = static_cast<double>(V.field.q());
    rep.lower_floor = rep.eps2.get_d() * static_cast<double>(rep.lambda.size());
    double prod = 1;
    for (const auto& z : rep.z_hits) prod *= std::pow(z.get_d(), 1.0 / model.r());
    rep.upper_holder = Q * prod;
    const double tol = 1e-9;
    rep.sandwich_lower_ok = rep.lower_floor <= rep.sum_f + tol;
    rep.sandwich_upper_ok = rep.sum_f <= rep.upper_holder + tol;
    if (rep.exceptional) {
        double expo = 1.0 - Rational(model.mu_bar() / model.mu()).get_d();
        double factor = 1.0 - std::pow(rep.eps2.get_d(), expo) / params.eps1.get_d();
        rep.lower_exceptional = Q * rep.hit.get_d() * factor;
        rep.sandwich_exceptional_ok = rep.sum_f >= rep.lower_exceptional - tol;
    }
    return rep;
}

} // namespace singp
