#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "singp/fieldq.hpp"

namespace singp {

// Generalized arithmetic progression over Z/Q:
//   { v0 + m_1 v_1 + ... + m_rho v_rho : |m_i| < M_i / 2 },
// with integer coefficients, so m_i ranges over [-floor((M_i-1)/2), floor((M_i-1)/2)].
class Gap {
public:
    Gap(PrimeField field, std::uint64_t v0, std::vector<std::uint64_t> basis,
        std::vector<long long> dims)
        : field_(field), v0_(v0 % field.q()), basis_(std::move(basis)), dims_(std::move(dims)) {
        if (basis_.size() != dims_.size()) throw DomainError("basis/dims size mismatch");
        for (auto& v : basis_) v %= field_.q();
        for (long long m : dims_)
            if (m < 1) throw DomainError("dimensions must be positive");
    }

    static Gap symmetric(PrimeField field, std::vector<std::uint64_t> basis,
                         std::vector<long long> dims) {
        return Gap(field, 0, std::move(basis), std::move(dims));
    }

    const PrimeField& field() const { return field_; }
    std::uint64_t v0() const { return v0_; }
    const std::vector<std::uint64_t>& basis() const { return basis_; }
    const std::vector<long long>& dims() const { return dims_; }
    std::size_t rank() const { return basis_.size(); }
    bool is_symmetric() const { return v0_ == 0; }

    long long radius(std::size_t i) const { return (dims_[i] - 1) / 2; }

    // number of coefficient tuples (an upper bound for the cardinality)
    Integer box_size() const {
        Integer b(1);
        for (std::size_t i = 0; i < dims_.size(); ++i)
            b *= Integer(static_cast<long>(2 * radius(i) + 1));
        return b;
    }

    std::uint64_t element_at(const std::vector<long long>& coeffs) const {
        if (coeffs.size() != rank()) throw DomainError("coefficient vector has wrong rank");
        std::uint64_t x = v0_;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (std::llabs(coeffs[i]) > radius(i)) throw DomainError("coefficient out of range");
            std::uint64_t term = field_.mul(field_.reduce_signed(coeffs[i]), basis_[i]);
            x = field_.add(x, term);
        }
        return x;
    }

private:
    PrimeField field_;
    std::uint64_t v0_;
    std::vector<std::uint64_t> basis_;
    std::vector<long long> dims_;
};

namespace detail {

// Odometer over the coefficient box; calls fn(coeffs, element).
template <typename Fn>
void for_each_coeff(const Gap& P, Fn&& fn) {
    const std::size_t rho = P.rank();
    std::vector<long long> m(rho);
    for (std::size_t i = 0; i < rho; ++i) m[i] = -P.radius(i);
    while (true) {
        std::uint64_t x = P.v0();
        for (std::size_t i = 0; i < rho; ++i) {
            std::uint64_t term = P.field().mul(P.field().reduce_signed(m[i]), P.basis()[i]);
            x = P.field().add(x, term);
        }
        fn(m, x);
        std::size_t c = 0;
        while (c < rho) {
            if (++m[c] <= P.radius(c)) break;
            m[c] = -P.radius(c);
            ++c;
        }
        if (c == rho) break;
    }
}

} // namespace detail

// The exact element set (sorted, deduplicated).
inline std::vector<std::uint64_t> enumerate(const Gap& P, long long budget = 10'000'000) {
    if (P.box_size() > Integer(static_cast<long>(budget))) throw ResourceError("progression box exceeds budget");
    std::vector<std::uint64_t> out;
    if (P.rank() == 0) {
        out.push_back(P.v0());
        return out;
    }
    detail::for_each_coeff(P, [&out](const std::vector<long long>&, std::uint64_t x) {
        out.push_back(x);
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct ProperCounterexample {
    std::uint64_t element = 0;
    std::vector<long long> first, second;
};

struct PropernessResult {
    bool proper = false;
    std::optional<ProperCounterexample> counterexample;
};

// Brute-force uniqueness of coefficient representations.
inline PropernessResult is_proper(const Gap& P, long long budget = 10'000'000) {
    if (P.box_size() > Integer(static_cast<long>(budget))) throw ResourceError("progression box exceeds budget");
    PropernessResult res;
    std::unordered_map<std::uint64_t, std::vector<long long>> seen;
    bool proper = true;
    ProperCounterexample ce;
    detail::for_each_coeff(P, [&](const std::vector<long long>& m, std::uint64_t x) {
        if (!proper) return;
        auto [it, inserted] = seen.try_emplace(x, m);
        if (!inserted) {
            proper = false;
            ce.element = x;
            ce.first = it->second;
            ce.second = m;
        }
    });
    res.proper = proper;
    if (!proper) res.counterexample = ce;
    return res;
}

// Coefficient lookup table for a proper symmetric progression.
class GapIndex {
public:
    explicit GapIndex(const Gap& P, long long budget = 10'000'000) : gap_(P) {
        if (!P.is_symmetric()) throw DomainError("coefficient map needs a symmetric progression");
        if (P.box_size() > Integer(static_cast<long>(budget))) throw ResourceError("progression box exceeds budget");
        bool proper = true;
        detail::for_each_coeff(P, [&](const std::vector<long long>& m, std::uint64_t x) {
            auto [it, inserted] = coeffs_.try_emplace(x, m);
            if (!inserted) proper = false;
        });
        if (!proper) throw DomainError("progression is not proper");
    }

    const Gap& gap() const { return gap_; }
    bool contains(std::uint64_t x) const { return coeffs_.count(x % gap_.field().q()) > 0; }

    const std::vector<long long>& phi(std::uint64_t x) const {
        auto it = coeffs_.find(x % gap_.field().q());
        if (it == coeffs_.end()) throw NotMemberError("element not in the progression");
        return it->second;
    }

    std::size_t size() const { return coeffs_.size(); }

private:
    Gap gap_;
    std::unordered_map<std::uint64_t, std::vector<long long>> coeffs_;
};

// One-shot coefficient lookup (builds the index; prefer GapIndex in loops).
inline std::vector<long long> phi(const Gap& P, std::uint64_t a, long long budget = 10'000'000) {
    return GapIndex(P, budget).phi(a);
}

inline Rational p_norm_sq(const Gap& P, const std::vector<long long>& coeffs) {
    if (coeffs.size() != P.rank()) throw DomainError("coefficient vector has wrong rank");
    Rational s(0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        Rational term(static_cast<long>(coeffs[i]), static_cast<long>(P.dims()[i]));
        term.canonicalize();
        s += term * term;
    }
    return s;
}

inline double p_norm(const GapIndex& index, std::uint64_t a) {
    return std::sqrt(p_norm_sq(index.gap(), index.phi(a)).get_d());
}

// Phi_P(k x) == k Phi_P(x), both memberships required.
inline bool is_kx_proper(const GapIndex& index, std::uint64_t x, long long k) {
    const PrimeField& F = index.gap().field();
    std::uint64_t kx = F.mul(F.reduce_signed(k), x % F.q());
    const auto& mx = index.phi(x);
    const auto& mkx = index.phi(kx);
    for (std::size_t i = 0; i < mx.size(); ++i)
        if (mkx[i] != k * mx[i]) return false;
    return true;
}

// m-fold sumset mP as a progression with radii scaled by m (exact for the
// strict-box coefficient semantics).
inline Gap sumset_iterate(const Gap& P, long long m) {
    if (m < 1) throw DomainError("sumset order must be positive");
    std::vector<long long> dims(P.rank());
    for (std::size_t i = 0; i < P.rank(); ++i) dims[i] = 2 * m * P.radius(i) + 1;
    std::uint64_t v0 = P.field().mul(P.field().reduce_signed(m), P.v0());
    return Gap(P.field(), v0, P.basis(), std::move(dims));
}

// Primitive integer kernel vector of the row space of `rows` (over Q the
// rationals), with deterministic pivoting and sign normalization; empty when
// the rows span full rank.
inline std::vector<long long> integer_kernel_vector(const std::vector<std::vector<long long>>& rows,
                                                    std::size_t width) {
    // rational RREF
    std::vector<std::vector<Rational>> a;
    for (const auto& r : rows) {
        if (r.size() != width) throw DomainError("kernel rows have inconsistent width");
        std::vector<Rational> qr;
        for (long long v : r) qr.emplace_back(static_cast<long>(v));
        a.push_back(std::move(qr));
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < width && rank < a.size(); ++c) {
        std::size_t sel = rank;
        while (sel < a.size() && a[sel][c] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[sel], a[rank]);
        Rational inv = 1 / a[rank][c];
        for (std::size_t j = c; j < width; ++j) a[rank][j] *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == rank || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t j = c; j < width; ++j) a[i][j] -= f * a[rank][j];
        }
        pivot_col.push_back(c);
        ++rank;
    }
    if (rank == width) return {};
    // kernel vector for the smallest free column
    std::size_t free_col = 0;
    while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
    std::vector<Rational> x(width, Rational(0));
    x[free_col] = 1;
    for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = -a[r][free_col];
    // clear denominators, make primitive, normalize sign of the first nonzero
    Integer l(1);
    for (const auto& v : x) l = l / gcd(l, v.get_den()) * v.get_den();
    std::vector<Integer> iv;
    Integer g(0);
    for (const auto& v : x) {
        Integer t = v.get_num() * (l / v.get_den());
        g = gcd(g, t);
        iv.push_back(t);
    }
    if (g != 0)
        for (auto& t : iv) t /= g;
    for (const auto& t : iv) {
        if (t == 0) continue;
        if (t < 0)
            for (auto& u : iv) u = -u;
        break;
    }
    std::vector<long long> out;
    for (const auto& t : iv) out.push_back(static_cast<long long>(t.get_si()));
    return out;
}

// Rank reduction when the coefficient image of B does not span: with alpha a
// primitive integer normal to Phi_P(B) and pivot j*, the new basis is
// v_i' = v_i - alpha_i v_{j*} / alpha_{j*}. Every element of P whose
// coefficients are orthogonal to alpha (in particular all of B) carries over
// with the same remaining coefficients.
inline Gap reduce_rank_spanning(const GapIndex& index, const std::vector<std::uint64_t>& b_set) {
    const Gap& P = index.gap();
    const PrimeField& F = P.field();
    std::vector<std::vector<long long>> phi_rows;
    for (std::uint64_t b : b_set) phi_rows.push_back(index.phi(b));
    std::vector<long long> alpha = integer_kernel_vector(phi_rows, P.rank());
    if (alpha.empty()) throw AlreadySpanningError("coefficient image already spans full rank");

    // pivot: largest index with alpha nonzero and invertible mod Q
    std::size_t pivot = P.rank();
    for (std::size_t i = P.rank(); i-- > 0;) {
        if (alpha[i] != 0 && F.reduce_signed(alpha[i]) != 0) {
            pivot = i;
            break;
        }
    }
    if (pivot == P.rank()) throw DomainError("no pivot coordinate invertible mod Q");

    std::uint64_t w = F.mul(P.basis()[pivot], F.inv(F.reduce_signed(alpha[pivot])));
    std::vector<std::uint64_t> basis;
    std::vector<long long> dims;
    for (std::size_t i = 0; i < P.rank(); ++i) {
        if (i == pivot) continue;
        basis.push_back(F.sub(P.basis()[i], F.mul(F.reduce_signed(alpha[i]), w)));
        dims.push_back(P.dims()[i]);
    }
    return Gap::symmetric(F, std::move(basis), std::move(dims));
}

inline Gap reduce_rank_spanning(const Gap& P, const std::vector<std::uint64_t>& b_set,
                                long long budget = 10'000'000) {
    return reduce_rank_spanning(GapIndex(P, budget), b_set);
}

struct StructureReport {
    bool symmetric = false;
    bool proper = false;
    bool membership = false;          // all coordinates lie in P
    Rational norm_sum_sq;             // sum_j ||a_j||_P^2
    bool norm_ok = false;             // norm_sum_sq <= C
    Integer volume;                   // M_1 ... M_rho
    bool volume_ok = false;           // volume * hit_prob <= C
    bool all_ok() const { return symmetric && proper && membership && norm_ok && volume_ok; }
};

// Checks the structure-theorem conclusions for a supplied progression,
// scaled defining coordinates, constant C and hit probability. A certificate
// checker: it verifies, it does not construct.
inline StructureReport check_structure_conclusions(const Gap& P,
                                                   const std::vector<std::uint64_t>& coords,
                                                   const Rational& C, const Rational& hit_prob,
                                                   long long budget = 10'000'000) {
    StructureReport rep;
    rep.symmetric = P.is_symmetric();
    auto prop = is_proper(P, budget);
    rep.proper = prop.proper;
    rep.volume = 1;
    for (long long m : P.dims()) rep.volume *= Integer(static_cast<long>(m));
    rep.volume_ok = Rational(rep.volume) * hit_prob <= C;
    if (!rep.symmetric || !rep.proper) return rep;

    GapIndex index(P, budget);
    rep.membership = true;
    rep.norm_sum_sq = 0;
    for (std::uint64_t a : coords) {
        if (!index.contains(a)) {
            rep.membership = false;
            continue;
        }
        rep.norm_sum_sq += p_norm_sq(P, index.phi(a));
    }
    rep.norm_ok = rep.membership && rep.norm_sum_sq <= C;
    return rep;
}

} // namespace singp
