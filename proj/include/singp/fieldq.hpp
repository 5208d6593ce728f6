#pragma once

#include <complex>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <vector>

#include "singp/dist.hpp"
#include "singp/rational.hpp"

namespace singp {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

// Deterministic Miller-Rabin, valid for the full 64-bit range.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Odd prime modulus Q (word-sized, Q < 2^62) with Montgomery constants for
// the elimination hot path.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t q) : q_(q) {
        if (q < 3 || q >= (1ULL << 62)) throw BadPrimeError("modulus out of range: " + std::to_string(q));
        if (!is_prime_u64(q)) throw BadPrimeError(std::to_string(q) + " is not prime");
        // (q is odd for every prime >= 3, as required by Montgomery form.)
        std::uint64_t inv = q;  // q^{-1} mod 2^64 by Newton iteration
        for (int i = 0; i < 5; ++i) inv *= 2 - q * inv;
        ninv_ = ~inv + 1;  // -q^{-1} mod 2^64
        one_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % q);
        r2_ = detail::mulmod_u64(one_, one_, q);
    }

    std::uint64_t q() const { return q_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + q_ - b;
    }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return detail::mulmod_u64(a, b, q_); }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const { return detail::powmod_u64(a, e, q_); }
    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw DomainError("inverse of zero");
        return pow(a, q_ - 2);
    }

    std::uint64_t reduce_signed(long long v) const {
        long long r = v % static_cast<long long>(q_);
        if (r < 0) r += static_cast<long long>(q_);
        return static_cast<std::uint64_t>(r);
    }
    std::uint64_t reduce_integer(const Integer& v) const {
        Integer m = v % Integer(q_);
        if (m < 0) m += Integer(q_);
        return m.get_ui();
    }
    // Representative in (-Q/2, Q/2].
    long long centered(std::uint64_t a) const {
        return a * 2 <= q_ ? static_cast<long long>(a)
                           : static_cast<long long>(a) - static_cast<long long>(q_);
    }

    // Montgomery domain (R = 2^64).
    std::uint64_t redc(unsigned __int128 t) const {
        std::uint64_t m = static_cast<std::uint64_t>(t) * ninv_;
        unsigned __int128 u = (t + static_cast<unsigned __int128>(m) * q_) >> 64;
        std::uint64_t r = static_cast<std::uint64_t>(u);
        return r >= q_ ? r - q_ : r;
    }
    std::uint64_t to_mont(std::uint64_t a) const { return redc(static_cast<unsigned __int128>(a) * r2_); }
    std::uint64_t from_mont(std::uint64_t a) const { return redc(a); }
    std::uint64_t mont_mul(std::uint64_t a, std::uint64_t b) const {
        return redc(static_cast<unsigned __int128>(a) * b);
    }
    std::uint64_t mont_one() const { return one_; }

    bool operator==(const PrimeField& o) const { return q_ == o.q_; }

private:
    std::uint64_t q_, ninv_, r2_, one_;
};

// Dense square matrix over Z/Q, row-major, entries reduced.
class MatrixQ {
public:
    MatrixQ(PrimeField field, std::size_t n)
        : field_(field), n_(n), e_(n * n, 0) {}

    static MatrixQ identity(const PrimeField& field, std::size_t n) {
        MatrixQ m(field, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static MatrixQ from_integers(const PrimeField& field,
                                 const std::vector<std::vector<long long>>& rows) {
        MatrixQ m(field, rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw DomainError("matrix must be square");
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                m.at(i, j) = field.reduce_signed(rows[i][j]);
        }
        return m;
    }

    std::size_t n() const { return n_; }
    const PrimeField& field() const { return field_; }
    std::uint64_t& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    std::uint64_t* row(std::size_t i) { return e_.data() + i * n_; }
    const std::uint64_t* row(std::size_t i) const { return e_.data() + i * n_; }

private:
    PrimeField field_;
    std::size_t n_;
    std::vector<std::uint64_t> e_;
};

struct Elimination {
    std::size_t rank = 0;
    std::uint64_t det = 0;
};

// Gaussian elimination over Z/Q. Entries stay in the plain domain; only the
// per-row multiplier is lifted to Montgomery form, so the inner update
// mont_mul(factor_mont, plain) yields the exact plain product. The input is
// taken by value; the caller's matrix is untouched.
inline Elimination eliminate(MatrixQ m) {
    const PrimeField& F = m.field();
    const std::size_t n = m.n();

    Elimination out;
    bool negate = false;
    std::uint64_t det_plain = 1;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < n && pivot_row < n; ++col) {
        std::size_t sel = pivot_row;
        while (sel < n && m.at(sel, col) == 0) ++sel;
        if (sel == n) continue;
        if (sel != pivot_row) {
            for (std::size_t j = col; j < n; ++j) std::swap(m.at(sel, j), m.at(pivot_row, j));
            negate = !negate;
        }
        std::uint64_t piv = m.at(pivot_row, col);
        det_plain = F.mul(det_plain, piv);
        std::uint64_t pinv_mont = F.to_mont(F.inv(piv));
        const std::uint64_t* prow = m.row(pivot_row);
        for (std::size_t i = pivot_row + 1; i < n; ++i) {
            std::uint64_t lead = m.at(i, col);
            if (lead == 0) continue;
            std::uint64_t factor_mont = F.mont_mul(F.to_mont(lead), pinv_mont);
            std::uint64_t* irow = m.row(i);
            irow[col] = 0;
            for (std::size_t j = col + 1; j < n; ++j)
                irow[j] = F.sub(irow[j], F.mont_mul(factor_mont, prow[j]));
        }
        ++pivot_row;
    }
    out.rank = pivot_row;
    if (out.rank == n) {
        out.det = det_plain;
        if (negate) out.det = F.neg(out.det);
    }
    return out;
}

namespace detail {

// Crout LU with partial pivoting and delayed reduction: for Q < 2^31 the
// products fit in 62 bits, so a whole dot product accumulates in a u128
// before one reduction. Returns the determinant (0 on singularity).
inline std::uint64_t det_crout_small(MatrixQ m) {
    const PrimeField& F = m.field();
    const std::uint64_t q = F.q();
    const std::size_t n = m.n();
    bool negate = false;
    std::uint64_t det_val = 1;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t kmax = std::min(i, j);
            unsigned __int128 acc = 0;
            const std::uint64_t* irow = m.row(i);
            for (std::size_t k = 0; k < kmax; ++k)
                acc += static_cast<unsigned __int128>(irow[k]) * m.at(k, j);
            std::uint64_t red = static_cast<std::uint64_t>(acc % q);
            m.at(i, j) = F.sub(m.at(i, j), red);
        }
        std::size_t piv = j;
        while (piv < n && m.at(piv, j) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != j) {
            for (std::size_t k = 0; k < n; ++k) std::swap(m.at(piv, k), m.at(j, k));
            negate = !negate;
        }
        std::uint64_t d = m.at(j, j);
        det_val = F.mul(det_val, d);
        std::uint64_t dinv = F.inv(d);
        for (std::size_t i = j + 1; i < n; ++i)
            if (m.at(i, j) != 0) m.at(i, j) = F.mul(m.at(i, j), dinv);
    }
    return negate ? F.neg(det_val) : det_val;
}

} // namespace detail

inline std::size_t rank(const MatrixQ& m) { return eliminate(m).rank; }

inline std::uint64_t det(const MatrixQ& m) {
    if (m.field().q() < (1ULL << 31) && m.n() > 0) return detail::det_crout_small(m);
    return eliminate(m).det;
}

// Clears denominators row by row and reduces mod Q. Scaling rows by nonzero
// constants preserves singularity, and Q prime keeps the scalars invertible.
inline MatrixQ reduce_rational_matrix(const std::vector<std::vector<Rational>>& rows,
                                      const PrimeField& field) {
    const std::size_t n = rows.size();
    MatrixQ m(field, n);
    Integer q(field.q());
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw DomainError("matrix must be square");
        Integer l(1);
        for (const auto& v : rows[i]) {
            if (v.get_den() % q == 0)
                throw BadPrimeError("denominator shares a factor with the modulus");
            l = l / gcd(l, v.get_den()) * v.get_den();
        }
        for (std::size_t j = 0; j < n; ++j) {
            Integer scaled = rows[i][j].get_num() * (l / rows[i][j].get_den());
            m.at(i, j) = field.reduce_integer(scaled);
        }
    }
    return m;
}

// Row-wise integer matrix after clearing denominators, for Hadamard bounds.
inline std::vector<std::vector<Integer>> clear_denominators(
    const std::vector<std::vector<Rational>>& rows) {
    std::vector<std::vector<Integer>> out;
    for (const auto& row : rows) {
        Integer l(1);
        for (const auto& v : row) l = l / gcd(l, v.get_den()) * v.get_den();
        std::vector<Integer> r;
        for (const auto& v : row) r.push_back(v.get_num() * (l / v.get_den()));
        out.push_back(std::move(r));
    }
    return out;
}

// ceil of the Hadamard bound prod_i |row_i|: any Q above it makes mod-Q
// singularity of an integer matrix equivalent to rational singularity.
inline Integer hadamard_bound(const std::vector<std::vector<Integer>>& rows) {
    Integer prod(1);
    for (const auto& row : rows) {
        Integer s(0);
        for (const auto& v : row) s += v * v;
        prod *= s;
    }
    return isqrt_ceil(prod);
}

inline Integer hadamard_bound(const std::vector<std::vector<long long>>& rows) {
    std::vector<std::vector<Integer>> t;
    for (const auto& row : rows) {
        std::vector<Integer> r;
        for (long long v : row) r.emplace_back(static_cast<long>(v));
        t.push_back(std::move(r));
    }
    return hadamard_bound(t);
}

// E e_Q(alpha a xi)-style atom: sum_x Pr(x) e(x a / Q).
inline std::complex<double> char_sum(const DiscreteDist& dist, std::uint64_t a,
                                     const PrimeField& field) {
    std::complex<double> s(0, 0);
    for (const auto& atom : dist.atoms()) {
        std::uint64_t va = field.mul(field.reduce_signed(atom.value), a % field.q());
        double ang = 2 * std::numbers::pi * static_cast<double>(va) / static_cast<double>(field.q());
        s += atom.prob.get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

// Flat binary checkpoint format: u64 n, u64 Q, then n*n little-endian u64
// entries in row-major order.
inline void write_matrix(std::ostream& os, const MatrixQ& m) {
    auto put_u64 = [&os](std::uint64_t v) {
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
        os.write(reinterpret_cast<const char*>(buf), 8);
    };
    put_u64(m.n());
    put_u64(m.field().q());
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) put_u64(m.at(i, j));
}

inline MatrixQ read_matrix(std::istream& is) {
    auto get_u64 = [&is]() {
        unsigned char buf[8];
        is.read(reinterpret_cast<char*>(buf), 8);
        if (!is) throw DomainError("truncated matrix stream");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    };
    std::uint64_t n = get_u64();
    std::uint64_t q = get_u64();
    PrimeField field(q);
    MatrixQ m(field, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::uint64_t v = get_u64();
            if (v >= q) throw DomainError("entry not reduced mod Q");
            m.at(i, j) = v;
        }
    return m;
}

} // namespace singp
