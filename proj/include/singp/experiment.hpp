#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "singp/bounds.hpp"
#include "singp/fieldq.hpp"
#include "singp/rng.hpp"

namespace singp {

// Per-entry distributions: one shared distribution, or an n x n grid.
struct EntryModel {
    DiscreteDist shared;
    std::optional<std::vector<std::vector<DiscreteDist>>> per_entry;

    const DiscreteDist& at(std::size_t i, std::size_t j) const {
        return per_entry ? (*per_entry)[i][j] : shared;
    }
    long long max_abs_value(std::size_t i, std::size_t j) const {
        long long m = 0;
        for (const auto& a : at(i, j).atoms()) m = std::max(m, std::llabs(a.value));
        return m;
    }
};

struct PrimePolicy {
    enum class Mode { Auto, Explicit };
    Mode mode = Mode::Auto;
    std::uint64_t q = 0;  // used when Explicit
};

enum class ExperimentMode { Singularity, RationalEigenvalue };

struct ExperimentConfig {
    std::size_t n = 2;
    long long trials = 10000;
    std::uint64_t master_seed = 1;
    EntryModel entries;
    std::vector<std::vector<long long>> fixed_rows;  // may be empty
    PrimePolicy prime;
    ExperimentMode mode = ExperimentMode::Singularity;
    long long eigen_k = 1;
    int threads = 1;
};

struct WilsonInterval {
    double lo = 0, hi = 1;
};

inline WilsonInterval wilson_interval(long long count, long long trials, double z = 1.959963984540054) {
    if (trials <= 0) return {};
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(count) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct BoundComparison {
    std::string name;
    double base = 0;
    double base_pow_n = 0;
};

struct ExperimentResult {
    long long trials = 0;
    long long hits = 0;  // singular trials, or trials with a rational eigenvalue
    double estimate = 0;
    WilsonInterval interval;
    std::uint64_t master_seed = 0;
    std::string seed_derivation;
    std::uint64_t q_used = 0;
    std::size_t n = 0;
    std::vector<BoundComparison> bound_comparison;
};

namespace detail {

inline constexpr std::uint64_t kM61 = (1ULL << 61) - 1;

// Smallest usable prime above the Hadamard bound of the worst-case integer
// matrix; falls back to 2^61 - 1 when the bound exceeds the word range.
inline std::uint64_t resolve_prime(const ExperimentConfig& cfg, long long extra_diag = 0) {
    if (cfg.prime.mode == PrimePolicy::Mode::Explicit) {
        PrimeField probe(cfg.prime.q);  // validates
        return probe.q();
    }
    const std::size_t f = cfg.fixed_rows.size();
    std::vector<std::vector<Integer>> worst;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        std::vector<Integer> row;
        for (std::size_t j = 0; j < cfg.n; ++j) {
            long long v = i < f ? std::llabs(cfg.fixed_rows[i][j])
                                : cfg.entries.max_abs_value(i - f, j);
            if (i == j) v += extra_diag;
            row.emplace_back(static_cast<long>(v));
        }
        worst.push_back(std::move(row));
    }
    Integer bound = hadamard_bound(worst);
    if (bound >= Integer(static_cast<unsigned long>(kM61))) return kM61;
    Integer q = next_prime_above(std::max(bound, Integer(2)));
    return q.get_ui();
}

inline const char* kSeedDerivation =
    "xoshiro256** seeded by splitmix64(master_seed ^ (trial * 0xD1B54A32D192ED03 + "
    "0x8CB92BA72F3D8DD7))";

// Deterministic over trial index regardless of how trials are partitioned.
template <typename TrialFn>
long long parallel_count(long long trials, int threads, TrialFn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1) {
        long long hits = 0;
        for (long long t = 0; t < trials; ++t) hits += fn(t) ? 1 : 0;
        return hits;
    }
    std::vector<long long> partial(static_cast<std::size_t>(threads), 0);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            long long hits = 0;
            for (long long t = w; t < trials; t += threads) hits += fn(t) ? 1 : 0;
            partial[static_cast<std::size_t>(w)] = hits;
        });
    }
    for (auto& th : pool) th.join();
    long long total = 0;
    for (long long h : partial) total += h;
    return total;
}

} // namespace detail

// Fixed-row block reduction: columns are permuted so an invertible f x f
// minor A leads, then singularity of the full matrix is equivalent to
// singularity of det(A) D - C (adj A) B over the same field.
class SchurReducer {
public:
    SchurReducer(const std::vector<std::vector<long long>>& fixed, const PrimeField& field,
                 std::size_t n)
        : field_(field), n_(n), f_(fixed.size()) {
        if (f_ > n_) throw DomainError("more fixed rows than matrix rows");
        for (const auto& r : fixed)
            if (r.size() != n_) throw DomainError("fixed row has wrong length");

        // locate pivot columns of the fixed block
        std::vector<std::vector<std::uint64_t>> work(f_, std::vector<std::uint64_t>(n_));
        for (std::size_t i = 0; i < f_; ++i)
            for (std::size_t j = 0; j < n_; ++j) work[i][j] = field_.reduce_signed(fixed[i][j]);
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < n_ && row < f_; ++col) {
            std::size_t sel = row;
            while (sel < f_ && work[sel][col] == 0) ++sel;
            if (sel == f_) continue;
            std::swap(work[sel], work[row]);
            std::uint64_t inv = field_.inv(work[row][col]);
            for (std::size_t i = row + 1; i < f_; ++i) {
                if (work[i][col] == 0) continue;
                std::uint64_t fct = field_.mul(work[i][col], inv);
                for (std::size_t j = col; j < n_; ++j)
                    work[i][j] = field_.sub(work[i][j], field_.mul(fct, work[row][j]));
            }
            pivots.push_back(col);
            ++row;
        }
        if (pivots.size() < f_)
            throw DependentFixedRowsError("fixed rows are linearly dependent over the field");

        col_perm_ = pivots;
        for (std::size_t j = 0; j < n_; ++j)
            if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) col_perm_.push_back(j);

        // A = fixed[:, pivots], B = fixed[:, rest]
        std::vector<std::vector<std::uint64_t>> a(f_, std::vector<std::uint64_t>(f_));
        std::vector<std::vector<std::uint64_t>> b(f_, std::vector<std::uint64_t>(n_ - f_));
        for (std::size_t i = 0; i < f_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                std::uint64_t v = field_.reduce_signed(fixed[i][col_perm_[j]]);
                if (j < f_) a[i][j] = v; else b[i][j - f_] = v;
            }
        det_a_ = det_and_inverse(a, a_inv_);
        if (det_a_ == 0) throw DependentFixedRowsError("fixed minor not invertible");
        // adj(A) B = det(A) A^{-1} B
        adj_b_.assign(f_, std::vector<std::uint64_t>(n_ - f_, 0));
        for (std::size_t i = 0; i < f_; ++i)
            for (std::size_t j = 0; j + f_ < n_; ++j) {
                std::uint64_t s = 0;
                for (std::size_t k = 0; k < f_; ++k)
                    s = field_.add(s, field_.mul(a_inv_[i][k], b[k][j]));
                adj_b_[i][j] = field_.mul(det_a_, s);
            }
    }

    std::size_t reduced_n() const { return n_ - f_; }
    const std::vector<std::size_t>& column_permutation() const { return col_perm_; }
    std::uint64_t det_a() const { return det_a_; }

    // random_rows: the (n-f) x n random block in original column order.
    MatrixQ reduce(const std::vector<std::vector<std::uint64_t>>& random_rows) const {
        const std::size_t m = n_ - f_;
        MatrixQ out(field_, m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                // det(A) D_{ij} - sum_k C_{ik} (adjA B)_{kj}
                std::uint64_t v = field_.mul(det_a_, random_rows[i][col_perm_[f_ + j]]);
                for (std::size_t k = 0; k < f_; ++k) {
                    std::uint64_t c = random_rows[i][col_perm_[k]];
                    v = field_.sub(v, field_.mul(c, adj_b_[k][j]));
                }
                out.at(i, j) = v;
            }
        }
        return out;
    }

    // Full matrix (fixed rows on top of the random block), for equivalence checks.
    MatrixQ full(const std::vector<std::vector<long long>>& fixed,
                 const std::vector<std::vector<std::uint64_t>>& random_rows) const {
        MatrixQ out(field_, n_);
        for (std::size_t i = 0; i < f_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out.at(i, j) = field_.reduce_signed(fixed[i][j]);
        for (std::size_t i = f_; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out.at(i, j) = random_rows[i - f_][j];
        return out;
    }

private:
    std::uint64_t det_and_inverse(std::vector<std::vector<std::uint64_t>> a,
                                  std::vector<std::vector<std::uint64_t>>& inv) const {
        const std::size_t f = a.size();
        inv.assign(f, std::vector<std::uint64_t>(f, 0));
        for (std::size_t i = 0; i < f; ++i) inv[i][i] = 1;
        std::uint64_t d = 1;
        for (std::size_t col = 0; col < f; ++col) {
            std::size_t sel = col;
            while (sel < f && a[sel][col] == 0) ++sel;
            if (sel == f) return 0;
            if (sel != col) {
                std::swap(a[sel], a[col]);
                std::swap(inv[sel], inv[col]);
                d = field_.neg(d);
            }
            std::uint64_t piv = a[col][col];
            d = field_.mul(d, piv);
            std::uint64_t pinv = field_.inv(piv);
            for (std::size_t j = 0; j < f; ++j) {
                a[col][j] = field_.mul(a[col][j], pinv);
                inv[col][j] = field_.mul(inv[col][j], pinv);
            }
            for (std::size_t i = 0; i < f; ++i) {
                if (i == col || a[i][col] == 0) continue;
                std::uint64_t fct = a[i][col];
                for (std::size_t j = 0; j < f; ++j) {
                    a[i][j] = field_.sub(a[i][j], field_.mul(fct, a[col][j]));
                    inv[i][j] = field_.sub(inv[i][j], field_.mul(fct, inv[col][j]));
                }
            }
        }
        return d;
    }

    PrimeField field_;
    std::size_t n_, f_;
    std::vector<std::size_t> col_perm_;
    std::vector<std::vector<std::uint64_t>> a_inv_;
    std::vector<std::vector<std::uint64_t>> adj_b_;
    std::uint64_t det_a_ = 0;
};

// Monte Carlo singularity frequency. Bit-reproducible for a fixed master
// seed under any worker count: each trial's stream depends only on its index.
inline ExperimentResult run_singularity(const ExperimentConfig& cfg) {
    if (cfg.n == 0) throw DomainError("n must be positive");
    const std::size_t f = cfg.fixed_rows.size();
    if (f > cfg.n) throw DomainError("more fixed rows than rows");
    const std::size_t nr = cfg.n - f;  // random rows

    PrimeField field(detail::resolve_prime(cfg));
    std::optional<SchurReducer> reducer;
    if (f > 0) reducer.emplace(cfg.fixed_rows, field, cfg.n);

    // per-entry samplers for the random block, sampled column-major per trial
    std::vector<DiscreteSampler> samplers;
    samplers.reserve(nr * cfg.n);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < cfg.n; ++j)
            samplers.emplace_back(cfg.entries.at(i, j));

    auto trial = [&](long long t) -> bool {
        Xoshiro256 rng = trial_rng(cfg.master_seed, static_cast<std::uint64_t>(t));
        std::vector<std::vector<std::uint64_t>> random_rows(nr,
                                                            std::vector<std::uint64_t>(cfg.n));
        for (std::size_t j = 0; j < cfg.n; ++j)
            for (std::size_t i = 0; i < nr; ++i) {
                long long v = samplers[i * cfg.n + j].sample(rng);
                random_rows[i][j] = field.reduce_signed(v);
            }
        if (reducer) {
            if (reducer->reduced_n() == 0) return false;  // invertible fixed square matrix
            return det(reducer->reduce(random_rows)) == 0;
        }
        MatrixQ m(field, cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i)
            for (std::size_t j = 0; j < cfg.n; ++j) m.at(i, j) = random_rows[i][j];
        return det(m) == 0;
    };

    ExperimentResult res;
    res.trials = cfg.trials;
    res.n = cfg.n;
    res.master_seed = cfg.master_seed;
    res.seed_derivation = detail::kSeedDerivation;
    res.q_used = field.q();
    res.hits = detail::parallel_count(cfg.trials, cfg.threads, trial);
    res.estimate = cfg.trials > 0 ? static_cast<double>(res.hits) / static_cast<double>(cfg.trials) : 0;
    res.interval = wilson_interval(res.hits, res.trials);

    // reference bases apply to a shared symmetric entry distribution
    if (!cfg.entries.per_entry && cfg.entries.shared.is_symmetric()) {
        Rational mu = 1 - cfg.entries.shared.prob_of(0);
        for (const auto& b : upper_bounds_gamma(mu))
            res.bound_comparison.push_back(
                {b.name, b.value(), std::pow(b.value(), static_cast<double>(cfg.n))});
        for (const auto& b : lower_bounds_gamma(mu))
            res.bound_comparison.push_back(
                {b.name, b.value(), std::pow(b.value(), static_cast<double>(cfg.n))});
    }
    return res;
}

// Exact singularity probability by weighted enumeration of all assignments.
inline Rational exhaustive_singularity(std::size_t n, const DiscreteDist& dist,
                                       long long budget = 20'000'000) {
    if (n == 0 || n > 4) throw DomainError("exhaustive enumeration supports 1 <= n <= 4");
    const std::size_t cells = n * n;
    double total = std::pow(static_cast<double>(dist.size()), static_cast<double>(cells));
    if (total > static_cast<double>(budget)) throw ResourceError("enumeration exceeds budget");

    std::vector<std::size_t> idx(cells, 0);
    Rational prob(0);
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
    while (true) {
        Rational w(1);
        for (std::size_t c = 0; c < cells; ++c) {
            const auto& atom = dist.atoms()[idx[c]];
            m[c / n][c % n] = atom.value;
            w *= atom.prob;
        }
        // exact integer determinant of a tiny matrix
        Integer d(0);
        if (n == 1) d = Integer(static_cast<long>(m[0][0]));
        else if (n == 2) d = Integer(static_cast<long>(m[0][0])) * static_cast<long>(m[1][1]) -
                             Integer(static_cast<long>(m[0][1])) * static_cast<long>(m[1][0]);
        else {
            // cofactor expansion along the first row
            std::vector<std::size_t> cols(n);
            for (std::size_t j = 0; j < n; ++j) cols[j] = j;
            d = 0;
            auto minor_det = [&](auto&& self, std::vector<std::size_t> rows,
                                 std::vector<std::size_t> cs) -> Integer {
                if (rows.size() == 1) return Integer(static_cast<long>(m[rows[0]][cs[0]]));
                Integer acc(0);
                for (std::size_t j = 0; j < cs.size(); ++j) {
                    if (m[rows[0]][cs[j]] == 0) continue;
                    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
                    std::vector<std::size_t> sub_cols;
                    for (std::size_t k = 0; k < cs.size(); ++k)
                        if (k != j) sub_cols.push_back(cs[k]);
                    Integer term =
                        Integer(static_cast<long>(m[rows[0]][cs[j]])) * self(self, sub_rows, sub_cols);
                    if (j % 2 == 0) acc += term; else acc -= term;
                }
                return acc;
            };
            std::vector<std::size_t> rows(n);
            for (std::size_t i = 0; i < n; ++i) rows[i] = i;
            d = minor_det(minor_det, rows, cols);
        }
        if (d == 0) prob += w;

        std::size_t c = 0;
        while (c < cells) {
            if (++idx[c] < dist.size()) break;
            idx[c] = 0;
            ++c;
        }
        if (c == cells) break;
    }
    return prob;
}

// Integer eigenvalue window: by the rational roots theorem the only rational
// eigenvalues of an integer matrix are integers, and every eigenvalue is at
// most nk in absolute value for entries in [-k, k].
inline std::pair<long long, long long> eigen_window(std::size_t n, long long k) {
    long long nk = static_cast<long long>(n) * k;
    return {-nk, nk};
}

// Scans the exact integer window [-nk, nk] for an eigenvalue, testing
// det(M - lambda I) = 0 over the field.
inline bool has_integer_eigenvalue(const std::vector<std::vector<long long>>& m,
                                   const PrimeField& field, long long k) {
    const std::size_t n = m.size();
    auto [lo, hi] = eigen_window(n, k);
    for (long long lam = lo; lam <= hi; ++lam) {
        MatrixQ shifted(field, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                shifted.at(i, j) =
                    field.reduce_signed(m[i][j] - (i == j ? lam : 0));
        if (det(shifted) == 0) return true;
    }
    return false;
}

// Monte Carlo frequency of a rational (hence integer) eigenvalue.
inline ExperimentResult run_rational_eigenvalue(const ExperimentConfig& cfg) {
    if (cfg.n == 0) throw DomainError("n must be positive");
    if (!cfg.fixed_rows.empty())
        throw DomainError("rational-eigenvalue mode does not take fixed rows");
    const long long k = cfg.eigen_k;
    for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = 0; j < cfg.n; ++j)
            for (const auto& atom : cfg.entries.at(i, j).atoms())
                if (std::llabs(atom.value) > k)
                    throw DomainError("entries must lie in [-k, k]");

    PrimeField field(detail::resolve_prime(cfg, static_cast<long long>(cfg.n) * k));
    std::vector<DiscreteSampler> samplers;
    for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = 0; j < cfg.n; ++j) samplers.emplace_back(cfg.entries.at(i, j));

    auto trial = [&](long long t) -> bool {
        Xoshiro256 rng = trial_rng(cfg.master_seed, static_cast<std::uint64_t>(t));
        std::vector<std::vector<long long>> m(cfg.n, std::vector<long long>(cfg.n));
        for (std::size_t j = 0; j < cfg.n; ++j)
            for (std::size_t i = 0; i < cfg.n; ++i)
                m[i][j] = samplers[i * cfg.n + j].sample(rng);
        return has_integer_eigenvalue(m, field, k);
    };

    ExperimentResult res;
    res.trials = cfg.trials;
    res.n = cfg.n;
    res.master_seed = cfg.master_seed;
    res.seed_derivation = detail::kSeedDerivation;
    res.q_used = field.q();
    res.hits = detail::parallel_count(cfg.trials, cfg.threads, trial);
    res.estimate = cfg.trials > 0 ? static_cast<double>(res.hits) / static_cast<double>(cfg.trials) : 0;
    res.interval = wilson_interval(res.hits, res.trials);

    // (c/k)^{n/2} with c = k * max entry probability
    Rational pmax(0);
    for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = 0; j < cfg.n; ++j) pmax = std::max(pmax, cfg.entries.at(i, j).max_prob());
    double c = static_cast<double>(k) * pmax.get_d();
    res.bound_comparison.push_back(
        {"eigen_reference", c / static_cast<double>(k),
         std::pow(c / static_cast<double>(k), static_cast<double>(cfg.n) / 2.0)});
    return res;
}

// Exact probability that an n x n matrix with i.i.d. entries from dist has an
// integer eigenvalue in the window, by full enumeration.
inline Rational exhaustive_rational_eigenvalue(std::size_t n, const DiscreteDist& dist,
                                               long long k, long long budget = 20'000'000) {
    if (n == 0 || n > 3) throw DomainError("exhaustive eigenvalue enumeration supports n <= 3");
    const std::size_t cells = n * n;
    double total = std::pow(static_cast<double>(dist.size()), static_cast<double>(cells));
    if (total > static_cast<double>(budget)) throw ResourceError("enumeration exceeds budget");
    for (const auto& atom : dist.atoms())
        if (std::llabs(atom.value) > k) throw DomainError("entries must lie in [-k, k]");

    // prime above the Hadamard bound of the worst shifted matrix
    long long worst = 0;
    for (const auto& atom : dist.atoms()) worst = std::max(worst, std::llabs(atom.value));
    std::vector<std::vector<long long>> wm(n, std::vector<long long>(n, worst));
    for (std::size_t i = 0; i < n; ++i) wm[i][i] = worst + static_cast<long long>(n) * k;
    Integer bound = hadamard_bound(wm);
    PrimeField field(next_prime_above(std::max(bound, Integer(2))).get_ui());

    std::vector<std::size_t> idx(cells, 0);
    Rational prob(0);
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
    while (true) {
        Rational w(1);
        for (std::size_t c = 0; c < cells; ++c) {
            const auto& atom = dist.atoms()[idx[c]];
            m[c / n][c % n] = atom.value;
            w *= atom.prob;
        }
        if (has_integer_eigenvalue(m, field, k)) prob += w;
        std::size_t c = 0;
        while (c < cells) {
            if (++idx[c] < dist.size()) break;
            idx[c] = 0;
            ++c;
        }
        if (c == cells) break;
    }
    return prob;
}

} // namespace singp
