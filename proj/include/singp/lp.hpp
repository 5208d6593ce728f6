#pragma once

#include <cstddef>
#include <vector>

#include "singp/errors.hpp"

namespace singp {

// Dense two-phase tableau simplex with Bland's rule. Small problems only;
// fully deterministic given its inputs.
class Simplex {
public:
    enum class Status { Optimal, Infeasible, Unbounded };

    struct Result {
        Status status = Status::Infeasible;
        std::vector<double> x;     // primal solution
        std::vector<double> dual;  // equality-row multipliers
        double value = 0;
    };

    // min c.x  s.t.  A x = b, x >= 0.
    static Result solve_standard(std::vector<std::vector<double>> A, std::vector<double> b,
                                 const std::vector<double>& c, int max_iter = 200000) {
        const std::size_t m = A.size();
        const std::size_t n = c.size();
        std::vector<double> row_sign(m, 1.0);
        for (std::size_t i = 0; i < m; ++i)
            if (b[i] < 0) {
                for (auto& v : A[i]) v = -v;
                b[i] = -b[i];
                row_sign[i] = -1.0;
            }
        const std::size_t ntot = n + m;  // artificials appended
        std::vector<std::vector<double>> T(m, std::vector<double>(ntot + 1, 0.0));
        std::vector<std::size_t> basis(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
            T[i][n + i] = 1.0;
            T[i][ntot] = b[i];
            basis[i] = n + i;
        }

        std::vector<double> final_red;
        auto run_phase = [&](const std::vector<double>& cost, bool allow_artificial) -> Status {
            std::vector<double> red(ntot + 1, 0.0);
            for (std::size_t j = 0; j <= ntot; ++j) red[j] = j < cost.size() ? cost[j] : 0.0;
            red[ntot] = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double cb = basis[i] < cost.size() ? cost[basis[i]] : 0.0;
                if (cb == 0.0) continue;
                for (std::size_t j = 0; j <= ntot; ++j) red[j] -= cb * T[i][j];
            }
            const double tol = 1e-9;
            for (int it = 0; it < max_iter; ++it) {
                std::size_t enter = ntot;
                std::size_t limit = allow_artificial ? ntot : n;
                for (std::size_t j = 0; j < limit; ++j)
                    if (red[j] < -tol) { enter = j; break; }  // Bland: lowest index
                if (enter == ntot) {
                    final_red = red;
                    return Status::Optimal;
                }
                std::size_t leave = m;
                double best = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    if (T[i][enter] > tol) {
                        double ratio = T[i][ntot] / T[i][enter];
                        if (leave == m || ratio < best - 1e-12 ||
                            (ratio < best + 1e-12 && basis[i] < basis[leave]))
                        {
                            leave = i;
                            best = ratio;
                        }
                    }
                }
                if (leave == m) return Status::Unbounded;
                pivot(T, red, basis, leave, enter, m, ntot);
            }
            throw Error("simplex iteration limit exceeded");
        };

        // Phase 1: minimize the sum of artificials.
        std::vector<double> c1(ntot, 0.0);
        for (std::size_t j = n; j < ntot; ++j) c1[j] = 1.0;
        Status s1 = run_phase(c1, true);
        double phase1 = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] >= n) phase1 += T[i][ntot];
        Result res;
        if (s1 != Status::Optimal || phase1 > 1e-7) {
            res.status = Status::Infeasible;
            return res;
        }
        // Drive remaining artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n) continue;
            std::size_t piv = ntot;
            for (std::size_t j = 0; j < n; ++j)
                if (std::abs(T[i][j]) > 1e-9) { piv = j; break; }
            if (piv != ntot) {
                std::vector<double> dummy(ntot + 1, 0.0);
                pivot(T, dummy, basis, i, piv, m, ntot);
            }
        }

        Status s2 = run_phase(c, false);
        if (s2 != Status::Optimal) {
            res.status = s2;
            return res;
        }
        res.status = Status::Optimal;
        res.x.assign(n, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < n) res.x[basis[i]] = T[i][ntot];
        res.value = 0;
        for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
        // Multiplier of equality row i is minus the reduced cost of its artificial.
        res.dual.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) res.dual[i] = -final_red[n + i] * row_sign[i];
        return res;
    }

    // max obj.w  s.t.  G w <= h, w >= 0, solved through its dual so the
    // tableau stays small when there are many rows and few variables.
    static Result solve_max_leq(const std::vector<std::vector<double>>& G,
                                const std::vector<double>& h, const std::vector<double>& obj) {
        const std::size_t m = G.size();
        const std::size_t nw = obj.size();
        // dual: min h.y s.t. G^T y - s = obj, y >= 0, s >= 0
        std::vector<std::vector<double>> A(nw, std::vector<double>(m + nw, 0.0));
        std::vector<double> b(nw), cost(m + nw, 0.0);
        for (std::size_t s = 0; s < nw; ++s) {
            for (std::size_t i = 0; i < m; ++i) A[s][i] = G[i][s];
            A[s][m + s] = -1.0;
            b[s] = obj[s];
        }
        for (std::size_t i = 0; i < m; ++i) cost[i] = h[i];
        Result dual_res = solve_standard(std::move(A), std::move(b), cost);
        Result res;
        if (dual_res.status == Status::Infeasible) {
            res.status = Status::Unbounded;  // primal unbounded
            return res;
        }
        if (dual_res.status == Status::Unbounded) {
            res.status = Status::Infeasible;  // primal infeasible
            return res;
        }
        res.status = Status::Optimal;
        res.x = dual_res.dual;  // primal solution = multipliers of the dual
        for (auto& v : res.x) v = std::max(0.0, v);
        res.value = 0;
        for (std::size_t s = 0; s < nw; ++s) res.value += obj[s] * res.x[s];
        return res;
    }

private:
    static void pivot(std::vector<std::vector<double>>& T, std::vector<double>& red,
                      std::vector<std::size_t>& basis, std::size_t row, std::size_t col,
                      std::size_t m, std::size_t ntot) {
        double pv = T[row][col];
        for (std::size_t j = 0; j <= ntot; ++j) T[row][j] /= pv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = T[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= ntot; ++j) T[i][j] -= f * T[row][j];
        }
        double f = red[col];
        if (f != 0.0)
            for (std::size_t j = 0; j <= ntot; ++j) red[j] -= f * T[row][j];
        basis[row] = col;
    }
};

} // namespace singp
