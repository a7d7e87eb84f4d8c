#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "rackopt/milp/model.hpp"

namespace rackopt::milp::detail {

/// Row/column data of an LP in computational form: all rows are ranged by a
/// slack variable, structural bounds are supplied per solve so that the
/// branch-and-bound layer can share one core across nodes.
struct LpCore {
    int num_rows = 0;
    int num_structural = 0;
    std::vector<std::vector<std::pair<int, double>>> cols;  // structural columns: (row, coef)
    std::vector<double> cost;                               // structural costs, minimize
    std::vector<ConstraintSense> sense;
    std::vector<double> rhs;
};

enum class LpStatus { optimal, infeasible, unbounded, aborted };

struct LpSolution {
    LpStatus status = LpStatus::aborted;
    double objective = 0.0;
    std::vector<double> x;  // structural values, clamped to the true bounds
    long iterations = 0;
};

/// Bounded-variable primal simplex, two phases with artificial variables.
///
/// The basis inverse is kept as a dense column-major matrix, updated on every
/// pivot and recomputed at a fixed interval. Pricing is Dantzig (most
/// negative reduced cost), switching to Bland's rule after a run of
/// degenerate pivots, which guarantees termination. Degeneracy is further
/// defused by expanding every finite bound and shifting every cost by a tiny
/// index-keyed amount; a final pass with the exact costs removes the cost
/// shift, and reported values are clamped back to the true bounds. All
/// tie-breaks are by lowest index, so a solve is a pure function of its
/// inputs.
class SimplexSolver {
public:
    struct Config {
        double feas_tol = 1e-7;
        double opt_tol = 1e-9;
        double pivot_tol = 1e-7;       // ratio-test admissibility
        double pivot_accept = 1e-5;    // preferred minimum pivot magnitude
        double ratio_tol = 1e-9;
        double degen_tol = 1e-7;
        double bound_pert = 1e-9;
        double cost_pert = 1e-8;
        int bland_trigger = 64;
        int refactor_interval = 100;
        long max_iterations = 0;  // 0: derived from problem size
    };

    explicit SimplexSolver(const LpCore& core) : SimplexSolver(core, Config()) {}

    SimplexSolver(const LpCore& core, Config cfg) : core_(core), cfg_(cfg) {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        total_ = n + 2 * m;
        lower_.assign(total_, 0.0);
        upper_.assign(total_, 0.0);
        cost_.assign(total_, 0.0);
        x_.assign(total_, 0.0);
        state_.assign(total_, State::at_lower);
        art_sign_.assign(m, 1.0);
        basic_.assign(m, -1);
        basis_pos_.assign(total_, -1);
        binv_.assign(static_cast<size_t>(m) * m, 0.0);
        work_y_.assign(m, 0.0);
        work_w_.assign(m, 0.0);
        work_r_.assign(m, 0.0);
    }

    /// Solves with the given structural bounds (slack bounds derive from row
    /// senses). `lb.size() == ub.size() == num_structural`.
    LpSolution solve(const std::vector<double>& lb, const std::vector<double>& ub) {
        LpSolution out = attempt(lb, ub);
        if (out.status == LpStatus::aborted) {
            // One retry with tighter numerics before giving up.
            Config strict = cfg_;
            strict.refactor_interval = 24;
            strict.pivot_tol = 1e-6;
            strict.pivot_accept = 1e-4;
            strict.bland_trigger = 24;
            std::swap(cfg_, strict);
            LpSolution second = attempt(lb, ub);
            second.iterations += out.iterations;
            std::swap(cfg_, strict);
            return second;
        }
        return out;
    }

private:
    enum class State : std::uint8_t { basic, at_lower, at_upper, free_zero };
    enum class LoopResult { optimal, unbounded, aborted };

    // Small index-keyed factor in [1, 2), used to make perturbations generic.
    static double spread(int j, std::uint32_t salt) {
        const std::uint32_t h = (static_cast<std::uint32_t>(j) + salt) * 2654435761u;
        return 1.0 + static_cast<double>(h & 1023u) / 1024.0;
    }

    double phase1_tol() const {
        double scale = 1.0;
        for (double b : core_.rhs) scale = std::max(scale, std::abs(b));
        return cfg_.feas_tol * scale;
    }

    bool is_fixed(int j) const { return lower_[j] >= upper_[j]; }

    LpSolution attempt(const std::vector<double>& lb, const std::vector<double>& ub) {
        const int m = core_.num_rows;
        const int n = core_.num_structural;

        LpSolution out;
        setup_bounds(lb, ub);
        setup_initial_point();

        bool need_phase1 = false;
        for (int i = 0; i < m; ++i) {
            if (basic_[i] >= n + m) { need_phase1 = true; break; }
        }

        long iters = 0;
        if (need_phase1) {
            for (int j = 0; j < total_; ++j) {
                cost_[j] = (j >= n + m ? 1.0 : 0.0) + cfg_.cost_pert * spread(j, 17);
            }
            LoopResult r = run(iters);
            if (r != LoopResult::optimal) {
                // Phase 1 has a finite optimum; anything else is numerical.
                out.status = LpStatus::aborted;
                out.iterations = iters;
                return out;
            }
            double infeas = 0.0;
            for (int j = n + m; j < total_; ++j) infeas += x_[j];
            if (infeas > phase1_tol()) {
                out.status = LpStatus::infeasible;
                out.iterations = iters;
                return out;
            }
            seal_artificials();
        }

        // Main pass with shifted costs, then a cleanup pass with exact costs.
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < total_; ++j) {
                double c = (j < n) ? core_.cost[j] : 0.0;
                if (pass == 0 && j < n) {
                    c += cfg_.cost_pert * std::max(1.0, std::abs(c)) * spread(j, 1);
                }
                cost_[j] = c;
            }
            LoopResult r = run(iters);
            out.iterations = iters;
            if (r == LoopResult::unbounded) {
                out.status = LpStatus::unbounded;
                return out;
            }
            if (r == LoopResult::aborted) {
                out.status = LpStatus::aborted;
                return out;
            }
        }

        out.status = LpStatus::optimal;
        out.x.assign(n, 0.0);
        out.objective = 0.0;
        for (int j = 0; j < n; ++j) {
            out.x[j] = std::min(std::max(x_[j], lb[j]), ub[j]);
            out.objective += core_.cost[j] * out.x[j];
        }
        return out;
    }

    void setup_bounds(const std::vector<double>& lb, const std::vector<double>& ub) {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        for (int j = 0; j < n; ++j) {
            lower_[j] = lb[j];
            upper_[j] = ub[j];
        }
        for (int i = 0; i < m; ++i) {
            switch (core_.sense[i]) {
                case ConstraintSense::less_equal:
                    lower_[n + i] = 0.0; upper_[n + i] = kInfinity; break;
                case ConstraintSense::equal:
                    lower_[n + i] = 0.0; upper_[n + i] = 0.0; break;
                case ConstraintSense::greater_equal:
                    lower_[n + i] = -kInfinity; upper_[n + i] = 0.0; break;
            }
            lower_[n + m + i] = 0.0;  // artificials widen on demand below
            upper_[n + m + i] = 0.0;
        }
        // Expand every finite bound by a tiny index-keyed amount; this keeps
        // basic variables generically off their bounds and shrinks the
        // degenerate pivot runs. The expansion sits far below the feasibility
        // tolerance and reported values are clamped back.
        for (int j = 0; j < n + m; ++j) {
            const double e = cfg_.bound_pert * spread(j, 5);
            if (std::isfinite(lower_[j])) lower_[j] -= e;
            if (std::isfinite(upper_[j])) upper_[j] += e;
        }
    }

    void setup_initial_point() {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        std::fill(basis_pos_.begin(), basis_pos_.end(), -1);

        for (int j = 0; j < n; ++j) {
            if (std::isfinite(lower_[j])) { state_[j] = State::at_lower; x_[j] = lower_[j]; }
            else if (std::isfinite(upper_[j])) { state_[j] = State::at_upper; x_[j] = upper_[j]; }
            else { state_[j] = State::free_zero; x_[j] = 0.0; }
        }

        // Residual of each row with all structurals at their initial values.
        for (int i = 0; i < m; ++i) work_r_[i] = core_.rhs[i];
        for (int j = 0; j < n; ++j) {
            if (x_[j] == 0.0) continue;
            for (const auto& [row, coef] : core_.cols[j]) work_r_[row] -= coef * x_[j];
        }

        // Identity basis: the slack where it fits, otherwise an artificial.
        std::fill(binv_.begin(), binv_.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            const int slack = n + i;
            const int art = n + m + i;
            const double v = work_r_[i];
            art_sign_[i] = 1.0;
            upper_[art] = 0.0;
            if (v >= lower_[slack] && v <= upper_[slack]) {
                make_basic(slack, i, v);
                state_[art] = State::at_lower;
                x_[art] = 0.0;
            } else {
                const double s = (v < lower_[slack]) ? lower_[slack] : upper_[slack];
                state_[slack] = (v < lower_[slack]) ? State::at_lower : State::at_upper;
                x_[slack] = s;
                const double res = v - s;
                art_sign_[i] = (res >= 0.0) ? 1.0 : -1.0;
                upper_[art] = kInfinity;
                make_basic(art, i, std::abs(res));
            }
            binv_[static_cast<size_t>(i) * m + i] = 1.0;  // basis columns are +/- unit vectors
            if (basic_[i] == n + m + i && art_sign_[i] < 0.0) {
                binv_[static_cast<size_t>(i) * m + i] = -1.0;
            }
        }
    }

    void make_basic(int j, int row, double value) {
        basic_[row] = j;
        basis_pos_[j] = row;
        state_[j] = State::basic;
        x_[j] = value;
    }

    // dot(col_j, y) over the full constraint matrix.
    double col_dot(int j, const std::vector<double>& y) const {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        if (j < n) {
            double s = 0.0;
            for (const auto& [row, coef] : core_.cols[j]) s += coef * y[row];
            return s;
        }
        if (j < n + m) return y[j - n];
        return art_sign_[j - n - m] * y[j - n - m];
    }

    // w = Binv * col_j, using the column-major inverse.
    void ftran(int j) {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        std::fill(work_w_.begin(), work_w_.end(), 0.0);
        auto axpy = [&](int row, double coef) {
            const double* col = binv_.data() + static_cast<size_t>(row) * m;
            for (int i = 0; i < m; ++i) work_w_[i] += coef * col[i];
        };
        if (j < n) {
            for (const auto& [row, coef] : core_.cols[j]) axpy(row, coef);
        } else if (j < n + m) {
            axpy(j - n, 1.0);
        } else {
            axpy(j - n - m, art_sign_[j - n - m]);
        }
    }

    // y = Binv^T * c_B.
    void btran() {
        const int m = core_.num_rows;
        for (int k = 0; k < m; ++k) {
            const double* col = binv_.data() + static_cast<size_t>(k) * m;
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += col[i] * cost_[basic_[i]];
            work_y_[k] = s;
        }
    }

    LoopResult run(long& iters) {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        const long cap = cfg_.max_iterations > 0
                             ? cfg_.max_iterations
                             : 5000 + 100L * (static_cast<long>(n) + m);
        int degen_run = 0;
        bool bland = false;
        bool accept_tiny = false;
        int since_refactor = 0;
        int post_refactor_retries = 0;
        std::vector<char> shunned(total_, 0);  // columns skipped for tiny pivots this round

        for (;;) {
            if (iters >= cap) return LoopResult::aborted;
            if (since_refactor >= cfg_.refactor_interval) {
                if (!refactor()) return LoopResult::aborted;
                since_refactor = 0;
            }

            btran();

            // Pricing; shunned columns (tiny pivot earlier in this round) are
            // skipped until any pivot succeeds.
            int q = -1;
            double best_score = cfg_.opt_tol;
            int dir = 0;
            bool saw_shunned = false;
            for (int j = 0; j < total_; ++j) {
                const State st = state_[j];
                if (st == State::basic || is_fixed(j)) continue;
                if (shunned[j]) { saw_shunned = true; continue; }
                const double d = cost_[j] - col_dot(j, work_y_);
                double score = 0.0;
                int cand_dir = 0;
                if (st == State::at_lower && d < -cfg_.opt_tol) { score = -d; cand_dir = +1; }
                else if (st == State::at_upper && d > cfg_.opt_tol) { score = d; cand_dir = -1; }
                else if (st == State::free_zero && std::abs(d) > cfg_.opt_tol) {
                    score = std::abs(d);
                    cand_dir = d < 0 ? +1 : -1;
                }
                if (cand_dir == 0) continue;
                if (bland) { q = j; dir = cand_dir; break; }
                if (score > best_score) { best_score = score; q = j; dir = cand_dir; }
            }
            if (q < 0) {
                if (saw_shunned) {
                    // Only unstable candidates remain; accept them now.
                    std::fill(shunned.begin(), shunned.end(), 0);
                    accept_tiny = true;
                    continue;
                }
                // Re-verify on a fresh factorization before declaring optimality.
                if (since_refactor > 0 && post_refactor_retries < 3) {
                    if (!refactor()) return LoopResult::aborted;
                    since_refactor = 0;
                    ++post_refactor_retries;
                    continue;
                }
                return LoopResult::optimal;
            }

            ftran(q);

            // Ratio test: entering moves by delta >= 0 in direction dir; the
            // basic variable in slot i changes at rate -dir*w[i].
            double flip_limit = kInfinity;
            if (std::isfinite(lower_[q]) && std::isfinite(upper_[q])) flip_limit = upper_[q] - lower_[q];
            double best_delta = flip_limit;
            int leave = -1;       // row slot
            int leave_to = 0;     // -1: lower, +1: upper
            double leave_piv = 0.0;
            for (int i = 0; i < m; ++i) {
                const double rate = dir * work_w_[i];
                const int bj = basic_[i];
                double delta;
                int to;
                if (rate > cfg_.pivot_tol) {
                    if (!std::isfinite(lower_[bj])) continue;
                    delta = (x_[bj] - lower_[bj]) / rate;
                    to = -1;
                } else if (rate < -cfg_.pivot_tol) {
                    if (!std::isfinite(upper_[bj])) continue;
                    delta = (upper_[bj] - x_[bj]) / (-rate);
                    to = +1;
                } else {
                    continue;
                }
                if (delta < 0.0) delta = 0.0;
                bool better = false;
                if (delta < best_delta - cfg_.ratio_tol) {
                    better = true;
                } else if (delta <= best_delta + cfg_.ratio_tol) {
                    if (leave < 0) {
                        better = true;
                    } else if (bland) {
                        better = bj < basic_[leave];
                    } else {
                        const double cur = std::abs(work_w_[i]);
                        const double prev = std::abs(leave_piv);
                        better = cur > prev + 1e-12 || (std::abs(cur - prev) <= 1e-12 && bj < basic_[leave]);
                    }
                }
                if (better) {
                    best_delta = std::min(delta, best_delta);
                    leave = i;
                    leave_to = to;
                    leave_piv = work_w_[i];
                }
            }

            if (leave < 0 && !std::isfinite(flip_limit)) return LoopResult::unbounded;

            // Reject entering columns whose only pivots are tiny, unless no
            // stable alternative remains.
            if (leave >= 0 && std::abs(leave_piv) < cfg_.pivot_accept && !bland && !accept_tiny) {
                shunned[q] = 1;
                continue;
            }

            ++iters;
            ++since_refactor;
            post_refactor_retries = 0;
            accept_tiny = false;
            std::fill(shunned.begin(), shunned.end(), 0);

            const double delta = (leave < 0) ? flip_limit : best_delta;
            if (delta > cfg_.degen_tol) { degen_run = 0; bland = false; }
            else if (!bland && ++degen_run > cfg_.bland_trigger) { bland = true; }

            if (delta != 0.0) {
                for (int i = 0; i < m; ++i) {
                    if (work_w_[i] != 0.0) x_[basic_[i]] -= dir * delta * work_w_[i];
                }
            }

            if (leave < 0) {
                // Bound flip, basis unchanged.
                state_[q] = (state_[q] == State::at_lower) ? State::at_upper : State::at_lower;
                x_[q] = (state_[q] == State::at_lower) ? lower_[q] : upper_[q];
                continue;
            }

            const int out_var = basic_[leave];
            const double enter_value = x_[q] + dir * delta;
            state_[out_var] = (leave_to < 0) ? State::at_lower : State::at_upper;
            x_[out_var] = (leave_to < 0) ? lower_[out_var] : upper_[out_var];
            basis_pos_[out_var] = -1;
            make_basic(q, leave, enter_value);
            update_binv(leave);
        }
    }

    // Rank-one update of the column-major inverse after pivoting work_w_ on
    // row slot `r`.
    void update_binv(int r) {
        const int m = core_.num_rows;
        const double piv = work_w_[r];
        for (int k = 0; k < m; ++k) {
            double* col = binv_.data() + static_cast<size_t>(k) * m;
            const double t = col[r] / piv;
            if (t == 0.0) { col[r] = 0.0; continue; }
            for (int i = 0; i < m; ++i) col[i] -= work_w_[i] * t;
            col[r] = t;
        }
    }

    // Recomputes the inverse and the basic values from scratch.
    bool refactor() {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        if (m == 0) return true;

        std::vector<double> a(static_cast<size_t>(m) * m, 0.0);  // basis, column-major
        for (int i = 0; i < m; ++i) {
            const int j = basic_[i];
            if (j < n) {
                for (const auto& [row, coef] : core_.cols[j]) a[static_cast<size_t>(i) * m + row] = coef;
            } else if (j < n + m) {
                a[static_cast<size_t>(i) * m + (j - n)] = 1.0;
            } else {
                a[static_cast<size_t>(i) * m + (j - n - m)] = art_sign_[j - n - m];
            }
        }

        // Gauss-Jordan with partial pivoting on [A | I]; row operations hit
        // both sides, so inv accumulates exactly A^{-1}.
        std::vector<double>& inv = binv_;
        std::fill(inv.begin(), inv.end(), 0.0);
        for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;
        for (int c = 0; c < m; ++c) {
            int piv_row = -1;
            double piv_val = 0.0;
            for (int i = c; i < m; ++i) {
                const double v = std::abs(a[static_cast<size_t>(c) * m + i]);
                if (v > piv_val) { piv_val = v; piv_row = i; }
            }
            if (piv_row < 0 || piv_val < 1e-12) return false;  // singular basis
            if (piv_row != c) {
                for (int k = 0; k < m; ++k) {
                    std::swap(a[static_cast<size_t>(k) * m + c], a[static_cast<size_t>(k) * m + piv_row]);
                    std::swap(inv[static_cast<size_t>(k) * m + c], inv[static_cast<size_t>(k) * m + piv_row]);
                }
            }
            const double p = a[static_cast<size_t>(c) * m + c];
            for (int k = 0; k < m; ++k) {
                a[static_cast<size_t>(k) * m + c] /= p;
                inv[static_cast<size_t>(k) * m + c] /= p;
            }
            for (int i = 0; i < m; ++i) {
                if (i == c) continue;
                const double f = a[static_cast<size_t>(c) * m + i];
                if (f == 0.0) continue;
                for (int k = 0; k < m; ++k) {
                    a[static_cast<size_t>(k) * m + i] -= f * a[static_cast<size_t>(k) * m + c];
                    inv[static_cast<size_t>(k) * m + i] -= f * inv[static_cast<size_t>(k) * m + c];
                }
            }
        }
        recompute_basic_values();
        return true;
    }

    void recompute_basic_values() {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        for (int i = 0; i < m; ++i) work_r_[i] = core_.rhs[i];
        for (int j = 0; j < total_; ++j) {
            if (state_[j] == State::basic || x_[j] == 0.0) continue;
            if (j < n) {
                for (const auto& [row, coef] : core_.cols[j]) work_r_[row] -= coef * x_[j];
            } else if (j < n + m) {
                work_r_[j - n] -= x_[j];
            } else {
                work_r_[j - n - m] -= art_sign_[j - n - m] * x_[j];
            }
        }
        for (int i = 0; i < m; ++i) x_[basic_[i]] = 0.0;
        for (int k = 0; k < m; ++k) {
            const double rk = work_r_[k];
            if (rk == 0.0) continue;
            const double* col = binv_.data() + static_cast<size_t>(k) * m;
            for (int i = 0; i < m; ++i) x_[basic_[i]] += col[i] * rk;
        }
    }

    // After phase 1: artificials are pinned to zero; basic ones are pivoted
    // out where a usable pivot element exists, otherwise their row is
    // redundant and the variable stays basic at zero.
    void seal_artificials() {
        const int m = core_.num_rows;
        const int n = core_.num_structural;
        for (int i = 0; i < m; ++i) {
            upper_[n + m + i] = 0.0;
            const int bj = basic_[i];
            if (bj < n + m) continue;
            int enter = -1;
            for (int j = 0; j < n + m; ++j) {
                if (state_[j] == State::basic || is_fixed(j)) continue;
                // Pivot element (Binv * A_j)[i].
                double e = 0.0;
                if (j < n) {
                    for (const auto& [row, coef] : core_.cols[j])
                        e += coef * binv_[static_cast<size_t>(row) * m + i];
                } else {
                    e = binv_[static_cast<size_t>(j - n) * m + i];
                }
                if (std::abs(e) > cfg_.pivot_accept) { enter = j; break; }
            }
            if (enter < 0) continue;  // redundant row
            ftran(enter);
            const double entering_value = x_[enter];
            state_[bj] = State::at_lower;
            x_[bj] = 0.0;
            basis_pos_[bj] = -1;
            make_basic(enter, i, entering_value);
            update_binv(i);
            recompute_basic_values();
        }
    }

    const LpCore& core_;
    Config cfg_;
    int total_ = 0;
    std::vector<double> lower_, upper_, cost_, x_;
    std::vector<State> state_;
    std::vector<double> art_sign_;
    std::vector<int> basic_;
    std::vector<int> basis_pos_;
    std::vector<double> binv_;  // column-major m x m
    std::vector<double> work_y_, work_w_, work_r_;
};

}  // namespace rackopt::milp::detail
