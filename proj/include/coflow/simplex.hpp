// Dense two-phase simplex with Bland's rule. Intended for exact rational
// scalars on desk-scale programs, where guaranteed termination and exact
// feasibility answers matter more than speed.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coflow {

enum class Rel { Le, Ge, Eq };

template <class T>
struct LpRow {
    std::vector<std::pair<int, T>> coeffs;   // (variable, coefficient)
    Rel rel = Rel::Le;
    T rhs{};
};

template <class T>
struct LinearProgram {
    int num_vars = 0;
    std::vector<T> objective;       // minimize c'x; empty = feasibility only
    std::vector<LpRow<T>> rows;     // x >= 0 implicit

    LpRow<T>& add_row(Rel rel, T rhs) {
        rows.push_back(LpRow<T>{{}, rel, std::move(rhs)});
        return rows.back();
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    T objective{};
    std::vector<T> x;
};

template <class T>
class SimplexSolver {
public:
    explicit SimplexSolver(const LinearProgram<T>& lp) : lp_(lp) { build(); }

    LpSolution<T> solve() {
        LpSolution<T> out;
        if (!phase1()) {
            out.status = LpStatus::Infeasible;
            return out;
        }
        if (!lp_.objective.empty()) {
            load_phase2_costs();
            if (!run_pivots(/*allow_artificials=*/false)) {
                out.status = LpStatus::Unbounded;
                return out;
            }
        }
        out.status = LpStatus::Optimal;
        out.x.assign(static_cast<size_t>(lp_.num_vars), T(0));
        for (size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] < lp_.num_vars) out.x[static_cast<size_t>(basis_[i])] = rhs(i);
        out.objective = T(0);
        for (size_t j = 0; j < lp_.objective.size(); ++j) out.objective += lp_.objective[j] * out.x[j];
        return out;
    }

private:
    const LinearProgram<T>& lp_;
    size_t m_ = 0;                 // rows
    size_t width_ = 0;             // structural + slack + artificial columns
    int first_art_ = 0;
    std::vector<T> tab_;           // m x (width + 1), last column = rhs
    std::vector<T> cost_;          // width + 1 (last = -objective value)
    std::vector<int> basis_;

    T& at(size_t i, size_t j) { return tab_[i * (width_ + 1) + j]; }
    const T& at(size_t i, size_t j) const { return tab_[i * (width_ + 1) + j]; }
    T& rhs(size_t i) { return tab_[i * (width_ + 1) + width_]; }

    void build() {
        m_ = lp_.rows.size();
        // One slack/surplus per inequality, one artificial per row lacking a
        // ready-made basic column.
        size_t n_slack = 0;
        for (const auto& r : lp_.rows)
            if (r.rel != Rel::Eq) ++n_slack;

        std::vector<int> slack_col(m_, -1);
        size_t next = static_cast<size_t>(lp_.num_vars);
        for (size_t i = 0; i < m_; ++i)
            if (lp_.rows[i].rel != Rel::Eq) slack_col[i] = static_cast<int>(next++);
        first_art_ = static_cast<int>(next);

        // Rows needing artificials: Eq rows and rows whose slack enters with
        // coefficient -1 after normalizing the rhs to be non-negative.
        std::vector<int> art_col(m_, -1);
        std::vector<int> sign(m_, 1);
        for (size_t i = 0; i < m_; ++i) {
            const auto& r = lp_.rows[i];
            sign[i] = (r.rhs < T(0)) ? -1 : 1;
            Rel rel = r.rel;
            if (sign[i] < 0) rel = (rel == Rel::Le) ? Rel::Ge : (rel == Rel::Ge ? Rel::Le : Rel::Eq);
            const bool slack_is_basic = (rel == Rel::Le);
            if (!slack_is_basic) art_col[i] = static_cast<int>(next++);
        }
        width_ = next;
        tab_.assign(m_ * (width_ + 1), T(0));
        basis_.assign(m_, -1);

        for (size_t i = 0; i < m_; ++i) {
            const auto& r = lp_.rows[i];
            for (const auto& [v, c] : r.coeffs) {
                if (v < 0 || v >= lp_.num_vars) throw std::invalid_argument("simplex: bad variable index");
                at(i, static_cast<size_t>(v)) += sign[i] < 0 ? -c : c;
            }
            rhs(i) = sign[i] < 0 ? -r.rhs : r.rhs;
            if (slack_col[i] >= 0)
                at(i, static_cast<size_t>(slack_col[i])) = (lp_.rows[i].rel == Rel::Le ? T(1) : T(-1)) *
                                                            (sign[i] < 0 ? T(-1) : T(1));
            if (art_col[i] >= 0) {
                at(i, static_cast<size_t>(art_col[i])) = T(1);
                basis_[i] = art_col[i];
            } else {
                basis_[i] = slack_col[i];
            }
        }
    }

    // Phase-1 cost row: minimize the sum of artificials, expressed in terms
    // of the non-basic columns (unit cost on every artificial, with the
    // basic artificial rows priced out).
    bool phase1() {
        cost_.assign(width_ + 1, T(0));
        for (size_t j = static_cast<size_t>(first_art_); j < width_; ++j) cost_[j] = T(1);
        bool any_art = false;
        for (size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= first_art_) {
                any_art = true;
                for (size_t j = 0; j <= width_; ++j) cost_[j] -= at(i, j);
            }
        }
        if (any_art) {
            if (!run_pivots(/*allow_artificials=*/true))
                throw std::logic_error("simplex: phase 1 unbounded");
            if (cost_[width_] != T(0)) return false;   // residual infeasibility
            drive_out_artificials();
        }
        return true;
    }

    void drive_out_artificials() {
        for (size_t i = 0; i < m_; ++i) {
            if (basis_[i] < first_art_) continue;
            size_t j = 0;
            for (; j < static_cast<size_t>(first_art_); ++j)
                if (at(i, j) != T(0)) break;
            if (j == static_cast<size_t>(first_art_)) continue;   // redundant row
            pivot(i, j);
        }
    }

    void load_phase2_costs() {
        cost_.assign(width_ + 1, T(0));
        for (size_t j = 0; j < lp_.objective.size(); ++j) cost_[j] = lp_.objective[j];
        // Price out the basic columns.
        for (size_t i = 0; i < m_; ++i) {
            const int b = basis_[i];
            if (b < 0 || b >= static_cast<int>(lp_.objective.size())) continue;
            if (cost_[static_cast<size_t>(b)] == T(0)) continue;
            const T f = cost_[static_cast<size_t>(b)];
            for (size_t j = 0; j <= width_; ++j) cost_[j] -= f * at(i, j);
        }
    }

    bool run_pivots(bool allow_artificials) {
        const size_t col_limit = allow_artificials ? width_ : static_cast<size_t>(first_art_);
        for (;;) {
            int enter = -1;
            for (size_t j = 0; j < col_limit; ++j)
                if (cost_[j] < T(0)) { enter = static_cast<int>(j); break; }   // Bland: lowest index
            if (enter < 0) return true;
            int leave = -1;
            for (size_t i = 0; i < m_; ++i) {
                if (!(at(i, static_cast<size_t>(enter)) > T(0))) continue;
                if (leave < 0) { leave = static_cast<int>(i); continue; }
                const T& a_new = at(i, static_cast<size_t>(enter));
                const T& a_old = at(static_cast<size_t>(leave), static_cast<size_t>(enter));
                const T lhs = rhs(i) * a_old;
                const T rhs_v = tab_[static_cast<size_t>(leave) * (width_ + 1) + width_] * a_new;
                if (lhs < rhs_v || (lhs == rhs_v && basis_[i] < basis_[static_cast<size_t>(leave)]))
                    leave = static_cast<int>(i);
            }
            if (leave < 0) return false;   // unbounded direction
            pivot(static_cast<size_t>(leave), static_cast<size_t>(enter));
        }
    }

    void pivot(size_t row, size_t col) {
        const T p = at(row, col);
        if (p == T(0)) throw std::logic_error("simplex: zero pivot");
        for (size_t j = 0; j <= width_; ++j) at(row, j) /= p;
        for (size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const T f = at(i, col);
            if (f == T(0)) continue;
            for (size_t j = 0; j <= width_; ++j) at(i, j) -= f * at(row, j);
        }
        const T fc = cost_[col];
        if (fc != T(0))
            for (size_t j = 0; j <= width_; ++j) cost_[j] -= fc * at(row, j);
        basis_[row] = static_cast<int>(col);
    }
};

template <class T>
LpSolution<T> solve_lp(const LinearProgram<T>& lp) {
    return SimplexSolver<T>(lp).solve();
}

}  // namespace coflow
