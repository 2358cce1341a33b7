// Desk-scale exact oracles: the time-indexed slowdown feasibility LP, the
// minimum LP-feasible slowdown, and brute-force permutation oracles used to
// certify the fast algorithms.
#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "coflow/feasibility.hpp"
#include "coflow/loads.hpp"
#include "coflow/mps.hpp"
#include "coflow/rational.hpp"
#include "coflow/simplex.hpp"
#include "coflow/types.hpp"

namespace coflow {

inline constexpr size_t kLpVariableGuard = 5000;   // dense exact simplex only
inline constexpr size_t kMaxBruteSlowdownN = 8;
inline constexpr size_t kMaxBruteWcctN = 7;

// Feasibility of the slowdown program in the fluid model.
//
// The time-indexed program admits an exact interval aggregation: slots
// between two consecutive window boundaries share identical constraints, so
// volume is assigned per (flow, interval) instead of per (flow, slot).
// Cutting at the exact release/deadline epochs keeps the final partial slot
// of every window at its exact fractional capacity, which makes the test
// independent of the slot duration and exact for the continuous-deadline
// instance (rounding the deadline down to a slot boundary instead was
// measured to inflate the minimum level by >20% on exponential volumes).
inline bool lp_feasible(const Batch& batch, const Rat& level, const Rat& delta = Rat(1)) {
    if (!(level > Rat(0))) throw precondition_error("lp_feasible: E must be > 0");
    if (!(delta > Rat(0))) throw precondition_error("lp_feasible: delta must be > 0");
    if (batch.size() == 0) return true;

    const auto loads = build_port_loads<Rat>(batch);

    // Per-coflow transmission windows (release, deadline].
    const size_t n = batch.size();
    std::vector<Rat> win_open(n), win_close(n);
    for (size_t j = 0; j < n; ++j) {
        const Coflow& c = batch.coflows[j];
        const Rat release = rat_from_double(c.release);
        const Rat service = loads.bottleneck_time(static_cast<int>(j));
        win_open[j] = release;
        win_close[j] = release + level * service / rat_from_double(c.phi);
        if (!(win_close[j] > win_open[j])) return false;
    }

    std::vector<Rat> cuts;
    for (size_t j = 0; j < n; ++j) {
        cuts.push_back(win_open[j]);
        cuts.push_back(win_close[j]);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    struct Interval { Rat begin, end; };
    std::vector<Interval> intervals;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        intervals.push_back(Interval{cuts[i], cuts[i + 1]});

    struct FlatFlow { size_t coflow; PortId src, dst; Rat volume; };
    std::vector<FlatFlow> flows;
    for (size_t j = 0; j < n; ++j)
        for (const Flow& f : batch.coflows[j].flows)
            flows.push_back(FlatFlow{j, f.src, f.dst, rat_from_double(f.volume)});

    // Variable layout: one volume per (flow, admissible interval).
    LinearProgram<Rat> lp;
    std::vector<std::vector<int>> var(flows.size());
    size_t nv = 0;
    for (size_t f = 0; f < flows.size(); ++f) {
        var[f].assign(intervals.size(), -1);
        for (size_t k = 0; k < intervals.size(); ++k) {
            if (intervals[k].begin < win_open[flows[f].coflow]) continue;
            if (intervals[k].end > win_close[flows[f].coflow]) continue;
            var[f][k] = static_cast<int>(nv++);
        }
    }
    if (nv > kLpVariableGuard)
        throw precondition_error("lp_feasible: instance exceeds the exact-simplex size guard");
    lp.num_vars = static_cast<int>(nv);

    for (size_t f = 0; f < flows.size(); ++f) {
        auto& row = lp.add_row(Rel::Eq, flows[f].volume);
        for (size_t k = 0; k < intervals.size(); ++k)
            if (var[f][k] >= 0) row.coeffs.emplace_back(var[f][k], Rat(1));
    }
    for (PortId port = 1; port <= loads.num_ports; ++port) {
        const Rat cap = rat_from_double(batch.fabric.capacity(port));
        for (size_t k = 0; k < intervals.size(); ++k) {
            std::vector<std::pair<int, Rat>> coeffs;
            Rat max_load(0);
            for (size_t f = 0; f < flows.size(); ++f) {
                if (flows[f].src != port && flows[f].dst != port) continue;
                if (var[f][k] < 0) continue;
                coeffs.emplace_back(var[f][k], Rat(1));
                max_load += flows[f].volume;
            }
            const Rat budget = cap * (intervals[k].end - intervals[k].begin);
            if (coeffs.empty() || max_load <= budget) continue;   // row cannot bind
            auto& row = lp.add_row(Rel::Le, budget);
            row.coeffs = std::move(coeffs);
        }
    }
    return solve_lp(lp).status == LpStatus::Optimal;
}

struct MinSlowdownResult {
    Rat level;          // smallest E proven feasible (within tol of the infimum)
    Rat lower;          // largest E proven infeasible
    size_t lp_solves = 0;
};

// Bisection for the minimum feasible slowdown level. Returns the feasible
// end of the final bracket, so the reported level is always realizable and
// within relative `tol` of the infimum. The search starts from max phi (the
// unconditional lower bound) rather than the primal estimate, so a primal
// estimate exceeding the true minimum would be detected, not masked.
inline MinSlowdownResult min_slowdown_lp(const Batch& batch, const Rat& delta = Rat(1),
                                         const Rat& tol = Rat(1, 1000)) {
    if (batch.size() == 0) throw model_error("min_slowdown_lp: empty batch");
    if (!(tol > Rat(0))) throw precondition_error("min_slowdown_lp: tol must be > 0");

    Rat lo(0);
    for (size_t j = 0; j < batch.size(); ++j)
        lo = std::max(lo, rat_from_double(batch.coflows[j].phi));

    MinSlowdownResult res;
    ++res.lp_solves;
    if (lp_feasible(batch, lo, delta)) {
        // E >= max phi is necessary, so the bound itself is the minimum.
        res.level = lo;
        res.lower = lo;
        return res;
    }

    Rat hi = lo;
    for (int i = 0;; ++i) {
        hi *= 2;
        ++res.lp_solves;
        if (lp_feasible(batch, hi, delta)) break;
        if (i >= 64) throw std::logic_error("min_slowdown_lp: no feasible level found");
    }
    while (hi - lo > tol * hi) {
        const Rat mid = (lo + hi) / 2;
        ++res.lp_solves;
        if (lp_feasible(batch, mid, delta)) hi = mid;
        else lo = mid;
    }
    res.level = hi;
    res.lower = lo;
    return res;
}

// Exhaustive minimum over priority orders of the worst rate-scaled prefix
// load; equals the fast estimate by the optimality theorem and is kept
// deliberately independent of it.
template <class T = Rat>
T brute_min_primal_slowdown(const Batch& batch) {
    const size_t n = batch.size();
    if (n == 0) throw model_error("brute_min_primal_slowdown: empty batch");
    if (n > kMaxBruteSlowdownN)
        throw precondition_error("brute_min_primal_slowdown: N too large");
    if (!batch.all_released_at_zero())
        throw precondition_error("brute_min_primal_slowdown: release times must be zero");

    const auto loads = build_port_loads<T>(batch);
    std::vector<T> rate(n);
    for (size_t j = 0; j < n; ++j)
        rate[j] = scalar_from_double<T>(batch.coflows[j].phi) /
                  loads.bottleneck_time(static_cast<int>(j));

    std::vector<T> prefix(static_cast<size_t>(loads.num_ports), T(0));
    std::vector<bool> used(n, false);
    std::optional<T> best;

    auto dfs = [&](auto&& self, size_t depth, const T& cur) -> void {
        if (depth == n) {
            if (!best || cur < *best) best = cur;
            return;
        }
        for (size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            T port_max(0);
            for (PortId p = 1; p <= loads.num_ports; ++p) {
                const T v = prefix[static_cast<size_t>(p - 1)] + loads.time_load(p, static_cast<int>(j));
                if (v > port_max) port_max = v;
            }
            const T val = rate[j] * port_max;
            const T next = std::max(cur, val);
            if (best && next >= *best) continue;
            used[j] = true;
            for (PortId p = 1; p <= loads.num_ports; ++p)
                prefix[static_cast<size_t>(p - 1)] += loads.time_load(p, static_cast<int>(j));
            self(self, depth + 1, next);
            for (PortId p = 1; p <= loads.num_ports; ++p)
                prefix[static_cast<size_t>(p - 1)] -= loads.time_load(p, static_cast<int>(j));
            used[j] = false;
        }
    };
    dfs(dfs, 0, T(0));
    return *best;
}

template <class T>
struct BruteWcctResult {
    bool feasible = false;
    T value{};
    std::vector<CoflowId> order;
};

// Minimum weighted sum of prefix completion bounds over primal-feasible
// permutations; a valid lower bound on the optimum of the scheduling
// program because ports are relaxed to independent machines.
template <class T = Rat>
BruteWcctResult<T> brute_opt_wcct(const Batch& batch, const std::vector<T>& w,
                                  const DeadlineVector<T>& dl) {
    const size_t n = batch.size();
    if (n == 0) throw model_error("brute_opt_wcct: empty batch");
    if (n > kMaxBruteWcctN) throw precondition_error("brute_opt_wcct: N too large");
    if (!batch.all_released_at_zero())
        throw precondition_error("brute_opt_wcct: release times must be zero");

    const auto loads = build_port_loads<T>(batch);
    std::vector<T> prefix(static_cast<size_t>(loads.num_ports), T(0));
    std::vector<bool> used(n, false);
    std::vector<int> cur_order(n, -1), best_order;
    std::optional<T> best;

    auto dfs = [&](auto&& self, size_t depth, const T& cur) -> void {
        if (depth == n) {
            if (!best || cur < *best) {
                best = cur;
                best_order = cur_order;
            }
            return;
        }
        for (size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            T port_max(0);
            for (PortId p = 1; p <= loads.num_ports; ++p) {
                const T v = prefix[static_cast<size_t>(p - 1)] + loads.time_load(p, static_cast<int>(j));
                if (v > port_max) port_max = v;
            }
            if (!dl.meets(j, port_max, detail::feas_eps<T>())) continue;   // prefix deadline violated
            const T next = cur + w[j] * port_max;
            if (best && next >= *best) continue;
            used[j] = true;
            cur_order[depth] = static_cast<int>(j);
            for (PortId p = 1; p <= loads.num_ports; ++p)
                prefix[static_cast<size_t>(p - 1)] += loads.time_load(p, static_cast<int>(j));
            self(self, depth + 1, next);
            for (PortId p = 1; p <= loads.num_ports; ++p)
                prefix[static_cast<size_t>(p - 1)] -= loads.time_load(p, static_cast<int>(j));
            used[j] = false;
        }
    };
    dfs(dfs, 0, T(0));

    BruteWcctResult<T> res;
    if (!best) return res;
    res.feasible = true;
    res.value = *best;
    for (int col : best_order) res.order.push_back(batch.coflows[static_cast<size_t>(col)].id);
    return res;
}

}  // namespace coflow
