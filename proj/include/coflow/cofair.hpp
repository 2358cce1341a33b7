// Primal-dual construction of slowdown-feasible priority orders.
//
// Each iteration picks a pivot bottleneck port, restricts attention to the
// coflows that may legally finish last on all their ports (tail-feasible),
// schedules the Smith-rule minimizer last on the pivot, and performs the
// corresponding dual weight update. The recorded (port, tail set, y) entries
// form a feasible dual solution; the weight updates are exactly forward
// Gaussian elimination on the triangular dual system.
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "coflow/feasibility.hpp"
#include "coflow/loads.hpp"
#include "coflow/types.hpp"

namespace coflow {

template <class T>
struct PivotContext {
    const PortLoadMatrix<T>* loads = nullptr;
    const std::vector<bool>* in_set = nullptr;   // by column
    const std::vector<T>* port_time = nullptr;   // T_l(A), by port-1
};

// Default pivot rule: the most charged port, ties to the lowest port id.
template <class T>
PortId most_charged_port(const PivotContext<T>& ctx) {
    PortId best = 1;
    const auto& tl = *ctx.port_time;
    for (PortId p = 2; p <= static_cast<PortId>(tl.size()); ++p)
        if (tl[static_cast<size_t>(p - 1)] > tl[static_cast<size_t>(best - 1)]) best = p;
    return best;
}

template <class T>
using PivotRule = std::function<PortId(const PivotContext<T>&)>;

// One dual variable y_{port, tail_set} produced at step k, plus enough trace
// to replay the weight elimination independently.
template <class T>
struct DualEntry {
    PortId port = 0;                // pivot bottleneck mu_k
    std::vector<int> tail_set;      // F_k as batch columns, ascending
    int pivot_column = -1;          // sigma(k)
    T y{};
};

template <class T>
struct DualCertificate {
    std::vector<DualEntry<T>> entries;        // step order k = N..1
    std::vector<T> alpha;                     // by column
    std::vector<std::vector<T>> weight_trace; // residual weights after each step;
                                              // weight_trace[0] = w + alpha
};

template <class T>
struct CofairInfeasible {
    size_t step = 0;            // k at failure (N counts down to 1)
    PortId pivot = 0;
    bool tail_set_empty = true; // false: tail coflows exist but none on pivot
};

template <class T>
struct CofairResult {
    bool feasible = false;
    SigmaOrder<T> order;
    DualCertificate<T> certificate;
    std::optional<CofairInfeasible<T>> infeasible;
};

// T_l(A) for every port.
template <class T>
std::vector<T> port_times(const PortLoadMatrix<T>& loads, const std::vector<bool>& in_set) {
    std::vector<T> tl(static_cast<size_t>(loads.num_ports), T(0));
    for (PortId p = 1; p <= loads.num_ports; ++p)
        for (size_t j = 0; j < loads.cols(); ++j)
            if (in_set[j]) tl[static_cast<size_t>(p - 1)] += loads.time_load(p, static_cast<int>(j));
    return tl;
}

template <class T>
PortId pivot_bottleneck(const PortLoadMatrix<T>& loads, const std::vector<bool>& in_set) {
    const auto tl = port_times(loads, in_set);
    PivotContext<T> ctx{&loads, &in_set, &tl};
    return most_charged_port(ctx);
}

// Tail-feasible coflows of the set: j qualifies iff T_l(A) <= D_j on every
// port where j is active.
template <class T>
std::vector<int> tail_feasible(const PortLoadMatrix<T>& loads, const std::vector<bool>& in_set,
                               const std::vector<T>& port_time, const DeadlineVector<T>& dl) {
    std::vector<int> out;
    const T eps = detail::feas_eps<T>();
    for (size_t j = 0; j < loads.cols(); ++j) {
        if (!in_set[j]) continue;
        bool ok = true;
        for (PortId p = 1; p <= loads.num_ports && ok; ++p) {
            if (!(loads.volume(p, static_cast<int>(j)) > T(0))) continue;
            if (dl.is_finite(j) && !(port_time[static_cast<size_t>(p - 1)] <= dl.value[j] + eps))
                ok = false;
        }
        if (ok) out.push_back(static_cast<int>(j));
    }
    return out;
}

template <class T>
std::vector<int> tail_feasible(const PortLoadMatrix<T>& loads, const std::vector<bool>& in_set,
                               const DeadlineVector<T>& dl) {
    return tail_feasible(loads, in_set, port_times(loads, in_set), dl);
}

template <class T = double>
CofairResult<T> cofair(const Batch& batch, const DeadlineVector<T>& dl, const std::vector<T>& w,
                       const std::vector<T>& alpha, PivotRule<T> pivot = nullptr) {
    const size_t n = batch.size();
    if (n == 0) throw model_error("cofair: empty batch");
    if (!batch.all_released_at_zero())
        throw precondition_error("cofair: release times must be zero");
    if (w.size() != n || alpha.size() != n)
        throw precondition_error("cofair: weight/alpha size mismatch");
    for (size_t j = 0; j < n; ++j) {
        if (!(w[j] > T(0))) throw precondition_error("cofair: weights must be > 0");
        if (alpha[j] < T(0)) throw precondition_error("cofair: alpha must be >= 0");
    }

    const auto loads = build_port_loads<T>(batch);
    CofairResult<T> res;
    res.certificate.alpha = alpha;

    std::vector<bool> in_set(n, true);
    std::vector<T> port_time = port_times(loads, in_set);
    std::vector<T> cur_w(n);
    for (size_t j = 0; j < n; ++j) cur_w[j] = w[j] + alpha[j];
    res.certificate.weight_trace.push_back(cur_w);

    std::vector<int> columns(n, -1);   // position k-1 -> column

    for (size_t k = n; k >= 1; --k) {
        PivotContext<T> ctx{&loads, &in_set, &port_time};
        const PortId mu = pivot ? pivot(ctx) : most_charged_port(ctx);

        const std::vector<int> tail = tail_feasible(loads, in_set, port_time, dl);
        if (tail.empty()) {
            res.infeasible = CofairInfeasible<T>{k, mu, true};
            return res;
        }

        // Smith rule on the pivot port over tail coflows active there.
        // Cross-multiplied comparison; ties to the lowest coflow id.
        int sel = -1;
        for (int j : tail) {
            const T& pj = loads.time_load(mu, j);
            if (!(pj > T(0))) continue;
            if (sel < 0) { sel = j; continue; }
            const T& ps = loads.time_load(mu, sel);
            const T lhs = cur_w[static_cast<size_t>(j)] * ps;
            const T rhs = cur_w[static_cast<size_t>(sel)] * pj;
            if (lhs < rhs ||
                (lhs == rhs && loads.ids[static_cast<size_t>(j)] < loads.ids[static_cast<size_t>(sel)]))
                sel = j;
        }
        if (sel < 0) {
            // Tail coflows exist but none touches the pivot. Under the
            // most-charged rule this only happens on infeasible instances.
            res.infeasible = CofairInfeasible<T>{k, mu, false};
            return res;
        }

        const T y = cur_w[static_cast<size_t>(sel)] / loads.time_load(mu, sel);
        DualEntry<T> entry;
        entry.port = mu;
        entry.tail_set = tail;
        entry.pivot_column = sel;
        entry.y = y;
        res.certificate.entries.push_back(std::move(entry));

        for (int j : tail) {
            if (j == sel) continue;
            auto& wj = cur_w[static_cast<size_t>(j)];
            wj -= y * loads.time_load(mu, j);
            // The Smith argmin keeps residual weights non-negative; a
            // violation beyond rounding is an internal error.
            if (wj < T(0)) {
                if (wj < -detail::feas_eps<T>())
                    throw std::logic_error("cofair: negative residual weight");
                wj = T(0);
            }
        }
        cur_w[static_cast<size_t>(sel)] = y;   // eliminated pivot carries its solved value
        res.certificate.weight_trace.push_back(cur_w);

        columns[k - 1] = sel;
        in_set[static_cast<size_t>(sel)] = false;
        for (PortId p = 1; p <= loads.num_ports; ++p)
            port_time[static_cast<size_t>(p - 1)] -= loads.time_load(p, sel);
    }

    res.feasible = true;
    res.order = make_sigma_order(batch, loads, std::move(columns));
    return res;
}

template <class T>
struct DualAudit {
    bool constraints_ok = false;
    bool weak_duality_ok = false;
    bool nonnegative_ok = false;
    T dual_objective{};
    T primal_value{};
    std::string failure;

    bool ok() const { return constraints_ok && weak_duality_ok && nonnegative_ok; }
};

// f_l(S) = 1/2 [ (sum t)^2 + sum t^2 ] over the normalized loads of S.
template <class T>
T parallel_set_function(const PortLoadMatrix<T>& loads, PortId port, const std::vector<int>& set) {
    T s(0), s2(0);
    for (int j : set) {
        const T& v = loads.time_load(port, j);
        s += v;
        s2 += v * v;
    }
    return (s * s + s2) / T(2);
}

// Verifies a certificate against the dual program: exact constraint
// satisfaction, non-negativity, and weak duality against the weighted
// completion bounds of the accompanying order.
template <class T>
DualAudit<T> dual_audit(const Batch& batch, const CofairResult<T>& run, const std::vector<T>& w,
                        const std::vector<T>& alpha, const DeadlineVector<T>& dl) {
    const auto loads = build_port_loads<T>(batch);
    const size_t n = batch.size();
    DualAudit<T> audit;
    const T eps = detail::feas_eps<T>();

    audit.nonnegative_ok = true;
    for (const auto& e : run.certificate.entries)
        if (e.y < T(0)) {
            audit.nonnegative_ok = false;
            audit.failure = "negative dual variable";
        }

    audit.constraints_ok = true;
    for (size_t j = 0; j < n && audit.constraints_ok; ++j) {
        T covered(0);
        for (const auto& e : run.certificate.entries) {
            if (std::binary_search(e.tail_set.begin(), e.tail_set.end(), static_cast<int>(j)))
                covered += e.y * loads.time_load(e.port, static_cast<int>(j));
        }
        const T rhs = w[j] + alpha[j];
        const bool match = (eps == T(0)) ? (covered == rhs)
                                         : (covered - rhs <= eps && rhs - covered <= eps);
        if (!match) {
            audit.constraints_ok = false;
            audit.failure = "dual constraint violated for coflow " +
                            std::to_string(loads.ids[j]);
        }
    }

    // Dual objective; alpha_j = 0 entries contribute nothing even when the
    // deadline is unbounded.
    bool minus_infinite = false;
    T dual_obj(0);
    for (const auto& e : run.certificate.entries)
        dual_obj += e.y * parallel_set_function(loads, e.port, e.tail_set);
    for (size_t j = 0; j < n; ++j) {
        if (alpha[j] == T(0)) continue;
        if (!dl.is_finite(j)) { minus_infinite = true; continue; }
        dual_obj -= alpha[j] * dl.value[j];
    }
    audit.dual_objective = dual_obj;

    audit.weak_duality_ok = true;
    if (run.feasible) {
        T primal(0);
        for (size_t k = 0; k < n; ++k) {
            const size_t col = static_cast<size_t>(run.order.columns[k]);
            primal += w[col] * run.order.completion[k];
        }
        audit.primal_value = primal;
        if (!minus_infinite && !(dual_obj <= primal + eps)) {
            audit.weak_duality_ok = false;
            audit.failure = "weak duality violated";
        }
    }
    return audit;
}

template <class T>
struct SteerResult {
    bool ok = false;
    std::vector<T> alpha;       // by column, max entry = 1
    T kappa{};                  // weight rescale in (0, 1]
    CofairResult<T> run;        // the verifying run
    std::string failure;
};

// Constructs multipliers that make a target primal-feasible order the unique
// output of the primal-dual iteration under the default pivot rule. The
// construction assigns geometrically decaying alphas along the target order
// and shrinks the decay until the replayed run reproduces the target; it
// fails loudly if the target's coflow is not selectable at some step.
template <class T>
SteerResult<T> steer_alpha(const Batch& batch, const std::vector<CoflowId>& target,
                           const DeadlineVector<T>& dl, const std::vector<T>& w) {
    const size_t n = batch.size();
    SteerResult<T> res;
    auto pre = primal_feasible(batch, target, dl);
    if (!pre.feasible)
        throw precondition_error("steer_alpha: target order is not primal-feasible");

    const auto loads = build_port_loads<T>(batch);
    std::vector<int> target_cols;
    for (CoflowId id : target) target_cols.push_back(batch.index_of(id));

    // Structural precheck: at every step the target coflow must be
    // tail-feasible and active on the most charged port; weights cannot fix
    // a structurally unreachable pick.
    {
        std::vector<bool> in_set(n, true);
        std::vector<T> pt = port_times(loads, in_set);
        for (size_t k = n; k >= 1; --k) {
            PivotContext<T> ctx{&loads, &in_set, &pt};
            const PortId mu = most_charged_port(ctx);
            const auto tail = tail_feasible(loads, in_set, pt, dl);
            const int want = target_cols[k - 1];
            const bool in_tail = std::find(tail.begin(), tail.end(), want) != tail.end();
            if (!in_tail || !(loads.time_load(mu, want) > T(0))) {
                res.failure = "target coflow not selectable at step " + std::to_string(k);
                return res;
            }
            in_set[static_cast<size_t>(want)] = false;
            for (PortId p = 1; p <= loads.num_ports; ++p)
                pt[static_cast<size_t>(p - 1)] -= loads.time_load(p, want);
        }
    }

    T rho = T(1) / T(4);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<T> alpha(n, T(0));
        T a(1);
        for (size_t pos = 0; pos < n; ++pos) {
            alpha[static_cast<size_t>(target_cols[pos])] = a;
            a *= rho;
        }
        // kappa keeps the base weights negligible against the smallest alpha.
        T kappa = a * rho;
        T wmax(0);
        for (const T& x : w) wmax = std::max(wmax, x);
        if (wmax > T(0)) kappa = kappa / wmax;
        if (kappa > T(1)) kappa = T(1);

        std::vector<T> scaled(n);
        for (size_t j = 0; j < n; ++j) scaled[j] = kappa * w[j];
        auto run = cofair<T>(batch, dl, scaled, alpha);
        if (run.feasible && run.order.sigma == target) {
            res.ok = true;
            res.alpha = std::move(alpha);
            res.kappa = kappa;
            res.run = std::move(run);
            return res;
        }
        rho /= T(4);
    }
    res.failure = "could not realize target order within margin budget";
    return res;
}

}  // namespace coflow
