// Event-driven fluid simulation of sigma-order greedy rate allocation.
//
// Between events, every released unfinished flow is granted the minimum of
// its residual ingress/egress capacity, scanning coflows in priority order
// and flows within a coflow in ascending id. The schedule is pre-emptive and
// work-conserving and never lets a lower-priority flow throttle a higher one.
#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include "coflow/loads.hpp"
#include "coflow/types.hpp"

namespace coflow {

enum class IntraCoflowPolicy {
    ScanOrder,   // flows served in ascending id within the coflow (default)
    MaxMin,      // max-min fair split among the coflow's own flows
};

struct SimOptions {
    IntraCoflowPolicy intra = IntraCoflowPolicy::ScanOrder;
    bool record_trace = false;
};

template <class T>
struct SimFlow {
    int coflow_col = -1;
    int flow_index = -1;    // position within the coflow
    PortId src = 0;
    PortId dst = 0;
    T volume{};
    T remaining{};
    T release{};
    T completed_at{};
    bool done = false;
};

template <class T>
struct SimInterval {
    T start{};
    T length{};
    std::vector<T> rates;   // by flat flow index
};

template <class T>
struct SimResult {
    std::vector<T> cct;                    // by batch column
    std::vector<SimFlow<T>> flows;         // final flow states
    std::vector<SimInterval<T>> trace;     // when requested
};

namespace detail {

template <class T>
T snap_eps(const T& scale) {
    if constexpr (std::is_same_v<T, double>) return 1e-12 * std::max(1.0, scale);
    else return T(0);
}

// Max-min fair rates among one coflow's pending flows under the residual
// port capacities (progressive filling).
template <class T>
void maxmin_fill(std::vector<T>& residual, const std::vector<SimFlow<T>*>& flows,
                 std::vector<T>& rates_out) {
    std::vector<bool> frozen(flows.size(), false);
    size_t open = flows.size();
    while (open > 0) {
        // Count open flows per port and find the tightest fair increment.
        bool any = false;
        T inc{};
        for (size_t i = 0; i < flows.size(); ++i) {
            if (frozen[i]) continue;
            for (PortId p : {flows[i]->src, flows[i]->dst}) {
                T users(0);
                for (size_t h = 0; h < flows.size(); ++h)
                    if (!frozen[h] && (flows[h]->src == p || flows[h]->dst == p)) users += T(1);
                const T cand = residual[static_cast<size_t>(p - 1)] / users;
                if (!any || cand < inc) { inc = cand; any = true; }
            }
        }
        if (!any) break;
        for (size_t i = 0; i < flows.size(); ++i) {
            if (frozen[i]) continue;
            rates_out[i] += inc;
            residual[static_cast<size_t>(flows[i]->src - 1)] -= inc;
            residual[static_cast<size_t>(flows[i]->dst - 1)] -= inc;
        }
        // Freeze flows that now sit on an exhausted port.
        const T zero_eps = snap_eps<T>(T(1));
        for (size_t i = 0; i < flows.size(); ++i) {
            if (frozen[i]) continue;
            if (residual[static_cast<size_t>(flows[i]->src - 1)] <= zero_eps ||
                residual[static_cast<size_t>(flows[i]->dst - 1)] <= zero_eps) {
                frozen[i] = true;
                --open;
            }
        }
    }
}

}  // namespace detail

// One allocation pass over the current state. `priority` maps batch column
// to sigma position (0 = highest). Returns per-flow rates.
template <class T>
std::vector<T> rate_step(const Batch& batch, std::vector<SimFlow<T>>& flows,
                         const std::vector<int>& priority, const T& now,
                         IntraCoflowPolicy intra = IntraCoflowPolicy::ScanOrder) {
    std::vector<T> residual;
    residual.reserve(static_cast<size_t>(batch.fabric.num_ports()));
    for (PortId p = 1; p <= batch.fabric.num_ports(); ++p)
        residual.push_back(scalar_from_double<T>(batch.fabric.capacity(p)));

    std::vector<T> rates(flows.size(), T(0));

    // Group flat flow indices by coflow, already in ascending flow id.
    std::vector<std::vector<int>> by_coflow(batch.size());
    for (size_t i = 0; i < flows.size(); ++i)
        by_coflow[static_cast<size_t>(flows[i].coflow_col)].push_back(static_cast<int>(i));

    std::vector<int> scan(batch.size());
    for (size_t col = 0; col < batch.size(); ++col) scan[static_cast<size_t>(priority[col])] = static_cast<int>(col);

    for (int col : scan) {
        std::vector<SimFlow<T>*> pending;
        std::vector<int> pending_idx;
        for (int i : by_coflow[static_cast<size_t>(col)]) {
            SimFlow<T>& f = flows[static_cast<size_t>(i)];
            if (f.done || f.release > now) continue;
            pending.push_back(&f);
            pending_idx.push_back(i);
        }
        if (pending.empty()) continue;
        if (intra == IntraCoflowPolicy::ScanOrder) {
            for (size_t h = 0; h < pending.size(); ++h) {
                const SimFlow<T>& f = *pending[h];
                const T r = std::min(residual[static_cast<size_t>(f.src - 1)],
                                     residual[static_cast<size_t>(f.dst - 1)]);
                rates[static_cast<size_t>(pending_idx[h])] = r;
                residual[static_cast<size_t>(f.src - 1)] -= r;
                residual[static_cast<size_t>(f.dst - 1)] -= r;
            }
        } else {
            std::vector<T> local(pending.size(), T(0));
            detail::maxmin_fill(residual, pending, local);
            for (size_t h = 0; h < pending.size(); ++h)
                rates[static_cast<size_t>(pending_idx[h])] = local[h];
        }
    }
    return rates;
}

template <class T = double>
SimResult<T> simulate(const Batch& batch, const std::vector<CoflowId>& sigma,
                      const SimOptions& opts = {}) {
    if (sigma.size() != batch.size())
        throw precondition_error("simulate: sigma must cover every coflow exactly once");
    std::vector<int> priority(batch.size(), -1);
    for (size_t k = 0; k < sigma.size(); ++k) {
        const int col = batch.index_of(sigma[k]);
        if (priority[static_cast<size_t>(col)] != -1)
            throw precondition_error("simulate: duplicate coflow in sigma");
        priority[static_cast<size_t>(col)] = static_cast<int>(k);
    }

    SimResult<T> res;
    double max_vol = 1.0;
    for (size_t col = 0; col < batch.size(); ++col) {
        const Coflow& c = batch.coflows[col];
        for (size_t i = 0; i < c.flows.size(); ++i) {
            SimFlow<T> f;
            f.coflow_col = static_cast<int>(col);
            f.flow_index = static_cast<int>(i);
            f.src = c.flows[i].src;
            f.dst = c.flows[i].dst;
            f.volume = scalar_from_double<T>(c.flows[i].volume);
            f.remaining = f.volume;
            f.release = scalar_from_double<T>(c.release);
            res.flows.push_back(std::move(f));
            max_vol = std::max(max_vol, c.flows[i].volume);
        }
    }
    const T eps = detail::snap_eps<T>(scalar_from_double<T>(max_vol));

    std::vector<T> release_epochs;
    for (const Coflow& c : batch.coflows)
        if (c.release > 0.0) release_epochs.push_back(scalar_from_double<T>(c.release));
    std::sort(release_epochs.begin(), release_epochs.end());
    size_t next_release = 0;

    T now(0);
    size_t open_flows = res.flows.size();
    while (open_flows > 0) {
        const auto rates = rate_step(batch, res.flows, priority, now, opts.intra);

        // Horizon: earliest flow completion or the next release.
        bool progressing = false;
        T dt{};
        for (size_t i = 0; i < res.flows.size(); ++i) {
            if (res.flows[i].done || !(rates[i] > T(0))) continue;
            const T fin = res.flows[i].remaining / rates[i];
            if (!progressing || fin < dt) { dt = fin; progressing = true; }
        }
        while (next_release < release_epochs.size() && release_epochs[next_release] <= now)
            ++next_release;
        if (next_release < release_epochs.size()) {
            const T gap = release_epochs[next_release] - now;
            if (!progressing || gap < dt) { dt = gap; progressing = true; }
        }
        if (!progressing)
            throw std::logic_error("simulate: stalled with pending flows");  // unreachable

        if (opts.record_trace) res.trace.push_back(SimInterval<T>{now, dt, rates});

        now += dt;
        for (size_t i = 0; i < res.flows.size(); ++i) {
            SimFlow<T>& f = res.flows[i];
            if (f.done || !(rates[i] > T(0))) continue;
            f.remaining -= rates[i] * dt;
            if (f.remaining <= eps) {
                f.remaining = T(0);
                f.done = true;
                f.completed_at = now;
                --open_flows;
            }
        }
    }

    res.cct.assign(batch.size(), T(0));
    for (const SimFlow<T>& f : res.flows) {
        auto& c = res.cct[static_cast<size_t>(f.coflow_col)];
        if (f.completed_at > c) c = f.completed_at;
    }
    return res;
}

template <class T>
std::vector<double> cct_doubles(const SimResult<T>& res) {
    std::vector<double> out;
    out.reserve(res.cct.size());
    for (const T& c : res.cct) out.push_back(scalar_to_double<T>(c));
    return out;
}

}  // namespace coflow
