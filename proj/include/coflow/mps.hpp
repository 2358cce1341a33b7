// Minimum primal slowdown: the smallest E for which a primal-feasible
// priority order exists. Runs in O(MN + N log N).
#pragma once

#include <algorithm>
#include <numeric>
#include <type_traits>
#include <vector>

#include "coflow/kernels.hpp"
#include "coflow/loads.hpp"
#include "coflow/types.hpp"

namespace coflow {

// Coflows ranked by decreasing isolation rate R~_j = phi_j / (C_j^0 - r_j);
// ties broken by ascending coflow id so the order is deterministic.
template <class T>
struct RateRanking {
    std::vector<T> rate;       // per column
    std::vector<int> order;    // column indices, decreasing rate
};

template <class T>
struct MpsResult {
    T min_slowdown{};              // E^p
    RateRanking<T> ranking;
    std::vector<CoflowId> order;   // coflow ids, decreasing rate
};

template <class T>
RateRanking<T> rank_by_rate(const Batch& batch, const PortLoadMatrix<T>& loads) {
    RateRanking<T> r;
    const size_t n = loads.cols();
    r.rate.resize(n);
    for (size_t j = 0; j < n; ++j) {
        const Coflow& c = batch.coflows[j];
        const T service = loads.bottleneck_time(static_cast<int>(j));
        r.rate[j] = scalar_from_double<T>(c.phi) / service;
    }
    r.order.resize(n);
    std::iota(r.order.begin(), r.order.end(), 0);
    std::sort(r.order.begin(), r.order.end(), [&](int a, int b) {
        if (r.rate[static_cast<size_t>(a)] != r.rate[static_cast<size_t>(b)])
            return r.rate[static_cast<size_t>(a)] > r.rate[static_cast<size_t>(b)];
        return batch.coflows[static_cast<size_t>(a)].id < batch.coflows[static_cast<size_t>(b)].id;
    });
    return r;
}

template <class T = double>
MpsResult<T> mps(const Batch& batch) {
    if (batch.size() == 0) throw model_error("mps: empty batch");
    if (!batch.all_released_at_zero())
        throw precondition_error("mps: release times must be zero");

    const auto loads = build_port_loads<T>(batch);
    MpsResult<T> res;
    res.ranking = rank_by_rate(batch, loads);
    const auto& order = res.ranking.order;
    const size_t n = loads.cols();
    for (int col : order) res.order.push_back(batch.coflows[static_cast<size_t>(col)].id);

    T best(0);
    if constexpr (std::is_same_v<T, double>) {
        std::vector<double> x(n), s(n);
        for (PortId port = 1; port <= loads.num_ports; ++port) {
            const double* row = loads.time_row(port);
            for (size_t k = 0; k < n; ++k) {
                x[k] = row[order[k]];
                s[k] = res.ranking.rate[static_cast<size_t>(order[k])];
            }
            best = std::max(best, kernels::scaled_prefix_max(x.data(), s.data(), n));
        }
    } else {
        for (PortId port = 1; port <= loads.num_ports; ++port) {
            T prefix(0);
            for (size_t k = 0; k < n; ++k) {
                prefix += loads.time_load(port, order[k]);
                const T z = res.ranking.rate[static_cast<size_t>(order[k])] * prefix;
                if (z > best) best = z;
            }
        }
    }
    res.min_slowdown = best;
    return res;
}

}  // namespace coflow
