// Per-port load aggregation and isolation completion times.
#pragma once

#include <algorithm>
#include <vector>

#include "coflow/rational.hpp"
#include "coflow/types.hpp"

namespace coflow {

// Dense (port x coflow) volume matrix plus the derived per-port quantities
// the schedulers work with. `time_load` is the volume normalized by the port
// capacity, i.e. the busy time the coflow induces on that port; with unit
// capacities it equals the raw volume.
template <class T>
struct PortLoadMatrix {
    int num_ports = 0;
    std::vector<CoflowId> ids;          // column -> coflow id
    std::vector<T> p;                   // row-major, num_ports x N volumes
    std::vector<T> t;                   // row-major, num_ports x N time loads
    std::vector<T> port_volume;         // V_l per port
    std::vector<std::vector<int>> active;  // per port, column indices with p > 0

    size_t cols() const { return ids.size(); }
    const T& volume(PortId port, int col) const {
        return p[static_cast<size_t>(port - 1) * cols() + static_cast<size_t>(col)];
    }
    const T& time_load(PortId port, int col) const {
        return t[static_cast<size_t>(port - 1) * cols() + static_cast<size_t>(col)];
    }
    const T* time_row(PortId port) const {
        return t.data() + static_cast<size_t>(port - 1) * cols();
    }
    bool is_active(PortId port, int col) const { return volume(port, col) > T(0); }

    // max_l t_{l,col}: the bottleneck service time of one coflow in isolation.
    T bottleneck_time(int col) const {
        T best(0);
        for (PortId port = 1; port <= num_ports; ++port)
            best = std::max(best, time_load(port, col));
        return best;
    }

    // Total time load of the column subset A on one port.
    template <class Iter>
    T subset_time(PortId port, Iter begin, Iter end) const {
        T s(0);
        for (Iter it = begin; it != end; ++it) s += time_load(port, *it);
        return s;
    }
};

template <class T = double>
PortLoadMatrix<T> build_port_loads(const Batch& batch) {
    PortLoadMatrix<T> m;
    m.num_ports = batch.fabric.num_ports();
    const size_t n = batch.size();
    m.ids.reserve(n);
    for (const Coflow& c : batch.coflows) m.ids.push_back(c.id);
    m.p.assign(static_cast<size_t>(m.num_ports) * n, T(0));
    m.t.assign(static_cast<size_t>(m.num_ports) * n, T(0));
    m.port_volume.assign(static_cast<size_t>(m.num_ports), T(0));

    for (size_t j = 0; j < n; ++j) {
        for (const Flow& f : batch.coflows[j].flows) {
            const T v = scalar_from_double<T>(f.volume);
            m.p[static_cast<size_t>(f.src - 1) * n + j] += v;
            m.p[static_cast<size_t>(f.dst - 1) * n + j] += v;
        }
    }
    for (PortId port = 1; port <= m.num_ports; ++port) {
        const T cap = scalar_from_double<T>(batch.fabric.capacity(port));
        for (size_t j = 0; j < n; ++j) {
            const size_t idx = static_cast<size_t>(port - 1) * n + j;
            m.t[idx] = m.p[idx] / cap;
            m.port_volume[static_cast<size_t>(port - 1)] += m.p[idx];
        }
    }
    m.active.resize(static_cast<size_t>(m.num_ports));
    for (PortId port = 1; port <= m.num_ports; ++port)
        for (size_t j = 0; j < n; ++j)
            if (m.volume(port, static_cast<int>(j)) > T(0))
                m.active[static_cast<size_t>(port - 1)].push_back(static_cast<int>(j));
    return m;
}

// C_j^0 = r_j + max_l p_{lj} / B_l.
template <class T = double>
T isolation_cct(const Batch& batch, CoflowId id) {
    const int col = batch.index_of(id);
    const auto loads = build_port_loads<T>(batch);
    return scalar_from_double<T>(batch.by_id(id).release) + loads.bottleneck_time(col);
}

// Per-column isolation service times (C_j^0 - r_j), computed once per batch.
template <class T>
std::vector<T> bottleneck_times(const PortLoadMatrix<T>& loads) {
    std::vector<T> out(loads.cols(), T(0));
    for (size_t j = 0; j < loads.cols(); ++j) out[j] = loads.bottleneck_time(static_cast<int>(j));
    return out;
}

}  // namespace coflow
