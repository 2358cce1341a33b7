// Slowdown deadlines, primal feasibility of priority orders, and the
// earliest-due-date construction of a feasible order.
#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <type_traits>
#include <vector>

#include "coflow/kernels.hpp"
#include "coflow/loads.hpp"
#include "coflow/mps.hpp"
#include "coflow/types.hpp"

namespace coflow {

// Per-coflow completion deadline D_j = E (C_j^0 - r_j) / phi_j. An entry may
// be unbounded (no slowdown constraint), which is how the unconstrained
// scheduler mode is expressed.
template <class T>
struct DeadlineVector {
    std::vector<T> value;        // by batch column; meaningful when finite
    std::vector<bool> finite;
    T level{};                   // the E used (finite entries only)

    size_t size() const { return value.size(); }
    bool is_finite(size_t j) const { return finite[j]; }

    // load <= D_j, treating unbounded entries as always satisfied.
    bool meets(size_t j, const T& load, const T& eps) const {
        if (!finite[j]) return true;
        return load <= value[j] + eps;
    }

    static DeadlineVector unbounded(size_t n) {
        DeadlineVector d;
        d.value.assign(n, T(0));
        d.finite.assign(n, false);
        return d;
    }
};

template <class T = double>
DeadlineVector<T> deadlines(const Batch& batch, const T& level) {
    if (!(level > T(0))) throw precondition_error("deadlines: E must be > 0");
    const auto loads = build_port_loads<T>(batch);
    DeadlineVector<T> d;
    d.level = level;
    d.value.reserve(batch.size());
    d.finite.assign(batch.size(), true);
    for (size_t j = 0; j < batch.size(); ++j) {
        const T service = loads.bottleneck_time(static_cast<int>(j));
        d.value.push_back(level * service / scalar_from_double<T>(batch.coflows[j].phi));
    }
    return d;
}

// A coflow priority permutation together with the per-position completion
// bounds C_sigma(k) = max_l prefix load. C is non-decreasing along sigma.
template <class T>
struct SigmaOrder {
    std::vector<CoflowId> sigma;      // position k -> coflow id
    std::vector<int> columns;         // position k -> batch column
    std::vector<T> completion;        // position k -> C_sigma(k)

    size_t size() const { return sigma.size(); }
};

template <class T>
std::vector<T> prefix_completion_bounds(const PortLoadMatrix<T>& loads,
                                        const std::vector<int>& columns) {
    std::vector<T> out(columns.size(), T(0));
    for (PortId port = 1; port <= loads.num_ports; ++port) {
        T prefix(0);
        for (size_t k = 0; k < columns.size(); ++k) {
            prefix += loads.time_load(port, columns[k]);
            if (prefix > out[k]) out[k] = prefix;
        }
    }
    return out;
}

template <class T>
SigmaOrder<T> make_sigma_order(const Batch& batch, const PortLoadMatrix<T>& loads,
                               std::vector<int> columns) {
    SigmaOrder<T> s;
    s.columns = std::move(columns);
    for (int col : s.columns) s.sigma.push_back(batch.coflows[static_cast<size_t>(col)].id);
    s.completion = prefix_completion_bounds(loads, s.columns);
    return s;
}

// One violated prefix constraint: on `port`, the first `position + 1` coflows
// of sigma exceed the deadline of the coflow at `position` by `excess`.
template <class T>
struct PrefixViolation {
    PortId port = 0;
    size_t position = 0;
    CoflowId coflow = 0;
    T excess{};
};

template <class T>
struct FeasibilityCheck {
    bool feasible = true;
    std::optional<PrefixViolation<T>> violation;
};

namespace detail {
template <class T>
T feas_eps() {
    if constexpr (std::is_same_v<T, double>) return kEps;
    else return T(0);
}
}  // namespace detail

// Eq.-style prefix test: every prefix load on every port must meet the
// deadline of the coflow completing that prefix. Exact for rational T,
// eps-tolerant for double.
template <class T>
FeasibilityCheck<T> primal_feasible(const PortLoadMatrix<T>& loads,
                                    const std::vector<int>& columns,
                                    const DeadlineVector<T>& dl) {
    FeasibilityCheck<T> res;
    const T eps = detail::feas_eps<T>();
    const size_t n = columns.size();

    if constexpr (std::is_same_v<T, double>) {
        // Fast path: all deadlines finite -> vectorized min-slack per port.
        bool all_finite = true;
        for (size_t k = 0; k < n; ++k) all_finite = all_finite && dl.is_finite(static_cast<size_t>(columns[k]));
        if (all_finite) {
            std::vector<double> x(n), d(n);
            for (size_t k = 0; k < n; ++k) d[k] = dl.value[static_cast<size_t>(columns[k])];
            for (PortId port = 1; port <= loads.num_ports; ++port) {
                const double* row = loads.time_row(port);
                for (size_t k = 0; k < n; ++k) x[k] = row[columns[k]];
                if (kernels::min_prefix_slack(x.data(), d.data(), n) < -eps) {
                    // Re-scan to report the violating prefix.
                    double prefix = 0.0;
                    for (size_t k = 0; k < n; ++k) {
                        prefix += x[k];
                        if (prefix > d[k] + eps) {
                            res.feasible = false;
                            res.violation = PrefixViolation<double>{
                                port, k, loads.ids[static_cast<size_t>(columns[k])], prefix - d[k]};
                            return res;
                        }
                    }
                }
            }
            return res;
        }
    }

    for (PortId port = 1; port <= loads.num_ports; ++port) {
        T prefix(0);
        for (size_t k = 0; k < n; ++k) {
            const size_t j = static_cast<size_t>(columns[k]);
            prefix += loads.time_load(port, columns[k]);
            if (!dl.meets(j, prefix, eps)) {
                res.feasible = false;
                res.violation =
                    PrefixViolation<T>{port, k, loads.ids[j], prefix - dl.value[j]};
                return res;
            }
        }
    }
    return res;
}

template <class T>
FeasibilityCheck<T> primal_feasible(const Batch& batch, const std::vector<CoflowId>& sigma,
                                    const DeadlineVector<T>& dl) {
    if (sigma.size() != batch.size())
        throw precondition_error("primal_feasible: sigma must cover the batch");
    const auto loads = build_port_loads<T>(batch);
    std::vector<int> columns;
    columns.reserve(sigma.size());
    for (CoflowId id : sigma) columns.push_back(batch.index_of(id));
    return primal_feasible(loads, columns, dl);
}

template <class T>
struct EddResult {
    bool feasible = false;
    SigmaOrder<T> order;                          // set when feasible
    std::optional<PrefixViolation<T>> violation;  // set when infeasible
};

// Builds a feasible order by repeatedly scheduling last the not-yet-placed
// coflow with the latest deadline; a prefix test failure at any step proves
// no feasible order exists. Unbounded deadlines sort after all finite ones.
template <class T>
EddResult<T> edd_feasible_order(const Batch& batch, const DeadlineVector<T>& dl) {
    if (!batch.all_released_at_zero())
        throw precondition_error("edd_feasible_order: release times must be zero");
    const auto loads = build_port_loads<T>(batch);
    const size_t n = batch.size();

    std::vector<int> columns(n);
    std::iota(columns.begin(), columns.end(), 0);
    std::sort(columns.begin(), columns.end(), [&](int a, int b) {
        const size_t ua = static_cast<size_t>(a), ub = static_cast<size_t>(b);
        if (dl.is_finite(ua) != dl.is_finite(ub)) return dl.is_finite(ua);
        if (dl.is_finite(ua) && dl.value[ua] != dl.value[ub]) return dl.value[ua] < dl.value[ub];
        return batch.coflows[ua].id < batch.coflows[ub].id;
    });

    EddResult<T> res;
    auto check = primal_feasible(loads, columns, dl);
    if (!check.feasible) {
        res.feasible = false;
        res.violation = check.violation;
        return res;
    }
    res.feasible = true;
    res.order = make_sigma_order(batch, loads, std::move(columns));
    return res;
}

}  // namespace coflow
