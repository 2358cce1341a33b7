// Core data model: the Big Switch fabric, flows, coflows and batches.
//
// Ports are numbered 1..M for ingress and M+1..2M for egress. A flow is a
// (src, dst, volume) triple; a coflow is a group of flows that completes
// when its last flow finishes. All values are validated on construction and
// the types are immutable afterwards, so batches can be shared freely across
// experiment workers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coflow {

using PortId = int;     // 1-based, 1..2M
using CoflowId = int;

// Absolute tolerance for floating-point comparisons in the scheduling core.
// Exact-rational code paths do not use it.
inline constexpr double kEps = 1e-9;

class model_error : public std::invalid_argument {
public:
    explicit model_error(const std::string& what) : std::invalid_argument(what) {}
};

// Input violates a documented operation precondition (e.g. nonzero release
// times passed to the zero-release scheduling algorithms).
class precondition_error : public std::logic_error {
public:
    explicit precondition_error(const std::string& what) : std::logic_error(what) {}
};

struct Fabric {
    int M = 0;                        // server/rack count; ports = 2M
    std::vector<double> capacities;   // indexed 0..2M-1 for ports 1..2M

    Fabric() = default;
    explicit Fabric(int servers, std::vector<double> caps = {})
        : M(servers), capacities(std::move(caps)) {
        if (M <= 0) throw model_error("fabric: M must be positive");
        if (capacities.empty()) capacities.assign(2 * static_cast<size_t>(M), 1.0);
        if (capacities.size() != 2 * static_cast<size_t>(M))
            throw model_error("fabric: expected 2M capacities");
        for (double b : capacities)
            if (!(b > 0.0)) throw model_error("fabric: capacities must be > 0");
    }

    int num_ports() const { return 2 * M; }
    bool is_ingress(PortId p) const { return p >= 1 && p <= M; }
    bool is_egress(PortId p) const { return p > M && p <= 2 * M; }
    double capacity(PortId p) const { return capacities[static_cast<size_t>(p - 1)]; }
};

struct Flow {
    PortId src = 0;   // ingress, 1..M
    PortId dst = 0;   // egress, M+1..2M
    double volume = 0.0;
};

struct Coflow {
    CoflowId id = 0;
    std::vector<Flow> flows;
    double release = 0.0;
    double weight = 1.0;
    double phi = 1.0;   // slowdown weight

    double total_volume() const {
        double v = 0.0;
        for (const Flow& f : flows) v += f.volume;
        return v;
    }
};

struct Batch {
    Fabric fabric;
    std::vector<Coflow> coflows;

    Batch() = default;
    Batch(Fabric f, std::vector<Coflow> cs) : fabric(std::move(f)), coflows(std::move(cs)) {
        validate();
    }

    size_t size() const { return coflows.size(); }

    const Coflow& by_id(CoflowId id) const {
        for (const Coflow& c : coflows)
            if (c.id == id) return c;
        throw model_error("batch: unknown coflow id " + std::to_string(id));
    }

    int index_of(CoflowId id) const {
        for (size_t i = 0; i < coflows.size(); ++i)
            if (coflows[i].id == id) return static_cast<int>(i);
        throw model_error("batch: unknown coflow id " + std::to_string(id));
    }

    bool all_released_at_zero() const {
        for (const Coflow& c : coflows)
            if (c.release != 0.0) return false;
        return true;
    }

    void validate() const {
        std::vector<CoflowId> seen;
        for (const Coflow& c : coflows) {
            for (CoflowId s : seen)
                if (s == c.id) throw model_error("batch: duplicate coflow id " + std::to_string(c.id));
            seen.push_back(c.id);
            if (c.flows.empty())
                throw model_error("coflow " + std::to_string(c.id) + ": no flows");
            if (!(c.weight > 0.0))
                throw model_error("coflow " + std::to_string(c.id) + ": weight must be > 0");
            if (!(c.phi > 0.0))
                throw model_error("coflow " + std::to_string(c.id) + ": phi must be > 0");
            if (c.release < 0.0)
                throw model_error("coflow " + std::to_string(c.id) + ": negative release");
            for (const Flow& f : c.flows) {
                if (!fabric.is_ingress(f.src))
                    throw model_error("coflow " + std::to_string(c.id) + ": invalid ingress port " +
                                      std::to_string(f.src));
                if (!fabric.is_egress(f.dst))
                    throw model_error("coflow " + std::to_string(c.id) + ": invalid egress port " +
                                      std::to_string(f.dst));
                if (!(f.volume > 0.0))
                    throw model_error("coflow " + std::to_string(c.id) + ": flow volume must be > 0");
            }
        }
    }
};

}  // namespace coflow
