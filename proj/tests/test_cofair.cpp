#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "coflow/cofair.hpp"
#include "coflow/lp_oracle.hpp"
#include "coflow/mps.hpp"
#include "instances.hpp"

using namespace coflow;

namespace {

std::vector<Rat> unit_weights(size_t n) { return std::vector<Rat>(n, Rat(1)); }
std::vector<Rat> zeros(size_t n) { return std::vector<Rat>(n, Rat(0)); }

// Independent check of the dual variables: forward-solve the triangular
// system q_{mu_k, sigma(j)} y_k = w + alpha restricted to the recorded
// tail-set memberships, in reverse scheduling order.
std::vector<Rat> triangular_eliminate(const Batch& batch, const CofairResult<Rat>& run,
                                      const std::vector<Rat>& w, const std::vector<Rat>& alpha) {
    const auto loads = build_port_loads<Rat>(batch);
    const auto& entries = run.certificate.entries;
    std::vector<Rat> y(entries.size(), Rat(0));
    for (size_t i = 0; i < entries.size(); ++i) {
        const int col = entries[i].pivot_column;
        Rat residual = w[(size_t)col] + alpha[(size_t)col];
        for (size_t h = 0; h < i; ++h) {
            if (std::binary_search(entries[h].tail_set.begin(), entries[h].tail_set.end(), col))
                residual -= y[h] * loads.time_load(entries[h].port, col);
        }
        y[i] = residual / loads.time_load(entries[i].port, col);
    }
    return y;
}

}  // namespace

TEST_CASE("hand-executed run on the worked instance") {
    const Batch batch = testing::ex1();
    const auto dl = deadlines<Rat>(batch, Rat(5) / 3);
    const auto run = cofair<Rat>(batch, dl, unit_weights(2), zeros(2));
    REQUIRE(run.feasible);
    CHECK(run.order.sigma == std::vector<CoflowId>{2, 1});
    CHECK(run.order.completion[0] == Rat(2));
    CHECK(run.order.completion[1] == Rat(5));

    REQUIRE(run.certificate.entries.size() == 2);
    const auto& first = run.certificate.entries[0];    // step k = 2
    CHECK(first.port == 1);                             // most charged, lowest id tie
    CHECK(first.tail_set == std::vector<int>{0});       // only coflow 1 is tail-feasible
    CHECK(first.y == Rat(1) / 3);
    const auto& second = run.certificate.entries[1];    // step k = 1
    CHECK(second.y == Rat(1) / 2);

    const auto audit = dual_audit(batch, run, unit_weights(2), zeros(2), dl);
    CHECK(audit.ok());
    CHECK(audit.primal_value == Rat(7));
    CHECK(audit.dual_objective <= Rat(7));
}

TEST_CASE("infeasible level is detected at the first stuck step") {
    const Batch batch = testing::ex2();
    const auto dl = deadlines<Rat>(batch, Rat(1));   // D = (2, 3), shared load 5
    const auto run = cofair<Rat>(batch, dl, unit_weights(2), zeros(2));
    CHECK(!run.feasible);
    REQUIRE(run.infeasible.has_value());
    CHECK(run.infeasible->step == 2);
    CHECK(run.infeasible->tail_set_empty);
}

TEST_CASE("unconstrained mode reduces to the weighted Smith order") {
    const Batch batch = testing::ex2();
    const auto dl = DeadlineVector<Rat>::unbounded(2);
    const auto run = cofair<Rat>(batch, dl, unit_weights(2), zeros(2));
    REQUIRE(run.feasible);
    CHECK(run.order.sigma == std::vector<CoflowId>{1, 2});   // B last: 1/3 < 1/2
    Rat wcct(0);
    for (size_t k = 0; k < 2; ++k) wcct += run.order.completion[k];
    CHECK(wcct == Rat(7));

    // Dual trace of the unconstrained run: y_{l1,{A,B}} = 1/3, then the
    // reduced weight 1/3 of A gives y_{l1,{A}} = 1/6.
    REQUIRE(run.certificate.entries.size() == 2);
    CHECK(run.certificate.entries[0].y == Rat(1) / 3);
    CHECK(run.certificate.entries[0].tail_set == std::vector<int>{0, 1});
    CHECK(run.certificate.weight_trace[1][0] == Rat(1) / 3);
    CHECK(run.certificate.entries[1].y == Rat(1) / 6);

    const auto audit = dual_audit(batch, run, unit_weights(2), zeros(2), dl);
    CHECK(audit.ok());
}

TEST_CASE("pivot bottleneck selection") {
    const Batch batch = testing::ex1();
    const auto loads = build_port_loads<Rat>(batch);
    std::vector<bool> all(batch.size(), true);
    CHECK(pivot_bottleneck(loads, all) == 1);   // ports 1,3,5 tie at load 5
    std::vector<bool> only2 = {false, true};
    CHECK(pivot_bottleneck(loads, only2) == 1); // coflow 2 alone: 2 on ports 1,3,5

    const Batch one = testing::single_coflow();
    const auto l1 = build_port_loads<Rat>(one);
    std::vector<bool> just = {true};
    CHECK(pivot_bottleneck(l1, just) == 1);     // its ingress
}

TEST_CASE("tail-feasible sets") {
    const Batch batch = testing::ex1();
    const auto loads = build_port_loads<Rat>(batch);
    std::vector<bool> all(batch.size(), true);
    const auto dl = deadlines<Rat>(batch, Rat(5) / 3);
    CHECK(tail_feasible(loads, all, dl) == std::vector<int>{0});

    const auto unbounded = DeadlineVector<Rat>::unbounded(batch.size());
    CHECK(tail_feasible(loads, all, unbounded) == std::vector<int>{0, 1});

    const Batch b2 = testing::ex2();
    const auto l2 = build_port_loads<Rat>(b2);
    std::vector<bool> both(2, true);
    const auto d2 = deadlines<Rat>(b2, Rat(5) / 3);
    CHECK(tail_feasible(l2, both, d2) == std::vector<int>{1});   // only B
}

TEST_CASE("certificates hold on random batches at the minimum level") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Batch batch = testing::random_batch(seed, 9, 5);
        const auto n = batch.size();
        const Rat ep = mps<Rat>(batch).min_slowdown;
        const auto dl = deadlines<Rat>(batch, ep);
        const auto run = cofair<Rat>(batch, dl, unit_weights(n), zeros(n));
        REQUIRE(run.feasible);
        CHECK(primal_feasible<Rat>(batch, run.order.sigma, dl).feasible);
        const auto audit = dual_audit(batch, run, unit_weights(n), zeros(n), dl);
        CHECK(audit.ok());
        // Completion bounds satisfy the full-set parallel inequality per port.
        const auto loads = build_port_loads<Rat>(batch);
        std::vector<int> full(n);
        for (size_t j = 0; j < n; ++j) full[j] = (int)j;
        for (PortId p = 1; p <= loads.num_ports; ++p) {
            Rat lhs(0);
            for (size_t k = 0; k < n; ++k)
                lhs += loads.time_load(p, run.order.columns[k]) * run.order.completion[k];
            CHECK(lhs >= parallel_set_function(loads, p, full));
        }
    }
}

TEST_CASE("weight elimination equals independent triangular elimination") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Batch batch = testing::random_batch(seed, 8, 5);
        const auto n = batch.size();
        // Mix of deadline regimes, plus nontrivial alphas on odd seeds.
        const Rat ep = mps<Rat>(batch).min_slowdown;
        const auto dl = (seed % 3 == 0) ? DeadlineVector<Rat>::unbounded(n)
                                        : deadlines<Rat>(batch, ep * Rat(11) / 10);
        std::vector<Rat> w = unit_weights(n), alpha = zeros(n);
        if (seed % 2 == 1)
            for (size_t j = 0; j < n; ++j) alpha[j] = Rat(j) / Rat(2 * n);
        const auto run = cofair<Rat>(batch, dl, w, alpha);
        REQUIRE(run.feasible);
        const auto y = triangular_eliminate(batch, run, w, alpha);
        REQUIRE(y.size() == run.certificate.entries.size());
        for (size_t i = 0; i < y.size(); ++i)
            CHECK(y[i] == run.certificate.entries[i].y);   // exact rational equality
    }
}

TEST_CASE("residual weights stay non-negative") {
    for (std::uint64_t seed = 60; seed < 80; ++seed) {
        const Batch batch = testing::random_batch(seed, 8, 5);
        const auto n = batch.size();
        const auto dl = deadlines<Rat>(batch, mps<Rat>(batch).min_slowdown);
        const auto run = cofair<Rat>(batch, dl, unit_weights(n), zeros(n));
        REQUIRE(run.feasible);
        for (const auto& snapshot : run.certificate.weight_trace)
            for (const Rat& wj : snapshot) CHECK(wj >= Rat(0));
    }
}

TEST_CASE("steering multipliers reproduce a target order") {
    const Batch batch = testing::ex2();
    const auto dl = DeadlineVector<Rat>::unbounded(2);
    // Target (B, A): reversed against the Smith order.
    const auto steered = steer_alpha<Rat>(batch, {2, 1}, dl, unit_weights(2));
    REQUIRE(steered.ok);
    CHECK(steered.run.order.sigma == std::vector<CoflowId>{2, 1});
    CHECK(*std::max_element(steered.alpha.begin(), steered.alpha.end()) == Rat(1));
    CHECK(steered.kappa <= Rat(1));
    CHECK(steered.kappa > Rat(0));
    // The produced certificate still audits cleanly.
    std::vector<Rat> scaled = {steered.kappa, steered.kappa};
    const auto audit = dual_audit(batch, steered.run, scaled, steered.alpha, dl);
    CHECK(audit.ok());
}

TEST_CASE("steering toward the default output also works") {
    for (std::uint64_t seed = 90; seed < 100; ++seed) {
        const Batch batch = testing::random_batch(seed, 6, 4);
        const auto n = batch.size();
        const auto dl = deadlines<Rat>(batch, mps<Rat>(batch).min_slowdown * Rat(6) / 5);
        const auto base = cofair<Rat>(batch, dl, unit_weights(n), zeros(n));
        REQUIRE(base.feasible);
        const auto steered = steer_alpha<Rat>(batch, base.order.sigma, dl, unit_weights(n));
        REQUIRE(steered.ok);
        CHECK(steered.run.order.sigma == base.order.sigma);
    }
}

TEST_CASE("steering a single coflow") {
    const Batch one = testing::single_coflow();
    const auto dl = DeadlineVector<Rat>::unbounded(1);
    const auto steered = steer_alpha<Rat>(one, {1}, dl, unit_weights(1));
    REQUIRE(steered.ok);
    CHECK(steered.alpha[0] == Rat(1));
}

TEST_CASE("steering rejects a non-feasible target") {
    const Batch batch = testing::ex1();
    const auto dl = deadlines<Rat>(batch, Rat(5) / 3);
    CHECK_THROWS_AS(steer_alpha<Rat>(batch, {1, 2}, dl, unit_weights(2)),
                    precondition_error);
}

TEST_CASE("infeasibility detection matches the order criterion") {
    for (std::uint64_t seed = 110; seed < 140; ++seed) {
        const Batch batch = testing::random_batch(seed, 8, 5);
        const auto n = batch.size();
        const Rat ep = mps<Rat>(batch).min_slowdown;
        const auto low = deadlines<Rat>(batch, ep * Rat(9) / 10);
        const auto run = cofair<Rat>(batch, low, unit_weights(n), zeros(n));
        const bool rate_order_ok = primal_feasible<Rat>(batch, mps<Rat>(batch).order, low).feasible;
        CHECK(run.feasible == rate_order_ok);
        CHECK(!run.feasible);   // strictly below the minimum is never feasible
    }
}
