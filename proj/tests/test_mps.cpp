#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "coflow/lp_oracle.hpp"
#include "coflow/mps.hpp"
#include "instances.hpp"

using namespace coflow;

TEST_CASE("worked instance, port-occupation weights") {
    const Batch batch = testing::ex1_volume_phi();
    const auto res = mps<Rat>(batch);
    CHECK(res.min_slowdown == Rat(10));   // 2(U + 2V)
    CHECK(res.order == std::vector<CoflowId>{1, 2});
    CHECK(res.ranking.rate[0] == Rat(3));
    CHECK(res.ranking.rate[1] == Rat(2));
}

TEST_CASE("worked instance, plain slowdown") {
    const auto res = mps<Rat>(testing::ex1());
    CHECK(res.min_slowdown == Rat(5) / 3);   // 1 + 2V/U
    CHECK(res.order == std::vector<CoflowId>{2, 1});
}

TEST_CASE("single coflow gives its own phi") {
    const auto res = mps<Rat>(testing::single_coflow(6.0, 2.0, 0.0, 2.5));
    CHECK(res.min_slowdown == rat_from_double(2.5));
}

TEST_CASE("two coflows on one port") {
    const auto res = mps<Rat>(testing::ex2());
    CHECK(res.min_slowdown == Rat(5) / 3);
    CHECK(res.order == std::vector<CoflowId>{1, 2});
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(mps<double>(Batch(Fabric(1), {})), model_error);
    Coflow late{1, {{1, 2, 1.0}}, 0.5, 1.0, 1.0};
    CHECK_THROWS_AS(mps<double>(Batch(Fabric(1), {late})), precondition_error);
}

TEST_CASE("double and rational paths agree") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Batch batch = testing::random_batch(seed);
        const double d = mps<double>(batch).min_slowdown;
        const double r = rat_to_double(mps<Rat>(batch).min_slowdown);
        CHECK(d == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("matches the exhaustive oracle") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        for (PhiMode phi : {PhiMode::Unit, PhiMode::Volume}) {
            const Batch batch = testing::random_batch(seed * 2 + (phi == PhiMode::Unit), 7, 5, phi);
            CHECK(mps<Rat>(batch).min_slowdown == brute_min_primal_slowdown<Rat>(batch));
        }
    }
}

TEST_CASE("lower-bounds every coflow's phi") {
    for (std::uint64_t seed = 100; seed < 115; ++seed) {
        const Batch batch = testing::random_batch(seed, 8, 6, PhiMode::Volume);
        const auto res = mps<Rat>(batch);
        for (const Coflow& c : batch.coflows)
            CHECK(res.min_slowdown >= rat_from_double(c.phi));
    }
}

TEST_CASE("adding a coflow never decreases the minimum slowdown") {
    for (std::uint64_t seed = 200; seed < 215; ++seed) {
        Batch batch = testing::random_batch(seed, 7, 5);
        if (batch.size() < 2) continue;
        Batch smaller = batch;
        smaller.coflows.pop_back();
        CHECK(mps<Rat>(smaller).min_slowdown <= mps<Rat>(batch).min_slowdown);
    }
}

TEST_CASE("scaling phi scales the result") {
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        Batch batch = testing::random_batch(seed, 6, 4);
        const Rat base = mps<Rat>(batch).min_slowdown;
        for (Coflow& c : batch.coflows) c.phi *= 4.0;   // exact in binary
        CHECK(mps<Rat>(batch).min_slowdown == Rat(4) * base);
    }
}

TEST_CASE("heterogeneous port capacities") {
    // Fast ingress 1 (B=4), slow ingress 2 (B=1); egress side B=2.
    Coflow a{1, {{1, 3, 8.0}, {2, 4, 2.0}}, 0.0, 1.0, 1.0};
    Coflow b{2, {{1, 3, 4.0}}, 0.0, 1.0, 1.0};
    Coflow c{3, {{2, 4, 3.0}, {1, 4, 1.0}}, 0.0, 1.0, 1.0};
    const Batch batch(Fabric(2, {4.0, 1.0, 2.0, 2.0}), {a, b, c});
    // Isolation: a: max(10/4, 2/1, 8/2, 2/2) = 4; b: max(1, 2) = 2;
    // c: max(1/4, 3, 4/2) = 3.
    CHECK(isolation_cct<Rat>(batch, 1) == Rat(4));
    CHECK(isolation_cct<Rat>(batch, 2) == Rat(2));
    CHECK(isolation_cct<Rat>(batch, 3) == Rat(3));
    CHECK(mps<Rat>(batch).min_slowdown == brute_min_primal_slowdown<Rat>(batch));
}

TEST_CASE("tied rates give the same slowdown under any tie order") {
    // Two identical coflows plus one distinct: permuting ids flips the
    // tie-break but must not change E^p.
    Coflow a{1, {{1, 3, 2.0}}, 0.0, 1.0, 1.0};
    Coflow b{2, {{2, 4, 2.0}, {1, 3, 1.0}}, 0.0, 1.0, 1.0};
    Coflow c{3, {{1, 4, 2.0}}, 0.0, 1.0, 1.0};
    const Batch batch1(Fabric(2), {a, b, c});
    Coflow a2 = a; a2.id = 3;
    Coflow c2 = c; c2.id = 1;
    const Batch batch2(Fabric(2), {a2, b, c2});
    CHECK(mps<Rat>(batch1).min_slowdown == mps<Rat>(batch2).min_slowdown);
    // Ranking ties break by ascending id.
    const auto r1 = mps<Rat>(batch1);
    for (size_t k = 0; k + 1 < r1.order.size(); ++k) {
        const size_t ja = (size_t)batch1.index_of(r1.order[k]);
        const size_t jb = (size_t)batch1.index_of(r1.order[k + 1]);
        if (r1.ranking.rate[ja] == r1.ranking.rate[jb])
            CHECK(r1.order[k] < r1.order[k + 1]);
    }
}
