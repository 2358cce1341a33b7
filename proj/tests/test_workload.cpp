#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "coflow/workload.hpp"

using namespace coflow;

namespace {

GenConfig wn_cfg(int n, int m, double q, std::uint64_t seed) {
    GenConfig cfg;
    cfg.kind = GenKind::WN;
    cfg.N = n;
    cfg.M = m;
    cfg.q = q;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("wide-narrow composition and widths") {
    const Batch batch = gen_wn(wn_cfg(10, 10, 0.2, 42));
    REQUIRE(batch.size() == 10);
    int wide = 0;
    for (const Coflow& c : batch.coflows) {
        if (c.flows.size() > 1) {
            ++wide;
            CHECK(c.flows.size() >= 4);    // ceil(10/3)
            CHECK(c.flows.size() <= 10);
            std::set<PortId> ingress;
            for (const Flow& f : c.flows) ingress.insert(f.src);
            CHECK(ingress.size() == c.flows.size());   // distinct ingress ports
        }
    }
    CHECK(wide == 2);   // round(q N)
}

TEST_CASE("q = 0 gives only single-flow coflows") {
    const Batch batch = gen_wn(wn_cfg(12, 6, 0.0, 7));
    for (const Coflow& c : batch.coflows) CHECK(c.flows.size() == 1);
}

TEST_CASE("generation is deterministic under the seed") {
    const Batch a = gen_wn(wn_cfg(8, 8, 0.5, 99));
    const Batch b = gen_wn(wn_cfg(8, 8, 0.5, 99));
    REQUIRE(a.size() == b.size());
    for (size_t j = 0; j < a.size(); ++j) {
        REQUIRE(a.coflows[j].flows.size() == b.coflows[j].flows.size());
        for (size_t i = 0; i < a.coflows[j].flows.size(); ++i) {
            CHECK(a.coflows[j].flows[i].src == b.coflows[j].flows[i].src);
            CHECK(a.coflows[j].flows[i].dst == b.coflows[j].flows[i].dst);
            CHECK(a.coflows[j].flows[i].volume == b.coflows[j].flows[i].volume);
        }
    }
    const Batch c = gen_wn(wn_cfg(8, 8, 0.5, 100));
    bool differs = false;
    for (size_t j = 0; j < a.size() && !differs; ++j)
        differs = a.coflows[j].flows[0].volume != c.coflows[j].flows[0].volume;
    CHECK(differs);
}

TEST_CASE("map-reduce coflows are complete bipartite") {
    GenConfig cfg;
    cfg.kind = GenKind::MR;
    cfg.N = 20;
    cfg.M = 30;
    cfg.mappers = 10;
    cfg.reducers = 3;
    cfg.seed = 5;
    const Batch batch = gen_mr(cfg);
    for (const Coflow& c : batch.coflows) {
        std::set<PortId> srcs, dsts;
        std::set<std::pair<PortId, PortId>> pairs;
        for (const Flow& f : c.flows) {
            srcs.insert(f.src);
            dsts.insert(f.dst);
            pairs.insert({f.src, f.dst});
        }
        CHECK(srcs.size() <= 10);
        CHECK(dsts.size() <= 3);
        CHECK(pairs.size() == c.flows.size());
        CHECK(c.flows.size() == srcs.size() * dsts.size());   // every pair present
        CHECK(c.flows.size() >= 1);
        CHECK(c.flows.size() <= 30);
    }
}

TEST_CASE("mappers = reducers = 1 gives single flows") {
    GenConfig cfg;
    cfg.kind = GenKind::MR;
    cfg.N = 10;
    cfg.M = 4;
    cfg.mappers = 1;
    cfg.reducers = 1;
    cfg.seed = 1;
    for (const Coflow& c : gen_mr(cfg).coflows) CHECK(c.flows.size() == 1);
}

TEST_CASE("volume law hits its mean") {
    GenConfig cfg = wn_cfg(1, 2, 0.0, 0);
    double sum = 0.0;
    long count = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        cfg.seed = s;
        const Batch b = gen_wn(cfg);
        sum += b.coflows[0].flows[0].volume;
        ++count;
    }
    CHECK(sum / static_cast<double>(count) == doctest::Approx(10.0).epsilon(0.05));

    // Gamma alternative: same mean, sd 3.
    cfg.law = VolumeLaw::Gamma;
    double gsum = 0.0, gsq = 0.0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        cfg.seed = s;
        const double v = gen_wn(cfg).coflows[0].flows[0].volume;
        gsum += v;
        gsq += v * v;
    }
    const double mean = gsum / 10000.0;
    CHECK(mean == doctest::Approx(10.0).epsilon(0.02));
    CHECK(std::sqrt(gsq / 10000.0 - mean * mean) == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("phi modes") {
    GenConfig cfg = wn_cfg(6, 4, 0.5, 3);
    for (const Coflow& c : gen_wn(cfg).coflows) CHECK(c.phi == 1.0);
    cfg.phi = PhiMode::Volume;
    for (const Coflow& c : gen_wn(cfg).coflows)
        CHECK(c.phi == doctest::Approx(c.total_volume()));
}

TEST_CASE("generated batches pass model validation") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        GenConfig cfg = wn_cfg(9, 7, 0.4, s);
        CHECK_NOTHROW(gen_wn(cfg).validate());
        GenConfig mr;
        mr.kind = GenKind::MR;
        mr.N = 9;
        mr.M = 7;
        mr.mappers = 4;
        mr.reducers = 3;
        mr.seed = s;
        CHECK_NOTHROW(gen_mr(mr).validate());
    }
}

TEST_CASE("config validation") {
    GenConfig bad = wn_cfg(0, 4, 0.2, 1);
    CHECK_THROWS_AS(bad.validate(), model_error);
    bad = wn_cfg(4, 4, 1.5, 1);
    CHECK_THROWS_AS(bad.validate(), model_error);
    GenConfig mr;
    mr.kind = GenKind::MR;
    mr.N = 2;
    mr.M = 4;
    mr.mappers = 5;   // > M
    CHECK_THROWS_AS(mr.validate(), model_error);
}
