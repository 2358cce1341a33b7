#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coflow/io.hpp"
#include "coflow/workload.hpp"
#include "instances.hpp"

using namespace coflow;

TEST_CASE("json document round trip") {
    const std::string text = R"({
      "M": 3,
      "coflows": [
        {"id": 1, "release": 0, "weight": 1, "phi": 1,
         "flows": [{"src": 1, "dst": 4, "vol": 3.0},
                   {"src": 2, "dst": 5, "vol": 3.0},
                   {"src": 3, "dst": 6, "vol": 3.0}]},
        {"id": 2, "release": 0, "weight": 1, "phi": 1,
         "flows": [{"src": 1, "dst": 4, "vol": 1.0}, {"src": 1, "dst": 5, "vol": 1.0},
                   {"src": 3, "dst": 5, "vol": 1.0}, {"src": 3, "dst": 6, "vol": 1.0}]}
      ]})";
    const Batch batch = batch_from_json(text);
    CHECK(batch.fabric.M == 3);
    CHECK(batch.size() == 2);
    CHECK(batch.by_id(2).flows.size() == 4);
    CHECK(batch.fabric.capacity(5) == 1.0);   // default unit capacities

    const Batch again = batch_from_json(batch_to_json(batch));
    REQUIRE(again.size() == batch.size());
    for (size_t j = 0; j < batch.size(); ++j) {
        CHECK(again.coflows[j].id == batch.coflows[j].id);
        REQUIRE(again.coflows[j].flows.size() == batch.coflows[j].flows.size());
        for (size_t i = 0; i < batch.coflows[j].flows.size(); ++i)
            CHECK(again.coflows[j].flows[i].volume == batch.coflows[j].flows[i].volume);
    }
}

TEST_CASE("random batches survive the json round trip bit-exactly") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Batch batch = testing::random_batch(seed);
        const Batch again = batch_from_json(batch_to_json(batch));
        REQUIRE(again.size() == batch.size());
        for (size_t j = 0; j < batch.size(); ++j) {
            CHECK(again.coflows[j].phi == batch.coflows[j].phi);
            for (size_t i = 0; i < batch.coflows[j].flows.size(); ++i)
                CHECK(again.coflows[j].flows[i].volume == batch.coflows[j].flows[i].volume);
        }
    }
}

TEST_CASE("csv ingestion") {
    const std::string text =
        "coflow_id,src,dst,vol,release,weight,phi\n"
        "1,1,4,3.0,0,1,1\n"
        "1,2,5,3.0,0,1,1\n"
        "1,3,6,3.0,0,1,1\n"
        "2,1,4,1.0,0,1,1\n"
        "2,1,5,1.0,0,1,1\n"
        "2,3,5,1.0,0,1,1\n"
        "2,3,6,1.0,0,1,1\n";
    const Batch batch = batch_from_csv(text);
    CHECK(batch.fabric.M == 3);
    CHECK(batch.size() == 2);
    CHECK(batch.by_id(1).flows.size() == 3);
    CHECK(batch.by_id(2).total_volume() == doctest::Approx(4.0));

    CHECK_THROWS_AS(batch_from_csv("wrong,header\n1,2\n"), model_error);
    const std::string inconsistent =
        "coflow_id,src,dst,vol,release,weight,phi\n"
        "1,1,2,1.0,0,1,1\n"
        "1,1,2,1.0,0,2,1\n";
    CHECK_THROWS_AS(batch_from_csv(inconsistent), model_error);
}

TEST_CASE("capacities serialize and load") {
    Coflow c{1, {{1, 2, 4.0}}, 0.0, 1.0, 1.0};
    const Batch batch(Fabric(1, {2.0, 3.0}), {c});
    const Batch again = batch_from_json(batch_to_json(batch));
    CHECK(again.fabric.capacity(1) == 2.0);
    CHECK(again.fabric.capacity(2) == 3.0);
}
