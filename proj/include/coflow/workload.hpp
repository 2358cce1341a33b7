// Seeded synthetic coflow batches: wide-narrow (WN) and map-reduce (MR).
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "coflow/types.hpp"

namespace coflow {

enum class GenKind { WN, MR };
enum class VolumeLaw { Exponential, Gamma };
enum class PhiMode { Unit, Volume };

struct GenConfig {
    GenKind kind = GenKind::WN;
    int N = 0;
    int M = 0;
    double q = 0.2;           // WN: fraction of wide coflows
    int mappers = 1;          // MR: max mappers
    int reducers = 1;         // MR: max reducers
    double mean_volume = 10.0;
    VolumeLaw law = VolumeLaw::Exponential;
    double gamma_sd = 3.0;    // only for the gamma alternative
    std::uint64_t seed = 0;
    PhiMode phi = PhiMode::Unit;

    void validate() const;
};

// Deterministic per-(seed, coflow index) substreams; distributions are
// implemented explicitly so outputs are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();                       // [0, 1)
    std::uint64_t below(std::uint64_t n);     // [0, n)
    int uniform_int(int lo, int hi);          // [lo, hi]
    double exponential(double mean);
    double gamma(double mean, double sd);
    // k distinct values from [lo, hi], in selection order.
    std::vector<int> sample_distinct(int lo, int hi, int k);

private:
    std::mt19937_64 engine_;
    double normal();
};

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

Batch gen_wn(const GenConfig& cfg);
Batch gen_mr(const GenConfig& cfg);
Batch generate(const GenConfig& cfg);

}  // namespace coflow
