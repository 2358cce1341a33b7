#include "coflow/workload.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace coflow {

void GenConfig::validate() const {
    if (N <= 0) throw model_error("gen: N must be positive");
    if (M <= 0) throw model_error("gen: M must be positive");
    if (!(mean_volume > 0.0)) throw model_error("gen: mean volume must be > 0");
    if (kind == GenKind::WN) {
        if (q < 0.0 || q > 1.0) throw model_error("gen: q must be in [0,1]");
    } else {
        if (mappers < 1 || mappers > M) throw model_error("gen: mappers must be in [1,M]");
        if (reducers < 1 || reducers > M) throw model_error("gen: reducers must be in [1,M]");
    }
    if (law == VolumeLaw::Gamma && !(gamma_sd > 0.0))
        throw model_error("gen: gamma sd must be > 0");
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do { x = engine_(); } while (x >= limit);
    return x % n;
}

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

double Rng::exponential(double mean) {
    double u;
    do { u = uniform01(); } while (u <= 0.0);
    return -mean * std::log(u);
}

double Rng::normal() {
    // Box-Muller; one value per call keeps the stream layout simple.
    double u1, u2;
    do { u1 = uniform01(); } while (u1 <= 0.0);
    u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double mean, double sd) {
    // Marsaglia-Tsang for shape k = (mean/sd)^2, scale = sd^2/mean.
    const double shape = (mean / sd) * (mean / sd);
    const double scale = sd * sd / mean;
    double k = shape;
    double boost = 1.0;
    if (k < 1.0) {
        double u;
        do { u = uniform01(); } while (u <= 0.0);
        boost = std::pow(u, 1.0 / k);
        k += 1.0;
    }
    const double d = k - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v * scale;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return boost * d * v * scale;
    }
}

std::vector<int> Rng::sample_distinct(int lo, int hi, int k) {
    std::vector<int> pool;
    for (int v = lo; v <= hi; ++v) pool.push_back(v);
    std::vector<int> out;
    for (int i = 0; i < k; ++i) {
        const std::uint64_t idx = below(pool.size() - static_cast<size_t>(i)) + static_cast<size_t>(i);
        std::swap(pool[static_cast<size_t>(i)], pool[idx]);
        out.push_back(pool[static_cast<size_t>(i)]);
    }
    return out;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

double draw_volume(Rng& rng, const GenConfig& cfg) {
    if (cfg.law == VolumeLaw::Exponential) return rng.exponential(cfg.mean_volume);
    return rng.gamma(cfg.mean_volume, cfg.gamma_sd);
}

void finish_coflow(Coflow& c, const GenConfig& cfg) {
    c.release = 0.0;
    c.weight = 1.0;
    c.phi = cfg.phi == PhiMode::Unit ? 1.0 : c.total_volume();
}

}  // namespace

Batch gen_wn(const GenConfig& cfg) {
    cfg.validate();
    if (cfg.kind != GenKind::WN) throw model_error("gen_wn: config kind is not WN");
    const int n_wide = static_cast<int>(std::llround(cfg.q * cfg.N));
    const int min_width = (cfg.M + 2) / 3;   // ceil(M/3)

    std::vector<Coflow> coflows;
    for (int i = 0; i < cfg.N; ++i) {
        Rng rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        Coflow c;
        c.id = i + 1;
        if (i < n_wide) {
            const int width = rng.uniform_int(min_width, cfg.M);
            const auto ingress = rng.sample_distinct(1, cfg.M, width);
            for (int src : ingress) {
                Flow f;
                f.src = src;
                f.dst = cfg.M + rng.uniform_int(1, cfg.M);
                f.volume = draw_volume(rng, cfg);
                c.flows.push_back(f);
            }
        } else {
            Flow f;
            f.src = rng.uniform_int(1, cfg.M);
            f.dst = cfg.M + rng.uniform_int(1, cfg.M);
            f.volume = draw_volume(rng, cfg);
            c.flows.push_back(f);
        }
        finish_coflow(c, cfg);
        coflows.push_back(std::move(c));
    }
    return Batch(Fabric(cfg.M), std::move(coflows));
}

Batch gen_mr(const GenConfig& cfg) {
    cfg.validate();
    if (cfg.kind != GenKind::MR) throw model_error("gen_mr: config kind is not MR");
    std::vector<Coflow> coflows;
    for (int i = 0; i < cfg.N; ++i) {
        Rng rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        Coflow c;
        c.id = i + 1;
        const int m = rng.uniform_int(1, cfg.mappers);
        const int r = rng.uniform_int(1, cfg.reducers);
        const auto mappers = rng.sample_distinct(1, cfg.M, m);
        const auto reducers = rng.sample_distinct(1, cfg.M, r);
        for (int src : mappers)
            for (int red : reducers) {
                Flow f;
                f.src = src;
                f.dst = cfg.M + red;
                f.volume = draw_volume(rng, cfg);
                c.flows.push_back(f);
            }
        finish_coflow(c, cfg);
        coflows.push_back(std::move(c));
    }
    return Batch(Fabric(cfg.M), std::move(coflows));
}

Batch generate(const GenConfig& cfg) {
    return cfg.kind == GenKind::WN ? gen_wn(cfg) : gen_mr(cfg);
}

}  // namespace coflow
