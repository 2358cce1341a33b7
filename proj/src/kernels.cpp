#include "coflow/kernels.hpp"

#include <atomic>
#include <limits>

namespace coflow::kernels {

namespace detail {

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sum_sq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double max_val_scalar(const double* x, std::size_t n) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] > best) best = x[i];
    return best;
}

double scaled_prefix_max_scalar(const double* x, const double* s, std::size_t n) {
    double prefix = 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prefix += x[i];
        const double z = s[i] * prefix;
        if (z > best) best = z;
    }
    return best;
}

double min_prefix_slack_scalar(const double* x, const double* d, std::size_t n) {
    double prefix = 0.0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        prefix += x[i];
        const double slack = d[i] - prefix;
        if (slack < worst) worst = slack;
    }
    return worst;
}

}  // namespace detail

namespace {

struct Vtable {
    double (*sum)(const double*, std::size_t);
    double (*sum_sq)(const double*, std::size_t);
    double (*max_val)(const double*, std::size_t);
    double (*scaled_prefix_max)(const double*, const double*, std::size_t);
    double (*min_prefix_slack)(const double*, const double*, std::size_t);
};

constexpr Vtable kScalar{detail::sum_scalar, detail::sum_sq_scalar, detail::max_val_scalar,
                         detail::scaled_prefix_max_scalar, detail::min_prefix_slack_scalar};

#if defined(COFLOW_HAVE_AVX2)
constexpr Vtable kAvx2{detail::sum_avx2, detail::sum_sq_avx2, detail::max_val_avx2,
                       detail::scaled_prefix_max_avx2, detail::min_prefix_slack_avx2};
#endif

bool avx2_supported() {
#if defined(COFLOW_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<const Vtable*> g_vtable{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const Vtable* detect() {
#if defined(COFLOW_HAVE_AVX2)
    if (avx2_supported()) {
        g_backend.store(Backend::Avx2);
        return &kAvx2;
    }
#endif
    g_backend.store(Backend::Scalar);
    return &kScalar;
}

const Vtable& table() {
    const Vtable* t = g_vtable.load(std::memory_order_acquire);
    if (!t) {
        t = detect();
        g_vtable.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

Backend active_backend() {
    table();
    return g_backend.load();
}

bool force_backend(Backend b) {
    switch (b) {
        case Backend::Scalar:
            g_vtable.store(&kScalar);
            g_backend.store(Backend::Scalar);
            return true;
        case Backend::Avx2:
#if defined(COFLOW_HAVE_AVX2)
            if (avx2_supported()) {
                g_vtable.store(&kAvx2);
                g_backend.store(Backend::Avx2);
                return true;
            }
#endif
            return false;
    }
    return false;
}

void reset_backend() { g_vtable.store(nullptr); }

std::string backend_name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

double sum(const double* x, std::size_t n) { return table().sum(x, n); }
double sum_sq(const double* x, std::size_t n) { return table().sum_sq(x, n); }
double max_val(const double* x, std::size_t n) { return table().max_val(x, n); }
double scaled_prefix_max(const double* x, const double* s, std::size_t n) {
    return table().scaled_prefix_max(x, s, n);
}
double min_prefix_slack(const double* x, const double* d, std::size_t n) {
    return table().min_prefix_slack(x, d, n);
}

}  // namespace coflow::kernels
