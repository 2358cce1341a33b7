// Double-precision inner-loop kernels with runtime-selected SIMD backends.
//
// The scalar implementations are the reference semantics; the AVX2 variants
// must agree with them up to floating-point reassociation and are
// equivalence-tested against them. Exact-rational code paths never call
// these kernels.
#pragma once

#include <cstddef>
#include <string>

namespace coflow::kernels {

enum class Backend { Scalar, Avx2 };

// Backend active for all kernel calls. Detection runs once at first use;
// force_backend() returns false if the requested backend is unsupported on
// this CPU or was compiled out.
Backend active_backend();
bool force_backend(Backend b);
void reset_backend();   // back to auto-detection
std::string backend_name(Backend b);

double sum(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);
double max_val(const double* x, std::size_t n);

// max_i s[i] * (x[0] + ... + x[i]); 0 for n = 0.
// The per-port slowdown estimate of the minimum-slowdown scan.
double scaled_prefix_max(const double* x, const double* s, std::size_t n);

// min_i (d[i] - (x[0] + ... + x[i])); +inf for n = 0.
// Slack of prefix loads against per-position deadlines.
double min_prefix_slack(const double* x, const double* d, std::size_t n);

namespace detail {
double sum_scalar(const double* x, std::size_t n);
double sum_sq_scalar(const double* x, std::size_t n);
double max_val_scalar(const double* x, std::size_t n);
double scaled_prefix_max_scalar(const double* x, const double* s, std::size_t n);
double min_prefix_slack_scalar(const double* x, const double* d, std::size_t n);

#if defined(COFLOW_HAVE_AVX2)
double sum_avx2(const double* x, std::size_t n);
double sum_sq_avx2(const double* x, std::size_t n);
double max_val_avx2(const double* x, std::size_t n);
double scaled_prefix_max_avx2(const double* x, const double* s, std::size_t n);
double min_prefix_slack_avx2(const double* x, const double* d, std::size_t n);
#endif
}  // namespace detail

}  // namespace coflow::kernels
