// Exact rational scalar used by the oracle-grade code paths.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace coflow {

using Rat = boost::multiprecision::mpq_rational;

// Every finite double is a dyadic rational; the conversion below is exact.
inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("rat_from_double: non-finite input");
    }
    return Rat(x);
}

inline double rat_to_double(const Rat& q) { return q.convert_to<double>(); }

// Uniform scalar conversion helpers so templated algorithms can accept
// batches whose volumes are stored as double.
template <class T>
inline T scalar_from_double(double x);

template <>
inline double scalar_from_double<double>(double x) { return x; }

template <>
inline Rat scalar_from_double<Rat>(double x) { return rat_from_double(x); }

template <class T>
inline double scalar_to_double(const T& x);

template <>
inline double scalar_to_double<double>(const double& x) { return x; }

template <>
inline double scalar_to_double<Rat>(const Rat& x) { return rat_to_double(x); }

inline std::string scalar_to_string(double x) { return std::to_string(x); }
inline std::string scalar_to_string(const Rat& x) { return x.str(); }

}  // namespace coflow
