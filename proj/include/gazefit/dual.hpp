/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/dual.hpp
 *
 * Copyright 2026 The gazefit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#ifndef GAZEFIT_DUAL_HPP
#define GAZEFIT_DUAL_HPP

#include <Eigen/Core>

#include <cmath>
#include <limits>

namespace gazefit {

/**
 * @brief Forward-mode dual number: carries a value and one directional
 * derivative through arbitrary arithmetic.
 *
 * The whole fitting pipeline is templated on its scalar type, so running it
 * on Dual<double> yields one directional derivative of the loss, and running
 * it on Dual<Dual<double>> yields second derivatives (for the damped-Newton
 * steps). Branch decisions always compare values only, so a dual evaluation
 * follows the same code path as a plain double evaluation.
 *
 * abs() uses the subgradient 0 at exactly 0, which is what the L1-style
 * losses expect at their kinks.
 */
template <typename T>
struct Dual
{
    T v{}; // value
    T d{}; // derivative

    Dual() = default;
    Dual(double value) : v(value), d(0.0) {} // NOLINT: implicit by design
    Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

/// Strips all derivative parts: the plain double value of a (possibly nested) dual.
inline double scalar_value(double x) { return x; }
template <typename T>
inline double scalar_value(const Dual<T>& x)
{
    return scalar_value(x.v);
}

inline bool all_finite(double x) { return std::isfinite(x); }
template <typename T>
inline bool all_finite(const Dual<T>& x)
{
    return all_finite(x.v) && all_finite(x.d);
}

// --- arithmetic -----------------------------------------------------------

template <typename T>
inline Dual<T> operator-(const Dual<T>& a)
{
    return {-a.v, -a.d};
}

template <typename T>
inline Dual<T> operator+(const Dual<T>& a, const Dual<T>& b)
{
    return {a.v + b.v, a.d + b.d};
}
template <typename T>
inline Dual<T> operator+(const Dual<T>& a, double b)
{
    return {a.v + b, a.d};
}
template <typename T>
inline Dual<T> operator+(double a, const Dual<T>& b)
{
    return {a + b.v, b.d};
}

template <typename T>
inline Dual<T> operator-(const Dual<T>& a, const Dual<T>& b)
{
    return {a.v - b.v, a.d - b.d};
}
template <typename T>
inline Dual<T> operator-(const Dual<T>& a, double b)
{
    return {a.v - b, a.d};
}
template <typename T>
inline Dual<T> operator-(double a, const Dual<T>& b)
{
    return {a - b.v, -b.d};
}

template <typename T>
inline Dual<T> operator*(const Dual<T>& a, const Dual<T>& b)
{
    return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <typename T>
inline Dual<T> operator*(const Dual<T>& a, double b)
{
    return {a.v * b, a.d * b};
}
template <typename T>
inline Dual<T> operator*(double a, const Dual<T>& b)
{
    return {a * b.v, a * b.d};
}

template <typename T>
inline Dual<T> operator/(const Dual<T>& a, const Dual<T>& b)
{
    const T inv = 1.0 / b.v;
    return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
}
template <typename T>
inline Dual<T> operator/(const Dual<T>& a, double b)
{
    const double inv = 1.0 / b;
    return {a.v * inv, a.d * inv};
}
template <typename T>
inline Dual<T> operator/(double a, const Dual<T>& b)
{
    const T inv = 1.0 / b.v;
    return {a * inv, -a * inv * inv * b.d};
}

template <typename T>
inline Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b)
{
    a = a + b;
    return a;
}
template <typename T>
inline Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b)
{
    a = a - b;
    return a;
}
template <typename T>
inline Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b)
{
    a = a * b;
    return a;
}
template <typename T>
inline Dual<T>& operator/=(Dual<T>& a, const Dual<T>& b)
{
    a = a / b;
    return a;
}

// Comparisons act on values only, so branches taken during a dual evaluation
// match the plain-double evaluation at the same point.
template <typename T>
inline bool operator<(const Dual<T>& a, const Dual<T>& b)
{
    return scalar_value(a) < scalar_value(b);
}
template <typename T>
inline bool operator<(const Dual<T>& a, double b)
{
    return scalar_value(a) < b;
}
template <typename T>
inline bool operator<(double a, const Dual<T>& b)
{
    return a < scalar_value(b);
}
template <typename T>
inline bool operator>(const Dual<T>& a, const Dual<T>& b)
{
    return scalar_value(a) > scalar_value(b);
}
template <typename T>
inline bool operator>(const Dual<T>& a, double b)
{
    return scalar_value(a) > b;
}
template <typename T>
inline bool operator>(double a, const Dual<T>& b)
{
    return a > scalar_value(b);
}
template <typename T>
inline bool operator<=(const Dual<T>& a, const Dual<T>& b)
{
    return scalar_value(a) <= scalar_value(b);
}
template <typename T>
inline bool operator>=(const Dual<T>& a, const Dual<T>& b)
{
    return scalar_value(a) >= scalar_value(b);
}
template <typename T>
inline bool operator==(const Dual<T>& a, const Dual<T>& b)
{
    return scalar_value(a) == scalar_value(b);
}
template <typename T>
inline bool operator!=(const Dual<T>& a, const Dual<T>& b)
{
    return scalar_value(a) != scalar_value(b);
}

// --- elementary functions ---------------------------------------------------

template <typename T>
inline Dual<T> abs(const Dual<T>& x)
{
    using std::abs;
    if (x.v < 0.0)
        return -x;
    if (x.v > 0.0)
        return x;
    return {abs(x.v), T(0.0)}; // subgradient 0 at the kink
}

template <typename T>
inline Dual<T> sqrt(const Dual<T>& x)
{
    using std::sqrt;
    const T s = sqrt(x.v);
    return {s, x.d / (2.0 * s)};
}

template <typename T>
inline Dual<T> sin(const Dual<T>& x)
{
    using std::cos;
    using std::sin;
    return {sin(x.v), cos(x.v) * x.d};
}

template <typename T>
inline Dual<T> cos(const Dual<T>& x)
{
    using std::cos;
    using std::sin;
    return {cos(x.v), -sin(x.v) * x.d};
}

template <typename T>
inline Dual<T> exp(const Dual<T>& x)
{
    using std::exp;
    const T e = exp(x.v);
    return {e, e * x.d};
}

template <typename T>
inline Dual<T> log(const Dual<T>& x)
{
    using std::log;
    return {log(x.v), x.d / x.v};
}

template <typename T>
inline Dual<T> atan2(const Dual<T>& y, const Dual<T>& x)
{
    using std::atan2;
    const T den = x.v * x.v + y.v * y.v;
    return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / den};
}

template <typename T>
inline Dual<T> asin(const Dual<T>& x)
{
    using std::asin;
    using std::sqrt;
    return {asin(x.v), x.d / sqrt(1.0 - x.v * x.v)};
}

/// x^n for non-negative integer n by repeated multiplication; exact for the
/// small exponents the losses use and safe at x == 0.
template <typename T>
inline T ipow(const T& x, int n)
{
    T result(1.0);
    T base = x;
    int e = n;
    while (e > 0)
    {
        if (e & 1)
            result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

inline double ipow(double x, int n)
{
    double result = 1.0;
    double base = x;
    int e = n;
    while (e > 0)
    {
        if (e & 1)
            result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

template <typename T>
inline const T& max_by_value(const T& a, const T& b)
{
    return (scalar_value(a) < scalar_value(b)) ? b : a;
}

} // namespace gazefit

namespace Eigen {

template <typename T>
struct NumTraits<gazefit::Dual<T>>
{
    using Real = gazefit::Dual<T>;
    using NonInteger = gazefit::Dual<T>;
    using Nested = gazefit::Dual<T>;
    using Literal = gazefit::Dual<T>;

    static inline Real dummy_precision() { return Real(1e-12); }
    static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
    static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
    static inline Real lowest() { return Real(-std::numeric_limits<double>::max()); }
    static inline int digits10() { return std::numeric_limits<double>::digits10; }
    static inline int max_digits10() { return std::numeric_limits<double>::max_digits10; }

    enum
    {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        ReadCost = 1,
        AddCost = 3,
        MulCost = 3,
        RequireInitialization = 1,
    };
};

template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<gazefit::Dual<T>, double, BinaryOp>
{
    using ReturnType = gazefit::Dual<T>;
};
template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, gazefit::Dual<T>, BinaryOp>
{
    using ReturnType = gazefit::Dual<T>;
};

} // namespace Eigen

#endif /* GAZEFIT_DUAL_HPP */
