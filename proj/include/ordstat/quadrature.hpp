#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

#include "ordstat/errors.hpp"

namespace ordstat {

/// Adaptive double-exponential quadrature over finite, semi-infinite or
/// doubly infinite intervals. Endpoint singularities of integrable type
/// (e.g. z^{a-1} with a < 1) are handled by the tanh-sinh rule.
struct QuadOptions {
    double target_tol = 1e-9;  // tolerance requested from the rule
    double rel_tol = 1e-6;     // accepted relative error of the estimate
    double abs_floor = 1e-14;  // below this the integral counts as zero
};

namespace detail {

inline void check_quadrature(double value, double err, double l1, const QuadOptions& opts) {
    if (!std::isfinite(value)) {
        raise(ErrorCode::QuadratureFailure, "quadrature produced a non-finite value");
    }
    if (err > opts.rel_tol * std::max(l1, std::abs(value)) && err > opts.abs_floor) {
        raise(ErrorCode::QuadratureFailure, "quadrature stalled above tolerance");
    }
}

} // namespace detail

template <class F>
double integrate(F&& f, double a, double b, const QuadOptions& opts = {}) {
    using boost::math::quadrature::exp_sinh;
    using boost::math::quadrature::sinh_sinh;
    using boost::math::quadrature::tanh_sinh;

    if (a == b) return 0.0;
    if (a > b) return -integrate(std::forward<F>(f), b, a, opts);

    double err = 0.0, l1 = 0.0;
    double value = 0.0;
    const bool alo = std::isinf(a);
    const bool bhi = std::isinf(b);
    if (!alo && !bhi) {
        static thread_local tanh_sinh<double> rule(15);
        value = rule.integrate(f, a, b, opts.target_tol, &err, &l1);
    } else if (alo && bhi) {
        static thread_local sinh_sinh<double> rule;
        value = rule.integrate(f, opts.target_tol, &err, &l1);
    } else {
        static thread_local exp_sinh<double> rule;
        value = rule.integrate(f, a, b, opts.target_tol, &err, &l1);
    }
    detail::check_quadrature(value, err, l1, opts);
    return value;
}

} // namespace ordstat
