#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rydgate {

// Adaptive 31-point Gauss-Kronrod on [a, b], split at the pulse centre when it
// lies inside the interval.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10) {
    using boost::math::quadrature::gauss_kronrod;
    if (b <= a) {
        return a == b ? 0.0 : -integrate(f, b, a, rel_tol);
    }
    constexpr unsigned max_depth = 25;
    if (a < 0.0 && b > 0.0) {
        return gauss_kronrod<double, 31>::integrate(f, a, 0.0, max_depth, rel_tol) +
               gauss_kronrod<double, 31>::integrate(f, 0.0, b, max_depth, rel_tol);
    }
    return gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol);
}

}  // namespace rydgate
