#ifndef VEECAV_RK45_HPP
#define VEECAV_RK45_HPP

#include "veecav/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace veecav::detail {

// Dormand-Prince 5(4) with standard step control on complex state vectors.
// Deterministic: step decisions depend only on the state and tolerances.
template <typename Deriv>
Eigen::VectorXcd integrate_rk45(const Deriv& f, Eigen::VectorXcd y, double t0, double t1,
                                double atol = 1e-10, double rtol = 1e-9,
                                long max_steps = 2000000) {
    if (t1 == t0) return y;
    if (t1 < t0) throw StepFailureError("StepFailureError: backward integration not supported");

    const double span = t1 - t0;
    double t = t0;
    double h = span / 100.0;
    Eigen::VectorXcd k1 = f(y);
    long steps = 0;

    while (true) {
        const double gap = t1 - t;
        if (gap <= span * 1e-14) break;  // reached t1 to within rounding
        if (++steps > max_steps)
            throw StepFailureError("StepFailureError: step budget exhausted");
        if (!(h > span * 1e-14))
            throw StepFailureError("StepFailureError: step size underflow");
        h = std::min(h, gap);

        const Eigen::VectorXcd k2 = f(y + h * (1.0 / 5.0) * k1);
        const Eigen::VectorXcd k3 = f(y + h * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2));
        const Eigen::VectorXcd k4 =
            f(y + h * ((44.0 / 45.0) * k1 + (-56.0 / 15.0) * k2 + (32.0 / 9.0) * k3));
        const Eigen::VectorXcd k5 =
            f(y + h * ((19372.0 / 6561.0) * k1 + (-25360.0 / 2187.0) * k2 +
                       (64448.0 / 6561.0) * k3 + (-212.0 / 729.0) * k4));
        const Eigen::VectorXcd k6 =
            f(y + h * ((9017.0 / 3168.0) * k1 + (-355.0 / 33.0) * k2 + (46732.0 / 5247.0) * k3 +
                       (49.0 / 176.0) * k4 + (-5103.0 / 18656.0) * k5));
        const Eigen::VectorXcd y5 =
            y + h * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 + (125.0 / 192.0) * k4 +
                     (-2187.0 / 6784.0) * k5 + (11.0 / 84.0) * k6);
        const Eigen::VectorXcd k7 = f(y5);
        const Eigen::VectorXcd err =
            h * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1 + (500.0 / 1113.0 - 7571.0 / 16695.0) * k3 +
                 (125.0 / 192.0 - 393.0 / 640.0) * k4 +
                 (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5 + (11.0 / 84.0 - 187.0 / 2100.0) * k6 +
                 (-1.0 / 40.0) * k7);

        double enorm = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
            enorm = std::max(enorm, std::abs(err(i)) / sc);
        }

        if (enorm <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // first-same-as-last
        }
        const double fac =
            enorm > 0.0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
    }
    return y;
}

} // namespace veecav::detail

#endif
