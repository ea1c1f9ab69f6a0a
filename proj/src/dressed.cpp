#include "veecav/dressed.hpp"
#include "veecav/errors.hpp"
#include "veecav/rk45.hpp"

#include <cmath>

namespace veecav {

using Cx = std::complex<double>;

void validate_dressed(const DressedParams& p) {
    if (p.N < 1) throw RangeError("N", "must be >= 1");
    if (!(p.Omega >= 0)) throw RangeError("Omega", "must be >= 0");
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0) || !std::isfinite(v)) throw RangeError(name, "must be >= 0 and finite");
    };
    nonneg(p.g, "g");
    nonneg(p.gamma, "gamma");
    nonneg(p.Gamma_cav, "Gamma_cav");
    nonneg(p.gamma1_d, "gamma1_d");
    nonneg(p.gamma2_d, "gamma2_d");
    if (!std::isfinite(p.delta_1) || !std::isfinite(p.delta_2) || !std::isfinite(p.lambda_1))
        throw RangeError("delta/lambda_1", "must be finite");
}

double mixing_angle(double Omega, double delta_1) {
    if (!(Omega >= 0)) throw RangeError("Omega", "must be >= 0");
    if (Omega == 0.0 && delta_1 == 0.0)
        throw UndefinedAngleError("UndefinedAngleError: Omega = delta_1 = 0");
    return 0.5 * std::atan2(Omega, delta_1);  // in [0, pi/2] for Omega >= 0
}

double generalized_rabi(double Omega, double delta_1) { return std::hypot(Omega, delta_1); }

double steady_inversion(int N, double alpha, InversionDenominator denom) {
    if (N < 1) throw RangeError("N", "must be >= 1");
    if (alpha < 0 || alpha > M_PI / 2 + 1e-12) throw RangeError("alpha", "must lie in [0, pi/2]");
    const double c2a = std::cos(2.0 * alpha);
    const double den = denom == InversionDenominator::verbatim
                           ? 1.0 + std::cos(alpha) * std::cos(alpha)
                           : 1.0 + c2a * c2a;
    return -2.0 * N * c2a / den;
}

double pulled_frequency(double gamma1_d, double Gamma_cav, double delta_2, double omega_prime) {
    if (gamma1_d < 0 || Gamma_cav < 0) throw RangeError("rates", "must be >= 0");
    const double sum = gamma1_d + Gamma_cav;
    if (!(sum > 0)) throw DivisionError("DivisionError: gamma1_d + Gamma_cav = 0");
    return (gamma1_d * delta_2 + Gamma_cav * omega_prime) / sum;
}

ThresholdReport lasing_margin(const DressedParams& p, InversionDenominator denom) {
    (void)denom;
    validate_dressed(p);
    const double alpha = mixing_angle(p.Omega, p.delta_1);
    const double wp = generalized_rabi(p.Omega, p.delta_1);
    const double c2a = std::cos(2.0 * alpha);
    const double s2a = std::sin(2.0 * alpha);

    const double num = -double(p.N) * p.g * p.g * c2a * (1.0 + c2a) * (1.0 + c2a);
    const double den = 4.0 * p.gamma * p.Gamma_cav * (2.0 + s2a * s2a) * (1.0 + c2a * c2a);
    if (den == 0.0) throw DivisionError("DivisionError: gamma * Gamma_cav = 0 in threshold condition");
    const double rate_sum = p.gamma1_d + p.Gamma_cav;
    double pull = 1.0;
    if (p.delta_2 != wp) {
        if (rate_sum == 0.0)
            throw DivisionError("DivisionError: gamma1_d + Gamma_cav = 0 in threshold condition");
        const double q = (p.delta_2 - wp) / rate_sum;
        pull = 1.0 / (1.0 + q * q);
    }
    const double rhs = (num / den) * pull;
    return {rhs, rhs - 1.0};
}

std::vector<TrajectoryPoint> integrate_semiclassical(const DressedParams& p,
                                                     const SemiclassicalState& s0, double t_max,
                                                     double dt, InversionDenominator denom) {
    validate_dressed(p);
    if (!(dt > 0) || !(t_max > 0)) throw RangeError("t", "need dt > 0 and t_max > 0");

    const double alpha = mixing_angle(p.Omega, p.delta_1);
    const double wp = generalized_rabi(p.Omega, p.delta_1);
    const double s3bar = steady_inversion(p.N, alpha, denom);

    auto deriv = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
        const Cx S = y(0);
        const Cx S3 = y(1);
        const Cx a = y(2);
        Eigen::VectorXcd d(3);
        d(0) = -(p.gamma1_d + Cx(0, wp)) * S + Cx(0, p.lambda_1) * S3 * a;
        d(1) = -p.gamma2_d * (S3 - s3bar) +
               2.0 * Cx(0, p.gamma1_d) * (std::conj(a) * S - std::conj(S) * a);
        d(2) = -(p.Gamma_cav + Cx(0, p.delta_2)) * a - Cx(0, p.lambda_1) * S;
        return d;
    };

    Eigen::VectorXcd y(3);
    y << s0.S, Cx(s0.S3, 0.0), s0.a;

    std::vector<TrajectoryPoint> traj;
    const int steps = static_cast<int>(std::ceil(t_max / dt));
    traj.reserve(static_cast<size_t>(steps) + 1);
    traj.push_back({0.0, s0});
    double t = 0.0;
    for (int k = 1; k <= steps; ++k) {
        const double tk = std::min(k * dt, t_max);
        y = detail::integrate_rk45(deriv, y, t, tk, 1e-9, 1e-9);
        t = tk;
        SemiclassicalState s;
        s.S = y(0);
        s.S3 = y(1).real();
        s.a = y(2);
        traj.push_back({t, s});
    }
    return traj;
}

} // namespace veecav
