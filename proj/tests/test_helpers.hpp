#ifndef VEECAV_TEST_HELPERS_HPP
#define VEECAV_TEST_HELPERS_HPP

#include "veecav/errors.hpp"
#include "veecav/lindblad.hpp"
#include "veecav/params.hpp"
#include "veecav/regression.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <random>

namespace veecav::testing {

/// Deterministic generator of stable, nondegenerate parameter sets.
class RandomStableParams {
  public:
    explicit RandomStableParams(unsigned seed) : rng_(seed) {}

    SystemParams next() {
        for (int attempt = 0; attempt < 200; ++attempt) {
            SystemParams p;
            p.gamma_a = uniform(0.1, 0.6);
            p.P_a = uniform(0.0, 0.8) * p.gamma_a;
            p.gamma_1 = uniform(0.05, 0.5);
            p.gamma_2 = uniform(0.05, 0.5);
            p.P_1 = uniform(0.01, 0.5);
            p.P_2 = uniform(0.01, 0.5);
            p.g_2 = uniform(0.1, 2.0);
            p.delta_1 = uniform(-2.0, 2.0);
            p.delta_2 = uniform(-2.0, 2.0);
            p.beta = uniform(-1.0, 1.0);
            try {
                validate_params(p);
                decompose_generator(correlator_generator(p));
                return p;
            } catch (const Error&) {
                continue;
            }
        }
        throw std::runtime_error("could not draw a stable parameter set");
    }

  private:
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    std::mt19937 rng_;
};

/// Independent eigenvalue oracle: roots of the characteristic cubic of a
/// 3x3 complex matrix via the complex Cardano formula plus Newton polish.
inline std::array<std::complex<double>, 3> cubic_eigenvalues(const Mat3c& T) {
    using Cx = std::complex<double>;
    const Cx tr = T.trace();
    const Cx c2 = T(0, 0) * T(1, 1) - T(0, 1) * T(1, 0) + T(0, 0) * T(2, 2) -
                  T(0, 2) * T(2, 0) + T(1, 1) * T(2, 2) - T(1, 2) * T(2, 1);
    const Cx det = T.determinant();

    // x^3 - tr x^2 + c2 x - det = 0; depress with x = y + tr/3.
    const Cx pc = c2 - tr * tr / 3.0;
    const Cx qc = -det + tr * c2 / 3.0 - 2.0 * tr * tr * tr / 27.0;

    const Cx disc = std::sqrt(qc * qc / 4.0 + pc * pc * pc / 27.0);
    Cx u = std::pow(-qc / 2.0 + disc, 1.0 / 3.0);
    if (std::abs(u) < 1e-30) u = std::pow(-qc / 2.0 - disc, 1.0 / 3.0);
    const Cx v = std::abs(u) < 1e-30 ? Cx(0.0) : -pc / (3.0 * u);
    const Cx w1(-0.5, std::sqrt(3.0) / 2.0);
    const Cx w2(-0.5, -std::sqrt(3.0) / 2.0);

    std::array<Cx, 3> roots = {u + v + tr / 3.0, w1 * u + w2 * v + tr / 3.0,
                               w2 * u + w1 * v + tr / 3.0};
    for (auto& r : roots)
        for (int it = 0; it < 4; ++it) {
            const Cx f = ((r - tr) * r + c2) * r - det;
            const Cx df = (3.0 * r - 2.0 * tr) * r + c2;
            if (std::abs(df) < 1e-30) break;
            r -= f / df;
        }
    return roots;
}

/// The nine single-time moments evaluated on an oracle density matrix.
inline std::array<std::complex<double>, 9> oracle_nine(const LindbladModel& m,
                                                       const Eigen::MatrixXcd& rho) {
    const auto& a = m.label("a");
    const auto& s1 = m.label("sigma1");
    const auto& s2 = m.label("sigma2");
    return {expectation(a.adjoint() * a, rho),  expectation(a.adjoint() * s1, rho),
            expectation(a * s1.adjoint(), rho), expectation(s1.adjoint() * s1, rho),
            expectation(s1.adjoint() * s2, rho), expectation(a.adjoint() * s2, rho),
            expectation(a * s2.adjoint(), rho), expectation(s2.adjoint() * s2, rho),
            expectation(s1 * s2.adjoint(), rho)};
}

} // namespace veecav::testing

#endif
