#ifndef VEECAV_REGRESSION_HPP
#define VEECAV_REGRESSION_HPP

#include "veecav/params.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <utility>

namespace veecav {

using Mat3c = Eigen::Matrix3cd;
using Vec3c = Eigen::Vector3cd;
using Mat9c = Eigen::Matrix<std::complex<double>, 9, 9>;
using Vec9c = Eigen::Matrix<std::complex<double>, 9, 1>;

/// The two printed variants of the single-time moment matrix. The row-7
/// diagonal rate reads (Gamma_s1 + Gamma_s2)/2 as printed (`verbatim`)
/// or (Gamma_a + Gamma_s2)/2 restoring the conjugate pairing with row 3
/// (`corrected`, the default everywhere).
enum class MomentMatrixMode { corrected, verbatim };

/// Steady-state single-time expectation values, in the fixed order
///   <a+a>, <a+s1>, <a s1+>, <s1+s1>, <s1+s2>, <a+s2>, <a s2+>, <s2+s2>, <s1 s2+>.
struct SteadyStateMoments {
    std::array<std::complex<double>, 9> u{};

    std::complex<double> operator[](int i) const { return u[static_cast<size_t>(i)]; }
    double n_a() const { return u[0].real(); }
    double n_s1() const { return u[3].real(); }
    double n_s2() const { return u[7].real(); }

    /// The cavity-sector moments (<a+a>, <a+s1>, <a+s2>) that seed the
    /// two-time correlator.
    Vec3c cavity_sector() const { return Vec3c(u[0], u[1], u[5]); }
};

/// Drift generator of the single-sided correlator vector
/// (<a+(0)a(tau)>, <a+(0)s1(tau)>, <a+(0)s2(tau)>): d/dtau u = G u.
Mat3c correlator_generator(const SystemParams& p);

/// The 9x9 moment system M u + b = 0 governing the single-time
/// expectation values above; returns (M, b) with b = (P_a,0,0,P_1,0,0,0,P_2,0).
std::pair<Mat9c, Vec9c> single_time_system(const SystemParams& p,
                                           MomentMatrixMode mode = MomentMatrixMode::corrected);

/// Solve M u = -b. Residual guaranteed <= 1e-10 * max(1, |b|_inf);
/// throws SingularSystemError when the condition estimate exceeds 1e14.
SteadyStateMoments steady_state_moments(const SystemParams& p,
                                        MomentMatrixMode mode = MomentMatrixMode::corrected);

/// Eigendecomposition of the correlator generator, stored so that
/// G = V * (-diag(lambda)) * V_inv with Re(lambda_i) > 0 (modes decay).
/// Eigenvalues are sorted by (Im, Re) ascending, i.e. by emission frequency.
struct GeneratorEigensystem {
    Vec3c lambdas;
    Mat3c V;
    Mat3c V_inv;
};

/// Throws DegenerateSpectrumError if two eigenvalues coincide within 1e-12
/// and NonDecayingError if any Re(lambda) <= 0.
GeneratorEigensystem decompose_generator(const Mat3c& G);

/// Same decomposition without the decay gate; used to reproduce figure
/// panels whose pump exceeds the cavity loss.
GeneratorEigensystem decompose_generator_unchecked(const Mat3c& G);

/// Mode amplitudes A = V_inv * u0 so that u(tau) = sum_i V(:,i) A_i e^{-lambda_i tau}.
struct SpectralWeights {
    Vec3c A;
};

SpectralWeights spectral_weights(const GeneratorEigensystem& eig, const Vec3c& u0);

} // namespace veecav

#endif
