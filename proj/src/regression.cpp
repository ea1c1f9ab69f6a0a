#include "veecav/regression.hpp"
#include "veecav/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace veecav {

using Cx = std::complex<double>;
namespace {
constexpr Cx I{0.0, 1.0};
}

Mat3c correlator_generator(const SystemParams& p) {
    validate_ranges(p);
    const DerivedRates r = derived_rates(p);
    Mat3c G;
    G(0, 0) = -r.Gamma_a / 2.0;                    // omega_a = 0 in the rotating frame
    G(0, 1) = -I * p.g_1;
    G(0, 2) = -I * p.g_2;
    G(1, 0) = -I * p.g_1;
    G(1, 1) = -I * p.delta_1 - r.Gamma_s1 / 2.0;
    G(1, 2) = Cx(-r.gamma_12 / 2.0, 0.0);
    G(2, 0) = -I * p.g_2;
    G(2, 1) = Cx(-r.gamma_12 / 2.0, 0.0);
    G(2, 2) = -I * p.delta_2 - r.Gamma_s2 / 2.0;
    return G;
}

std::pair<Mat9c, Vec9c> single_time_system(const SystemParams& p, MomentMatrixMode mode) {
    validate_ranges(p);
    const DerivedRates r = derived_rates(p);
    const double g1 = p.g_1, g2 = p.g_2, d1 = p.delta_1, d2 = p.delta_2;
    const double Ga = r.Gamma_a, G1 = r.Gamma_s1, G2 = r.Gamma_s2;
    const double c = r.gamma_12 / 2.0;

    Mat9c M = Mat9c::Zero();

    // Moments ordered as in SteadyStateMoments. Rows 2/6/8 are the
    // conjugates of rows 1/5/4; in verbatim mode row 6 keeps the printed
    // (G1+G2)/2 width, which breaks that pairing.
    // row 0: <a+a>
    M(0, 0) = -Ga;
    M(0, 1) = -I * g1;
    M(0, 2) = I * g1;
    M(0, 5) = -I * g2;
    M(0, 6) = I * g2;
    // row 1: <a+s1>
    M(1, 0) = -I * g1;
    M(1, 1) = -I * d1 - (Ga + G1) / 2.0;
    M(1, 3) = I * g1;
    M(1, 5) = -c;
    M(1, 8) = I * g2;
    // row 2: <a s1+>
    M(2, 0) = I * g1;
    M(2, 2) = I * d1 - (Ga + G1) / 2.0;
    M(2, 3) = -I * g1;
    M(2, 4) = -I * g2;
    M(2, 6) = -c;
    // row 3: <s1+s1>
    M(3, 1) = I * g1;
    M(3, 2) = -I * g1;
    M(3, 3) = -G1;
    M(3, 4) = -c;
    M(3, 8) = -c;
    // row 4: <s1+s2>  (printed width has "Gamma_2", read as Gamma_s2)
    M(4, 2) = -I * g2;
    M(4, 3) = -c;
    M(4, 4) = I * (d1 - d2) - (G1 + G2) / 2.0;
    M(4, 5) = I * g1;
    M(4, 7) = -c;
    // row 5: <a+s2>
    M(5, 0) = -I * g2;
    M(5, 1) = -c;
    M(5, 4) = I * g1;
    M(5, 5) = -I * d2 - (Ga + G2) / 2.0;
    M(5, 7) = I * g2;
    // row 6: <a s2+>
    M(6, 0) = I * g2;
    M(6, 2) = -c;
    M(6, 6) = I * d2 - ((mode == MomentMatrixMode::verbatim ? G1 : Ga) + G2) / 2.0;
    M(6, 7) = -I * g2;
    M(6, 8) = -I * g1;
    // row 7: <s2+s2>
    M(7, 4) = -c;
    M(7, 5) = I * g2;
    M(7, 6) = -I * g2;
    M(7, 7) = -G2;
    M(7, 8) = -c;
    // row 8: <s1 s2+>
    M(8, 1) = I * g2;
    M(8, 3) = -c;
    M(8, 6) = -I * g1;
    M(8, 7) = -c;
    M(8, 8) = I * (d2 - d1) - (G1 + G2) / 2.0;

    Vec9c b = Vec9c::Zero();
    b(0) = p.P_a;
    b(3) = p.P_1;
    b(7) = p.P_2;
    return {M, b};
}

SteadyStateMoments steady_state_moments(const SystemParams& p, MomentMatrixMode mode) {
    auto [M, b] = single_time_system(p, mode);

    Eigen::PartialPivLU<Mat9c> lu(M);
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream os;
        os << "SingularSystemError: moment matrix condition estimate "
           << (lu.rcond() > 0 ? 1.0 / lu.rcond() : std::numeric_limits<double>::infinity())
           << " exceeds 1e14";
        throw SingularSystemError(os.str());
    }

    Vec9c u = lu.solve(-b);
    const double btol = 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff());
    double res = (M * u + b).cwiseAbs().maxCoeff();
    if (res > btol) {
        u += lu.solve(-b - M * u);  // one step of iterative refinement
        res = (M * u + b).cwiseAbs().maxCoeff();
    }
    if (res > btol) {
        std::ostringstream os;
        os << "SingularSystemError: moment-system residual " << res << " exceeds " << btol;
        throw SingularSystemError(os.str());
    }

    SteadyStateMoments s;
    for (int i = 0; i < 9; ++i) s.u[static_cast<size_t>(i)] = u(i);

    // The verbatim <a s2+> width breaks its conjugate pairing with <a+s2>,
    // which in turn lets populations drift off the real axis; these
    // algebraically guaranteed postconditions apply to corrected mode only.
    // Occupation bounds are not enforced here: the closure is a truncation
    // and may leave the physical region slightly at strong pumping.
    if (mode == MomentMatrixMode::corrected) {
        const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
        auto conj_pair_ok = [&](int i, int j) {
            return std::abs(s.u[size_t(i)] - std::conj(s.u[size_t(j)])) <= 1e-10 * scale;
        };
        if (std::abs(s.u[0].imag()) > 1e-10 * scale || std::abs(s.u[3].imag()) > 1e-10 * scale ||
            std::abs(s.u[7].imag()) > 1e-10 * scale)
            throw NumericalError("steady-state populations acquired an imaginary part");
        if (!conj_pair_ok(2, 1) || !conj_pair_ok(6, 5) || !conj_pair_ok(8, 4))
            throw NumericalError("steady-state moments violate conjugation symmetry");
    }
    return s;
}

namespace {

GeneratorEigensystem decompose_impl(const Mat3c& G, bool require_decay) {
    Eigen::ComplexEigenSolver<Mat3c> solver(G, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of the correlator generator failed");

    Vec3c lam = -solver.eigenvalues();
    Mat3c V = solver.eigenvectors();

    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (lam(a).imag() != lam(b).imag()) return lam(a).imag() < lam(b).imag();
        return lam(a).real() < lam(b).real();
    });

    GeneratorEigensystem eig;
    for (int k = 0; k < 3; ++k) {
        eig.lambdas(k) = lam(idx[size_t(k)]);
        eig.V.col(k) = V.col(idx[size_t(k)]);
    }

    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(eig.lambdas(i) - eig.lambdas(j)) < 1e-12) {
                std::ostringstream os;
                os << "DegenerateSpectrumError: eigenvalues " << i << " and " << j
                   << " coincide within 1e-12";
                throw DegenerateSpectrumError(os.str());
            }
    if (require_decay)
        for (int i = 0; i < 3; ++i)
            if (!(eig.lambdas(i).real() > 0.0)) {
                std::ostringstream os;
                os << "NonDecayingError: mode " << i << " has Re(lambda) = "
                   << eig.lambdas(i).real() << " <= 0";
                throw NonDecayingError(os.str());
            }

    eig.V_inv = eig.V.inverse();
    return eig;
}

} // namespace

GeneratorEigensystem decompose_generator(const Mat3c& G) { return decompose_impl(G, true); }

GeneratorEigensystem decompose_generator_unchecked(const Mat3c& G) {
    return decompose_impl(G, false);
}

SpectralWeights spectral_weights(const GeneratorEigensystem& eig, const Vec3c& u0) {
    SpectralWeights w;
    w.A = eig.V_inv * u0;
    return w;
}

} // namespace veecav
