#ifndef VEECAV_DRESSED_HPP
#define VEECAV_DRESSED_HPP

#include <complex>
#include <vector>

namespace veecav {

// Dressed-state laser analysis: N two-level emitters driven at Rabi
// frequency Omega, detuned by delta_1 from the drive, coupled to a cavity
// detuned by delta_2, described in the dressed basis. The dressed-frame
// relaxation rates gamma1_d, gamma2_d and the effective coupling lambda_1
// are independent inputs (they are not derivable from g, gamma, alpha
// within this model's level of description).
struct DressedParams {
    int N = 1;              ///< emitter count
    double Omega = 0.0;     ///< bare Rabi frequency >= 0
    double delta_1 = 0.0;   ///< emitter-drive detuning
    double delta_2 = 0.0;   ///< cavity-drive detuning
    double g = 0.0;         ///< emitter-cavity coupling magnitude
    double gamma = 0.0;     ///< free-space half rate (2*gamma = spontaneous emission rate)
    double Gamma_cav = 0.0; ///< cavity half width
    double gamma1_d = 0.0;  ///< dressed polarization relaxation rate
    double gamma2_d = 0.0;  ///< dressed inversion relaxation rate
    double lambda_1 = 0.0;  ///< effective dressed coupling
};

void validate_dressed(const DressedParams& p);

/// Two printed denominators for the steady inversion: (1 + cos^2 alpha)
/// as printed (`verbatim`, the default) and (1 + cos^2 2alpha)
/// (`literature`), which respects the |S3| <= N bound for every alpha.
enum class InversionDenominator { verbatim, literature };

/// alpha in [0, pi/2] with Omega = W' sin 2a, delta_1 = W' cos 2a.
double mixing_angle(double Omega, double delta_1);

/// W' = sqrt(Omega^2 + delta_1^2).
double generalized_rabi(double Omega, double delta_1);

/// Steady dressed inversion S3_bar = -2N cos2a / denominator.
double steady_inversion(int N, double alpha,
                        InversionDenominator denom = InversionDenominator::verbatim);

/// Pulled operating frequency, the rate-weighted mean of delta_2 and W'.
double pulled_frequency(double gamma1_d, double Gamma_cav, double delta_2, double omega_prime);

/// Right-hand side of the threshold condition, and margin = rhs - 1;
/// the printed condition reads 1 >= rhs at or below threshold.
struct ThresholdReport {
    double rhs;
    double margin;
};
ThresholdReport lasing_margin(const DressedParams& p,
                              InversionDenominator denom = InversionDenominator::verbatim);

struct SemiclassicalState {
    std::complex<double> S{0.0, 0.0};  ///< macroscopic dressed polarization
    double S3 = 0.0;                   ///< dressed population inversion
    std::complex<double> a{0.0, 0.0};  ///< cavity field amplitude
};

/// |S3| bound implied by N Pauli-Z expectations.
inline double inversion_bound(int N) { return double(N); }

struct TrajectoryPoint {
    double t;
    SemiclassicalState s;
};

/// Integrates dS = -(g1 + iW')S + i l1 S3 a, dS3 = -g2 (S3 - S3bar)
/// + 2 i g1 (a* S - S* a), da = -(G + i d2) a - i l1 S with adaptive
/// steps (abs tol 1e-9), sampled every dt up to t_max.
std::vector<TrajectoryPoint> integrate_semiclassical(
    const DressedParams& p, const SemiclassicalState& s0, double t_max, double dt,
    InversionDenominator denom = InversionDenominator::verbatim);

} // namespace veecav

#endif
