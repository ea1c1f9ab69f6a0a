#ifndef VEECAV_LINDBLAD_HPP
#define VEECAV_LINDBLAD_HPP

#include "veecav/params.hpp"
#include "veecav/spectra.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace veecav {

// Brute-force reference engine: builds finite-dimensional Lindblad models
// as explicit matrices, finds steady states from the vectorized generator,
// evolves density matrices, and produces two-time correlators through the
// regression property of the generator. Used as the independent check on
// the closed spectral method and for everything the closure cannot do
// (filtered photon correlations, driven-qubit fluorescence).

struct Jump {
    double rate;
    Eigen::MatrixXcd op;
};

struct SensorSpec {
    double omega;    ///< sensor frequency, relative to the cavity (units g_1)
    double Gamma;    ///< sensor linewidth > 0
    double epsilon;  ///< sensor coupling > 0, << Gamma for faithful filtering
};

struct LindbladModel {
    int dim = 0;
    Eigen::MatrixXcd H;
    std::vector<Jump> jumps;
    std::map<std::string, Eigen::MatrixXcd> labels;
    std::optional<int> fock_cutoff;
    std::string emission_label = "a";  ///< observable sensors attach to
    int dimension_cap = 4096;
    double truncation_defect = 0.0;  ///< max |[a,a+] - 1| below the top Fock level
    std::vector<std::string> warnings;

    const Eigen::MatrixXcd& label(const std::string& name) const;
};

/// Full three-level-emitter + cavity model on Fock(cutoff) x C2 x C2.
/// The aligned-dipole cross dissipator is realized exactly by
/// diagonalizing the 2x2 exciton rate matrix [[g1, g12], [g12, g2]] into
/// two independent jump operators; it is positive semidefinite iff |beta| <= 1.
LindbladModel three_level_cavity_model(const SystemParams& p, int cutoff);

/// Resonantly driven two-level emitter: H = detuning*s+s + rabi*(s + s+),
/// single decay channel (gamma, s). Emission label "sigma".
LindbladModel driven_qubit_model(double rabi, double gamma, double detuning);

/// Bare cavity with loss gamma_a and incoherent pump P_a; its steady state
/// is thermal with nbar = P_a / (gamma_a - P_a).
LindbladModel pumped_cavity_model(double gamma_a, double P_a, int cutoff);

/// Append one weakly coupled two-level sensor per entry; each contributes
/// omega_i n_i + eps_i (X+ s_i + X s_i+) to H (X = emission observable) and
/// a decay jump (Gamma_i, s_i). Labels "sensor1", "sensor2", ...
LindbladModel attach_sensors(const LindbladModel& m, const std::vector<SensorSpec>& sensors);

/// Vectorized generator (column stacking) as a sparse matrix.
Eigen::SparseMatrix<std::complex<double>> liouvillian_matrix(const LindbladModel& m);

/// Unique steady state: trace one, Hermitian, positive to -1e-9, generator
/// residual below 1e-10. Throws DegenerateSteadyStateError when the null
/// space is not one-dimensional.
Eigen::MatrixXcd steady_state_density(const LindbladModel& m);

/// rho(t) by adaptive integration of the vectorized generator.
Eigen::MatrixXcd evolve(const LindbladModel& m, const Eigen::MatrixXcd& rho0, double t);

struct CorrelatorSeries {
    std::vector<double> tau;  ///< ascending, starting at 0
    std::vector<std::complex<double>> values;
    std::string labelA, labelB;
};

/// <A(0) B(tau)> in the steady state: values[k] = Tr[B Phi_tau(rho_ss A)].
CorrelatorSeries two_time_correlator(const LindbladModel& m, const std::string& A,
                                     const std::string& B, const std::vector<double>& tau_grid);

/// Default correlator grid: `points` samples to tau_max.
std::vector<double> tau_grid(double tau_max, int points = 2048);

/// One-sided transform S(w) = Re sum_k w_k v_k e^{i w tau_k} / (pi Re v_0)
/// by trapezoid quadrature. Sets tail_warning when the correlator has not
/// decayed to 1e-4 of its initial magnitude by the end of the grid.
SpectrumResult spectrum_from_correlator(const CorrelatorSeries& c,
                                        const std::vector<double>& omega_grid);

struct G2Result {
    double value = 0.0;       ///< <n1 n2> / (<n1><n2>) at the stated couplings
    double delta = 0.0;       ///< |value - value at halved couplings|
    bool converged = true;    ///< delta <= 1% of value
    double n1 = 0.0, n2 = 0.0;
};

/// Frequency-filtered cross correlation from two attached sensors,
/// with an epsilon-halving convergence diagnostic.
G2Result sensor_g2(const LindbladModel& m, const SensorSpec& s1, const SensorSpec& s2);

/// Partial trace over the trailing `qubits` two-level factors.
Eigen::MatrixXcd partial_trace_last_qubits(const Eigen::MatrixXcd& rho, int qubits);

std::complex<double> expectation(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& rho);

} // namespace veecav

#endif
