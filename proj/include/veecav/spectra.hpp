#ifndef VEECAV_SPECTRA_HPP
#define VEECAV_SPECTRA_HPP

#include "veecav/regression.hpp"

#include <optional>
#include <string>
#include <vector>

namespace veecav {

enum class Channel { cavity, exciton1, exciton2 };

/// How the spectrum values were produced. `paper` evaluates the
/// three-Lorentzian form with the mode amplitudes treated as real weights;
/// `exact` evaluates the full one-sided transform Re[sum_i c_i/(lambda_i - i w)],
/// which keeps the dispersive parts and integrates to exactly one on the
/// cavity channel. `fourier` marks spectra obtained by numerically
/// transforming a sampled correlator (the brute-force path).
enum class SpectrumMode { paper, exact, fourier };

struct FrequencyGrid {
    double omega_min = -5.0;
    double omega_max = 5.0;
    int points = 4001;
};

struct SpectrumMeta {
    Vec3c lambdas;
    Vec3c weights;    ///< mode amplitudes A_i
    Vec3c row;        ///< eigenvector row of the emitting channel
    double normalizer = 0.0;
    bool nondecaying = false;  ///< set when some Re(lambda) <= 0 was admitted
};

struct SpectrumResult {
    Channel channel = Channel::cavity;
    SpectrumMode mode = SpectrumMode::exact;
    std::vector<double> omega;   ///< strictly increasing, omega - omega_a in units g_1
    std::vector<double> values;
    std::optional<SpectrumMeta> meta;
    bool tail_warning = false;   ///< correlator not decayed at tau end (fourier mode)
};

struct PeakInfo {
    enum class Kind { maximum, minimum };
    double position = 0.0;
    double height = 0.0;
    std::optional<double> fwhm;  ///< absent when half-height crossings are not clean
    Kind kind = Kind::maximum;
};

struct MollowRatios {
    double height_ratio;  ///< central height over mean side height
    double width_ratio;   ///< mean side FWHM over central FWHM
};

/// Emission spectrum of one channel from the closed spectral method.
/// `allow_unstable` relaxes both the P_a < gamma_a validation and the
/// Re(lambda) > 0 gate so figure panels beyond the stability edge can be
/// reproduced; their meta is flagged nondecaying.
SpectrumResult emission_spectrum(const SystemParams& p, Channel channel,
                                 const FrequencyGrid& grid = {},
                                 SpectrumMode mode = SpectrumMode::exact,
                                 MomentMatrixMode matrix_mode = MomentMatrixMode::corrected,
                                 bool allow_unstable = false);

/// Trapezoid integral over the stored grid.
double integrate_spectrum(const SpectrumResult& s);

/// True when the grid endpoints still carry more than 1e-4 of the peak
/// magnitude, i.e. the integral window is suspect.
bool endpoints_suspect(const SpectrumResult& s);

/// Local extrema by three-point comparison, refined by quadratic
/// interpolation, filtered by topographic prominence. FWHM (maxima only)
/// by linear interpolation of the half-height crossings; absent when a
/// crossing is shadowed by an overlapping peak or the grid edge.
std::vector<PeakInfo> find_peaks(const SpectrumResult& s, double prominence);

/// Same with the default prominence 1e-3 * (max - min).
std::vector<PeakInfo> find_peaks(const SpectrumResult& s);

/// Height and width ratios of a three-peaked spectrum; throws
/// TripletNotFoundError unless exactly three maxima with measurable
/// widths are present.
MollowRatios mollow_ratios(const SpectrumResult& s);

std::vector<double> linspace(double lo, double hi, int n);

} // namespace veecav

#endif
