#include "veecav/spectra.hpp"
#include "veecav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace veecav {

using Cx = std::complex<double>;

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw RangeError("points", "need at least 2 grid points");
    if (!(lo < hi)) throw RangeError("omega", "grid bounds must satisfy min < max");
    std::vector<double> x(static_cast<size_t>(n));
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = lo + h * i;
    x.back() = hi;
    return x;
}

SpectrumResult emission_spectrum(const SystemParams& p, Channel channel,
                                 const FrequencyGrid& grid, SpectrumMode mode,
                                 MomentMatrixMode matrix_mode, bool allow_unstable) {
    if (mode == SpectrumMode::fourier)
        throw RangeError("mode", "fourier spectra come from spectrum_from_correlator");
    if (allow_unstable)
        validate_ranges(p);
    else
        validate_params(p);

    const Mat3c G = correlator_generator(p);
    const GeneratorEigensystem eig =
        allow_unstable ? decompose_generator_unchecked(G) : decompose_generator(G);
    const SteadyStateMoments ss = steady_state_moments(p, matrix_mode);
    const SpectralWeights w = spectral_weights(eig, ss.cavity_sector());

    const int row = channel == Channel::cavity ? 0 : (channel == Channel::exciton1 ? 1 : 2);
    const double norm =
        channel == Channel::cavity ? ss.n_a() : (channel == Channel::exciton1 ? ss.n_s1() : ss.n_s2());
    if (std::abs(norm) < 1e-14)
        throw ZeroPopulationError("ZeroPopulationError: channel population below 1e-14");

    Vec3c coeff;  // per-mode amplitude of this channel's correlator
    bool nondecaying = false;
    for (int i = 0; i < 3; ++i) {
        coeff(i) = eig.V(row, i) * w.A(i);
        nondecaying = nondecaying || !(eig.lambdas(i).real() > 0.0);
    }

    SpectrumResult s;
    s.channel = channel;
    s.mode = mode;
    s.omega = linspace(grid.omega_min, grid.omega_max, grid.points);
    s.values.resize(s.omega.size());

    const double pref = 1.0 / (M_PI * norm);
    for (size_t k = 0; k < s.omega.size(); ++k) {
        const double om = s.omega[k];
        Cx acc = 0.0;
        if (mode == SpectrumMode::exact) {
            for (int i = 0; i < 3; ++i) {
                const Cx den = eig.lambdas(i) - Cx(0.0, om);
                if (std::abs(den) < 1e-300)
                    throw NonDecayingError("NonDecayingError: pole on the frequency axis");
                acc += coeff(i) / den;
            }
        } else {
            for (int i = 0; i < 3; ++i) {
                const double re = eig.lambdas(i).real();
                const double im = eig.lambdas(i).imag();
                acc += coeff(i) * re / ((om - im) * (om - im) + re * re);
            }
        }
        const double v = pref * acc.real();
        if (!std::isfinite(v)) throw NumericalError("spectrum value is not finite");
        s.values[k] = v;
    }

    SpectrumMeta meta;
    meta.lambdas = eig.lambdas;
    meta.weights = w.A;
    meta.row = eig.V.row(row);
    meta.normalizer = norm;
    meta.nondecaying = nondecaying;
    s.meta = meta;
    return s;
}

double integrate_spectrum(const SpectrumResult& s) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < s.omega.size(); ++i)
        acc += 0.5 * (s.omega[i + 1] - s.omega[i]) * (s.values[i] + s.values[i + 1]);
    return acc;
}

bool endpoints_suspect(const SpectrumResult& s) {
    if (s.values.empty()) return true;
    double peak = 0.0;
    for (double v : s.values) peak = std::max(peak, std::abs(v));
    return std::abs(s.values.front()) > 1e-4 * peak || std::abs(s.values.back()) > 1e-4 * peak;
}

namespace {

// Topographic prominence: drop to the lowest point between the peak and
// the nearest strictly higher sample on each side (or the grid edge).
double prominence_at(const std::vector<double>& v, size_t i) {
    double left_min = v[i];
    for (size_t j = i; j-- > 0;) {
        if (v[j] > v[i]) break;
        left_min = std::min(left_min, v[j]);
    }
    double right_min = v[i];
    for (size_t j = i + 1; j < v.size(); ++j) {
        if (v[j] > v[i]) break;
        right_min = std::min(right_min, v[j]);
    }
    return v[i] - std::max(left_min, right_min);
}

struct Refined {
    double x;
    double y;
};

// Vertex of the parabola through three samples; falls back to the middle
// sample when the points are collinear.
Refined refine_quadratic(double xm, double ym, double x0, double y0, double xp, double yp) {
    const double d1 = (y0 - ym) / (x0 - xm);
    const double d2 = (yp - y0) / (xp - x0);
    const double curv = (d2 - d1) / (0.5 * (xp - xm));
    if (curv == 0.0) return {x0, y0};
    const double slope0 = 0.5 * (d1 + d2);  // derivative at x0 of the interpolant
    const double dx = -slope0 / curv;
    const double x = x0 + dx;
    const double y = y0 + slope0 * dx + 0.5 * curv * dx * dx;
    if (x < xm || x > xp) return {x0, y0};
    return {x, y};
}

// Half-height crossings outward from a maximum; absent when the samples
// rise again before crossing (overlapping peak) or run off the grid.
std::optional<double> fwhm_of_max(const std::vector<double>& x, const std::vector<double>& v,
                                  size_t i, double height) {
    const double half = height / 2.0;
    std::optional<double> left, right;
    for (size_t j = i; j-- > 0;) {
        if (v[j] <= half) {
            const double t = (half - v[j]) / (v[j + 1] - v[j]);
            left = x[j] + t * (x[j + 1] - x[j]);
            break;
        }
        if (v[j] > v[j + 1]) break;  // rising into a neighboring peak
    }
    for (size_t j = i + 1; j < v.size(); ++j) {
        if (v[j] <= half) {
            const double t = (v[j - 1] - half) / (v[j - 1] - v[j]);
            right = x[j - 1] + t * (x[j] - x[j - 1]);
            break;
        }
        if (v[j] > v[j - 1]) break;
    }
    if (left && right) return *right - *left;
    return std::nullopt;
}

} // namespace

std::vector<PeakInfo> find_peaks(const SpectrumResult& s, double prominence) {
    const auto& x = s.omega;
    const auto& v = s.values;
    if (x.size() < 3) throw RangeError("grid", "need at least 3 points to locate extrema");

    std::vector<double> neg(v.size());
    for (size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];

    std::vector<PeakInfo> out;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] == v[i - 1]) continue;  // interior of a plateau, handled at its start
        const bool rising = v[i] > v[i - 1];
        size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        if (j + 1 >= v.size()) break;  // plateau runs into the grid edge
        const bool falling_after = v[j + 1] < v[i];
        const bool is_max = rising && falling_after;
        const bool is_min = !rising && !falling_after;
        if (!is_max && !is_min) {
            i = j;
            continue;
        }
        const size_t mid = (i + j) / 2;
        const double prom = is_max ? prominence_at(v, mid) : prominence_at(neg, mid);
        if (prom >= prominence) {
            const Refined r = refine_quadratic(x[mid - 1], v[mid - 1], x[mid], v[mid],
                                               x[mid + 1], v[mid + 1]);
            PeakInfo pk;
            pk.position = r.x;
            pk.height = r.y;
            pk.kind = is_max ? PeakInfo::Kind::maximum : PeakInfo::Kind::minimum;
            if (is_max) pk.fwhm = fwhm_of_max(x, v, mid, r.y);
            out.push_back(pk);
        }
        i = j;
    }
    std::sort(out.begin(), out.end(),
              [](const PeakInfo& a, const PeakInfo& b) { return a.position < b.position; });
    return out;
}

std::vector<PeakInfo> find_peaks(const SpectrumResult& s) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : s.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return find_peaks(s, 1e-3 * (hi - lo));
}

MollowRatios mollow_ratios(const SpectrumResult& s) {
    std::vector<PeakInfo> maxima;
    for (const auto& pk : find_peaks(s))
        if (pk.kind == PeakInfo::Kind::maximum) maxima.push_back(pk);
    if (maxima.size() != 3) {
        std::ostringstream os;
        os << "TripletNotFoundError: found " << maxima.size() << " maxima, need 3";
        throw TripletNotFoundError(os.str());
    }
    for (const auto& pk : maxima)
        if (!pk.fwhm)
            throw TripletNotFoundError("TripletNotFoundError: a peak width is not measurable");

    const PeakInfo& left = maxima[0];
    const PeakInfo& center = maxima[1];
    const PeakInfo& right = maxima[2];
    MollowRatios r;
    r.height_ratio = center.height / (0.5 * (left.height + right.height));
    r.width_ratio = 0.5 * (*left.fwhm + *right.fwhm) / *center.fwhm;
    return r;
}

} // namespace veecav
