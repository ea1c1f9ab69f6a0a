#include "veecav/photonstats.hpp"
#include "veecav/errors.hpp"

#include <cmath>

namespace veecav {

CountDistribution make_distribution(std::vector<double> probs) {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw RangeError("probs", "probabilities must be >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw RangeError("probs", "probabilities must sum to 1 within 1e-9");
    return CountDistribution{std::move(probs)};
}

namespace {

// log(n!) - Stirling: lgamma(n+1) - ((n+1/2) log n - n + log(2 pi)/2).
double stirling_error(double n) {
    if (n < 16.0)
        return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n -
               0.5 * std::log(2.0 * M_PI);
    const double nn = n * n;
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * nn)) / nn) / nn) / nn) / n;
}

// Deviance x log(x/np) + np - x, evaluated without cancellation.
double deviance(double x, double np) {
    if (std::abs(x - np) < 0.1 * (x + np)) {
        const double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        const double v2 = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v2;
            const double term = ej / (2 * j + 1);
            const double s1 = s + term;
            if (s1 == s) return s1;
            s = s1;
        }
    }
    return x * std::log(x / np) + np - x;
}

} // namespace

double poisson_pmf(double nbar, int n) {
    if (!(nbar >= 0.0)) throw RangeError("nbar", "must be >= 0");
    if (n < 0) throw RangeError("n", "must be >= 0");
    if (nbar == 0.0) return n == 0 ? 1.0 : 0.0;
    if (n == 0) return std::exp(-nbar);
    // log-space evaluation; the deviance form keeps the exponent free of
    // the large-argument cancellation of n log(nbar) - nbar - lgamma(n+1)
    const double x = double(n);
    return std::exp(-stirling_error(x) - deviance(x, nbar)) / std::sqrt(2.0 * M_PI * x);
}

CountDistribution poisson_distribution(double nbar) {
    if (!(nbar >= 0.0)) throw RangeError("nbar", "must be >= 0");
    const int nmax = static_cast<int>(std::ceil(nbar + 20.0 * std::sqrt(nbar) + 30.0));
    std::vector<double> probs(static_cast<size_t>(nmax) + 1);
    for (int n = 0; n <= nmax; ++n) probs[size_t(n)] = poisson_pmf(nbar, n);
    return CountDistribution{std::move(probs)};
}

Moments pmf_moments(const CountDistribution& d) {
    double mean = 0.0;
    for (size_t n = 0; n < d.probs.size(); ++n) mean += double(n) * d.probs[n];
    double var = 0.0;
    for (size_t n = 0; n < d.probs.size(); ++n) {
        const double dn = double(n) - mean;
        var += dn * dn * d.probs[n];
    }
    return {mean, var};
}

CountingStatistics classify_statistics(double mean, double variance, double tol) {
    if (!(mean > 0.0)) throw RangeError("mean", "must be > 0");
    if (variance < 0.0) throw RangeError("variance", "must be >= 0");
    if (std::abs(variance - mean) <= tol * mean) return CountingStatistics::poissonian;
    return variance > mean ? CountingStatistics::super : CountingStatistics::sub;
}

G2Class classify_g2(double g20, double tol) {
    if (!(g20 >= 0.0)) throw RangeError("g2", "must be >= 0");
    if (std::abs(g20 - 1.0) <= tol) return G2Class::coherent;
    return g20 > 1.0 ? G2Class::bunched : G2Class::antibunched;
}

} // namespace veecav
