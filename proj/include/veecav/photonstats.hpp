#ifndef VEECAV_PHOTONSTATS_HPP
#define VEECAV_PHOTONSTATS_HPP

#include <vector>

namespace veecav {

/// Photon-number distribution over n = 0 .. probs.size()-1; nonnegative,
/// sums to one within 1e-9.
struct CountDistribution {
    std::vector<double> probs;
};

/// Validates and wraps a probability vector.
CountDistribution make_distribution(std::vector<double> probs);

/// P(n) = nbar^n e^{-nbar} / n!, evaluated in log space.
double poisson_pmf(double nbar, int n);

/// Poisson distribution truncated where the tail mass drops below 1e-12
/// (n up to ceil(nbar + 20 sqrt(nbar) + 30)).
CountDistribution poisson_distribution(double nbar);

struct Moments {
    double mean;
    double variance;
};

Moments pmf_moments(const CountDistribution& d);

enum class CountingStatistics { sub, poissonian, super };
enum class G2Class { bunched, coherent, antibunched };

/// variance vs mean within relative tolerance.
CountingStatistics classify_statistics(double mean, double variance, double tol = 1e-6);

/// g2(0) vs 1 within tolerance.
G2Class classify_g2(double g20, double tol = 1e-6);

} // namespace veecav

#endif
