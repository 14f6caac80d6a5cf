#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace zetaquad {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Deterministic 64-bit PRNG (SplitMix64).  Used everywhere randomness is
/// needed so that identical configurations reproduce bit-identical output
/// across platforms and standard-library versions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate via an explicit Box-Muller transform.
    /// std::normal_distribution is implementation-defined and would break
    /// cross-platform reproducibility of generated geometries.
    double next_normal();

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Accumulator with Neumaier compensation.  Summing O(10^5) kernel values
/// near a 1e-13 error floor needs better than naive accumulation, and the
/// fixed add order keeps results deterministic.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Least-squares slope of log10(err) against log10(h).
///
/// Points with err <= floor are discarded, where
///   floor = max(1e-13, 0.1 * min(err)),
/// then the fit uses the last up-to-4 surviving points (finest grids).
/// If fewer than two points survive, all points are used as a fallback;
/// such series are judged by absolute error, not slope.
struct OrderFit {
    double order = 0.0;   ///< fitted convergence order (negative slope vs h)
    int points_used = 0;
};

OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& err);

/// Format a double as %.16e (round-trip exact, fixed width).
std::string fmt_sci(double x);

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.  Accurate to ~1e-15 for n <= 200.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Exact binomial coefficient for small integer arguments.
double binom(int n, int k);

/// Generalized binomial coefficient binom(alpha, m) for real alpha:
/// alpha (alpha-1) ... (alpha-m+1) / m!.
double binom_real(double alpha, int m);

} // namespace zetaquad
