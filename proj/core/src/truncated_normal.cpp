#include "fkpp/truncated_normal.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "fkpp/errors.hpp"

namespace fkpp::truncnorm {
namespace {

const boost::math::normal_distribution<double> kStd{0.0, 1.0};

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double Phi(double z) { return boost::math::cdf(kStd, z); }

// Mass of [a, b] under the standard normal, evaluated on the side where it is accurate.
double mass(double a, double b) {
    if (a >= 0.0) {
        return boost::math::cdf(boost::math::complement(kStd, a)) -
               boost::math::cdf(boost::math::complement(kStd, b));
    }
    return Phi(b) - Phi(a);
}

// Standard normal restricted to [a, b] with a >= 0 (Robert 1995).
double tail_rejection(double a, double b, RandomStream& stream, int max_attempts) {
    const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
    const double width = b - a;
    const bool uniform_proposal =
        width <= 2.0 * std::sqrt(M_E) / (a + std::sqrt(a * a + 4.0)) *
                     std::exp(0.25 * (a * a - a * std::sqrt(a * a + 4.0)));
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        double z;
        double accept;
        if (uniform_proposal) {
            z = a + width * stream.uniform_open();
            accept = std::exp(0.5 * (a * a - z * z));
        } else {
            // Exponential(lambda) shifted to a, truncated to [a, b] when b is finite.
            const double u = stream.uniform_open();
            const double span_mass = std::isfinite(width) ? -std::expm1(-lambda * width) : 1.0;
            z = a - std::log1p(-u * span_mass) / lambda;
            accept = std::exp(-0.5 * (z - lambda) * (z - lambda));
        }
        if (z >= a && z <= b && stream.uniform_open() <= accept) return z;
    }
    throw SamplingError("truncated normal: rejection budget exhausted; interval mass is negligible");
}

}  // namespace

double pdf(const TruncatedNormal& law, double x) {
    if (x < law.lo || x > law.hi) return 0.0;
    const double a = (law.lo - law.mu) / law.sigma;
    const double b = (law.hi - law.mu) / law.sigma;
    return phi((x - law.mu) / law.sigma) / (law.sigma * mass(a, b));
}

double cdf(const TruncatedNormal& law, double x) {
    if (x <= law.lo) return 0.0;
    if (x >= law.hi) return 1.0;
    const double a = (law.lo - law.mu) / law.sigma;
    const double b = (law.hi - law.mu) / law.sigma;
    const double z = (x - law.mu) / law.sigma;
    return std::clamp(mass(a, z) / mass(a, b), 0.0, 1.0);
}

double mean(const TruncatedNormal& law) {
    const double a = (law.lo - law.mu) / law.sigma;
    const double b = (law.hi - law.mu) / law.sigma;
    return law.mu + law.sigma * (phi(a) - phi(b)) / mass(a, b);
}

double sample_by_rejection(const TruncatedNormal& law, RandomStream& stream, int max_attempts) {
    double a = (law.lo - law.mu) / law.sigma;
    double b = (law.hi - law.mu) / law.sigma;
    double z;
    if (a >= 0.0) {
        z = tail_rejection(a, b, stream, max_attempts);
    } else if (b <= 0.0) {
        z = -tail_rejection(-b, -a, stream, max_attempts);
    } else {
        // Straddles the mode: uniform proposal, acceptance exp(-z^2/2).
        z = 0.0;
        bool accepted = false;
        for (int attempt = 0; attempt < max_attempts && !accepted; ++attempt) {
            z = a + (b - a) * stream.uniform_open();
            accepted = stream.uniform_open() <= std::exp(-0.5 * z * z);
        }
        if (!accepted) {
            throw SamplingError("truncated normal: rejection budget exhausted");
        }
    }
    return std::clamp(law.mu + law.sigma * z, law.lo, law.hi);
}

double sample(const TruncatedNormal& law, RandomStream& stream, int max_attempts) {
    double a = (law.lo - law.mu) / law.sigma;
    double b = (law.hi - law.mu) / law.sigma;
    // Work in the lower half so cdf values keep their relative precision.
    const bool mirrored = a > 0.0;
    if (mirrored) {
        std::swap(a, b);
        a = -a;
        b = -b;
    }
    const double pa = Phi(a);
    const double pb = Phi(b);
    const double width = pb - pa;
    if (pb > 1e-280 && width > 0.0 && std::isfinite(width)) {
        const double p = pa + stream.uniform_open() * width;
        if (p > 0.0 && p < 1.0) {
            const double z = std::clamp(boost::math::quantile(kStd, p), a, b);
            const double x = law.mu + law.sigma * (mirrored ? -z : z);
            return std::clamp(x, law.lo, law.hi);
        }
    }
    return sample_by_rejection(law, stream, max_attempts);
}

}  // namespace fkpp::truncnorm
