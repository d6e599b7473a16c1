#pragma once

#include "fkpp/random_model.hpp"
#include "fkpp/random_stream.hpp"

namespace fkpp::truncnorm {

double pdf(const TruncatedNormal& law, double x);
double cdf(const TruncatedNormal& law, double x);
double mean(const TruncatedNormal& law);

/// Inverse-CDF draw on [lo, hi]; falls back to rejection when the interval mass is not
/// representable (far tails, very narrow intervals). Throws SamplingError when the
/// fallback exhausts `max_attempts`.
double sample(const TruncatedNormal& law, RandomStream& stream, int max_attempts = 10000);

/// Rejection sampler alone, exposed so the fallback can be tested directly.
double sample_by_rejection(const TruncatedNormal& law, RandomStream& stream, int max_attempts);

}  // namespace fkpp::truncnorm
