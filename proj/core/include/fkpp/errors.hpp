#pragma once

#include <stdexcept>
#include <string>

namespace fkpp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The model violates one of its hypotheses (bounds, coherence, range of the data).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Bad grid, time mesh or sampler parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Step sizes fail the positivity gate and no override was given.
class InadmissibleStepError : public Error {
public:
    using Error::Error;
};

/// Non-finite input or output, overflow, non-convergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Sampler could not produce a draw within its retry budget.
class SamplingError : public Error {
public:
    using Error::Error;
};

/// A single realization failed inside an ensemble run.
class SampleFailure : public Error {
public:
    SampleFailure(long long sample_id, const std::string& what)
        : Error("sample " + std::to_string(sample_id) + ": " + what), sample_id_(sample_id) {}

    long long sample_id() const noexcept { return sample_id_; }

private:
    long long sample_id_;
};

}  // namespace fkpp
