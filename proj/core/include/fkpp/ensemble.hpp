#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fkpp/etd_solver.hpp"
#include "fkpp/grid.hpp"
#include "fkpp/linalg.hpp"
#include "fkpp/random_model.hpp"

namespace fkpp {

/// Exact accumulator: every addend is rounded to a multiple of 2^-80 and summed in a
/// 128-bit integer, so the total does not depend on the order of additions.
class FixedPointSum {
public:
    static constexpr int kFractionBits = 80;
    /// Largest magnitude a single addend may have.
    static constexpr long double kMaxAddend = 0x1p40L;

    /// Throws NumericalError for non-finite or oversized addends, or on overflow.
    void add(long double v);
    FixedPointSum& operator+=(const FixedPointSum& other);

    double value() const;
    long double value_extended() const;

    friend bool operator==(const FixedPointSum&, const FixedPointSum&) = default;

private:
    __extension__ using Wide = __int128;
    Wide acc_ = 0;
};

struct MonteCarlo {
    std::int64_t samples = 10000;
    std::uint64_t seed = 0;
};

/// Tensor Gauss-Legendre collocation with `nodes` points per random amplitude.
struct Collocation {
    int nodes = 64;
};

using Sampler = std::variant<MonteCarlo, Collocation>;

std::string describe(const Sampler& sampler);

/// Collocation(64) for up to two random amplitudes, Monte Carlo (10^4 samples, seed 0) otherwise.
Sampler default_sampler(const Model& model);

struct SchemeConfig {
    Grid1D grid;
    TimeMesh mesh;
    Sampler sampler = Collocation{};
    bool allow_inadmissible = false;
    /// Worker threads; 0 picks the hardware concurrency.
    int threads = 0;
};

/// Pointwise statistics over realizations; matrices are nodes x time levels.
struct EnsembleStats {
    Matrix mean;
    Matrix second_moment;
    Matrix std;
    /// Monte Carlo only: sample standard deviation / sqrt(n).
    std::optional<Matrix> mc_standard_error;
    std::int64_t count = 0;
    std::string method;
};

struct IdRange {
    std::int64_t begin;
    std::int64_t end;  // exclusive

    friend bool operator==(const IdRange&, const IdRange&) = default;
};

/// Weighted sums over a set of sample ids. Partials over disjoint id sets merge exactly.
class EnsemblePartial {
public:
    /// The empty partial; identity for merge.
    EnsemblePartial() = default;
    EnsemblePartial(int rows, int cols, std::string config_key);

    void add(const Matrix& values, double weight, std::int64_t sample_id);

    /// Throws ConfigError when configs differ or the id sets overlap.
    EnsemblePartial& merge(const EnsemblePartial& other);

    bool empty() const noexcept { return count_ == 0; }
    std::int64_t count() const noexcept { return count_; }
    const std::string& config_key() const noexcept { return key_; }
    const std::vector<IdRange>& ranges() const noexcept { return ranges_; }

    /// `monte_carlo` adds the standard error of the mean.
    EnsembleStats finalize(bool monte_carlo, std::string method) const;

    friend bool operator==(const EnsemblePartial&, const EnsemblePartial&) = default;

private:
    void insert_range(IdRange r);

    int rows_ = 0;
    int cols_ = 0;
    std::string key_;
    std::int64_t count_ = 0;
    FixedPointSum weight_;
    std::vector<FixedPointSum> first_;
    std::vector<FixedPointSum> second_;
    std::vector<IdRange> ranges_;
};

EnsemblePartial merge_stats(const EnsemblePartial& a, const EnsemblePartial& b);

/// One collocation node: amplitudes and quadrature weight (product of Gauss-Legendre weight
/// and density over every random amplitude).
struct CollocationNode {
    AmplitudeDraws draws;
    double weight;
};

std::vector<CollocationNode> collocation_nodes(const Model& model, int nodes_per_dimension);

struct EnsembleOptions {
    std::function<void(const std::string&)> warn;
    /// Sample ids handed to a worker at a time.
    int block_size = 16;
};

/// Runs every realization and reduces them. Throws InadmissibleStepError when the gate fails
/// without override, SampleFailure (carrying the id) when a realization fails.
EnsembleStats run_ensemble(const Model& model, const SchemeConfig& config, const EnsembleOptions& options = {});

/// Partial over ids [begin, end) only; the building block of run_ensemble.
EnsemblePartial run_partial(const Model& model, const SchemeConfig& config, std::int64_t begin,
                            std::int64_t end, const EnsembleOptions& options = {});

/// Number of realizations the sampler asks for.
std::int64_t sample_count(const Model& model, const Sampler& sampler);

}  // namespace fkpp
