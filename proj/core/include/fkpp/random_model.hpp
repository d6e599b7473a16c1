#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fkpp/grid.hpp"
#include "fkpp/random_stream.hpp"

namespace fkpp {

struct Interval {
    double lower;
    double upper;

    bool contains(const Interval& other, double tol = 0.0) const noexcept {
        return other.lower >= lower - tol && other.upper <= upper + tol;
    }
};

struct Deterministic {
    double value;
};

/// Normal(mu, sigma^2) conditioned on [lo, hi].
struct TruncatedNormal {
    double mu;
    double sigma;
    double lo;
    double hi;
};

/// Law of a single scalar amplitude. Supports are always bounded, so every
/// moment of the amplitude is finite.
class RandomVariableSpec {
public:
    using Kind = std::variant<Deterministic, TruncatedNormal>;

    static RandomVariableSpec deterministic(double value);
    static RandomVariableSpec truncated_normal(double mu, double sigma, double lo, double hi);

    const Kind& kind() const noexcept { return kind_; }
    bool is_random() const noexcept { return std::holds_alternative<TruncatedNormal>(kind_); }

    /// Degenerate interval [v, v] for a deterministic law.
    Interval support() const noexcept;

    /// Density of a random law. Throws ModelError for a deterministic law.
    double density(double x) const;
    double cdf(double x) const;
    double mean() const;

    std::string describe() const;

private:
    explicit RandomVariableSpec(Kind kind) : kind_(kind) {}
    Kind kind_;
};

/// One draw from `spec`. Deterministic laws return their value without consuming the stream.
double sample_amplitude(const RandomVariableSpec& spec, RandomStream& stream);

/// Coefficient roles, each carrying one independent amplitude.
enum class Role { diffusion = 0, advection = 1, reaction = 2, initial = 3 };

inline constexpr std::array<Role, 4> kAllRoles = {Role::diffusion, Role::advection, Role::reaction,
                                                  Role::initial};

const char* role_name(Role role) noexcept;

/// The sampled amplitudes (delta, rho, alpha, gamma) of one realization.
struct AmplitudeDraws {
    std::array<double, 4> values{1.0, 1.0, 1.0, 1.0};

    double& operator[](Role r) noexcept { return values[static_cast<int>(r)]; }
    double operator[](Role r) const noexcept { return values[static_cast<int>(r)]; }
    double diffusion() const noexcept { return (*this)[Role::diffusion]; }
    double advection() const noexcept { return (*this)[Role::advection]; }
    double reaction() const noexcept { return (*this)[Role::reaction]; }
    double initial() const noexcept { return (*this)[Role::initial]; }
};

/// Named deterministic spatial factor d(x), b(x), a(x) or phi_0(x).
struct Shape {
    std::string name;
    std::function<double(double)> eval;

    double operator()(double x) const { return eval(x); }
};

/// Looks up a closed-form shape: constant, one_plus_x_squared, identity_x, one_minus_x,
/// x_squared, sin_pi_x. Throws ConfigError for unknown names.
Shape shape_by_name(const std::string& name);

/// x -> shape(x) * amplitude, a separable process with one degree of randomness.
class CoefficientProcess {
public:
    CoefficientProcess(Shape shape, RandomVariableSpec amplitude,
                       std::optional<Interval> declared_bounds = std::nullopt);

    double operator()(double x, double amplitude) const { return shape_(x) * amplitude; }

    const Shape& shape() const noexcept { return shape_; }
    const RandomVariableSpec& amplitude() const noexcept { return amplitude_; }
    const std::optional<Interval>& declared_bounds() const noexcept { return declared_; }

private:
    Shape shape_;
    RandomVariableSpec amplitude_;
    std::optional<Interval> declared_;
};

/// Inf/sup of shape(x_i) * amplitude over all grid nodes and both ends of the amplitude
/// support. Throws ModelError when declared bounds do not contain the result.
Interval coefficient_bounds(const CoefficientProcess& proc, const Grid1D& grid);

/// Initial condition family Phi_0(x, sample).
struct InitialProcess {
    std::string name;
    std::function<double(double, const AmplitudeDraws&)> profile;

    double operator()(double x, const AmplitudeDraws& s) const { return profile(x, s); }
};

/// Boundary families Phi_1(t, sample) at x = 0 and Phi_2(t, sample) at x = length.
/// Closed forms only, so every realization is differentiable in t.
struct BoundaryProcess {
    std::string name;
    std::function<double(double, const AmplitudeDraws&)> left;
    std::function<double(double, const AmplitudeDraws&)> right;
};

struct CoherenceReport {
    double left_gap = 0.0;   // max_s |Phi_0(0,s) - Phi_1(0,s)|
    double right_gap = 0.0;  // max_s |Phi_0(l,s) - Phi_2(0,s)|
    double tolerance = 1e-12;
    bool passed = true;
};

inline constexpr double kCoherenceTolerance = 1e-12;

CoherenceReport check_coherence(const InitialProcess& init, const BoundaryProcess& bnd,
                                double length, std::span<const AmplitudeDraws> samples,
                                double tolerance = kCoherenceTolerance);

/// The a.e. constants d1, d2, b1, a1, a2 bounding diffusion, advection and reaction.
struct ModelBounds {
    double d1;
    double d2;
    double b1;
    double a1;
    double a2;
};

struct Model {
    std::string name;
    double length = 1.0;
    CoefficientProcess diffusion;
    CoefficientProcess advection;
    CoefficientProcess reaction;
    /// gamma, the amplitude read by `initial` through AmplitudeDraws::initial().
    RandomVariableSpec initial_amplitude = RandomVariableSpec::deterministic(1.0);
    InitialProcess initial;
    BoundaryProcess boundary;
    /// Constants quoted alongside the model. Compared against the computed bounds and
    /// reported, never used by the step-size gate.
    std::optional<ModelBounds> quoted_bounds;

    const RandomVariableSpec& amplitude(Role role) const noexcept;

    /// Roles whose amplitude is a genuine random variable, in role order.
    std::vector<Role> random_roles() const;

    /// Draws all amplitudes from `stream` in role order.
    AmplitudeDraws draw(RandomStream& stream) const;

    /// Amplitudes fixed at the mean of every law; handy for deterministic runs.
    AmplitudeDraws mean_draws() const;
};

/// Bounds over the grid and the amplitude supports. Throws ModelError unless d1 > 0 and a1 >= 0.
ModelBounds model_bounds(const Model& model, const Grid1D& grid);

/// Builds Phi_0(x, s) = shape(x) * gamma(s).
InitialProcess separable_initial(Shape shape);

/// Boundary closed forms keyed by name:
///   "constant"      Phi(t) = value
///   "match_initial" Phi(t) = Phi_0(edge, s)
///   "relax"         Phi(t) = target + (Phi_0(edge, s) - target) * exp(-rate * t)
struct BoundarySpec {
    std::string kind = "match_initial";
    double value = 0.0;
    double target = 0.0;
    double rate = 0.0;
};

BoundaryProcess make_boundary(const BoundarySpec& left, const BoundarySpec& right,
                              const InitialProcess& init, double length);

}  // namespace fkpp
