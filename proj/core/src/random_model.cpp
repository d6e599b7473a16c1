#include "fkpp/random_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "fkpp/errors.hpp"
#include "fkpp/truncated_normal.hpp"

namespace fkpp {

RandomVariableSpec RandomVariableSpec::deterministic(double value) {
    if (!std::isfinite(value)) throw ModelError("deterministic amplitude must be finite");
    return RandomVariableSpec(Deterministic{value});
}

RandomVariableSpec RandomVariableSpec::truncated_normal(double mu, double sigma, double lo, double hi) {
    if (!std::isfinite(mu) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ModelError("truncated normal: mu and support must be finite");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ModelError("truncated normal: sigma must be positive");
    }
    if (!(lo < hi)) throw ModelError("truncated normal: need lo < hi");
    return RandomVariableSpec(TruncatedNormal{mu, sigma, lo, hi});
}

Interval RandomVariableSpec::support() const noexcept {
    if (const auto* d = std::get_if<Deterministic>(&kind_)) return {d->value, d->value};
    const auto& t = std::get<TruncatedNormal>(kind_);
    return {t.lo, t.hi};
}

double RandomVariableSpec::density(double x) const {
    if (const auto* t = std::get_if<TruncatedNormal>(&kind_)) return truncnorm::pdf(*t, x);
    throw ModelError("a deterministic amplitude has no density");
}

double RandomVariableSpec::cdf(double x) const {
    if (const auto* t = std::get_if<TruncatedNormal>(&kind_)) return truncnorm::cdf(*t, x);
    return x < std::get<Deterministic>(kind_).value ? 0.0 : 1.0;
}

double RandomVariableSpec::mean() const {
    if (const auto* t = std::get_if<TruncatedNormal>(&kind_)) return truncnorm::mean(*t);
    return std::get<Deterministic>(kind_).value;
}

std::string RandomVariableSpec::describe() const {
    std::ostringstream os;
    os.precision(12);
    if (const auto* t = std::get_if<TruncatedNormal>(&kind_)) {
        os << "TruncatedNormal(mu=" << t->mu << ", sigma=" << t->sigma << ", [" << t->lo << ", " << t->hi
           << "])";
    } else {
        os << "Deterministic(" << std::get<Deterministic>(kind_).value << ")";
    }
    return os.str();
}

double sample_amplitude(const RandomVariableSpec& spec, RandomStream& stream) {
    if (const auto* t = std::get_if<TruncatedNormal>(&spec.kind())) return truncnorm::sample(*t, stream);
    return std::get<Deterministic>(spec.kind()).value;
}

const char* role_name(Role role) noexcept {
    switch (role) {
        case Role::diffusion: return "diffusion";
        case Role::advection: return "advection";
        case Role::reaction: return "reaction";
        case Role::initial: return "initial";
    }
    return "?";
}

Shape shape_by_name(const std::string& name) {
    static const std::map<std::string, std::function<double(double)>> registry = {
        {"constant", [](double) { return 1.0; }},
        {"one_plus_x_squared", [](double x) { return 1.0 + x * x; }},
        {"identity_x", [](double x) { return x; }},
        {"one_minus_x", [](double x) { return 1.0 - x; }},
        {"x_squared", [](double x) { return x * x; }},
        {"sin_pi_x", [](double x) { return std::sin(M_PI * x); }},
    };
    const auto it = registry.find(name);
    if (it == registry.end()) throw ConfigError("unknown shape '" + name + "'");
    return Shape{name, it->second};
}

CoefficientProcess::CoefficientProcess(Shape shape, RandomVariableSpec amplitude,
                                       std::optional<Interval> declared_bounds)
    : shape_(std::move(shape)), amplitude_(amplitude), declared_(declared_bounds) {
    if (declared_ && !(declared_->lower <= declared_->upper)) {
        throw ModelError("declared bounds must satisfy lower <= upper");
    }
}

Interval coefficient_bounds(const CoefficientProcess& proc, const Grid1D& grid) {
    const Interval amp = proc.amplitude().support();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
        const double s = proc.shape()(grid.node(i));
        for (double a : {amp.lower, amp.upper}) {
            const double v = s * a;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw ModelError("coefficient '" + proc.shape().name + "' is not finite on the grid");
    }
    const Interval computed{lo, hi};
    if (proc.declared_bounds() && !proc.declared_bounds()->contains(computed, 1e-12)) {
        std::ostringstream os;
        os.precision(12);
        os << "coefficient '" << proc.shape().name << "' takes values in [" << lo << ", " << hi
           << "], outside its declared bounds [" << proc.declared_bounds()->lower << ", "
           << proc.declared_bounds()->upper << "]";
        throw ModelError(os.str());
    }
    return computed;
}

CoherenceReport check_coherence(const InitialProcess& init, const BoundaryProcess& bnd, double length,
                                std::span<const AmplitudeDraws> samples, double tolerance) {
    CoherenceReport report;
    report.tolerance = tolerance;
    for (const auto& s : samples) {
        report.left_gap = std::max(report.left_gap, std::abs(init(0.0, s) - bnd.left(0.0, s)));
        report.right_gap = std::max(report.right_gap, std::abs(init(length, s) - bnd.right(0.0, s)));
    }
    report.passed = report.left_gap <= tolerance && report.right_gap <= tolerance;
    return report;
}

const RandomVariableSpec& Model::amplitude(Role role) const noexcept {
    switch (role) {
        case Role::diffusion: return diffusion.amplitude();
        case Role::advection: return advection.amplitude();
        case Role::reaction: return reaction.amplitude();
        case Role::initial: break;
    }
    return initial_amplitude;
}

std::vector<Role> Model::random_roles() const {
    std::vector<Role> roles;
    for (Role r : kAllRoles) {
        if (amplitude(r).is_random()) roles.push_back(r);
    }
    return roles;
}

AmplitudeDraws Model::draw(RandomStream& stream) const {
    AmplitudeDraws draws;
    for (Role r : kAllRoles) draws[r] = sample_amplitude(amplitude(r), stream);
    return draws;
}

AmplitudeDraws Model::mean_draws() const {
    AmplitudeDraws draws;
    for (Role r : kAllRoles) draws[r] = amplitude(r).mean();
    return draws;
}

ModelBounds model_bounds(const Model& model, const Grid1D& grid) {
    const Interval d = coefficient_bounds(model.diffusion, grid);
    const Interval b = coefficient_bounds(model.advection, grid);
    const Interval a = coefficient_bounds(model.reaction, grid);
    if (!(d.lower > 0.0)) {
        throw ModelError("diffusion must be bounded below by a positive constant (d1 > 0)");
    }
    if (!(a.lower >= 0.0)) throw ModelError("reaction must be nonnegative (a1 >= 0)");
    return ModelBounds{d.lower, d.upper, std::max(std::abs(b.lower), std::abs(b.upper)), a.lower, a.upper};
}

InitialProcess separable_initial(Shape shape) {
    std::string name = shape.name;
    return InitialProcess{std::move(name), [shape = std::move(shape)](double x, const AmplitudeDraws& s) {
                              return shape(x) * s.initial();
                          }};
}

namespace {

std::function<double(double, const AmplitudeDraws&)> boundary_side(const BoundarySpec& spec,
                                                                   const InitialProcess& init, double edge) {
    if (spec.kind == "constant") {
        return [v = spec.value](double, const AmplitudeDraws&) { return v; };
    }
    if (spec.kind == "match_initial") {
        return [init, edge](double, const AmplitudeDraws& s) { return init(edge, s); };
    }
    if (spec.kind == "relax") {
        if (!(spec.rate >= 0.0)) throw ConfigError("relax boundary: rate must be nonnegative");
        return [init, edge, target = spec.target, rate = spec.rate](double t, const AmplitudeDraws& s) {
            return target + (init(edge, s) - target) * std::exp(-rate * t);
        };
    }
    throw ConfigError("unknown boundary kind '" + spec.kind + "'");
}

}  // namespace

BoundaryProcess make_boundary(const BoundarySpec& left, const BoundarySpec& right, const InitialProcess& init,
                              double length) {
    return BoundaryProcess{left.kind + "/" + right.kind, boundary_side(left, init, 0.0),
                           boundary_side(right, init, length)};
}

}  // namespace fkpp
