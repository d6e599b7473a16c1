#include "fkpp/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iterator>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "fkpp/errors.hpp"
#include "fkpp/gauss_legendre.hpp"

namespace fkpp {

void FixedPointSum::add(long double v) {
    if (!std::isfinite(v) || std::abs(v) > kMaxAddend) {
        throw NumericalError("ensemble accumulator: addend out of range");
    }
    const auto scaled = static_cast<Wide>(std::nearbyint(std::ldexp(v, kFractionBits)));
    if (__builtin_add_overflow(acc_, scaled, &acc_)) throw NumericalError("ensemble accumulator overflow");
}

FixedPointSum& FixedPointSum::operator+=(const FixedPointSum& other) {
    if (__builtin_add_overflow(acc_, other.acc_, &acc_)) throw NumericalError("ensemble accumulator overflow");
    return *this;
}

double FixedPointSum::value() const { return std::ldexp(static_cast<double>(acc_), -kFractionBits); }

long double FixedPointSum::value_extended() const {
    return std::ldexp(static_cast<long double>(acc_), -kFractionBits);
}

std::string describe(const Sampler& sampler) {
    std::ostringstream os;
    if (const auto* mc = std::get_if<MonteCarlo>(&sampler)) {
        os << "monte_carlo(samples=" << mc->samples << ", seed=" << mc->seed << ")";
    } else {
        os << "collocation(nodes=" << std::get<Collocation>(sampler).nodes << ")";
    }
    return os.str();
}

Sampler default_sampler(const Model& model) {
    if (model.random_roles().size() <= 2) return Collocation{64};
    return MonteCarlo{10000, 0};
}

EnsemblePartial::EnsemblePartial(int rows, int cols, std::string config_key)
    : rows_(rows),
      cols_(cols),
      key_(std::move(config_key)),
      first_(static_cast<std::size_t>(rows) * cols),
      second_(static_cast<std::size_t>(rows) * cols) {}

void EnsemblePartial::insert_range(IdRange r) {
    auto it = std::lower_bound(ranges_.begin(), ranges_.end(), r,
                               [](const IdRange& a, const IdRange& b) { return a.begin < b.begin; });
    if (it != ranges_.end() && it->begin < r.end) throw ConfigError("ensemble merge: overlapping sample ids");
    if (it != ranges_.begin() && std::prev(it)->end > r.begin) {
        throw ConfigError("ensemble merge: overlapping sample ids");
    }
    it = ranges_.insert(it, r);
    // Coalesce with neighbours.
    if (auto next = std::next(it); next != ranges_.end() && next->begin == it->end) {
        it->end = next->end;
        ranges_.erase(next);
    }
    if (it != ranges_.begin()) {
        auto prev = std::prev(it);
        if (prev->end == it->begin) {
            prev->end = it->end;
            ranges_.erase(it);
        }
    }
}

void EnsemblePartial::add(const Matrix& values, double weight, std::int64_t sample_id) {
    if (values.rows() != rows_ || values.cols() != cols_) throw ConfigError("ensemble: trajectory shape mismatch");
    insert_range({sample_id, sample_id + 1});
    weight_.add(weight);
    for (int j = 0; j < cols_; ++j) {
        for (int i = 0; i < rows_; ++i) {
            // Extended precision keeps m2 - m1^2 free of double rounding noise.
            const long double u = values(i, j);
            const std::size_t idx = static_cast<std::size_t>(j) * rows_ + i;
            first_[idx].add(weight * u);
            second_[idx].add(weight * (u * u));
        }
    }
    ++count_;
}

EnsemblePartial& EnsemblePartial::merge(const EnsemblePartial& other) {
    if (other.empty() && other.key_.empty()) return *this;
    if (empty() && key_.empty()) {
        *this = other;
        return *this;
    }
    if (key_ != other.key_ || rows_ != other.rows_ || cols_ != other.cols_) {
        throw ConfigError("ensemble merge: partials come from different configurations");
    }
    auto saved = ranges_;
    try {
        for (const auto& r : other.ranges_) insert_range(r);
    } catch (...) {
        ranges_ = std::move(saved);
        throw;
    }
    weight_ += other.weight_;
    for (std::size_t i = 0; i < first_.size(); ++i) {
        first_[i] += other.first_[i];
        second_[i] += other.second_[i];
    }
    count_ += other.count_;
    return *this;
}

EnsemblePartial merge_stats(const EnsemblePartial& a, const EnsemblePartial& b) {
    EnsemblePartial out = a;
    out.merge(b);
    return out;
}

namespace {

// Variances below this fraction of the second moment are accumulation rounding, not spread.
constexpr long double kVarianceNoise = 64 * std::numeric_limits<long double>::epsilon();

}  // namespace

EnsembleStats EnsemblePartial::finalize(bool monte_carlo, std::string method) const {
    if (empty()) throw ConfigError("ensemble: no realizations to reduce");
    EnsembleStats s;
    s.count = count_;
    s.method = std::move(method);
    s.mean.resize(rows_, cols_);
    s.second_moment.resize(rows_, cols_);
    s.std.resize(rows_, cols_);
    if (monte_carlo) s.mc_standard_error = Matrix(rows_, cols_);
    const long double w = weight_.value_extended();
    for (int j = 0; j < cols_; ++j) {
        for (int i = 0; i < rows_; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * rows_ + i;
            const long double m1 = first_[idx].value_extended() / w;
            const long double m2 = second_[idx].value_extended() / w;
            long double var = m2 - m1 * m1;
            if (var <= kVarianceNoise * m2) var = 0.0L;
            s.mean(i, j) = static_cast<double>(m1);
            s.second_moment(i, j) = static_cast<double>(m2);
            s.std(i, j) = static_cast<double>(std::sqrt(var));
            if (monte_carlo) {
                const auto n = static_cast<long double>(count_);
                (*s.mc_standard_error)(i, j) =
                    count_ > 1 ? static_cast<double>(std::sqrt(var * n / (n - 1.0L) / n))
                               : std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
    return s;
}

std::vector<CollocationNode> collocation_nodes(const Model& model, int nodes_per_dimension) {
    if (nodes_per_dimension < 2) throw ConfigError("collocation: need at least 2 nodes per dimension");
    const std::vector<Role> roles = model.random_roles();
    const AmplitudeDraws base = model.mean_draws();

    std::vector<QuadratureRule> rules;
    for (Role r : roles) {
        const Interval s = model.amplitude(r).support();
        QuadratureRule q = gauss_legendre(nodes_per_dimension, s.lower, s.upper);
        for (std::size_t j = 0; j < q.nodes.size(); ++j) q.weights[j] *= model.amplitude(r).density(q.nodes[j]);
        rules.push_back(std::move(q));
    }

    std::vector<CollocationNode> out{{base, 1.0}};
    for (std::size_t d = 0; d < roles.size(); ++d) {
        std::vector<CollocationNode> next;
        next.reserve(out.size() * rules[d].nodes.size());
        for (const auto& node : out) {
            for (std::size_t j = 0; j < rules[d].nodes.size(); ++j) {
                CollocationNode c = node;
                c.draws[roles[d]] = rules[d].nodes[j];
                c.weight *= rules[d].weights[j];
                next.push_back(c);
            }
        }
        out = std::move(next);
    }
    return out;
}

std::int64_t sample_count(const Model& model, const Sampler& sampler) {
    if (const auto* mc = std::get_if<MonteCarlo>(&sampler)) return mc->samples;
    const auto dims = model.random_roles().size();
    std::int64_t n = 1;
    for (std::size_t d = 0; d < dims; ++d) n *= std::get<Collocation>(sampler).nodes;
    return n;
}

namespace {

std::string config_key(const Model& model, const SchemeConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << model.name << '|' << c.grid.length() << '|' << c.grid.intervals() << '|' << c.mesh.horizon() << '|'
       << c.mesh.steps() << '|' << describe(c.sampler);
    return os.str();
}

struct Plan {
    SampleSolver solver;
    std::vector<CollocationNode> nodes;
    bool monte_carlo;
    std::int64_t total;
    std::string key;
};

Plan make_plan(const Model& model, const SchemeConfig& config, const EnsembleOptions& options) {
    SolveOptions so;
    so.allow_inadmissible = config.allow_inadmissible;
    so.warn = options.warn;
    const auto* mc = std::get_if<MonteCarlo>(&config.sampler);
    if (mc) {
        if (mc->samples < 1) throw ConfigError("monte carlo: need at least one sample");
        so.master_seed = mc->seed;
    }
    Plan plan{SampleSolver(model, config.grid, config.mesh, so), {}, mc != nullptr, 0,
              config_key(model, config)};
    if (!mc) plan.nodes = collocation_nodes(model, std::get<Collocation>(config.sampler).nodes);
    plan.total = mc ? mc->samples : static_cast<std::int64_t>(plan.nodes.size());
    return plan;
}

void accumulate(const Plan& plan, EnsemblePartial& partial, std::int64_t id) {
    try {
        if (plan.monte_carlo) {
            partial.add(plan.solver.solve(id).values, 1.0, id);
        } else {
            const auto& node = plan.nodes[static_cast<std::size_t>(id)];
            partial.add(plan.solver.solve_with(node.draws, id).values, node.weight, id);
        }
    } catch (const SampleFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw SampleFailure(id, e.what());
    }
}

}  // namespace

EnsemblePartial run_partial(const Model& model, const SchemeConfig& config, std::int64_t begin, std::int64_t end,
                            const EnsembleOptions& options) {
    const Plan plan = make_plan(model, config, options);
    if (begin < 0 || end > plan.total || begin > end) throw ConfigError("ensemble: sample range out of bounds");
    EnsemblePartial partial(config.grid.size(), config.mesh.levels(), plan.key);
    for (std::int64_t id = begin; id < end; ++id) accumulate(plan, partial, id);
    return partial;
}

EnsembleStats run_ensemble(const Model& model, const SchemeConfig& config, const EnsembleOptions& options) {
    EnsembleOptions opts = options;
    std::mutex warn_mutex;
    if (options.warn) {
        opts.warn = [&](const std::string& msg) {
            std::lock_guard lock(warn_mutex);
            options.warn(msg);
        };
    }
    const Plan plan = make_plan(model, config, opts);
    const int rows = config.grid.size();
    const int cols = config.mesh.levels();
    const std::int64_t block = std::max(1, opts.block_size);

    unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, (plan.total + block - 1) / block));
    threads = std::max(1u, threads);

    std::atomic<std::int64_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex fail_mutex;
    std::optional<SampleFailure> failure;
    std::vector<EnsemblePartial> partials(threads, EnsemblePartial(rows, cols, plan.key));

    auto worker = [&](unsigned w) {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::int64_t begin = next.fetch_add(block);
            if (begin >= plan.total) break;
            const std::int64_t end = std::min(plan.total, begin + block);
            for (std::int64_t id = begin; id < end; ++id) {
                try {
                    accumulate(plan, partials[w], id);
                } catch (const SampleFailure& f) {
                    std::lock_guard lock(fail_mutex);
                    if (!failure || f.sample_id() < failure->sample_id()) failure = f;
                    stop = true;
                    return;
                } catch (const std::exception& e) {
                    std::lock_guard lock(fail_mutex);
                    if (!failure || id < failure->sample_id()) failure = SampleFailure(id, e.what());
                    stop = true;
                    return;
                }
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    }
    if (failure) throw *failure;

    EnsemblePartial total(rows, cols, plan.key);
    for (const auto& p : partials) total.merge(p);
    return total.finalize(plan.monte_carlo, describe(config.sampler));
}

}  // namespace fkpp
