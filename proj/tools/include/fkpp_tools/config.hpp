#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "fkpp/ensemble.hpp"
#include "fkpp/random_model.hpp"

namespace fkpp::cli {

/// Command-line values that take precedence over the config file.
struct Overrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::optional<int> threads;
    bool allow_inadmissible = false;
};

struct RunConfig {
    Model model;
    SchemeConfig scheme;
    /// Reaction law of the built-in test problem; empty for custom models.
    std::optional<RandomVariableSpec> builtin_law;
    std::string out_dir;
    std::uint64_t seed = 0;
    /// The config after defaults and overrides were applied.
    nlohmann::json resolved;
};

/// Throws ConfigError (or a model error) for anything that does not describe a valid run.
RunConfig parse_config(const nlohmann::json& doc, const Overrides& overrides);

/// Reads and parses `path`; unreadable files and malformed JSON raise ConfigError.
RunConfig load_config(const std::string& path, const Overrides& overrides);

RandomVariableSpec parse_amplitude(const nlohmann::json& j);
nlohmann::json amplitude_json(const RandomVariableSpec& spec);

}  // namespace fkpp::cli
