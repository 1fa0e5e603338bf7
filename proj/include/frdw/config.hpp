#pragma once
/**
 * @file config.hpp
 * @brief Run specification for the command-line tool: a flat `key = value`
 * file, overridden by flags. Unknown keys and out-of-range values are rejected
 * with the offending key in the message.
 */

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "frdw/simulation.hpp"

namespace frdw {

class ConfigError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

struct RunSpec {
    std::vector<Experiment> experiments{Experiment::e1, Experiment::e2, Experiment::e3, Experiment::e4};
    /// Future variants; each runs against its vanilla counterpart.
    std::vector<ControllerKind> pairs{ControllerKind::f_mpcred, ControllerKind::f_s2c, ControllerKind::f_tapf,
                                      ControllerKind::f_arc};
    std::optional<ControllerKind> controller;  ///< single controller for `render` (and `sweep` if set)
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::filesystem::path out = "results";

    TrialConfig base;
    std::optional<double> mu_all;               ///< `mu`: applies to every future variant
    std::map<ControllerKind, double> mu_by;     ///< `mu.<controller>`

    SweepParam sweep_param = SweepParam::mu;
    std::vector<double> sweep_grid;

    double mu_for(ControllerKind k) const;
    ExperimentSpec experiment_spec(Experiment e, ControllerKind future_kind) const;
    /// Cross-field checks; throws ConfigError.
    void validate() const;
};

/// Sets one key. Throws ConfigError("<key>: <problem>") on bad input.
void apply_setting(RunSpec& spec, std::string_view key, std::string_view value);

/// Applies every `key = value` line of a config text ('#' starts a comment).
void apply_config_text(RunSpec& spec, std::string_view text, std::string_view origin = "config");
void apply_config_file(RunSpec& spec, const std::filesystem::path& path);

/// Every accepted key with its default and a one-line description.
struct KeyInfo {
    std::string key;
    std::string default_value;
    std::string description;
};
const std::vector<KeyInfo>& config_keys();

std::vector<Experiment> parse_experiments(std::string_view text);
/// "all" or a comma list of controllers; vanilla names select their pair.
std::vector<ControllerKind> parse_pairs(std::string_view text);

}  // namespace frdw
