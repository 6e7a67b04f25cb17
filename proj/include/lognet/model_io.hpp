#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lognet/collective.hpp"
#include "lognet/synthesis.hpp"

namespace lognet {

inline constexpr int model_format_version = 1;

struct ModelFile {
    Collective collective;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json report = nlohmann::json::object();
};

nlohmann::json config_to_json(const SynthesisConfig& config);
nlohmann::json report_to_json(const SynthesisReport& report, const Collective& collective);
nlohmann::json expression_to_json(const Expression& expression);
Expression expression_from_json(const nlohmann::json& j);

std::string serialize_model(const ModelFile& model);
ModelFile parse_model(std::string_view text);
void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

/// "IF <dnf> THEN class=<1> ELSE class=<0>" for one neuron.
std::string render_rule(const Collective& c, const Neuron& neuron);
/// One rule per neuron between a voting preamble and a refusal footer.
std::string render_rules(const Collective& c);

/// A rule line parsed back into an evaluable predicate over raw measurements.
struct ParsedRule {
    std::function<bool(std::span<const double>)> condition;
    std::string then_label;
    std::string else_label;
};

ParsedRule parse_rule(std::string_view line, const std::vector<std::string>& variable_names);

/// Prime-implicant cover of a truth table over `k` inputs; each term is a
/// list of (input, required value). An empty cover is FALSE, a cover holding
/// one empty term is TRUE.
using Term = std::vector<std::pair<std::size_t, bool>>;
std::vector<Term> minimal_dnf(std::span<const std::uint8_t> truth, std::size_t k);

} // namespace lognet
