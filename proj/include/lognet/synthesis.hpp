#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lognet/collective.hpp"
#include "lognet/dataset.hpp"
#include "lognet/features.hpp"
#include "lognet/network.hpp"
#include "lognet/rational.hpp"

namespace lognet {

enum class Mode {
    statement1, ///< admit by error count against both constituents
    split,      ///< rank by exterior criteria on an A/B split, stop by the delta rule
};

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view text);

enum class StopCause { none, cr_zero, no_admissions, delta_rule, layer_cap };

/// "none", "CR=0", "L_{r+1}=0", "delta-rule", "layer-cap"
std::string_view to_string(StopCause cause);
StopCause stop_cause_from_string(std::string_view text);

struct SynthesisConfig {
    Mode mode = Mode::statement1;
    std::size_t delta = 0;
    Rational f_ratio{2, 5};
    std::optional<std::size_t> f_cap; ///< overrides f_ratio when set
    std::size_t max_layers = 10;
    std::size_t max_p = 0; ///< 0 selects the default, 1 disables products
    bool prune_products = true;
    Rational chi0 = default_chi0;
    std::uint64_t seed = 0;
};

/// What happened in one grown layer (r >= 1).
struct LayerTrace {
    std::size_t r = 0;
    std::size_t pairs = 0;                ///< L_r: operand pairs considered
    std::size_t candidates_generated = 0; ///< after column deduplication
    std::size_t admitted = 0;
    std::optional<std::size_t> min_V;            ///< over survivors
    std::optional<std::size_t> best_candidate_V; ///< over all candidates
    std::optional<std::size_t> min_CR;           ///< split mode only
    std::size_t f_cap = 0;
    std::vector<Neuron> survivors;
    StopCause stop_cause = StopCause::none;
};

struct CandidateBatch {
    std::vector<Neuron> candidates;
    /// Per candidate: error count of the first operand and of the added leaf.
    std::vector<std::size_t> parent_errors;
    std::vector<std::size_t> leaf_errors;
    std::size_t pairs = 0;
    std::size_t before_dedup = 0;
};

/// Layer 1: every unordered pair of pool features through every connective.
/// Layer r > 1: every survivor combined with each pool feature it does not
/// already use. Columns that repeat a survivor or an earlier candidate are
/// dropped, keeping the one with fewer distinct leaves.
CandidateBatch generate_candidates(std::span<const QuantizedFeature> pool,
                                   std::span<const Neuron> survivors,
                                   std::size_t r,
                                   std::span<const std::uint8_t> labels);

/// Strict exterior addition: the composed function must beat both parts.
constexpr bool admit(std::size_t candidate_errors, std::size_t parent_errors, std::size_t leaf_errors)
{
    return candidate_errors < (parent_errors < leaf_errors ? parent_errors : leaf_errors);
}

/// max(1, ceil(ratio * pairs))
std::size_t default_f_cap(std::size_t pairs, const Rational& ratio = Rational{2, 5});

/// Best `f_cap` neurons by (errors, leaf count, generation order); in split
/// mode the combined criterion is compared first.
std::vector<Neuron> select_survivors(std::vector<Neuron> admitted, std::size_t f_cap, Mode mode = Mode::statement1);

/// Criteria for `expression` with every leaf re-quantized on A only and on B
/// only, both fits scored on the whole set.
struct SplitFit {
    SplitCriteria criteria;
    std::vector<QuantizedFeature> pool_a; ///< leaves refitted on A; others untouched
    std::vector<QuantizedFeature> pool_b;
    BoolColumn output_a;
    BoolColumn output_b;
};

SplitFit split_criteria(const Expression& expression,
                        const SplitPair& split,
                        const LearningSet& set,
                        std::span<const QuantizedFeature> pool);

struct StopDecision {
    bool stop = false;
    StopCause cause = StopCause::none;
    std::size_t keep_layer = 0;
};

StopDecision should_stop(std::span<const LayerTrace> history, Mode mode, std::size_t delta, std::size_t max_layers);

struct SynthesisReport {
    std::vector<QuantizedFeature> base;
    ProductSearchResult products;
    FeaturePool pool;
    std::size_t pool_min_V = 0;
    std::optional<std::size_t> pool_min_CR;
    std::vector<LayerTrace> layers;
    StopCause stop_cause = StopCause::none;
    std::size_t final_layer = 0;
    std::size_t final_V = 0;
    std::size_t contradiction_bound = 0;
    std::optional<SplitPair> split;
    std::vector<std::size_t> doubtful; ///< training rows the collective gets wrong or refuses
    std::vector<std::string> warnings;
};

struct SynthesisResult {
    Collective collective;
    SynthesisReport report;
};

/// Layered growth over an already-built pool.
SynthesisResult grow(const LearningSet& set, FeaturePool pool, const SynthesisConfig& config);

/// Quantization, product search and substitution, then layered growth.
SynthesisResult synthesize(const LearningSet& set, const SynthesisConfig& config = {});

} // namespace lognet
