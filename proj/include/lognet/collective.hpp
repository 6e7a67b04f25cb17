#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lognet/dataset.hpp"
#include "lognet/network.hpp"
#include "lognet/quantization.hpp"
#include "lognet/rational.hpp"

namespace lognet {

inline const Rational default_chi0{4, 5};

/// The deployable classifier: equal-error neurons voting over a quantized pool.
struct Collective {
    std::vector<QuantizedFeature> pool;
    std::vector<Neuron> neurons;
    std::vector<std::uint32_t> weights; ///< per-neuron vote weight; empty means uniform
    Rational chi0 = default_chi0;
    std::array<std::string, 2> label_names = {"0", "1"};
    std::vector<std::string> variable_names;
    std::string label_column = "label";

    std::size_t m() const { return variable_names.size(); }
    std::uint32_t weight(std::size_t i) const { return weights.empty() ? 1U : weights[i]; }
    /// Throws ModelError on an empty collective, mixed error counts, bad
    /// leaf indices, or a threshold outside [1/2, 1].
    void validate() const;
};

struct Verdict {
    std::optional<std::uint8_t> decision; ///< empty when refused
    Rational chi;
    std::vector<std::uint8_t> votes;
    std::size_t for_majority = 0; ///< n1, weighted
    std::size_t total = 0;        ///< N, weighted

    bool refused() const { return !decision.has_value(); }
};

/// Majority vote on already-quantized pool bits.
Verdict classify_bits(const Collective& c, std::span<const std::uint8_t> bits);
/// Quantizes raw measurements through the pool and votes.
Verdict classify(const Collective& c, std::span<const double> x);

struct CoherenceRow {
    std::uint32_t combination = 0; ///< bit i = pool feature i
    Verdict verdict;
};

struct CoherenceTable {
    std::vector<CoherenceRow> rows;
    Rational refused_fraction;
};

inline constexpr std::size_t max_table_features = 20;

/// Verdicts for all 2^k combinations of the pool's Boolean features.
CoherenceTable coherence_table(const Collective& c);

struct Metrics {
    std::size_t n = 0;
    std::size_t errors = 0; ///< over non-refused decisions only
    std::size_t refusals = 0;
    std::array<std::size_t, 2> class_errors{};
    std::array<std::size_t, 2> class_counts{};
    double mean_chi = 0.0;
    bool low_coherence = false; ///< mean chi below chi0
    std::vector<std::size_t> misclassified;
    std::vector<std::size_t> refused;
};

Metrics evaluate(const Collective& c, const LearningSet& set);
Metrics evaluate(const Collective& c, std::span<const double> rows_row_major, std::span<const std::uint8_t> labels);

} // namespace lognet
