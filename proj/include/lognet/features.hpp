#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "lognet/quantization.hpp"

namespace lognet {

/// A quantized product of two or more variables together with the error
/// counts of its single-variable factors.
struct GeneralizedFeature {
    QuantizedFeature feature;
    std::map<std::size_t, std::size_t> factor_errors;

    std::size_t p() const { return feature.source.size(); }
};

/// True iff the product makes strictly fewer errors than every factor.
bool admit_generalized(const GeneralizedFeature& candidate);

struct ProductSearchOptions {
    std::size_t max_p = 0; ///< 0 selects min(#quantitative variables, 4)
    bool prune_supersets = true;
};

struct ProductSearchResult {
    std::vector<GeneralizedFeature> admitted;
    std::size_t quantize_calls = 0;
    std::size_t examined = 0;
    std::vector<std::size_t> eligible; ///< variables that took part in the search
};

/// Variables with more than two distinct values. Products of two-valued
/// (Boolean) variables are already covered by the connective set.
std::vector<std::size_t> quantitative_variables(const LearningSet& set);

/// Enumerates products of eligible variables by increasing size, admitting
/// those that beat every factor. With pruning, supersets of an admitted
/// subset are skipped.
ProductSearchResult search_products(const LearningSet& set,
                                    const std::vector<QuantizedFeature>& base,
                                    const ProductSearchOptions& options = {});

/// Synthesis input: admitted products (by size, then lexicographic source)
/// followed by the single variables no product covers.
struct FeaturePool {
    std::vector<QuantizedFeature> features;
    std::vector<std::size_t> overlapping_factors; ///< variables used by more than one product
};

FeaturePool substitute(const std::vector<QuantizedFeature>& base, const std::vector<GeneralizedFeature>& admitted);

} // namespace lognet
