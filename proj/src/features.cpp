#include "lognet/features.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace lognet {

bool admit_generalized(const GeneralizedFeature& candidate)
{
    if (candidate.factor_errors.empty()) {
        return false;
    }
    std::size_t best_factor = candidate.factor_errors.begin()->second;
    for (const auto& [_, v] : candidate.factor_errors) {
        best_factor = std::min(best_factor, v);
    }
    return candidate.feature.errors < best_factor;
}

std::vector<std::size_t> quantitative_variables(const LearningSet& set)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < set.m(); ++i) {
        std::set<double> distinct;
        for (std::size_t t = 0; t < set.n() && distinct.size() <= 2; ++t) {
            distinct.insert(set.value(t, i));
        }
        if (distinct.size() > 2) {
            out.push_back(i);
        }
    }
    return out;
}

namespace {

bool is_superset(const Source& big, const Source& small)
{
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Calls visit(subset) for every size-`p` subset of `pool` in lexicographic order.
template <typename Visit>
void for_each_subset(const std::vector<std::size_t>& pool, std::size_t p, Visit&& visit)
{
    if (p > pool.size()) {
        return;
    }
    std::vector<std::size_t> idx(p);
    for (std::size_t k = 0; k < p; ++k) {
        idx[k] = k;
    }
    Source subset(p);
    while (true) {
        for (std::size_t k = 0; k < p; ++k) {
            subset[k] = pool[idx[k]];
        }
        visit(subset);
        std::size_t k = p;
        while (k > 0 && idx[k - 1] == pool.size() - p + (k - 1)) {
            --k;
        }
        if (k == 0) {
            return;
        }
        ++idx[k - 1];
        for (std::size_t j = k; j < p; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

} // namespace

ProductSearchResult search_products(const LearningSet& set,
                                    const std::vector<QuantizedFeature>& base,
                                    const ProductSearchOptions& options)
{
    if (base.size() != set.m()) {
        throw std::invalid_argument("search_products needs one base feature per variable");
    }
    ProductSearchResult result;
    result.eligible = quantitative_variables(set);
    const std::size_t q = result.eligible.size();
    const std::size_t max_p = options.max_p == 0 ? std::min<std::size_t>(q, 4) : std::min(options.max_p, q);

    for (std::size_t p = 2; p <= max_p; ++p) {
        std::vector<GeneralizedFeature> admitted_now;
        for_each_subset(result.eligible, p, [&](const Source& subset) {
            if (options.prune_supersets) {
                for (const auto& a : result.admitted) {
                    if (is_superset(subset, a.feature.source)) {
                        return;
                    }
                }
            }
            ++result.examined;
            ++result.quantize_calls;
            GeneralizedFeature candidate;
            candidate.feature = quantize_source(set, subset);
            for (const auto i : subset) {
                candidate.factor_errors[i] = base[i].errors;
            }
            if (admit_generalized(candidate)) {
                admitted_now.push_back(std::move(candidate));
            }
        });
        for (auto& a : admitted_now) {
            result.admitted.push_back(std::move(a));
        }
    }
    return result;
}

FeaturePool substitute(const std::vector<QuantizedFeature>& base, const std::vector<GeneralizedFeature>& admitted)
{
    std::vector<const GeneralizedFeature*> ordered;
    for (const auto& a : admitted) {
        ordered.push_back(&a);
    }
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        if (a->p() != b->p()) {
            return a->p() < b->p();
        }
        return a->feature.source < b->feature.source;
    });

    FeaturePool pool;
    std::vector<std::size_t> uses(base.size(), 0);
    for (const auto* a : ordered) {
        pool.features.push_back(a->feature);
        for (const auto i : a->feature.source) {
            ++uses.at(i);
        }
    }
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (uses[i] == 0) {
            pool.features.push_back(base[i]);
        } else if (uses[i] > 1) {
            pool.overlapping_factors.push_back(i);
        }
    }
    return pool;
}

} // namespace lognet
