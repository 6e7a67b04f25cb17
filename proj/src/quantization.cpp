#include "lognet/quantization.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lognet {

const char* to_string(Polarity p)
{
    return p == Polarity::at_least ? ">=" : "<";
}

Polarity polarity_from_string(const std::string& s)
{
    if (s == ">=") {
        return Polarity::at_least;
    }
    if (s == "<") {
        return Polarity::below;
    }
    throw std::invalid_argument("unknown polarity '" + s + "'");
}

double source_value(std::span<const double> x, const Source& source)
{
    double v = x[source.front()];
    for (std::size_t k = 1; k < source.size(); ++k) {
        v *= x[source[k]];
    }
    return v;
}

std::vector<double> source_values(const LearningSet& set, const Source& source)
{
    if (source.empty()) {
        throw std::invalid_argument("empty feature source");
    }
    for (const auto i : source) {
        if (i >= set.m()) {
            throw std::out_of_range("variable index " + std::to_string(i) + " out of range");
        }
    }
    std::vector<double> out(set.n());
    for (std::size_t t = 0; t < set.n(); ++t) {
        out[t] = source_value(set.row(t), source);
    }
    return out;
}

std::string QuantizedFeature::describe(const std::vector<std::string>& names) const
{
    std::string out;
    for (std::size_t k = 0; k < source.size(); ++k) {
        if (k) {
            out += '*';
        }
        out += source[k] < names.size() ? names[source[k]] : "x" + std::to_string(source[k] + 1);
    }
    return out;
}

BoolColumn apply_threshold(std::span<const double> values, double threshold, Polarity polarity)
{
    BoolColumn out(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        const bool above = values[t] >= threshold;
        out[t] = polarity == Polarity::at_least ? above : !above;
    }
    return out;
}

QuantizedFeature quantize(std::span<const double> values, std::span<const std::uint8_t> labels)
{
    const std::size_t n = values.size();
    if (n < 2 || labels.size() != n) {
        throw std::invalid_argument("quantize needs n >= 2 values with one label each");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

    const auto total_ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
    const std::size_t total_zeros = n - total_ones;

    QuantizedFeature best;
    if (values[order.front()] == values[order.back()]) {
        best.constant = true;
        best.threshold = values[order.front()];
        // at_least maps every instance to 1, below maps every instance to 0
        best.polarity = total_ones >= total_zeros ? Polarity::at_least : Polarity::below;
        best.errors = std::min(total_ones, total_zeros);
        best.column = apply_threshold(values, best.threshold, best.polarity);
        return best;
    }

    // Sweep cut points left to right; zeros_below/ones_below count instances under the cut.
    std::size_t zeros_below = 0;
    std::size_t ones_below = 0;
    bool found = false;
    double best_gap = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        (labels[order[k]] ? ones_below : zeros_below) += 1;
        const double lo = values[order[k]];
        const double hi = values[order[k + 1]];
        if (!(lo < hi)) {
            continue;
        }
        double u = lo + (hi - lo) / 2;
        if (!(u > lo)) {
            u = hi;
        }
        const double gap = hi - lo;
        // at_least: instances below the cut predicted 0, the rest 1
        const std::size_t err_at_least = ones_below + (total_zeros - zeros_below);
        const std::size_t err_below = n - err_at_least;
        for (const auto& [pol, err] : {std::pair{Polarity::at_least, err_at_least}, std::pair{Polarity::below, err_below}}) {
            // Sweep order already makes u ascending, so a later cut with the same
            // error and gap never wins; at_least is tried first at equal u.
            const bool better = !found || err < best.errors || (err == best.errors && gap > best_gap);
            if (better) {
                found = true;
                best.errors = err;
                best.threshold = u;
                best.polarity = pol;
                best_gap = gap;
            }
        }
    }
    best.column = apply_threshold(values, best.threshold, best.polarity);
    return best;
}

QuantizedFeature quantize_source(const LearningSet& set, const Source& source)
{
    const auto values = source_values(set, source);
    auto f = quantize(values, set.labels());
    f.source = source;
    return f;
}

std::vector<QuantizedFeature> quantize_all(const LearningSet& set)
{
    std::vector<QuantizedFeature> out;
    out.reserve(set.m());
    for (std::size_t i = 0; i < set.m(); ++i) {
        out.push_back(quantize_source(set, Source{i}));
    }
    return out;
}

} // namespace lognet
