#include "lognet/collective.hpp"

#include <algorithm>

#include "lognet/errors.hpp"

namespace lognet {

void Collective::validate() const
{
    if (neurons.empty()) {
        throw ModelError("collective has no neurons");
    }
    if (!weights.empty() && weights.size() != neurons.size()) {
        throw ModelError("weight count does not match neuron count");
    }
    if (std::any_of(weights.begin(), weights.end(), [](auto w) { return w == 0; })) {
        throw ModelError("neuron weights must be positive");
    }
    for (const auto& neuron : neurons) {
        if (neuron.errors != neurons.front().errors) {
            throw ModelError("collective members must share one error count");
        }
        for (const auto leaf : neuron.expression.leaves()) {
            if (leaf >= pool.size()) {
                throw ModelError("neuron refers to pool feature " + std::to_string(leaf) + " beyond pool size");
            }
        }
    }
    for (const auto& f : pool) {
        for (const auto i : f.source) {
            if (i >= m()) {
                throw ModelError("pool feature refers to variable " + std::to_string(i) + " beyond m");
            }
        }
    }
    if (chi0 < Rational{1, 2} || Rational{1, 1} < chi0) {
        throw ModelError("chi0 must lie in [0.5, 1], got " + chi0.decimal());
    }
}

Verdict classify_bits(const Collective& c, std::span<const std::uint8_t> bits)
{
    if (bits.size() != c.pool.size()) {
        throw DataError(DataIssue::dimension_mismatch, "expected " + std::to_string(c.pool.size()) + " pool bits");
    }
    Verdict v;
    v.votes.reserve(c.neurons.size());
    std::size_t weight_for_one = 0;
    for (std::size_t i = 0; i < c.neurons.size(); ++i) {
        const bool out = c.neurons[i].expression.evaluate(bits);
        v.votes.push_back(out);
        v.total += c.weight(i);
        if (out) {
            weight_for_one += c.weight(i);
        }
    }
    const std::size_t weight_for_zero = v.total - weight_for_one;
    v.for_majority = std::max(weight_for_one, weight_for_zero);
    v.chi = Rational{static_cast<std::int64_t>(v.for_majority), static_cast<std::int64_t>(v.total)};
    if (weight_for_one != weight_for_zero && !(v.chi < c.chi0)) {
        v.decision = weight_for_one > weight_for_zero ? 1 : 0;
    }
    return v;
}

Verdict classify(const Collective& c, std::span<const double> x)
{
    if (x.size() != c.m()) {
        throw DataError(DataIssue::dimension_mismatch,
                        "expected " + std::to_string(c.m()) + " values, got " + std::to_string(x.size()));
    }
    std::vector<std::uint8_t> bits(c.pool.size());
    for (std::size_t f = 0; f < c.pool.size(); ++f) {
        bits[f] = c.pool[f].apply(x);
    }
    return classify_bits(c, bits);
}

CoherenceTable coherence_table(const Collective& c)
{
    const std::size_t k = c.pool.size();
    if (k > max_table_features) {
        throw DataError(DataIssue::dimension_mismatch,
                        "table too large: pool has " + std::to_string(k) + " features (limit " +
                            std::to_string(max_table_features) + ")");
    }
    CoherenceTable table;
    const std::uint32_t rows = 1U << k;
    table.rows.reserve(rows);
    std::vector<std::uint8_t> bits(k);
    std::int64_t refused = 0;
    for (std::uint32_t combo = 0; combo < rows; ++combo) {
        for (std::size_t f = 0; f < k; ++f) {
            bits[f] = (combo >> f) & 1U;
        }
        auto verdict = classify_bits(c, bits);
        refused += verdict.refused();
        table.rows.push_back({combo, std::move(verdict)});
    }
    table.refused_fraction = Rational{refused, static_cast<std::int64_t>(rows)};
    return table;
}

Metrics evaluate(const Collective& c, std::span<const double> rows_row_major, std::span<const std::uint8_t> labels)
{
    const std::size_t m = c.m();
    if (rows_row_major.size() != labels.size() * m) {
        throw DataError(DataIssue::dimension_mismatch, "evaluation rows do not match the model's variable count");
    }
    Metrics out;
    out.n = labels.size();
    double chi_sum = 0.0;
    for (std::size_t t = 0; t < labels.size(); ++t) {
        const auto verdict = classify(c, rows_row_major.subspan(t * m, m));
        const auto y = labels[t];
        ++out.class_counts[y];
        chi_sum += verdict.chi.to_double();
        if (verdict.refused()) {
            ++out.refusals;
            out.refused.push_back(t);
        } else if (*verdict.decision != y) {
            ++out.errors;
            ++out.class_errors[y];
            out.misclassified.push_back(t);
        }
    }
    out.mean_chi = out.n ? chi_sum / static_cast<double>(out.n) : 0.0;
    out.low_coherence = out.n > 0 && out.mean_chi < c.chi0.to_double();
    return out;
}

Metrics evaluate(const Collective& c, const LearningSet& set)
{
    return evaluate(c, set.values(), set.labels());
}

} // namespace lognet
