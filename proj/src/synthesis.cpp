#include "lognet/synthesis.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "lognet/errors.hpp"

namespace lognet {

std::string_view to_string(Mode mode)
{
    return mode == Mode::statement1 ? "statement1" : "split";
}

Mode mode_from_string(std::string_view text)
{
    if (text == "statement1") {
        return Mode::statement1;
    }
    if (text == "split") {
        return Mode::split;
    }
    throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected statement1 or split)");
}

namespace {

constexpr std::array<std::string_view, 5> stop_cause_names = {"none", "CR=0", "L_{r+1}=0", "delta-rule", "layer-cap"};

std::string column_key(const BoolColumn& column)
{
    return {column.begin(), column.end()};
}

BoolColumn combine_columns(Connective op, const BoolColumn& a, const BoolColumn& b)
{
    const auto table = truth_table(op);
    BoolColumn out(a.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        out[t] = (table >> ((a[t] ? 2 : 0) + (b[t] ? 1 : 0))) & 1U;
    }
    return out;
}

// Every pool feature re-quantized on one subset, with outputs on the whole set.
struct SubsetFit {
    std::vector<QuantizedFeature> pool;
    std::vector<BoolColumn> columns;
};

SubsetFit fit_on_subset(const LearningSet& set,
                        std::span<const QuantizedFeature> pool,
                        std::span<const std::size_t> subset,
                        std::span<const std::size_t> only)
{
    std::array<std::size_t, 2> classes{};
    for (const auto t : subset) {
        ++classes[set.labels()[t]];
    }
    if (classes[0] == 0 || classes[1] == 0) {
        throw SynthesisError("degenerate split: a subset holds a single class");
    }
    const auto sub = set.subset(subset);
    SubsetFit fit;
    fit.pool.assign(pool.begin(), pool.end());
    fit.columns.resize(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const bool refit = only.empty() || std::find(only.begin(), only.end(), i) != only.end();
        if (!refit) {
            fit.columns[i] = pool[i].column;
            continue;
        }
        auto& f = fit.pool[i];
        const auto q = quantize(source_values(sub, f.source), sub.labels());
        f.threshold = q.threshold;
        f.polarity = q.polarity;
        f.errors = q.errors;
        f.constant = q.constant;
        f.column = apply_threshold(source_values(set, f.source), f.threshold, f.polarity);
        fit.columns[i] = f.column;
    }
    return fit;
}

SplitCriteria score_fits(const BoolColumn& out_a, const BoolColumn& out_b, std::span<const std::uint8_t> labels)
{
    SplitCriteria c;
    c.unbiasedness = hamming(out_a, out_b);
    c.regularity = hamming(out_a, labels) + hamming(out_b, labels);
    c.combined = c.unbiasedness + c.regularity;
    return c;
}

Neuron pool_neuron(const QuantizedFeature& f, std::size_t index)
{
    Neuron n;
    n.expression = Expression::leaf(index);
    n.layer = 0;
    n.errors = f.errors;
    n.column = f.column;
    n.order = index;
    return n;
}

} // namespace

std::string_view to_string(StopCause cause)
{
    return stop_cause_names[static_cast<std::size_t>(cause)];
}

StopCause stop_cause_from_string(std::string_view text)
{
    for (std::size_t k = 0; k < stop_cause_names.size(); ++k) {
        if (stop_cause_names[k] == text) {
            return static_cast<StopCause>(k);
        }
    }
    throw std::invalid_argument("unknown stop cause '" + std::string(text) + "'");
}

CandidateBatch generate_candidates(std::span<const QuantizedFeature> pool,
                                   std::span<const Neuron> survivors,
                                   std::size_t r,
                                   std::span<const std::uint8_t> labels)
{
    if (pool.empty()) {
        throw SynthesisError("no features");
    }
    if (r == 0) {
        throw std::invalid_argument("generate_candidates: layers start at 1");
    }
    if (r == 1 && !survivors.empty()) {
        throw std::invalid_argument("generate_candidates: layer 1 takes no survivors");
    }

    CandidateBatch batch;
    // column -> candidate slot, or npos for a survivor's column
    constexpr auto survivor_slot = static_cast<std::size_t>(-1);
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& s : survivors) {
        seen.emplace(column_key(s.column), survivor_slot);
    }

    std::size_t order = 0;
    const auto offer = [&](Expression expr, BoolColumn column, std::size_t parent_v, std::size_t leaf_v) {
        ++batch.before_dedup;
        Neuron n;
        n.expression = std::move(expr);
        n.layer = r;
        n.errors = hamming(column, labels);
        n.column = std::move(column);
        n.order = order++;
        auto key = column_key(n.column);
        const auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(std::move(key), batch.candidates.size());
            batch.candidates.push_back(std::move(n));
            batch.parent_errors.push_back(parent_v);
            batch.leaf_errors.push_back(leaf_v);
            return;
        }
        if (it->second == survivor_slot) {
            return;
        }
        auto& kept = batch.candidates[it->second];
        if (n.leaf_count() < kept.leaf_count()) {
            kept = std::move(n);
            batch.parent_errors[it->second] = parent_v;
            batch.leaf_errors[it->second] = leaf_v;
        }
    };

    if (r == 1) {
        for (std::size_t a = 0; a < pool.size(); ++a) {
            for (std::size_t b = a + 1; b < pool.size(); ++b) {
                ++batch.pairs;
                for (const auto op : reference_set) {
                    offer(Expression::combine(op, Expression::leaf(a), Expression::leaf(b)),
                          combine_columns(op, pool[a].column, pool[b].column), pool[a].errors, pool[b].errors);
                }
            }
        }
        return batch;
    }

    for (const auto& s : survivors) {
        for (std::size_t k = 0; k < pool.size(); ++k) {
            if (s.expression.has_leaf(k)) {
                continue;
            }
            ++batch.pairs;
            for (const auto op : reference_set) {
                offer(Expression::combine(op, s.expression, Expression::leaf(k)),
                      combine_columns(op, s.column, pool[k].column), s.errors, pool[k].errors);
            }
        }
    }
    return batch;
}

std::size_t default_f_cap(std::size_t pairs, const Rational& ratio)
{
    const auto scaled = static_cast<std::int64_t>(pairs) * ratio.num;
    const auto cap = static_cast<std::size_t>((scaled + ratio.den - 1) / ratio.den);
    return std::max<std::size_t>(1, cap);
}

std::vector<Neuron> select_survivors(std::vector<Neuron> admitted, std::size_t f_cap, Mode mode)
{
    if (f_cap == 0) {
        throw std::invalid_argument("F cap must be at least 1");
    }
    std::vector<std::pair<std::size_t, std::size_t>> keyed; // (leaf count, position)
    keyed.reserve(admitted.size());
    for (std::size_t i = 0; i < admitted.size(); ++i) {
        keyed.emplace_back(admitted[i].leaf_count(), i);
    }
    const auto cr = [&](std::size_t i) { return admitted[i].criteria ? admitted[i].criteria->combined : 0; };
    std::sort(keyed.begin(), keyed.end(), [&](const auto& x, const auto& y) {
        const auto& a = admitted[x.second];
        const auto& b = admitted[y.second];
        if (mode == Mode::split && cr(x.second) != cr(y.second)) {
            return cr(x.second) < cr(y.second);
        }
        if (a.errors != b.errors) {
            return a.errors < b.errors;
        }
        if (x.first != y.first) {
            return x.first < y.first;
        }
        return a.order < b.order;
    });
    std::vector<Neuron> out;
    const auto keep = std::min(f_cap, keyed.size());
    out.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) {
        out.push_back(std::move(admitted[keyed[k].second]));
    }
    return out;
}

SplitFit split_criteria(const Expression& expression,
                        const SplitPair& split,
                        const LearningSet& set,
                        std::span<const QuantizedFeature> pool)
{
    const auto leaves = expression.leaves();
    auto fit_a = fit_on_subset(set, pool, split.subset_a, leaves);
    auto fit_b = fit_on_subset(set, pool, split.subset_b, leaves);
    SplitFit out;
    out.output_a = expression.evaluate(fit_a.columns);
    out.output_b = expression.evaluate(fit_b.columns);
    out.criteria = score_fits(out.output_a, out.output_b, set.labels());
    out.pool_a = std::move(fit_a.pool);
    out.pool_b = std::move(fit_b.pool);
    return out;
}

StopDecision should_stop(std::span<const LayerTrace> history, Mode mode, std::size_t delta, std::size_t max_layers)
{
    if (history.empty()) {
        throw std::invalid_argument("should_stop needs at least one completed layer");
    }
    const auto& cur = history.back();
    const auto previous_layer = cur.r == 0 ? 0 : cur.r - 1;

    if (mode == Mode::statement1) {
        if (cur.admitted == 0) {
            return {true, StopCause::no_admissions, previous_layer};
        }
        if (cur.min_V && *cur.min_V == 0) {
            return {true, StopCause::cr_zero, cur.r};
        }
    } else {
        if (cur.admitted == 0 || !cur.min_CR) {
            return {true, StopCause::no_admissions, previous_layer};
        }
        if (*cur.min_CR == 0) {
            return {true, StopCause::cr_zero, cur.r};
        }
        if (history.size() >= 2) {
            const auto& prev = history[history.size() - 2];
            if (prev.min_CR && *prev.min_CR <= *cur.min_CR + delta) {
                return {true, StopCause::delta_rule, prev.r};
            }
        }
    }
    if (cur.r >= max_layers) {
        return {true, StopCause::layer_cap, cur.r};
    }
    return {};
}

SynthesisResult grow(const LearningSet& set, FeaturePool pool, const SynthesisConfig& config)
{
    const auto& features = pool.features;
    if (features.empty()) {
        throw SynthesisError("no features");
    }
    for (const auto& f : features) {
        if (f.column.size() != set.n()) {
            throw SynthesisError("pool feature columns do not match the learning set");
        }
    }
    const auto labels = set.labels();
    const bool split_mode = config.mode == Mode::split;

    SynthesisResult result;
    auto& report = result.report;

    // Refits of every pool feature on A and on B; they do not depend on the candidate.
    SubsetFit fit_a;
    SubsetFit fit_b;
    const auto criteria_of = [&](const Expression& e) {
        return score_fits(e.evaluate(fit_a.columns), e.evaluate(fit_b.columns), labels);
    };

    std::vector<std::vector<Neuron>> members(1);
    for (std::size_t i = 0; i < features.size(); ++i) {
        members[0].push_back(pool_neuron(features[i], i));
    }
    report.pool_min_V = std::min_element(features.begin(), features.end(), [](const auto& a, const auto& b) {
                            return a.errors < b.errors;
                        })->errors;

    if (split_mode) {
        report.split = split_even(set, config.seed);
        fit_a = fit_on_subset(set, features, report.split->subset_a, {});
        fit_b = fit_on_subset(set, features, report.split->subset_b, {});
        std::size_t best = SIZE_MAX;
        for (auto& n : members[0]) {
            n.criteria = criteria_of(n.expression);
            best = std::min(best, n.criteria->combined);
        }
        report.pool_min_CR = best;
    }

    const bool perfect_pool = split_mode ? *report.pool_min_CR == 0 : report.pool_min_V == 0;
    if (perfect_pool) {
        report.stop_cause = StopCause::cr_zero;
        report.final_layer = 0;
    } else if (config.max_layers == 0) {
        report.stop_cause = StopCause::layer_cap;
        report.final_layer = 0;
    } else {
        std::vector<Neuron> survivors;
        std::size_t prev_min_v = report.pool_min_V;
        for (std::size_t r = 1;; ++r) {
            auto batch = generate_candidates(features, survivors, r, labels);

            LayerTrace trace;
            trace.r = r;
            trace.pairs = batch.pairs;
            trace.candidates_generated = batch.candidates.size();
            trace.f_cap = config.f_cap.value_or(default_f_cap(batch.pairs, config.f_ratio));
            for (const auto& c : batch.candidates) {
                trace.best_candidate_V = std::min(trace.best_candidate_V.value_or(SIZE_MAX), c.errors);
            }

            std::vector<Neuron> admitted;
            for (std::size_t i = 0; i < batch.candidates.size(); ++i) {
                auto& c = batch.candidates[i];
                if (split_mode) {
                    c.criteria = criteria_of(c.expression);
                    admitted.push_back(std::move(c));
                } else if (admit(c.errors, batch.parent_errors[i], batch.leaf_errors[i]) && c.errors < prev_min_v) {
                    admitted.push_back(std::move(c));
                }
            }
            trace.admitted = admitted.size();
            if (!admitted.empty()) {
                trace.survivors = select_survivors(admitted, trace.f_cap, config.mode);
                for (const auto& s : trace.survivors) {
                    trace.min_V = std::min(trace.min_V.value_or(SIZE_MAX), s.errors);
                    if (split_mode) {
                        trace.min_CR = std::min(trace.min_CR.value_or(SIZE_MAX), s.criteria->combined);
                    }
                }
            }
            members.push_back(std::move(admitted));
            report.layers.push_back(std::move(trace));

            const auto decision = should_stop(report.layers, config.mode, config.delta, config.max_layers);
            if (decision.stop) {
                report.layers.back().stop_cause = decision.cause;
                report.stop_cause = decision.cause;
                report.final_layer = decision.keep_layer;
                break;
            }
            survivors = report.layers.back().survivors;
            prev_min_v = *report.layers.back().min_V;
        }
    }

    // Collective: every member of the kept layer sharing the best score.
    auto ranked = select_survivors(std::move(members[report.final_layer]), SIZE_MAX, config.mode);
    auto& collective = result.collective;
    const auto& lead = ranked.front();
    for (auto& n : ranked) {
        const bool same_cr = !split_mode || n.criteria->combined == lead.criteria->combined;
        if (same_cr && n.errors == lead.errors) {
            collective.neurons.push_back(std::move(n));
        }
    }
    collective.pool = features;
    collective.chi0 = config.chi0;
    collective.label_names = set.label_names();
    collective.variable_names = set.variable_names();
    collective.label_column = set.label_column();
    collective.validate();

    report.final_V = collective.neurons.front().errors;
    std::vector<BoolColumn> columns;
    for (const auto& f : features) {
        columns.push_back(f.column);
    }
    report.contradiction_bound = contradiction_bound(columns, labels);

    const auto metrics = evaluate(collective, set);
    report.doubtful = metrics.misclassified;
    report.doubtful.insert(report.doubtful.end(), metrics.refused.begin(), metrics.refused.end());
    std::sort(report.doubtful.begin(), report.doubtful.end());

    if (report.stop_cause == StopCause::no_admissions && report.final_V > 0) {
        std::string rows;
        for (const auto t : report.doubtful) {
            rows += (rows.empty() ? "" : ",") + std::to_string(t + 1);
        }
        report.warnings.push_back("no admissible candidates with V = " + std::to_string(report.final_V) +
                                  ": add new input variables or exclude doubtful instances (data rows " + rows + ")");
    }
    if (metrics.low_coherence) {
        report.warnings.push_back("mean coherence on the learning set is below chi0");
    }
    result.report.pool = std::move(pool);
    return result;
}

SynthesisResult synthesize(const LearningSet& set, const SynthesisConfig& config)
{
    auto base = quantize_all(set);

    ProductSearchResult products;
    if (config.max_p != 1) {
        products = search_products(set, base, {config.max_p, config.prune_products});
    } else {
        products.eligible = quantitative_variables(set);
    }
    auto pool = substitute(base, products.admitted);

    auto result = grow(set, pool, config);
    auto& report = result.report;
    for (const auto& f : base) {
        if (f.constant) {
            report.warnings.push_back("variable '" + set.variable_names()[f.source.front()] +
                                      "' is constant on the learning set");
        }
    }
    for (const auto i : pool.overlapping_factors) {
        report.warnings.push_back("variable '" + set.variable_names()[i] + "' appears in more than one product feature");
    }
    report.base = std::move(base);
    report.products = std::move(products);
    return result;
}

} // namespace lognet
