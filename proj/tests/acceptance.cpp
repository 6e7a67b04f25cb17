// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lognet/collective.hpp"
#include "lognet/dataset.hpp"
#include "lognet/errors.hpp"
#include "lognet/features.hpp"
#include "lognet/model_io.hpp"
#include "lognet/network.hpp"
#include "lognet/quantization.hpp"
#include "lognet/synthesis.hpp"
#include "oracles.hpp"

using namespace lognet;

namespace {

// Collects the first few failure descriptions of a criterion.
struct Check {
    std::size_t failures = 0;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            ++failures;
            if (notes.size() < 4) {
                notes.push_back(what);
            }
        }
    }

    std::string summary(const std::string& on_success) const
    {
        if (failures == 0) {
            return on_success;
        }
        std::string s = std::to_string(failures) + " failed check(s):";
        for (const auto& n : notes) {
            s += " [" + n + "]";
        }
        return s;
    }
};

struct Outcome {
    bool pass;
    std::string detail;
};

std::string str(std::size_t v)
{
    return std::to_string(v);
}

std::vector<std::uint8_t> to_bits(const LearningSet& set)
{
    return {set.labels().begin(), set.labels().end()};
}

// Demo data: single variables cannot separate it, the product can.
Outcome demo_reproduction()
{
    Check check;
    const auto set = load_dataset(std::filesystem::path(LOGNET_TEST_DATA) / "demo.csv", "sex");
    const auto labels = to_bits(set);
    check.expect(set.n() == 14 && set.count(0) == 7 && set.count(1) == 7, "14 instances, 7 per class");
    for (std::size_t i = 0; i < 2; ++i) {
        check.expect(oracle::min_threshold_errors(set.column(i), labels) >= 1,
                     "exhaustive scan: variable " + str(i) + " alone is not separable");
    }
    std::vector<double> product(set.n());
    for (std::size_t t = 0; t < set.n(); ++t) {
        product[t] = set.value(t, 0) * set.value(t, 1);
    }
    check.expect(oracle::min_threshold_errors(product, labels) == 0, "exhaustive scan: product is separable");

    const auto result = synthesize(set);
    const auto& report = result.report;
    for (const auto& f : report.base) {
        check.expect(f.errors >= 1, "single-variable V >= 1, got " + str(f.errors));
    }
    const auto& admitted = report.products.admitted;
    check.expect(admitted.size() == 1 && admitted[0].feature.source == Source{0, 1} && admitted[0].feature.errors == 0,
                 "product {x1,x2} admitted with V = 0");
    const auto metrics = evaluate(result.collective, set);
    check.expect(result.collective.neurons.size() == 1, "N = 1, got " + str(result.collective.neurons.size()));
    check.expect(report.final_V == 0 && metrics.errors == 0 && metrics.refusals == 0,
                 "V_total = 0, got " + str(metrics.errors));
    return {check.failures == 0, check.summary("V(x1)=" + str(report.base[0].errors) + " V(x2)=" +
                                               str(report.base[1].errors) + ", product V=0, N=1, V_total=0")};
}

// Statement-1 growth on random data: strictly falling minimum, natural stop.
Outcome strict_descent()
{
    Check check;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> m_dist(2, 6);
    std::uniform_int_distribution<std::size_t> n_dist(8, 64);
    std::size_t deepest = 0;
    std::map<std::string, std::size_t> causes;
    for (int run = 0; run < 50; ++run) {
        const auto set = oracle::random_set(rng, m_dist(rng), n_dist(rng));
        const auto result = synthesize(set);
        const auto& report = result.report;
        const std::string tag = "run " + std::to_string(run);
        std::size_t previous = report.pool_min_V;
        for (const auto& layer : report.layers) {
            if (layer.min_V) {
                check.expect(*layer.min_V < previous, tag + ": layer " + str(layer.r) + " V " + str(*layer.min_V) +
                                                          " not below " + str(previous));
                previous = *layer.min_V;
            }
        }
        const auto cause = report.stop_cause;
        ++causes[std::string(to_string(cause))];
        check.expect(cause == StopCause::cr_zero || cause == StopCause::no_admissions,
                     tag + ": stop cause " + std::string(to_string(cause)));
        check.expect(report.layers.size() <= 1 + report.pool_min_V,
                     tag + ": " + str(report.layers.size()) + " layers > 1 + " + str(report.pool_min_V));
        deepest = std::max(deepest, report.layers.size());
    }
    std::string mix;
    for (const auto& [cause, count] : causes) {
        mix += (mix.empty() ? "" : ", ") + cause + " x" + str(count);
    }
    return {check.failures == 0, check.summary("50 runs, " + mix + ", deepest " + str(deepest) + " layers")};
}

// Rows sharing every raw value but not the label force errors on any model.
std::size_t raw_contradictions(const LearningSet& set)
{
    std::map<std::vector<double>, std::array<std::size_t, 2>> groups;
    for (std::size_t t = 0; t < set.n(); ++t) {
        const auto row = set.row(t);
        ++groups[std::vector<double>(row.begin(), row.end())][set.labels()[t]];
    }
    std::size_t floor = 0;
    for (const auto& [row, counts] : groups) {
        floor += std::min(counts[0], counts[1]);
    }
    return floor;
}

Outcome oracle_floor()
{
    Check check;
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> pick(0, reference_set.size() - 1);
    std::uniform_int_distribution<std::size_t> m_dist(2, 4);
    std::uniform_int_distribution<std::size_t> flip_dist(0, 3);
    std::size_t positive = 0;
    for (int run = 0; run < 20; ++run) {
        const auto op = reference_set[pick(rng)];
        const auto kase = oracle::contradictory_boolean_set(rng, truth_table(op), m_dist(rng), flip_dist(rng));
        const auto result = synthesize(kase.set);
        const auto& report = result.report;
        const std::string tag = "run " + std::to_string(run) + " " + std::string(to_string(op));
        const auto floor = raw_contradictions(kase.set);
        check.expect(floor == kase.flips, tag + ": generator floor " + str(floor) + " != flips " + str(kase.flips));
        check.expect(report.contradiction_bound == floor,
                     tag + ": bound " + str(report.contradiction_bound) + " != raw floor " + str(floor));
        check.expect(report.final_V == report.contradiction_bound,
                     tag + ": final V " + str(report.final_V) + " != bound " + str(report.contradiction_bound));
        if (report.contradiction_bound > 0) {
            ++positive;
            check.expect(report.stop_cause == StopCause::no_admissions,
                         tag + ": stop cause " + std::string(to_string(report.stop_cause)));
        }
    }
    return {check.failures == 0, check.summary("20 runs, " + str(positive) + " with a positive floor")};
}

Outcome xor_reachability()
{
    Check check;
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> copies(1, 5);
    std::uniform_real_distribution<double> level(-50.0, 50.0);
    for (int run = 0; run < 40; ++run) {
        // Random two-level encoding per feature; either level may be the larger.
        const std::array<std::array<double, 2>, 2> enc{{{level(rng), level(rng)}, {level(rng), level(rng)}}};
        if (enc[0][0] == enc[0][1] || enc[1][0] == enc[1][1]) {
            continue;
        }
        std::vector<std::vector<double>> rows;
        std::vector<std::uint8_t> labels;
        for (int combo = 0; combo < 4; ++combo) {
            const int a = combo >> 1;
            const int b = combo & 1;
            for (int c = copies(rng); c > 0; --c) {
                rows.push_back({enc[0][a], enc[1][b]});
                labels.push_back(static_cast<std::uint8_t>(a ^ b));
            }
        }
        const auto set = oracle::make_set(rows, labels);
        const auto result = synthesize(set);
        const auto& report = result.report;
        const std::string tag = "run " + std::to_string(run);

        // Brute force over the connectives on the quantized pool.
        const auto& pool = report.pool.features;
        check.expect(pool.size() == 2, tag + ": pool size " + str(pool.size()));
        if (pool.size() != 2) {
            continue;
        }
        std::size_t best = set.n();
        for (const auto op : reference_set) {
            std::size_t e = 0;
            for (std::size_t t = 0; t < set.n(); ++t) {
                e += oracle::gate(truth_table(op), pool[0].column[t], pool[1].column[t]) != (labels[t] != 0);
            }
            best = std::min(best, e);
        }
        check.expect(best == 0, tag + ": brute force finds no exact connective");
        check.expect(report.final_layer == 1 && report.final_V == 0,
                     tag + ": layer " + str(report.final_layer) + " V " + str(report.final_V));
        check.expect(evaluate(result.collective, set).errors == 0, tag + ": collective misclassifies");
    }
    return {check.failures == 0, check.summary("40 encodings reach V=0 at layer 1")};
}

Outcome combinatorics()
{
    Check check;
    std::mt19937_64 rng(99);
    for (std::size_t m = 3; m <= 8; ++m) {
        const auto set = oracle::random_set(rng, m, 40);
        const auto pool = quantize_all(set);
        const auto batch = generate_candidates(pool, {}, 1, set.labels());
        check.expect(batch.pairs == m * (m - 1) / 2, "m=" + str(m) + ": pairs " + str(batch.pairs));
        SynthesisConfig config;
        config.max_p = 1;
        const auto result = synthesize(set, config);
        if (!result.report.layers.empty()) {
            check.expect(result.report.layers[0].pairs == m * (m - 1) / 2,
                         "m=" + str(m) + ": traced pairs " + str(result.report.layers[0].pairs));
        }
    }
    check.expect(default_f_cap(10) == 4, "F_cap(10) = " + str(default_f_cap(10)));
    for (std::size_t pairs = 1; pairs <= 60; ++pairs) {
        const std::size_t ceil = (2 * pairs + 4) / 5;
        check.expect(default_f_cap(pairs) == std::max<std::size_t>(1, ceil), "F_cap(" + str(pairs) + ")");
    }
    std::string calls;
    for (std::size_t m = 2; m <= 4; ++m) {
        const auto set = oracle::random_set(rng, m, 30);
        const auto base = quantize_all(set);
        check.expect(quantitative_variables(set).size() == m, "m=" + str(m) + ": all variables quantitative");
        const auto found = search_products(set, base, {m, false});
        const std::size_t expected = (std::size_t{1} << m) - 1 - m;
        check.expect(found.quantize_calls == expected,
                     "m=" + str(m) + ": quantize calls " + str(found.quantize_calls) + " != " + str(expected));
        calls += (calls.empty() ? "" : ",") + str(found.quantize_calls);
    }
    return {check.failures == 0, check.summary("pairs m(m-1)/2 for m=3..8, F_cap(10)=4, quantize calls " + calls)};
}

Outcome coherence_semantics()
{
    Check check;
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<std::size_t> k_dist(1, 3);
    std::uniform_int_distribution<std::size_t> n_dist(1, 5);
    std::uniform_int_distribution<std::size_t> op_dist(0, reference_set.size() - 1);
    std::size_t tables = 0;
    for (int run = 0; run < 200; ++run) {
        const auto k = k_dist(rng);
        const auto n = n_dist(rng);
        Collective c;
        c.variable_names.resize(k);
        c.pool.resize(k);
        for (std::size_t f = 0; f < k; ++f) {
            c.pool[f].source = {f};
        }
        // Each neuron is a leaf or one connective over two leaves, kept as (mask, a, b) for manual voting.
        struct Manual {
            int mask;
            std::size_t a;
            std::size_t b;
        };
        std::vector<Manual> manual;
        std::uniform_int_distribution<std::size_t> leaf(0, k - 1);
        for (std::size_t i = 0; i < n; ++i) {
            Neuron neuron;
            const auto a = leaf(rng);
            const auto b = leaf(rng);
            if (k == 1 || a == b) {
                neuron.expression = Expression::leaf(a);
                manual.push_back({-1, a, a});
            } else {
                const auto op = reference_set[op_dist(rng)];
                neuron.expression = Expression::combine(op, Expression::leaf(a), Expression::leaf(b));
                manual.push_back({truth_table(op), a, b});
            }
            c.neurons.push_back(neuron);
        }
        const auto table = coherence_table(c);
        ++tables;
        check.expect(table.rows.size() == (std::size_t{1} << k), "table size");
        std::size_t refused = 0;
        for (const auto& row : table.rows) {
            std::size_t ones = 0;
            for (const auto& v : manual) {
                const bool a = (row.combination >> v.a) & 1U;
                const bool b = (row.combination >> v.b) & 1U;
                ones += v.mask < 0 ? a : oracle::gate(static_cast<std::uint8_t>(v.mask), a, b);
            }
            const auto majority = std::max(ones, n - ones);
            const Rational chi{static_cast<std::int64_t>(majority), static_cast<std::int64_t>(n)};
            check.expect(row.verdict.chi == chi, "chi mismatch");
            const bool decide = 2 * ones != n && !(chi < c.chi0);
            check.expect(row.verdict.refused() == !decide, "refusal mismatch");
            if (decide && row.verdict.decision) {
                check.expect(*row.verdict.decision == (2 * ones > n ? 1 : 0), "decision mismatch");
            }
            refused += !decide;
        }
        check.expect(table.refused_fraction == Rational(static_cast<std::int64_t>(refused),
                                                        static_cast<std::int64_t>(table.rows.size())),
                     "refused fraction");

        // Monotone: raising chi0 never turns a refusal into a decision.
        std::size_t last = 0;
        for (std::int64_t pct = 50; pct <= 100; ++pct) {
            c.chi0 = Rational{pct, 100};
            std::size_t count = 0;
            for (const auto& row : coherence_table(c).rows) {
                count += row.verdict.refused();
            }
            check.expect(count >= last, "refusals fell when chi0 rose to " + std::to_string(pct) + "/100");
            last = count;
        }
    }

    // Four of five votes give chi = 4/5 exactly.
    Collective five;
    five.variable_names = {"a", "b"};
    five.pool.resize(2);
    five.pool[0].source = {0};
    five.pool[1].source = {1};
    for (int i = 0; i < 4; ++i) {
        five.neurons.push_back({Expression::leaf(0)});
    }
    five.neurons.push_back({Expression::leaf(1)});
    const std::vector<std::uint8_t> bits{1, 0};
    five.chi0 = Rational{4, 5};
    const auto accepted = classify_bits(five, bits);
    check.expect(accepted.chi == Rational(4, 5) && accepted.decision == std::optional<std::uint8_t>{1},
                 "4/5 accepted at 0.8");
    five.chi0 = Rational::from_decimal("0.81");
    check.expect(classify_bits(five, bits).refused(), "4/5 refused at 0.81");
    return {check.failures == 0, check.summary(str(tables) + " tables match manual counts; 4/5 accepted at 0.8, refused at 0.81")};
}

Outcome round_trip()
{
    Check check;
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<std::size_t> m_dist(2, 12);
    std::size_t widest = 0;
    std::size_t rules = 0;
    std::size_t out_of_scope = 0;
    for (int run = 0, models = 0; models < 20 && run < 200; ++run) {
        const auto m = m_dist(rng);
        const auto set = oracle::random_set(rng, m, 48);
        SynthesisConfig config;
        config.max_p = run % 2 == 0 ? 1 : 0;
        const auto result = synthesize(set, config);
        // Overlapping products can push the pool past the k <= 12 scope.
        if (result.collective.pool.size() > 12) {
            ++out_of_scope;
            continue;
        }
        ++models;
        ModelFile model;
        model.collective = result.collective;
        model.config = config_to_json(config);
        model.report = report_to_json(result.report, result.collective);
        const auto path = std::filesystem::temp_directory_path() / ("lognet_acceptance_" + std::to_string(run) + ".json");
        save_model(path, model);
        const auto loaded = load_model(path);
        std::filesystem::remove(path);
        const std::string tag = "run " + std::to_string(run);

        const auto& a = model.collective;
        const auto& b = loaded.collective;
        widest = std::max(widest, a.pool.size());
        check.expect(a.pool.size() <= 12, tag + ": pool size " + str(a.pool.size()));
        const auto ta = coherence_table(a);
        const auto tb = coherence_table(b);
        check.expect(ta.rows.size() == tb.rows.size(), tag + ": table size");
        for (std::size_t r = 0; r < std::min(ta.rows.size(), tb.rows.size()); ++r) {
            check.expect(ta.rows[r].verdict.decision == tb.rows[r].verdict.decision &&
                             ta.rows[r].verdict.chi == tb.rows[r].verdict.chi,
                         tag + ": verdict differs at combination " + str(r));
        }
        for (std::size_t t = 0; t < set.n(); ++t) {
            const auto va = classify(a, set.row(t));
            const auto vb = classify(b, set.row(t));
            check.expect(va.decision == vb.decision && va.chi == vb.chi, tag + ": row verdict differs");
        }
        check.expect(a.neurons.size() == b.neurons.size(), tag + ": neuron count");
        for (std::size_t i = 0; i < std::min(a.neurons.size(), b.neurons.size()); ++i) {
            // Rules come from the loaded model; training columns only exist in memory.
            const auto rule = parse_rule(render_rule(b, b.neurons[i]), b.variable_names);
            ++rules;
            for (std::size_t t = 0; t < set.n(); ++t) {
                check.expect(rule.condition(set.row(t)) == (a.neurons[i].column[t] != 0),
                             tag + ": rule disagrees with column");
            }
        }
    }
    return {check.failures == 0,
            check.summary("20 models, pools up to k=" + str(widest) + ", " + str(rules) + " rules re-evaluated, " +
                          str(out_of_scope) + " pools above k=12 skipped")};
}

Outcome split_mode()
{
    Check check;
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> level(0, 5);
    std::uniform_int_distribution<std::size_t> op_dist(0, reference_set.size() - 1);
    std::size_t checked = 0;
    for (int run = 0; run < 60 && checked < 30; ++run) {
        std::vector<std::vector<double>> rows(8, std::vector<double>(2));
        std::vector<std::uint8_t> labels(8);
        for (std::size_t t = 0; t < 8; ++t) {
            rows[t] = {static_cast<double>(level(rng)), static_cast<double>(level(rng))};
            labels[t] = t % 2;
        }
        std::shuffle(labels.begin(), labels.end(), rng);
        const auto set = oracle::make_set(rows, labels);
        const auto split = split_even(set, static_cast<std::uint64_t>(run));
        const auto pool = quantize_all(set);
        const auto op = reference_set[op_dist(rng)];
        const auto expr = Expression::combine(op, Expression::leaf(0), Expression::leaf(1));
        SplitFit fit;
        try {
            fit = split_criteria(expr, split, set, pool);
        } catch (const SynthesisError&) {
            continue; // a half with constant leaf values cannot be refitted
        }
        ++checked;
        const std::string tag = "run " + std::to_string(run);

        // Each refitted leaf must be an optimal threshold on its own half.
        for (const auto& [half, fitted] : {std::pair{&split.subset_a, &fit.pool_a}, std::pair{&split.subset_b, &fit.pool_b}}) {
            for (std::size_t f = 0; f < 2; ++f) {
                std::vector<double> vals;
                std::vector<std::uint8_t> labs;
                for (const auto t : *half) {
                    vals.push_back(rows[t][f]);
                    labs.push_back(labels[t]);
                }
                const auto& q = (*fitted)[f];
                check.expect(oracle::threshold_errors(vals, labs, q.threshold, q.polarity == Polarity::at_least) ==
                                 oracle::min_threshold_errors(vals, labs),
                             tag + ": leaf " + str(f) + " refit is not optimal on its half");
            }
        }
        // Recompute both outputs on the whole set from the fitted thresholds.
        std::vector<std::uint8_t> out_a(8);
        std::vector<std::uint8_t> out_b(8);
        for (std::size_t t = 0; t < 8; ++t) {
            const auto bit = [&](const std::vector<QuantizedFeature>& p, std::size_t f) {
                const auto v = rows[t][f];
                return p[f].polarity == Polarity::at_least ? v >= p[f].threshold : v < p[f].threshold;
            };
            out_a[t] = oracle::gate(truth_table(op), bit(fit.pool_a, 0), bit(fit.pool_a, 1));
            out_b[t] = oracle::gate(truth_table(op), bit(fit.pool_b, 0), bit(fit.pool_b, 1));
        }
        const auto b_u = oracle::count_diff(out_a, out_b);
        const auto delta = oracle::count_diff(out_a, labels) + oracle::count_diff(out_b, labels);
        check.expect(fit.criteria.unbiasedness == b_u, tag + ": b_u " + str(fit.criteria.unbiasedness) + " != " + str(b_u));
        check.expect(fit.criteria.regularity == delta, tag + ": delta " + str(fit.criteria.regularity) + " != " + str(delta));
        check.expect(fit.criteria.combined == b_u + delta, tag + ": CR");
    }
    check.expect(checked >= 20, "only " + str(checked) + " usable n=8 sets");

    // Delta rule on the CR sequence 5, 3, 3.
    const auto trace = [](std::size_t r, std::size_t cr) {
        LayerTrace t;
        t.r = r;
        t.admitted = 1;
        t.min_CR = cr;
        t.min_V = cr;
        return t;
    };
    std::vector<LayerTrace> history{trace(1, 5)};
    check.expect(!should_stop(history, Mode::split, 0, 10).stop, "no stop after layer 1");
    history.push_back(trace(2, 3));
    check.expect(!should_stop(history, Mode::split, 0, 10).stop, "no stop after layer 2");
    history.push_back(trace(3, 3));
    const auto decision = should_stop(history, Mode::split, 0, 10);
    check.expect(decision.stop && decision.cause == StopCause::delta_rule && decision.keep_layer == 2,
                 "5,3,3 stops after layer 3 keeping layer 2");
    return {check.failures == 0,
            check.summary(str(checked) + " n=8 sets match Hamming recomputation; CR 5,3,3 keeps layer 2")};
}

struct Criterion {
    int id;
    std::string name;
    double budget_seconds; // 0 means no limit
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "demo reproduction", 1.0, demo_reproduction},
        {2, "strict-descent termination", 10.0, strict_descent},
        {3, "oracle floor", 5.0, oracle_floor},
        {4, "XOR reachability", 0, xor_reachability},
        {5, "combinatorics", 0, combinatorics},
        {6, "coherence semantics", 0, coherence_semantics},
        {7, "round-trip and rule fidelity", 0, round_trip},
        {8, "split-criteria mode", 0, split_mode},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream timing;
        timing.precision(3);
        timing << std::fixed << seconds << " s";
        if (c.budget_seconds > 0) {
            timing << " of " << c.budget_seconds << " s";
            if (seconds >= c.budget_seconds) {
                outcome.pass = false;
                outcome.detail += "; over time budget";
            }
        }
        failed += !outcome.pass;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): "
                  << outcome.detail << " [" << timing.str() << "]\n";
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
