#include "lognet/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lognet/errors.hpp"

namespace lognet {

using nlohmann::json;

namespace {

json criteria_to_json(const SplitCriteria& c)
{
    return {{"b_u", c.unbiasedness}, {"delta", c.regularity}, {"cr", c.combined}};
}

template <typename T>
json optional_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::vector<std::string> names_of(const std::vector<std::size_t>& idx, const std::vector<std::string>& names)
{
    std::vector<std::string> out;
    for (const auto i : idx) {
        out.push_back(names.at(i));
    }
    return out;
}

} // namespace

json config_to_json(const SynthesisConfig& config)
{
    return {
        {"mode", std::string(to_string(config.mode))},
        {"delta", config.delta},
        {"f_ratio", config.f_ratio.decimal()},
        {"f_cap", optional_json(config.f_cap)},
        {"max_layers", config.max_layers},
        {"max_p", config.max_p},
        {"prune_products", config.prune_products},
        {"chi0", config.chi0.decimal()},
        {"seed", config.seed},
    };
}

json report_to_json(const SynthesisReport& report, const Collective& collective)
{
    const auto& names = collective.variable_names;
    json pool = json::array();
    for (const auto& f : report.pool.features) {
        pool.push_back({{"feature", f.describe(names)},
                        {"threshold", format_double(f.threshold)},
                        {"polarity", to_string(f.polarity)},
                        {"V", f.errors}});
    }
    json admitted = json::array();
    for (const auto& g : report.products.admitted) {
        json factors = json::object();
        for (const auto& [i, v] : g.factor_errors) {
            factors[names.at(i)] = v;
        }
        admitted.push_back({{"feature", g.feature.describe(names)}, {"p", g.p()}, {"V", g.feature.errors}, {"factor_V", factors}});
    }
    json layers = json::array();
    for (const auto& t : report.layers) {
        layers.push_back({
            {"r", t.r},
            {"pairs", t.pairs},
            {"candidates", t.candidates_generated},
            {"admitted", t.admitted},
            {"min_V", optional_json(t.min_V)},
            {"best_candidate_V", optional_json(t.best_candidate_V)},
            {"min_CR", optional_json(t.min_CR)},
            {"f_cap", t.f_cap},
            {"survivors", t.survivors.size()},
            {"stop_cause", std::string(to_string(t.stop_cause))},
        });
    }
    json doubtful = json::array();
    for (const auto t : report.doubtful) {
        doubtful.push_back(t + 1);
    }
    json out = {
        {"stop_cause", std::string(to_string(report.stop_cause))},
        {"final_layer", report.final_layer},
        {"final_V", report.final_V},
        {"N", collective.neurons.size()},
        {"contradiction_bound", report.contradiction_bound},
        {"pool_min_V", report.pool_min_V},
        {"pool_min_CR", optional_json(report.pool_min_CR)},
        {"pool", pool},
        {"products",
         {{"eligible", names_of(report.products.eligible, names)},
          {"examined", report.products.examined},
          {"quantize_calls", report.products.quantize_calls},
          {"admitted", admitted},
          {"overlapping_factors", names_of(report.pool.overlapping_factors, names)}}},
        {"layers", layers},
        {"doubtful_rows", doubtful},
        {"warnings", report.warnings},
    };
    if (report.split) {
        json a = json::array();
        json b = json::array();
        for (const auto t : report.split->subset_a) {
            a.push_back(t + 1);
        }
        for (const auto t : report.split->subset_b) {
            b.push_back(t + 1);
        }
        out["split"] = {{"A", a}, {"B", b}};
    }
    return out;
}

json expression_to_json(const Expression& e)
{
    if (e.is_leaf()) {
        return e.leaf_index();
    }
    return json::array({std::string(to_string(e.op())), expression_to_json(e.lhs()), expression_to_json(e.rhs())});
}

Expression expression_from_json(const json& j)
{
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return Expression::leaf(j.get<std::size_t>());
    }
    if (!j.is_array() || j.size() != 3 || !j[0].is_string()) {
        throw ModelError("malformed expression: " + j.dump());
    }
    try {
        return Expression::combine(connective_from_string(j[0].get<std::string>()), expression_from_json(j[1]),
                                   expression_from_json(j[2]));
    } catch (const std::invalid_argument& e) {
        throw ModelError(e.what());
    }
}

std::string serialize_model(const ModelFile& model)
{
    const auto& c = model.collective;
    json pool = json::array();
    for (const auto& f : c.pool) {
        pool.push_back({{"source", f.source},
                        {"threshold", format_double(f.threshold)},
                        {"polarity", to_string(f.polarity)},
                        {"errors", f.errors},
                        {"constant", f.constant}});
    }
    json neurons = json::array();
    for (std::size_t i = 0; i < c.neurons.size(); ++i) {
        const auto& n = c.neurons[i];
        json j = {{"expression", expression_to_json(n.expression)},
                  {"layer", n.layer},
                  {"errors", n.errors},
                  {"weight", c.weight(i)}};
        if (n.criteria) {
            j["criteria"] = criteria_to_json(*n.criteria);
        }
        neurons.push_back(std::move(j));
    }
    const json doc = {
        {"format_version", model_format_version},
        {"variables", c.variable_names},
        {"label_column", c.label_column},
        {"label_map", c.label_names},
        {"chi0", c.chi0.decimal()},
        {"pool", pool},
        {"neurons", neurons},
        {"config", model.config},
        {"report", model.report},
    };
    return doc.dump(2) + "\n";
}

ModelFile parse_model(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError(std::string("model is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("format_version")) {
        throw ModelError("model has no format_version");
    }
    if (doc["format_version"] != model_format_version) {
        throw ModelError("unsupported model format_version " + doc["format_version"].dump() + " (expected " +
                         std::to_string(model_format_version) + ")");
    }
    ModelFile model;
    auto& c = model.collective;
    try {
        c.variable_names = doc.at("variables").get<std::vector<std::string>>();
        c.label_column = doc.at("label_column").get<std::string>();
        c.label_names = doc.at("label_map").get<std::array<std::string, 2>>();
        c.chi0 = Rational::from_decimal(doc.at("chi0").get<std::string>());
        for (const auto& jf : doc.at("pool")) {
            QuantizedFeature f;
            f.source = jf.at("source").get<Source>();
            f.threshold = parse_double(jf.at("threshold").get<std::string>());
            f.polarity = polarity_from_string(jf.at("polarity").get<std::string>());
            f.errors = jf.at("errors").get<std::size_t>();
            f.constant = jf.value("constant", false);
            if (f.source.empty()) {
                throw ModelError("pool feature with empty source");
            }
            c.pool.push_back(std::move(f));
        }
        bool uniform = true;
        for (const auto& jn : doc.at("neurons")) {
            Neuron n;
            n.expression = expression_from_json(jn.at("expression"));
            n.layer = jn.at("layer").get<std::size_t>();
            n.errors = jn.at("errors").get<std::size_t>();
            if (jn.contains("criteria")) {
                const auto& jc = jn["criteria"];
                n.criteria = SplitCriteria{jc.at("b_u").get<std::size_t>(), jc.at("delta").get<std::size_t>(),
                                           jc.at("cr").get<std::size_t>()};
            }
            n.order = c.neurons.size();
            const auto w = jn.value("weight", 1U);
            uniform = uniform && w == 1;
            c.weights.push_back(w);
            c.neurons.push_back(std::move(n));
        }
        if (uniform) {
            c.weights.clear();
        }
        model.config = doc.value("config", json::object());
        model.report = doc.value("report", json::object());
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ModelError(std::string("malformed model: ") + e.what());
    }
    c.validate();
    return model;
}

void save_model(const std::filesystem::path& path, const ModelFile& model)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write model file: " + path.string());
    }
    out << serialize_model(model);
}

ModelFile load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open model file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

// ---------------------------------------------------------------------------
// Rules

std::vector<Term> minimal_dnf(std::span<const std::uint8_t> truth, std::size_t k)
{
    const std::uint32_t rows = 1U << k;
    if (truth.size() != rows) {
        throw std::invalid_argument("truth table size must be 2^k");
    }
    std::vector<std::uint32_t> minterms;
    for (std::uint32_t v = 0; v < rows; ++v) {
        if (truth[v]) {
            minterms.push_back(v);
        }
    }
    if (minterms.empty()) {
        return {};
    }
    if (minterms.size() == rows) {
        return {Term{}};
    }

    // Implicant = (value, dont-care mask); value has zeros under the mask.
    using Cube = std::pair<std::uint32_t, std::uint32_t>;
    std::set<Cube> current;
    for (const auto v : minterms) {
        current.insert({v, 0});
    }
    std::set<Cube> primes;
    while (!current.empty()) {
        std::set<Cube> next;
        std::set<Cube> merged;
        for (auto a = current.begin(); a != current.end(); ++a) {
            for (auto b = std::next(a); b != current.end(); ++b) {
                if (a->second != b->second) {
                    continue;
                }
                const auto diff = a->first ^ b->first;
                if (diff != 0 && (diff & (diff - 1)) == 0) {
                    next.insert({a->first & ~diff, a->second | diff});
                    merged.insert(*a);
                    merged.insert(*b);
                }
            }
        }
        for (const auto& c : current) {
            if (!merged.count(c)) {
                primes.insert(c);
            }
        }
        current = std::move(next);
    }

    const auto covers = [](const Cube& c, std::uint32_t v) { return (v & ~c.second) == c.first; };
    const auto literals = [k](const Cube& c) { return k - static_cast<std::size_t>(__builtin_popcount(c.second)); };

    std::vector<Cube> prime_list(primes.begin(), primes.end());
    std::vector<Cube> chosen;
    std::set<std::uint32_t> uncovered(minterms.begin(), minterms.end());

    // Essential primes first, then greedy by coverage.
    for (const auto v : minterms) {
        const Cube* only = nullptr;
        std::size_t count = 0;
        for (const auto& p : prime_list) {
            if (covers(p, v)) {
                only = &p;
                ++count;
            }
        }
        if (count == 1 && std::find(chosen.begin(), chosen.end(), *only) == chosen.end()) {
            chosen.push_back(*only);
        }
    }
    for (const auto& c : chosen) {
        for (auto it = uncovered.begin(); it != uncovered.end();) {
            it = covers(c, *it) ? uncovered.erase(it) : std::next(it);
        }
    }
    while (!uncovered.empty()) {
        const Cube* best = nullptr;
        std::size_t best_gain = 0;
        for (const auto& p : prime_list) {
            std::size_t gain = 0;
            for (const auto v : uncovered) {
                gain += covers(p, v);
            }
            if (gain > best_gain || (gain == best_gain && gain > 0 && literals(p) < literals(*best))) {
                best = &p;
                best_gain = gain;
            }
        }
        chosen.push_back(*best);
        for (auto it = uncovered.begin(); it != uncovered.end();) {
            it = covers(*best, *it) ? uncovered.erase(it) : std::next(it);
        }
    }
    std::sort(chosen.begin(), chosen.end());

    std::vector<Term> out;
    for (const auto& c : chosen) {
        Term term;
        for (std::size_t j = 0; j < k; ++j) {
            if (!((c.second >> j) & 1U)) {
                term.emplace_back(j, ((c.first >> j) & 1U) != 0);
            }
        }
        out.push_back(std::move(term));
    }
    return out;
}

namespace {

std::string render_literal(const Collective& c, std::size_t pool_index, bool value)
{
    const auto& f = c.pool.at(pool_index);
    const bool at_least = (f.polarity == Polarity::at_least) == value;
    return "(" + f.describe(c.variable_names) + (at_least ? " >= " : " < ") + format_double(f.threshold) + ")";
}

} // namespace

std::string render_rule(const Collective& c, const Neuron& neuron)
{
    const auto leaves = neuron.expression.leaves();
    const std::size_t k = leaves.size();
    std::vector<std::uint8_t> truth(std::size_t{1} << k);
    std::vector<std::uint8_t> bits(c.pool.size(), 0);
    for (std::uint32_t v = 0; v < truth.size(); ++v) {
        for (std::size_t j = 0; j < k; ++j) {
            bits[leaves[j]] = (v >> j) & 1U;
        }
        truth[v] = neuron.expression.evaluate(bits);
    }
    const auto dnf = minimal_dnf(truth, k);

    std::string cond;
    if (dnf.empty()) {
        cond = "FALSE";
    } else if (dnf.size() == 1 && dnf.front().empty()) {
        cond = "TRUE";
    } else {
        for (std::size_t t = 0; t < dnf.size(); ++t) {
            std::string term;
            for (std::size_t l = 0; l < dnf[t].size(); ++l) {
                term += (l ? " AND " : "") + render_literal(c, leaves[dnf[t][l].first], dnf[t][l].second);
            }
            const bool wrap = dnf.size() > 1 && dnf[t].size() > 1;
            cond += (t ? " OR " : "") + (wrap ? "(" + term + ")" : term);
        }
    }
    return "IF " + cond + " THEN class=" + c.label_names[1] + " ELSE class=" + c.label_names[0];
}

std::string render_rules(const Collective& c)
{
    std::ostringstream out;
    out << "# " << c.neurons.size() << (c.neurons.size() == 1 ? " rule" : " rules")
        << ", each casting one vote; V = " << c.neurons.front().errors << " on the learning set\n";
    for (std::size_t i = 0; i < c.neurons.size(); ++i) {
        out << "R" << (i + 1) << ": " << render_rule(c, c.neurons[i]) << "\n";
    }
    out << "decide by majority; refuse if chi < " << c.chi0.decimal() << "\n";
    return out.str();
}

namespace {

using Predicate = std::function<bool(std::span<const double>)>;

class RuleParser {
public:
    RuleParser(std::string_view text, const std::vector<std::string>& names) : text_(text), names_(names) {}

    Predicate parse()
    {
        auto p = disjunction();
        if (pos_ != text_.size()) {
            fail("trailing text");
        }
        return p;
    }

private:
    Predicate disjunction()
    {
        std::vector<Predicate> terms{conjunction()};
        while (accept(" OR ")) {
            terms.push_back(conjunction());
        }
        if (terms.size() == 1) {
            return terms.front();
        }
        return [terms](std::span<const double> x) {
            return std::any_of(terms.begin(), terms.end(), [&](const auto& t) { return t(x); });
        };
    }

    Predicate conjunction()
    {
        std::vector<Predicate> factors{factor()};
        while (accept(" AND ")) {
            factors.push_back(factor());
        }
        if (factors.size() == 1) {
            return factors.front();
        }
        return [factors](std::span<const double> x) {
            return std::all_of(factors.begin(), factors.end(), [&](const auto& f) { return f(x); });
        };
    }

    Predicate factor()
    {
        if (accept("TRUE")) {
            return [](std::span<const double>) { return true; };
        }
        if (accept("FALSE")) {
            return [](std::span<const double>) { return false; };
        }
        if (!accept("(")) {
            fail("expected '('");
        }
        Predicate p;
        if (text_.substr(pos_, 1) == "(") {
            p = disjunction();
        } else {
            p = literal();
        }
        if (!accept(")")) {
            fail("expected ')'");
        }
        return p;
    }

    Predicate literal()
    {
        const auto close = text_.find(')', pos_);
        if (close == std::string_view::npos) {
            fail("unterminated literal");
        }
        const auto body = text_.substr(pos_, close - pos_);
        pos_ = close;
        bool at_least = true;
        auto op = body.find(" >= ");
        std::size_t op_len = 4;
        if (op == std::string_view::npos) {
            op = body.find(" < ");
            op_len = 3;
            at_least = false;
        }
        if (op == std::string_view::npos) {
            fail("literal without comparison");
        }
        Source source;
        const auto lhs = body.substr(0, op);
        std::size_t start = 0;
        while (start <= lhs.size()) {
            const auto star = lhs.find('*', start);
            const auto name = lhs.substr(start, star == std::string_view::npos ? lhs.size() - start : star - start);
            const auto it = std::find(names_.begin(), names_.end(), name);
            if (it == names_.end()) {
                fail("unknown variable '" + std::string(name) + "'");
            }
            source.push_back(static_cast<std::size_t>(it - names_.begin()));
            if (star == std::string_view::npos) {
                break;
            }
            start = star + 1;
        }
        const double u = parse_double(body.substr(op + op_len));
        return [source, u, at_least](std::span<const double> x) {
            const bool above = source_value(x, source) >= u;
            return at_least ? above : !above;
        };
    }

    bool accept(std::string_view token)
    {
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) const
    {
        throw std::invalid_argument("cannot parse rule at offset " + std::to_string(pos_) + ": " + why);
    }

    std::string_view text_;
    const std::vector<std::string>& names_;
    std::size_t pos_ = 0;
};

} // namespace

ParsedRule parse_rule(std::string_view line, const std::vector<std::string>& variable_names)
{
    const auto if_pos = line.find("IF ");
    const auto then_pos = line.find(" THEN class=");
    if (if_pos == std::string_view::npos || then_pos == std::string_view::npos || then_pos < if_pos) {
        throw std::invalid_argument("not an IF-THEN rule: " + std::string(line));
    }
    ParsedRule rule;
    const auto cond = line.substr(if_pos + 3, then_pos - if_pos - 3);
    rule.condition = RuleParser(cond, variable_names).parse();
    auto tail = line.substr(then_pos + 12);
    const auto else_pos = tail.find(" ELSE class=");
    if (else_pos == std::string_view::npos) {
        rule.then_label = std::string(tail);
    } else {
        rule.then_label = std::string(tail.substr(0, else_pos));
        rule.else_label = std::string(tail.substr(else_pos + 12));
    }
    return rule;
}

} // namespace lognet
