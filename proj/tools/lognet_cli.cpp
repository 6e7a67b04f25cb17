// lognet: train, apply and inspect self-organized logical neuron collectives.
//
// Exit codes: 0 ok, 2 data error, 3 synthesis diagnostic, 4 I/O or model file error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lognet/collective.hpp"
#include "lognet/dataset.hpp"
#include "lognet/errors.hpp"
#include "lognet/model_io.hpp"
#include "lognet/rational.hpp"
#include "lognet/synthesis.hpp"

namespace {

using namespace lognet;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_data = 2;
constexpr int exit_synthesis = 3;
constexpr int exit_io = 4;

int exit_code_for(const Error& e)
{
    switch (e.kind()) {
    case ErrorKind::data: return exit_data;
    case ErrorKind::synthesis: return exit_synthesis;
    case ErrorKind::io:
    case ErrorKind::model: return exit_io;
    }
    return exit_io;
}

// Rows of a CSV aligned to the model's variables, plus labels when the
// model's label column is present.
struct Batch {
    CsvTable table;
    std::vector<double> values;
    std::optional<std::vector<std::uint8_t>> labels;
};

Batch read_batch(const std::filesystem::path& path, const Collective& c)
{
    Batch batch;
    batch.table = read_csv(path);
    if (batch.table.rows.empty()) {
        throw DataError(DataIssue::no_rows, "n >= 1 rows required in " + path.string());
    }
    const auto& header = batch.table.header;
    const auto label_it = std::find(header.begin(), header.end(), c.label_column);
    const auto label_pos = label_it == header.end() ? header.size() : static_cast<std::size_t>(label_it - header.begin());
    const std::size_t width = header.size() - (label_it == header.end() ? 0 : 1);
    if (width != c.m()) {
        throw DataError(DataIssue::dimension_mismatch, "width mismatch: model expects " + std::to_string(c.m()) +
                                                           " input columns, " + path.string() + " has " +
                                                           std::to_string(width));
    }
    if (label_it != header.end()) {
        batch.labels.emplace();
    }
    for (std::size_t t = 0; t < batch.table.rows.size(); ++t) {
        const auto& row = batch.table.rows[t];
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j == label_pos) {
                const auto it = std::find(c.label_names.begin(), c.label_names.end(), row[j]);
                if (it == c.label_names.end()) {
                    throw DataError(DataIssue::unknown_label,
                                    "label '" + row[j] + "' in data row " + std::to_string(t + 1) + " is not one of the model's labels");
                }
                batch.labels->push_back(static_cast<std::uint8_t>(it - c.label_names.begin()));
                continue;
            }
            try {
                batch.values.push_back(parse_double(row[j]));
            } catch (const std::invalid_argument&) {
                throw DataError(DataIssue::non_numeric_cell,
                                "non-numeric cell '" + row[j] + "' in column '" + header[j] + "', data row " + std::to_string(t + 1));
            }
        }
    }
    return batch;
}

void apply_chi0_override(Collective& c, const std::string& chi0)
{
    if (chi0.empty()) {
        return;
    }
    Rational value;
    try {
        value = Rational::from_decimal(chi0);
    } catch (const std::invalid_argument& e) {
        throw Error(ErrorKind::data, std::string("--chi0: ") + e.what());
    }
    if (value < Rational{1, 2} || Rational{1, 1} < value) {
        throw Error(ErrorKind::data, "--chi0 must lie in [0.5, 1]");
    }
    c.chi0 = value;
}

struct TrainArgs {
    std::string data;
    std::string label;
    std::string out;
    std::string report;
    std::string mode = "statement1";
    std::size_t delta = 0;
    std::string f_ratio = "0.4";
    std::optional<std::size_t> f_cap;
    std::size_t max_p = 0;
    std::size_t max_layers = 10;
    std::string chi0 = "0.8";
    std::uint64_t seed = 0;
    bool no_prune = false;
};

int run_train(const TrainArgs& args)
{
    SynthesisConfig config;
    try {
        config.mode = mode_from_string(args.mode);
        config.f_ratio = Rational::from_decimal(args.f_ratio);
        config.chi0 = Rational::from_decimal(args.chi0);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    }
    if (config.chi0 < Rational{1, 2} || Rational{1, 1} < config.chi0) {
        std::cerr << "error: --chi0 must lie in [0.5, 1]\n";
        return exit_data;
    }
    config.delta = args.delta;
    config.f_cap = args.f_cap;
    config.max_p = args.max_p;
    config.max_layers = args.max_layers;
    config.seed = args.seed;
    config.prune_products = !args.no_prune;

    const auto set = load_dataset(args.data, args.label);
    const auto result = synthesize(set, config);

    ModelFile model;
    model.collective = result.collective;
    model.config = config_to_json(config);
    model.report = report_to_json(result.report, result.collective);
    save_model(args.out, model);

    const auto report_text = model.report.dump(2);
    if (args.report.empty()) {
        std::cout << report_text << "\n";
    } else {
        std::ofstream out(args.report);
        if (!out) {
            throw Error(ErrorKind::io, "cannot write report file: " + args.report);
        }
        out << report_text << "\n";
    }
    for (const auto& w : result.report.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    if (result.report.stop_cause == StopCause::no_admissions && result.report.final_V > 0) {
        return exit_synthesis;
    }
    return exit_ok;
}

int run_predict(const std::string& model_path, const std::string& data_path, const std::string& chi0)
{
    auto model = load_model(model_path);
    apply_chi0_override(model.collective, chi0);
    const auto& c = model.collective;
    const auto batch = read_batch(data_path, c);

    CsvTable out;
    out.header = batch.table.header;
    out.header.insert(out.header.end(), {"decision", "chi", "chi_decimal"});
    std::size_t refused = 0;
    std::size_t mismatches = 0;
    const std::size_t m = c.m();
    for (std::size_t t = 0; t < batch.table.rows.size(); ++t) {
        const auto verdict = classify(c, std::span<const double>(batch.values).subspan(t * m, m));
        auto row = batch.table.rows[t];
        if (verdict.refused()) {
            ++refused;
            row.push_back("REFUSED");
        } else {
            row.push_back(c.label_names[*verdict.decision]);
            if (batch.labels && (*batch.labels)[t] != *verdict.decision) {
                ++mismatches;
            }
        }
        row.push_back(verdict.chi.str());
        row.push_back(verdict.chi.decimal());
        out.rows.push_back(std::move(row));
    }
    const auto emit = [](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            std::cout << (j ? "," : "") << cells[j];
        }
        std::cout << "\n";
    };
    emit(out.header);
    std::for_each(out.rows.begin(), out.rows.end(), emit);
    std::cerr << "rows=" << out.rows.size() << " decided=" << out.rows.size() - refused << " refused=" << refused;
    if (batch.labels) {
        std::cerr << " mismatches=" << mismatches;
    }
    std::cerr << "\n";
    return exit_ok;
}

int run_eval(const std::string& model_path, const std::string& data_path, const std::string& chi0)
{
    auto model = load_model(model_path);
    apply_chi0_override(model.collective, chi0);
    const auto& c = model.collective;
    const auto batch = read_batch(data_path, c);
    if (!batch.labels) {
        throw DataError(DataIssue::missing_label_column, "label column '" + c.label_column + "' not found in " + data_path);
    }
    const auto metrics = evaluate(c, batch.values, *batch.labels);
    json per_class = json::object();
    for (std::size_t y = 0; y < 2; ++y) {
        per_class[c.label_names[y]] = {{"n", metrics.class_counts[y]}, {"errors", metrics.class_errors[y]}};
    }
    const json out = {
        {"n", metrics.n},
        {"V_total", metrics.errors},
        {"refusals", metrics.refusals},
        {"mean_chi", metrics.mean_chi},
        {"chi0", c.chi0.decimal()},
        {"per_class", per_class},
        {"low_coherence", metrics.low_coherence},
    };
    std::cout << out.dump(2) << "\n";
    if (metrics.low_coherence) {
        std::cerr << "warning: mean chi " << metrics.mean_chi << " is below chi0 " << c.chi0.decimal()
                  << "; consider new input variables or revising the learning set\n";
    }
    return exit_ok;
}

int run_rules(const std::string& model_path)
{
    const auto model = load_model(model_path);
    std::cout << render_rules(model.collective);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Self-organizing logical neuron collectives: train, predict, eval, rules"};
    app.require_subcommand(1);

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Synthesize a collective from a labeled CSV");
    train_cmd->add_option("--data", train.data, "Training CSV")->required();
    train_cmd->add_option("--label", train.label, "Name of the label column")->required();
    train_cmd->add_option("--out", train.out, "Model file to write")->required();
    train_cmd->add_option("--report", train.report, "Write the JSON report here instead of stdout");
    train_cmd->add_option("--mode", train.mode, "statement1 or split")->check(CLI::IsMember({"statement1", "split"}));
    train_cmd->add_option("--delta", train.delta, "Tolerance of the split-mode stopping rule");
    train_cmd->add_option("--f-ratio", train.f_ratio, "Survivors per layer as a fraction of operand pairs");
    train_cmd->add_option("--f-cap", train.f_cap, "Fixed survivor count per layer (overrides --f-ratio)");
    train_cmd->add_option("--max-p", train.max_p, "Largest product size; 1 disables products, 0 picks min(q, 4)");
    train_cmd->add_option("--max-layers", train.max_layers, "Layer cap");
    train_cmd->add_option("--chi0", train.chi0, "Refusal threshold in [0.5, 1]");
    train_cmd->add_option("--seed", train.seed, "Seed for the A/B split");
    train_cmd->add_flag("--no-prune", train.no_prune, "Examine supersets of admitted products too");

    std::string model_path;
    std::string data_path;
    std::string chi0;
    auto* predict_cmd = app.add_subcommand("predict", "Classify rows of a CSV");
    predict_cmd->add_option("--model", model_path, "Model file")->required();
    predict_cmd->add_option("--data", data_path, "Input CSV")->required();
    predict_cmd->add_option("--chi0", chi0, "Override the model's refusal threshold");

    auto* eval_cmd = app.add_subcommand("eval", "Score a model on a labeled CSV");
    eval_cmd->add_option("--model", model_path, "Model file")->required();
    eval_cmd->add_option("--data", data_path, "Labeled CSV")->required();
    eval_cmd->add_option("--chi0", chi0, "Override the model's refusal threshold");

    auto* rules_cmd = app.add_subcommand("rules", "Print the model as IF-THEN rules");
    rules_cmd->add_option("--model", model_path, "Model file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) {
            return run_train(train);
        }
        if (*predict_cmd) {
            return run_predict(model_path, data_path, chi0);
        }
        if (*eval_cmd) {
            return run_eval(model_path, data_path, chi0);
        }
        if (*rules_cmd) {
            return run_rules(model_path);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
    return exit_ok;
}
