#include "lognet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lognet/errors.hpp"
#include "lognet/quantization.hpp"
#include "lognet/rational.hpp"

namespace lognet {

std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming: length mismatch");
    }
    std::size_t d = 0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        d += (a[t] != 0) != (b[t] != 0);
    }
    return d;
}

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

std::string quote_if_needed(const std::string& cell)
{
    if (cell.find_first_of(",\"\n") == std::string::npos) {
        return cell;
    }
    std::string out = "\"";
    for (const char ch : cell) {
        out += ch;
        if (ch == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError(DataIssue::missing_file, "cannot open data file: " + path.string());
    }
    CsvTable table;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DataError(DataIssue::ragged_row,
                            path.string() + ":" + std::to_string(line_no) + ": expected " +
                                std::to_string(table.header.size()) + " cells, found " + std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write file: " + path.string());
    }
    const auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << quote_if_needed(cells[i]);
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) {
        emit(row);
    }
}

LearningSet LearningSet::create(std::vector<std::string> variable_names,
                                std::vector<double> values_row_major,
                                std::vector<std::uint8_t> labels,
                                std::array<std::string, 2> label_names,
                                std::string label_column)
{
    const std::size_t m = variable_names.size();
    if (m == 0) {
        throw DataError(DataIssue::dimension_mismatch, "at least one input variable is required");
    }
    if (labels.size() < 2) {
        throw DataError(DataIssue::too_few_instances, "n >= 2 required, got " + std::to_string(labels.size()));
    }
    if (values_row_major.size() != labels.size() * m) {
        throw DataError(DataIssue::dimension_mismatch, "value count does not equal n * m");
    }
    for (std::size_t k = 0; k < values_row_major.size(); ++k) {
        if (!std::isfinite(values_row_major[k])) {
            throw DataError(DataIssue::non_finite_value,
                            "non-finite value at instance " + std::to_string(k / m) + ", variable '" +
                                variable_names[k % m] + "'");
        }
    }
    std::size_t ones = 0;
    for (auto& y : labels) {
        if (y > 1) {
            throw DataError(DataIssue::unknown_label, "labels must be 0 or 1");
        }
        ones += y;
    }
    if (ones == 0 || ones == labels.size()) {
        throw DataError(DataIssue::single_class, "single-class dataset: both labels must be present");
    }
    LearningSet set;
    set.names_ = std::move(variable_names);
    set.values_ = std::move(values_row_major);
    set.labels_ = std::move(labels);
    set.label_names_ = std::move(label_names);
    set.label_column_ = std::move(label_column);
    return set;
}

std::vector<double> LearningSet::column(std::size_t i) const
{
    std::vector<double> out(n());
    for (std::size_t t = 0; t < n(); ++t) {
        out[t] = value(t, i);
    }
    return out;
}

std::size_t LearningSet::count(std::uint8_t label) const
{
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

LearningSet LearningSet::subset(std::span<const std::size_t> indices) const
{
    LearningSet out;
    out.names_ = names_;
    out.label_names_ = label_names_;
    out.label_column_ = label_column_;
    out.values_.reserve(indices.size() * m());
    out.labels_.reserve(indices.size());
    for (const auto t : indices) {
        const auto r = row(t);
        out.values_.insert(out.values_.end(), r.begin(), r.end());
        out.labels_.push_back(labels_[t]);
    }
    return out;
}

LearningSet load_dataset(const std::filesystem::path& path, const std::string& label_column)
{
    const auto table = read_csv(path);
    const auto it = std::find(table.header.begin(), table.header.end(), label_column);
    if (it == table.header.end()) {
        throw DataError(DataIssue::missing_label_column, "label column '" + label_column + "' not found in " + path.string());
    }
    const auto label_pos = static_cast<std::size_t>(it - table.header.begin());
    if (table.rows.size() < 2) {
        throw DataError(DataIssue::too_few_instances,
                        "n >= 2 required, " + path.string() + " has " + std::to_string(table.rows.size()) + " data rows");
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j != label_pos) {
            names.push_back(table.header[j]);
        }
    }

    std::array<std::string, 2> label_names;
    std::size_t seen_labels = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> labels;
    values.reserve(table.rows.size() * names.size());
    for (std::size_t t = 0; t < table.rows.size(); ++t) {
        const auto& row = table.rows[t];
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j == label_pos) {
                continue;
            }
            try {
                values.push_back(parse_double(row[j]));
            } catch (const std::invalid_argument&) {
                throw DataError(DataIssue::non_numeric_cell,
                                "non-numeric cell '" + row[j] + "' in column '" + table.header[j] + "', data row " +
                                    std::to_string(t + 1));
            }
        }
        const auto& literal = row[label_pos];
        std::size_t code = 0;
        while (code < seen_labels && label_names[code] != literal) {
            ++code;
        }
        if (code == seen_labels) {
            if (seen_labels == 2) {
                throw DataError(DataIssue::too_many_classes,
                                "label column '" + label_column + "' has more than two distinct values");
            }
            label_names[seen_labels++] = literal;
        }
        labels.push_back(static_cast<std::uint8_t>(code));
    }
    if (seen_labels < 2) {
        throw DataError(DataIssue::single_class, "single-class dataset: label column '" + label_column +
                                                     "' has only the value '" + label_names[0] + "'");
    }
    return LearningSet::create(std::move(names), std::move(values), std::move(labels), std::move(label_names),
                               label_column);
}

void save_dataset(const std::filesystem::path& path, const LearningSet& set)
{
    CsvTable table;
    table.header = set.variable_names();
    table.header.push_back(set.label_column());
    for (std::size_t t = 0; t < set.n(); ++t) {
        std::vector<std::string> cells;
        for (const double v : set.row(t)) {
            cells.push_back(format_double(v));
        }
        cells.push_back(set.label_names()[set.labels()[t]]);
        table.rows.push_back(std::move(cells));
    }
    write_csv(path, table);
}

SplitPair split_even(const LearningSet& set, std::uint64_t seed)
{
    if (set.n() < 4) {
        throw DataError(DataIssue::split_too_small, "split mode needs at least 4 instances");
    }
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t t = 0; t < set.n(); ++t) {
        by_class[set.labels()[t]].push_back(t);
    }
    if (by_class[0].size() < 2 || by_class[1].size() < 2) {
        throw DataError(DataIssue::split_too_small, "split mode needs at least 2 instances of each class");
    }
    std::mt19937_64 rng(seed);
    SplitPair split;
    bool to_a = true;
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (const auto t : members) {
            (to_a ? split.subset_a : split.subset_b).push_back(t);
            to_a = !to_a;
        }
    }
    std::sort(split.subset_a.begin(), split.subset_a.end());
    std::sort(split.subset_b.begin(), split.subset_b.end());
    return split;
}

std::size_t contradiction_bound(std::span<const BoolColumn> columns, std::span<const std::uint8_t> labels)
{
    std::map<std::vector<std::uint8_t>, std::array<std::size_t, 2>> groups;
    std::vector<std::uint8_t> key(columns.size());
    for (std::size_t t = 0; t < labels.size(); ++t) {
        for (std::size_t f = 0; f < columns.size(); ++f) {
            key[f] = columns[f][t];
        }
        ++groups[key][labels[t]];
    }
    std::size_t bound = 0;
    for (const auto& [_, counts] : groups) {
        bound += std::min(counts[0], counts[1]);
    }
    return bound;
}

std::size_t contradiction_bound(const LearningSet& set, std::span<const QuantizedFeature> features)
{
    std::vector<BoolColumn> columns;
    columns.reserve(features.size());
    for (const auto& f : features) {
        columns.push_back(apply_threshold(source_values(set, f.source), f.threshold, f.polarity));
    }
    return contradiction_bound(columns, set.labels());
}

} // namespace lognet
