#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace lognet {

/// One Boolean value per instance. Stored as bytes so that spans and
/// elementwise loops stay simple.
using BoolColumn = std::vector<std::uint8_t>;

std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Header and raw cells of a comma-separated file.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Labeled learning data: n instances of m measurements plus a binary label.
/// Immutable after construction; `create` enforces every invariant.
class LearningSet {
public:
    static LearningSet create(std::vector<std::string> variable_names,
                              std::vector<double> values_row_major,
                              std::vector<std::uint8_t> labels,
                              std::array<std::string, 2> label_names = {"0", "1"},
                              std::string label_column = "label");

    std::size_t n() const noexcept { return labels_.size(); }
    std::size_t m() const noexcept { return names_.size(); }

    std::span<const double> row(std::size_t t) const { return {values_.data() + t * m(), m()}; }
    double value(std::size_t t, std::size_t i) const { return values_[t * m() + i]; }
    std::vector<double> column(std::size_t i) const;

    std::span<const std::uint8_t> labels() const noexcept { return labels_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<std::string>& variable_names() const noexcept { return names_; }
    const std::array<std::string, 2>& label_names() const noexcept { return label_names_; }
    const std::string& label_column() const noexcept { return label_column_; }

    std::size_t count(std::uint8_t label) const;
    /// Subset of instances in the given order, bypassing the two-class check.
    LearningSet subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const LearningSet&, const LearningSet&) = default;

private:
    LearningSet() = default;

    std::vector<std::string> names_;
    std::vector<double> values_;
    std::vector<std::uint8_t> labels_;
    std::array<std::string, 2> label_names_;
    std::string label_column_;
};

/// Reads a CSV with header; labels map to {0,1} by order of first occurrence.
LearningSet load_dataset(const std::filesystem::path& path, const std::string& label_column);
void save_dataset(const std::filesystem::path& path, const LearningSet& set);

/// Two disjoint index lists covering all instances.
struct SplitPair {
    std::vector<std::size_t> subset_a;
    std::vector<std::size_t> subset_b;

    friend bool operator==(const SplitPair&, const SplitPair&) = default;
};

/// Stratified halving: within each class instances are shuffled with `seed`
/// and dealt alternately to A and B, so |A| - |B| is 0 or 1.
SplitPair split_even(const LearningSet& set, std::uint64_t seed);

struct QuantizedFeature;

/// Minimum number of errors any Boolean function of `features` can make:
/// instances are grouped by their quantized vector and each group
/// contributes its minority label count.
std::size_t contradiction_bound(const LearningSet& set, std::span<const QuantizedFeature> features);

/// Same bound computed directly from precomputed feature columns.
std::size_t contradiction_bound(std::span<const BoolColumn> columns, std::span<const std::uint8_t> labels);

} // namespace lognet
