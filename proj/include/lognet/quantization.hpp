#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lognet/dataset.hpp"

namespace lognet {

/// Which way a threshold maps to true.
enum class Polarity : std::uint8_t {
    at_least, ///< 1 when value >= u
    below,    ///< 1 when value < u
};

const char* to_string(Polarity p);
Polarity polarity_from_string(const std::string& s);

/// Indices of the variables whose product feeds a feature; one index means
/// the plain variable. Kept sorted and free of repeats.
using Source = std::vector<std::size_t>;

std::vector<double> source_values(const LearningSet& set, const Source& source);
double source_value(std::span<const double> x, const Source& source);

/// A Boolean feature obtained by thresholding a (possibly product) variable.
struct QuantizedFeature {
    Source source;
    double threshold = 0.0;
    Polarity polarity = Polarity::at_least;
    std::size_t errors = 0;
    bool constant = false; ///< every source value was identical
    BoolColumn column;     ///< outputs on the learning set it was fitted on

    bool apply(double value) const
    {
        return polarity == Polarity::at_least ? value >= threshold : value < threshold;
    }
    bool apply(std::span<const double> x) const { return apply(source_value(x, source)); }
    bool is_product() const { return source.size() > 1; }

    /// "x1" or "x1*x2" using the given variable names.
    std::string describe(const std::vector<std::string>& names) const;
};

BoolColumn apply_threshold(std::span<const double> values, double threshold, Polarity polarity);

/// Threshold and polarity minimizing errors against `labels`. Candidates are
/// midpoints between consecutive distinct sorted values; ties go to the wider
/// gap, then the smaller threshold, then `at_least`.
QuantizedFeature quantize(std::span<const double> values, std::span<const std::uint8_t> labels);

/// quantize() over a set's source column, with `source` recorded.
QuantizedFeature quantize_source(const LearningSet& set, const Source& source);

/// One single-variable feature per column, in column order.
std::vector<QuantizedFeature> quantize_all(const LearningSet& set);

} // namespace lognet
