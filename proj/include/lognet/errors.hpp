#pragma once

#include <stdexcept>
#include <string>

namespace lognet {

/// Broad failure classes; the CLI maps each to its own exit code.
enum class ErrorKind { data, synthesis, io, model };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Specific data-validation failures, so callers can tell them apart without string matching.
enum class DataIssue {
    missing_file,
    missing_label_column,
    non_numeric_cell,
    ragged_row,
    too_few_instances,
    single_class,
    too_many_classes,
    non_finite_value,
    split_too_small,
    dimension_mismatch,
    unknown_label,
    no_rows,
};

class DataError : public Error {
public:
    DataError(DataIssue issue, const std::string& what)
        : Error(issue == DataIssue::missing_file ? ErrorKind::io : ErrorKind::data, what), issue_(issue) {}
    DataIssue issue() const noexcept { return issue_; }

private:
    DataIssue issue_;
};

class SynthesisError : public Error {
public:
    explicit SynthesisError(const std::string& what) : Error(ErrorKind::synthesis, what) {}
};

class ModelError : public Error {
public:
    explicit ModelError(const std::string& what) : Error(ErrorKind::model, what) {}
};

} // namespace lognet
