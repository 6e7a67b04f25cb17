#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lognet/dataset.hpp"

namespace lognet {

/// The two-input Boolean connectives that depend on both arguments.
enum class Connective : std::uint8_t {
    op_and,
    op_or,
    op_xor,
    op_nand,
    op_nor,
    op_xnor,
    a_and_not_b,
    not_a_and_b,
    a_or_not_b,
    not_a_or_b,
};

inline constexpr std::array<Connective, 10> reference_set = {
    Connective::op_and,      Connective::op_or,       Connective::op_xor,      Connective::op_nand,
    Connective::op_nor,      Connective::op_xnor,     Connective::a_and_not_b, Connective::not_a_and_b,
    Connective::a_or_not_b,  Connective::not_a_or_b,
};

/// Truth table as a 4-bit mask; bit (2a + b) holds g(a, b).
constexpr std::uint8_t truth_table(Connective c)
{
    switch (c) {
    case Connective::op_and: return 0b1000;
    case Connective::op_or: return 0b1110;
    case Connective::op_xor: return 0b0110;
    case Connective::op_nand: return 0b0111;
    case Connective::op_nor: return 0b0001;
    case Connective::op_xnor: return 0b1001;
    case Connective::a_and_not_b: return 0b0100;
    case Connective::not_a_and_b: return 0b0010;
    case Connective::a_or_not_b: return 0b1101;
    case Connective::not_a_or_b: return 0b1011;
    }
    return 0;
}

constexpr bool apply(Connective c, bool a, bool b)
{
    return ((truth_table(c) >> ((a ? 2 : 0) + (b ? 1 : 0))) & 1U) != 0;
}

std::string_view to_string(Connective c);
Connective connective_from_string(std::string_view name);

/// Immutable expression tree over feature-pool indices. Subtrees are shared,
/// so copying is cheap and growing a layer never touches the parent.
class Expression {
public:
    static Expression leaf(std::size_t pool_index);
    static Expression combine(Connective op, Expression lhs, Expression rhs);

    bool is_leaf() const noexcept { return node_ == nullptr; }
    std::size_t leaf_index() const noexcept { return leaf_; }
    Connective op() const;
    const Expression& lhs() const;
    const Expression& rhs() const;

    /// Number of connective levels on the longest path.
    std::size_t depth() const;
    /// Distinct leaf indices in ascending order.
    std::vector<std::size_t> leaves() const;
    bool has_leaf(std::size_t pool_index) const;

    /// Evaluates with `bits[i]` as the value of pool feature i.
    bool evaluate(std::span<const std::uint8_t> bits) const;
    BoolColumn evaluate(std::span<const BoolColumn> pool_columns) const;

    friend bool operator==(const Expression& a, const Expression& b);

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    std::size_t leaf_ = 0;
};

struct Expression::Node {
    Connective op;
    Expression lhs;
    Expression rhs;
};

/// Exterior criteria of one candidate: fitted on A and on B, scored on A+B.
struct SplitCriteria {
    std::size_t unbiasedness = 0; ///< Hamming(f(W/A), f(W/B))
    std::size_t regularity = 0;   ///< Hamming(f(W/A), Y) + Hamming(f(W/B), Y)
    std::size_t combined = 0;     ///< unbiasedness + regularity
};

/// A Boolean neuron: an expression over the feature pool. Layer 0 neurons
/// are bare pool features.
struct Neuron {
    Expression expression = Expression::leaf(0);
    std::size_t layer = 0;
    std::size_t errors = 0;
    BoolColumn column;
    std::optional<SplitCriteria> criteria;
    std::size_t order = 0; ///< generation order within its layer

    std::size_t leaf_count() const { return expression.leaves().size(); }
};

} // namespace lognet
