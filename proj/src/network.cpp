#include "lognet/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace lognet {

namespace {

constexpr std::array<std::string_view, 10> connective_names = {
    "AND", "OR", "XOR", "NAND", "NOR", "XNOR", "A_AND_NOT_B", "NOT_A_AND_B", "A_OR_NOT_B", "NOT_A_OR_B",
};

void collect_leaves(const Expression& e, std::vector<std::size_t>& out)
{
    if (e.is_leaf()) {
        out.push_back(e.leaf_index());
        return;
    }
    collect_leaves(e.lhs(), out);
    collect_leaves(e.rhs(), out);
}

} // namespace

std::string_view to_string(Connective c)
{
    return connective_names[static_cast<std::size_t>(c)];
}

Connective connective_from_string(std::string_view name)
{
    for (std::size_t k = 0; k < connective_names.size(); ++k) {
        if (connective_names[k] == name) {
            return static_cast<Connective>(k);
        }
    }
    throw std::invalid_argument("unknown connective '" + std::string(name) + "'");
}

Expression Expression::leaf(std::size_t pool_index)
{
    Expression e;
    e.leaf_ = pool_index;
    return e;
}

Expression Expression::combine(Connective op, Expression lhs, Expression rhs)
{
    Expression e;
    e.node_ = std::make_shared<const Node>(Node{op, std::move(lhs), std::move(rhs)});
    return e;
}

Connective Expression::op() const
{
    if (!node_) {
        throw std::logic_error("leaf expression has no connective");
    }
    return node_->op;
}

const Expression& Expression::lhs() const
{
    if (!node_) {
        throw std::logic_error("leaf expression has no operands");
    }
    return node_->lhs;
}

const Expression& Expression::rhs() const
{
    if (!node_) {
        throw std::logic_error("leaf expression has no operands");
    }
    return node_->rhs;
}

std::size_t Expression::depth() const
{
    return is_leaf() ? 0 : 1 + std::max(lhs().depth(), rhs().depth());
}

std::vector<std::size_t> Expression::leaves() const
{
    std::vector<std::size_t> out;
    collect_leaves(*this, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Expression::has_leaf(std::size_t pool_index) const
{
    if (is_leaf()) {
        return leaf_ == pool_index;
    }
    return lhs().has_leaf(pool_index) || rhs().has_leaf(pool_index);
}

bool Expression::evaluate(std::span<const std::uint8_t> bits) const
{
    if (is_leaf()) {
        return bits[leaf_] != 0;
    }
    return apply(op(), lhs().evaluate(bits), rhs().evaluate(bits));
}

BoolColumn Expression::evaluate(std::span<const BoolColumn> pool_columns) const
{
    if (is_leaf()) {
        return pool_columns[leaf_];
    }
    const auto a = lhs().evaluate(pool_columns);
    const auto b = rhs().evaluate(pool_columns);
    const auto table = truth_table(op());
    BoolColumn out(a.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        out[t] = (table >> ((a[t] ? 2 : 0) + (b[t] ? 1 : 0))) & 1U;
    }
    return out;
}

bool operator==(const Expression& a, const Expression& b)
{
    if (a.is_leaf() || b.is_leaf()) {
        return a.is_leaf() && b.is_leaf() && a.leaf_index() == b.leaf_index();
    }
    return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

} // namespace lognet
