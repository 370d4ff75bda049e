#include "qqm/operators.hpp"

#include <stdexcept>
#include <utility>

namespace qqm {

namespace {

const Quaternion kUnitI{0.0, 1.0, 0.0, 0.0};

QField apply_impl(const OperatorSpec& op, const QField& f) {
    switch (op.kind) {
        case OperatorKind::Identity:
            return f;
        case OperatorKind::MultiplyField: {
            if (!op.coefficient) {
                throw std::invalid_argument("apply_operator: MultiplyField node has no coefficient");
            }
            return left_multiply(*op.coefficient, f);
        }
        case OperatorKind::Position: {
            QField out(f.grid);
            for (std::size_t m = 0; m < f.grid.n; ++m) {
                out.values[m] = f.grid.point(m) * f.values[m];
            }
            return out;
        }
        case OperatorKind::Derivative:
            return gradient(f);
        case OperatorKind::LeftI:
            return left_multiply(kUnitI, f);
        case OperatorKind::RightI:
            return right_multiply(f, kUnitI);
        case OperatorKind::Compose: {
            if (op.children.empty()) {
                throw std::invalid_argument("apply_operator: Compose node needs children");
            }
            QField cur = f;
            for (auto it = op.children.rbegin(); it != op.children.rend(); ++it) {
                cur = apply_impl(*it, cur);
            }
            return cur;
        }
        case OperatorKind::Sum: {
            if (op.children.empty()) {
                throw std::invalid_argument("apply_operator: Sum node needs children");
            }
            QField acc = apply_impl(op.children.front(), f);
            for (std::size_t c = 1; c < op.children.size(); ++c) {
                QField term = apply_impl(op.children[c], f);
                accumulate(acc, 1.0, term);
            }
            return acc;
        }
        case OperatorKind::Scale: {
            if (op.children.size() != 1) {
                throw std::invalid_argument("apply_operator: Scale node needs exactly one child");
            }
            QField out = apply_impl(op.children.front(), f);
            for (auto& q : out.values) q *= op.factor;
            return out;
        }
    }
    throw std::logic_error("apply_operator: unknown node kind");
}

}  // namespace

QField apply_operator(const OperatorSpec& op, const QField& f) {
    if (op.kind == OperatorKind::MultiplyField && op.coefficient) {
        require_same_grid(op.coefficient->grid, f.grid, "apply_operator");
    }
    return apply_impl(op, f);
}

OperatorSpec op_identity() { return OperatorSpec{OperatorKind::Identity, {}, std::nullopt, 1.0, "1"}; }

OperatorSpec op_multiply(QField coefficient, std::string label) {
    OperatorSpec op;
    op.kind = OperatorKind::MultiplyField;
    op.coefficient = std::move(coefficient);
    op.label = std::move(label);
    return op;
}

OperatorSpec op_position() { return OperatorSpec{OperatorKind::Position, {}, std::nullopt, 1.0, "x"}; }

OperatorSpec op_derivative() { return OperatorSpec{OperatorKind::Derivative, {}, std::nullopt, 1.0, "d/dx"}; }

OperatorSpec op_left_i() { return OperatorSpec{OperatorKind::LeftI, {}, std::nullopt, 1.0, "i."}; }

OperatorSpec op_right_i() { return OperatorSpec{OperatorKind::RightI, {}, std::nullopt, 1.0, ".i"}; }

OperatorSpec op_compose(std::vector<OperatorSpec> factors, std::string label) {
    OperatorSpec op;
    op.kind = OperatorKind::Compose;
    op.children = std::move(factors);
    op.label = std::move(label);
    return op;
}

OperatorSpec op_sum(std::vector<OperatorSpec> terms, std::string label) {
    OperatorSpec op;
    op.kind = OperatorKind::Sum;
    op.children = std::move(terms);
    op.label = std::move(label);
    return op;
}

OperatorSpec op_scale(double factor, OperatorSpec inner) {
    OperatorSpec op;
    op.kind = OperatorKind::Scale;
    op.factor = factor;
    op.children.push_back(std::move(inner));
    return op;
}

OperatorSpec op_momentum(double hbar) {
    return op_scale(-hbar, op_compose({op_left_i(), op_derivative()}, "p"));
}

OperatorSpec op_right_i_suffix(OperatorSpec inner) {
    return op_compose({op_right_i(), std::move(inner)}, "(.|i)");
}

bool operator_is_right_linear(const OperatorSpec& op) {
    if (op.kind == OperatorKind::RightI) return false;
    for (const auto& child : op.children) {
        if (!operator_is_right_linear(child)) return false;
    }
    return true;
}

}  // namespace qqm
