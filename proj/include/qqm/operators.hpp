#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qqm/field.hpp"

// Small symbolic operator language.  An OperatorSpec is a tree; apply_operator
// walks it against a field.  Composition order follows function notation: the
// rightmost child of a Compose node acts first.
//
// Quaternion multiplication does not commute, so left and right actions are
// distinct nodes: LeftI sends f to i*f while RightI sends f to f*i.  All
// coefficient fields (MultiplyField) act from the left.

namespace qqm {

enum class OperatorKind {
    Identity,       // f -> f
    MultiplyField,  // f -> c(x) * f   (left multiplication by a stored field)
    Position,       // f -> x * f
    Derivative,     // f -> centered d/dx f
    LeftI,          // f -> i * f
    RightI,         // f -> f * i
    Compose,        // children applied right-to-left
    Sum,            // children applied independently, results added
    Scale,          // f -> factor * child(f)   (real factor)
};

struct OperatorSpec {
    OperatorKind kind = OperatorKind::Identity;
    std::vector<OperatorSpec> children;
    std::optional<QField> coefficient;  // MultiplyField only
    double factor = 1.0;                // Scale only
    std::string label;                  // for diagnostics, optional
};

QField apply_operator(const OperatorSpec& op, const QField& f);

// Factories for the combinations the verification harness needs.
OperatorSpec op_identity();
OperatorSpec op_multiply(QField coefficient, std::string label = "multiply");
OperatorSpec op_position();
OperatorSpec op_derivative();
OperatorSpec op_left_i();
OperatorSpec op_right_i();
OperatorSpec op_compose(std::vector<OperatorSpec> factors, std::string label = "");
OperatorSpec op_sum(std::vector<OperatorSpec> terms, std::string label = "");
OperatorSpec op_scale(double factor, OperatorSpec inner);

// Canonical momentum component along x: p f = -hbar * i * (d/dx f).
OperatorSpec op_momentum(double hbar);

// f -> x * (f * i): the |i suffix used by the right-acting wave equation.
OperatorSpec op_right_i_suffix(OperatorSpec inner);

// True when the tree contains no RightI node, i.e. the operator commutes with
// right multiplication by any constant quaternion.
bool operator_is_right_linear(const OperatorSpec& op);

}  // namespace qqm
