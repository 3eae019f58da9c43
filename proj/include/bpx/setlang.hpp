#pragma once
// A small expression language naming IntSet values.
//
//   expr    := diff ('|' diff)*
//   diff    := inter ('\' inter)*
//   inter   := shifted ('&' shifted)*
//   shifted := unary (('+' | '-') INT)*
//   unary   := '~' unary | primary
//   primary := '(' expr ')' | AP(a,d) | FIN{e,...} | GEO(c,a0) | POLY(d,a0)
//            | THICK(formula, formula) | EP(t; m; r,...)
//   formula := term (('+' | '-') term)*   with terms INT, [INT*]n, [INT*]INT^n

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bpx/intset.hpp"

namespace bpx {

enum class NodeKind { ap, fin, geo, poly, thick, ep, complement, shift, intersect, unite, difference };

struct SetExpr;
using ExprPtr = std::shared_ptr<const SetExpr>;

struct SetExpr {
    NodeKind kind = NodeKind::fin;
    /// Leaf arguments in source order; for shift, the signed amount.
    std::vector<Index> args;
    Formula start;   // THICK only
    Formula length;  // THICK only
    ExprPtr lhs;
    ExprPtr rhs;
};

bool structurally_equal(const SetExpr& a, const SetExpr& b);

/// Throws ParseError with the byte offset and expected-token set.
ExprPtr parse_set_expr(std::string_view text);
/// Canonical text; reparsing it yields a structurally equal tree.
std::string print_set_expr(const SetExpr& e);
IntSet eval_set_expr(const SetExpr& e, Index horizon);

/// parse + eval in one step.
IntSet parse_set(std::string_view text, Index horizon = kDefaultAlgebraHorizon);

}  // namespace bpx
