#include "bpx/setlang.hpp"

#include <cctype>
#include <sstream>

#include "bpx/error.hpp"

namespace bpx {

namespace {

constexpr Index kMaxLiteral = Index{1} << 62;

ExprPtr make(NodeKind k, std::vector<Index> args = {}, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
    auto e = std::make_shared<SetExpr>();
    e->kind = k;
    e->args = std::move(args);
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        auto e = parse_union();
        skip_ws();
        if (pos_ != text_.size()) fail({"'|'", "'\\'", "'&'", "'+'", "'-'", "end of input"}, "unexpected character");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& msg) const {
        throw ParseError(pos_, std::move(expected), msg);
    }
    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const { throw ParseError(at, {}, msg); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail({std::string("'") + c + "'"}, pos_ < text_.size() ? "unexpected character" : "unexpected end of input");
    }

    Index number() {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail({"integer"}, pos_ < text_.size() ? "unexpected character" : "unexpected end of input");
        const std::size_t at = pos_;
        Index v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            if (v > kMaxLiteral / 10) fail_at(at, "integer literal out of range");
            v = v * 10 + (text_[pos_] - '0');
            if (v > kMaxLiteral) fail_at(at, "integer literal out of range");
            ++pos_;
        }
        return v;
    }

    std::string identifier() {
        skip_ws();
        std::string id;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) id += text_[pos_++];
        return id;
    }

    ExprPtr parse_union() {
        auto lhs = parse_difference();
        while (accept('|')) lhs = make(NodeKind::unite, {}, lhs, parse_difference());
        return lhs;
    }
    ExprPtr parse_difference() {
        auto lhs = parse_intersection();
        while (accept('\\')) lhs = make(NodeKind::difference, {}, lhs, parse_intersection());
        return lhs;
    }
    ExprPtr parse_intersection() {
        auto lhs = parse_shifted();
        while (accept('&')) lhs = make(NodeKind::intersect, {}, lhs, parse_shifted());
        return lhs;
    }
    ExprPtr parse_shifted() {
        auto e = parse_unary();
        while (true) {
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            Index n = number();
            e = make(NodeKind::shift, {c == '+' ? n : -n}, e);
        }
        return e;
    }
    ExprPtr parse_unary() {
        if (accept('~')) return make(NodeKind::complement, {}, parse_unary());
        return parse_primary();
    }

    // '(' INT (sep INT)* ')' with a fixed separator between positions.
    std::vector<Index> arg_list(char open, char close, bool allow_empty) {
        expect(open);
        std::vector<Index> args;
        if (allow_empty && accept(close)) return args;
        args.push_back(number());
        while (true) {
            char c = peek();
            if (c == ',') {
                ++pos_;
                args.push_back(number());
            } else if (c == close) {
                ++pos_;
                return args;
            } else {
                fail({"','", std::string("'") + close + "'"},
                     pos_ < text_.size() ? "unexpected character" : "unexpected end of input");
            }
        }
    }

    Formula formula() {
        Formula f;
        bool have_geo = false;
        int sign = 1;
        bool first = true;
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                sign = c == '+' ? 1 : -1;
                ++pos_;
            } else if (!first) {
                break;
            } else {
                sign = 1;
            }
            first = false;
            const std::size_t at = pos_;
            Index coef = 1;
            bool explicit_coef = false;
            if (peek() != 'n') {
                coef = number();
                explicit_coef = true;
                if (peek() == '*' || peek() == 'n') {
                    if (peek() == '*') ++pos_;
                    if (peek() != 'n') {
                        Index base = number();
                        expect('^');
                        if (identifier() != "n") fail({"'n'"}, "expected the index variable");
                        if (have_geo) fail_at(at, "at most one geometric term per formula");
                        have_geo = true;
                        f.coef = sign * coef;
                        f.ratio = base;
                        continue;
                    }
                } else if (peek() == '^') {
                    ++pos_;
                    if (identifier() != "n") fail({"'n'"}, "expected the index variable");
                    if (have_geo) fail_at(at, "at most one geometric term per formula");
                    have_geo = true;
                    f.coef = sign;
                    f.ratio = coef;
                    continue;
                } else {
                    f.offset += sign * coef;
                    continue;
                }
            }
            if (identifier() != "n") fail({"'n'", "integer"}, "expected a formula term");
            f.slope += sign * (explicit_coef ? coef : 1);
        }
        if (f.ratio < 1) fail_at(pos_, "geometric ratio must be >= 1");
        if (f.ratio == 1 || f.coef == 0) {
            f.offset += f.coef;
            f.coef = 0;
            f.ratio = 1;
        }
        return f;
    }

    ExprPtr parse_primary() {
        if (accept('(')) {
            auto e = parse_union();
            expect(')');
            return e;
        }
        const std::size_t at = (skip_ws(), pos_);
        const std::string id = identifier();
        auto arity = [&](const std::vector<Index>& a, std::size_t n) {
            if (a.size() != n) fail_at(at, id + " expects " + std::to_string(n) + " arguments");
        };
        if (id == "AP") {
            auto a = arg_list('(', ')', false);
            arity(a, 2);
            if (a[1] < 1) fail_at(at, "AP step must be >= 1");
            return make(NodeKind::ap, a);
        }
        if (id == "FIN") return make(NodeKind::fin, arg_list('{', '}', true));
        if (id == "GEO") {
            auto a = arg_list('(', ')', false);
            arity(a, 2);
            if (a[0] < 2) fail_at(at, "GEO ratio must be >= 2");
            if (a[1] < 1) fail_at(at, "GEO start must be >= 1");
            return make(NodeKind::geo, a);
        }
        if (id == "POLY") {
            auto a = arg_list('(', ')', false);
            arity(a, 2);
            if (a[0] < 1) fail_at(at, "POLY degree must be >= 1");
            return make(NodeKind::poly, a);
        }
        if (id == "THICK") {
            expect('(');
            auto e = std::make_shared<SetExpr>();
            e->kind = NodeKind::thick;
            e->start = formula();
            expect(',');
            e->length = formula();
            expect(')');
            try {
                IntSet::blocks(e->start, e->length);
            } catch (const ArgumentError& err) {
                fail_at(at, std::string("invalid THICK rule: ") + err.what());
            }
            return e;
        }
        if (id == "EP") {
            expect('(');
            std::vector<Index> a{number()};
            expect(';');
            a.push_back(number());
            expect(';');
            if (peek() != ')') {
                a.push_back(number());
                while (accept(',')) a.push_back(number());
            }
            expect(')');
            if (a[1] < 1) fail_at(at, "EP modulus must be >= 1");
            for (std::size_t i = 2; i < a.size(); ++i)
                if (a[i] >= a[1]) fail_at(at, "EP residue must be below the modulus");
            return make(NodeKind::ep, a);
        }
        pos_ = at;
        fail({"'('", "'~'", "AP", "FIN", "GEO", "POLY", "THICK", "EP"},
             at < text_.size() ? "unexpected token" : "unexpected end of input");
    }
};

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::unite: return 1;
        case NodeKind::difference: return 2;
        case NodeKind::intersect: return 3;
        case NodeKind::shift: return 4;
        case NodeKind::complement: return 5;
        default: return 6;
    }
}

void print(std::ostream& os, const SetExpr& e, int min_prec);

void print_child(std::ostream& os, const SetExpr& e, int min_prec) {
    if (precedence(e.kind) < min_prec) {
        os << "(";
        print(os, e, 0);
        os << ")";
    } else {
        print(os, e, min_prec);
    }
}

void join(std::ostream& os, const std::vector<Index>& v, std::size_t from, const char* sep) {
    for (std::size_t i = from; i < v.size(); ++i) os << (i > from ? sep : "") << v[i];
}

void print(std::ostream& os, const SetExpr& e, int) {
    const int p = precedence(e.kind);
    switch (e.kind) {
        case NodeKind::ap: os << "AP(" << e.args[0] << "," << e.args[1] << ")"; break;
        case NodeKind::fin: os << "FIN{", join(os, e.args, 0, ","), os << "}"; break;
        case NodeKind::geo: os << "GEO(" << e.args[0] << "," << e.args[1] << ")"; break;
        case NodeKind::poly: os << "POLY(" << e.args[0] << "," << e.args[1] << ")"; break;
        case NodeKind::thick: os << "THICK(" << e.start.to_string() << ", " << e.length.to_string() << ")"; break;
        case NodeKind::ep:
            os << "EP(" << e.args[0] << "; " << e.args[1] << "; ";
            join(os, e.args, 2, ",");
            os << ")";
            break;
        case NodeKind::complement: os << "~", print_child(os, *e.lhs, p); break;
        case NodeKind::shift:
            print_child(os, *e.lhs, p);
            os << (e.args[0] < 0 ? " - " : " + ") << (e.args[0] < 0 ? -e.args[0] : e.args[0]);
            break;
        case NodeKind::intersect:
        case NodeKind::unite:
        case NodeKind::difference: {
            const char* op = e.kind == NodeKind::intersect ? " & " : e.kind == NodeKind::unite ? " | " : " \\ ";
            print_child(os, *e.lhs, p);
            os << op;
            print_child(os, *e.rhs, p + 1);
            break;
        }
    }
}

}  // namespace

bool structurally_equal(const SetExpr& a, const SetExpr& b) {
    if (a.kind != b.kind || a.args != b.args || !(a.start == b.start) || !(a.length == b.length)) return false;
    if (bool(a.lhs) != bool(b.lhs) || bool(a.rhs) != bool(b.rhs)) return false;
    if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
    return true;
}

ExprPtr parse_set_expr(std::string_view text) { return Parser(text).parse(); }

std::string print_set_expr(const SetExpr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

IntSet eval_set_expr(const SetExpr& e, Index horizon) {
    if (horizon < 1) throw ArgumentError("horizon must be >= 1");
    auto generator = [&](GeneratorRule r) {
        // The rule must reach the horizon without leaving the index range.
        for (Index n = 0;; ++n) {
            auto v = r.element(n);
            if (!v) throw EvalOverflow("generator element exceeds the index range before the horizon");
            if (*v >= horizon) break;
        }
        return IntSet::sparse({r});
    };
    switch (e.kind) {
        case NodeKind::ap: return IntSet::progression(e.args[0], e.args[1]);
        case NodeKind::fin: return IntSet::finite(e.args);
        case NodeKind::geo: return generator(GeneratorRule{Growth::geometric, e.args[1], e.args[0], 0, {}});
        case NodeKind::poly: return generator(GeneratorRule{Growth::polynomial, 1, e.args[0], e.args[1], {}});
        case NodeKind::thick: return IntSet::blocks(e.start, e.length);
        case NodeKind::ep: return IntSet::periodic(e.args[0], e.args[1], {e.args.begin() + 2, e.args.end()});
        case NodeKind::complement: return complement(eval_set_expr(*e.lhs, horizon));
        case NodeKind::shift: {
            // A Window child must cover the indices that slide into [0, horizon).
            const Index need = e.args[0] < 0 ? horizon - e.args[0] : horizon;
            auto out = shift(eval_set_expr(*e.lhs, need), e.args[0]);
            if (out.window_horizon() && *out.window_horizon() > horizon) {
                auto bits = out.materialize(horizon);
                return IntSet::window(std::move(bits));
            }
            return out;
        }
        case NodeKind::intersect:
            return intersect(eval_set_expr(*e.lhs, horizon), eval_set_expr(*e.rhs, horizon), horizon);
        case NodeKind::unite: return unite(eval_set_expr(*e.lhs, horizon), eval_set_expr(*e.rhs, horizon), horizon);
        case NodeKind::difference:
            return intersect(eval_set_expr(*e.lhs, horizon), complement(eval_set_expr(*e.rhs, horizon)), horizon);
    }
    throw ArgumentError("unknown expression node");
}

IntSet parse_set(std::string_view text, Index horizon) { return eval_set_expr(*parse_set_expr(text), horizon); }

}  // namespace bpx
