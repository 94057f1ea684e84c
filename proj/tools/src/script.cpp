#include "gentrans/cli/script.hpp"

#include <algorithm>
#include <set>

#include "gentrans/detail/lexer.hpp"

namespace gentrans::cli {

using detail::Token;
using detail::TokenStream;

using ExprPtr = std::shared_ptr<const ScriptExpr>;
using PatternPtr = std::shared_ptr<const ScriptPattern>;
using Constants = std::map<std::string, Attr, std::less<>>;

struct ScriptExpr {
    enum class Kind { Int, Str, Bool, Unit, Inh, Subject, Name, Call, Con, Tuple, List, Neg, Binary, If, Match, Let };

    Kind kind = Kind::Unit;
    SourcePos pos;
    BigInt integer;
    std::string text; // string literal, name, callee, tag, operator, let-bound name
    bool boolean = false;
    std::vector<ExprPtr> kids;
    std::vector<std::pair<PatternPtr, ExprPtr>> cases;
};

struct ScriptPattern {
    enum class Kind { Wild, Bind, Int, Str, Bool, Unit, Con, Tuple, Nil, Cons };

    Kind kind = Kind::Wild;
    SourcePos pos;
    BigInt integer;
    std::string text;
    bool boolean = false;
    std::vector<PatternPtr> kids;
};

namespace {

const std::set<std::string, std::less<>> keywords = {"let",  "in",   "match", "with", "end",   "if",
                                                      "then", "else", "true",  "false", "inh", "subject"};

[[noreturn]] void script_error(SourcePos pos, std::string message) {
    throw Error(ErrorCode::ScriptError, std::move(message), pos);
}

// ---------------------------------------------------------------------------
// Parsing

class Parser {
public:
    explicit Parser(std::string_view text) : ts_(detail::tokenize(text, detail::LexOptions{.hash_comments = true})) {}

    TokenStream& tokens() { return ts_; }

    ExprPtr expr() {
        const Token& tok = ts_.peek();
        if (tok.is_keyword("let")) {
            auto e = node(ScriptExpr::Kind::Let, ts_.next().pos);
            e->text = binder();
            ts_.expect_punct("=");
            e->kids.push_back(expr());
            ts_.expect_keyword("in");
            e->kids.push_back(expr());
            return e;
        }
        if (tok.is_keyword("if")) {
            auto e = node(ScriptExpr::Kind::If, ts_.next().pos);
            e->kids.push_back(expr());
            ts_.expect_keyword("then");
            e->kids.push_back(expr());
            ts_.expect_keyword("else");
            e->kids.push_back(expr());
            return e;
        }
        if (tok.is_keyword("match")) {
            auto e = node(ScriptExpr::Kind::Match, ts_.next().pos);
            e->kids.push_back(expr());
            ts_.expect_keyword("with");
            ts_.accept_punct("|");
            do {
                PatternPtr p = pattern();
                ts_.expect_punct("->");
                e->cases.emplace_back(p, expr());
            } while (ts_.accept_punct("|"));
            ts_.expect_keyword("end");
            return e;
        }
        return comparison();
    }

    std::string binder() {
        const Token& name = ts_.expect(Token::Kind::LowerIdent, "a name");
        if (keywords.count(name.text) != 0 || name.text == "_") ts_.fail_at(name, "a name");
        return name.text;
    }

private:
    static std::shared_ptr<ScriptExpr> node(ScriptExpr::Kind kind, SourcePos pos) {
        auto e = std::make_shared<ScriptExpr>();
        e->kind = kind;
        e->pos = pos;
        return e;
    }

    static ExprPtr binary(std::string op, SourcePos pos, ExprPtr lhs, ExprPtr rhs) {
        auto e = node(ScriptExpr::Kind::Binary, pos);
        e->text = std::move(op);
        e->kids = {std::move(lhs), std::move(rhs)};
        return e;
    }

    ExprPtr comparison() {
        ExprPtr lhs = concat();
        for (std::string_view op : {"==", "!=", "<=", ">=", "<", ">"}) {
            if (ts_.peek().is_punct(op)) {
                SourcePos pos = ts_.next().pos;
                return binary(std::string(op), pos, lhs, concat());
            }
        }
        return lhs;
    }

    ExprPtr concat() {
        ExprPtr lhs = cons();
        while (ts_.peek().is_punct("^")) {
            SourcePos pos = ts_.next().pos;
            lhs = binary("^", pos, lhs, cons());
        }
        return lhs;
    }

    ExprPtr cons() {
        ExprPtr head = sum();
        if (ts_.peek().is_punct("::")) {
            SourcePos pos = ts_.next().pos;
            return binary("::", pos, head, cons());
        }
        return head;
    }

    ExprPtr sum() {
        ExprPtr lhs = term();
        while (ts_.peek().is_punct("+") || ts_.peek().is_punct("-")) {
            const Token& op = ts_.next();
            lhs = binary(op.text, op.pos, lhs, term());
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        while (ts_.peek().is_punct("*") || ts_.peek().is_punct("/") || ts_.peek().is_punct("%")) {
            const Token& op = ts_.next();
            lhs = binary(op.text, op.pos, lhs, unary());
        }
        return lhs;
    }

    ExprPtr unary() {
        if (ts_.peek().is_punct("-")) {
            auto e = node(ScriptExpr::Kind::Neg, ts_.next().pos);
            e->kids.push_back(unary());
            return e;
        }
        return primary();
    }

    std::vector<ExprPtr> call_args() {
        std::vector<ExprPtr> args;
        ts_.expect_punct("(");
        if (ts_.accept_punct(")")) return args;
        do {
            args.push_back(expr());
        } while (ts_.accept_punct(","));
        ts_.expect_punct(")");
        return args;
    }

    ExprPtr primary() {
        const Token& tok = ts_.peek();
        switch (tok.kind) {
        case Token::Kind::Int: {
            auto e = node(ScriptExpr::Kind::Int, tok.pos);
            e->integer = BigInt(ts_.next().text);
            return e;
        }
        case Token::Kind::String: {
            auto e = node(ScriptExpr::Kind::Str, tok.pos);
            e->text = ts_.next().text;
            return e;
        }
        case Token::Kind::UpperIdent: {
            auto e = node(ScriptExpr::Kind::Con, tok.pos);
            e->text = ts_.next().text;
            if (ts_.peek().is_punct("(")) e->kids = call_args();
            return e;
        }
        case Token::Kind::LowerIdent: {
            if (tok.text == "true" || tok.text == "false") {
                auto e = node(ScriptExpr::Kind::Bool, tok.pos);
                e->boolean = ts_.next().text == "true";
                return e;
            }
            if (tok.text == "inh") return node(ScriptExpr::Kind::Inh, ts_.next().pos);
            if (tok.text == "subject") return node(ScriptExpr::Kind::Subject, ts_.next().pos);
            if (keywords.count(tok.text) != 0) ts_.fail("an expression");
            const Token& name = ts_.next();
            if (ts_.peek().is_punct("(")) {
                auto e = node(ScriptExpr::Kind::Call, name.pos);
                e->text = name.text;
                e->kids = call_args();
                return e;
            }
            auto e = node(ScriptExpr::Kind::Name, name.pos);
            e->text = name.text;
            return e;
        }
        case Token::Kind::Punct:
            if (tok.is_punct("(")) {
                SourcePos pos = ts_.next().pos;
                if (ts_.accept_punct(")")) return node(ScriptExpr::Kind::Unit, pos);
                ExprPtr first = expr();
                if (ts_.accept_punct(")")) return first;
                auto e = node(ScriptExpr::Kind::Tuple, pos);
                e->kids.push_back(first);
                while (ts_.accept_punct(",")) e->kids.push_back(expr());
                ts_.expect_punct(")");
                return e;
            }
            if (tok.is_punct("[")) {
                auto e = node(ScriptExpr::Kind::List, ts_.next().pos);
                if (ts_.accept_punct("]")) return e;
                do {
                    e->kids.push_back(expr());
                } while (ts_.accept_punct(";"));
                ts_.expect_punct("]");
                return e;
            }
            break;
        default:
            break;
        }
        ts_.fail("an expression");
    }

    static std::shared_ptr<ScriptPattern> pnode(ScriptPattern::Kind kind, SourcePos pos) {
        auto p = std::make_shared<ScriptPattern>();
        p->kind = kind;
        p->pos = pos;
        return p;
    }

    PatternPtr pattern() {
        PatternPtr head = pattern_atom();
        if (ts_.peek().is_punct("::")) {
            auto p = pnode(ScriptPattern::Kind::Cons, ts_.next().pos);
            p->kids = {head, pattern()};
            return p;
        }
        return head;
    }

    std::vector<PatternPtr> pattern_list(std::string_view close) {
        std::vector<PatternPtr> out;
        do {
            out.push_back(pattern());
        } while (ts_.accept_punct(","));
        ts_.expect_punct(close);
        return out;
    }

    PatternPtr pattern_atom() {
        const Token& tok = ts_.peek();
        if (tok.kind == Token::Kind::Int || (tok.is_punct("-") && ts_.peek(1).kind == Token::Kind::Int)) {
            auto p = pnode(ScriptPattern::Kind::Int, tok.pos);
            bool negative = tok.is_punct("-");
            if (negative) ts_.next();
            p->integer = BigInt(ts_.next().text);
            if (negative) p->integer = -p->integer;
            return p;
        }
        if (tok.kind == Token::Kind::String) {
            auto p = pnode(ScriptPattern::Kind::Str, tok.pos);
            p->text = ts_.next().text;
            return p;
        }
        if (tok.kind == Token::Kind::UpperIdent) {
            auto p = pnode(ScriptPattern::Kind::Con, tok.pos);
            p->text = ts_.next().text;
            if (ts_.accept_punct("(")) p->kids = pattern_list(")");
            return p;
        }
        if (tok.kind == Token::Kind::LowerIdent) {
            if (tok.text == "_") return pnode(ScriptPattern::Kind::Wild, ts_.next().pos);
            if (tok.text == "true" || tok.text == "false") {
                auto p = pnode(ScriptPattern::Kind::Bool, tok.pos);
                p->boolean = ts_.next().text == "true";
                return p;
            }
            auto p = pnode(ScriptPattern::Kind::Bind, tok.pos);
            p->text = binder();
            return p;
        }
        if (tok.is_punct("(")) {
            SourcePos pos = ts_.next().pos;
            if (ts_.accept_punct(")")) return pnode(ScriptPattern::Kind::Unit, pos);
            std::vector<PatternPtr> elems = pattern_list(")");
            if (elems.size() == 1) return elems.front();
            auto p = pnode(ScriptPattern::Kind::Tuple, pos);
            p->kids = std::move(elems);
            return p;
        }
        if (tok.is_punct("[")) {
            SourcePos pos = ts_.next().pos;
            ts_.expect_punct("]");
            return pnode(ScriptPattern::Kind::Nil, pos);
        }
        ts_.fail("a pattern");
    }

    TokenStream ts_;
};

// ---------------------------------------------------------------------------
// Evaluation

struct HandlerFrame {
    const Scope& scope;
    const Attr& inh;
    const Value& subject;
    const Args& args;
    const std::vector<std::string>& group;
};

class Evaluator {
public:
    Evaluator(const Constants& constants, const HandlerFrame* frame) : constants_(constants), frame_(frame) {}

    Attr eval(const ScriptExpr& e) {
        using K = ScriptExpr::Kind;
        switch (e.kind) {
        case K::Int: return Value::integer(e.integer);
        case K::Str: return Value::str(e.text);
        case K::Bool: return Value::boolean(e.boolean);
        case K::Unit: return Value::unit();
        case K::Inh: return frame(e, "inh").inh;
        case K::Subject: return frame(e, "subject").subject;
        case K::Name: return lookup_name(e);
        case K::Call: return call(e);
        case K::Con: {
            std::vector<Value> args;
            for (const auto& k : e.kids) args.push_back(value_of(eval(*k), *k, "a constructor argument"));
            return Value::con(e.text, std::move(args));
        }
        case K::Tuple: {
            std::vector<Value> elems;
            for (const auto& k : e.kids) elems.push_back(value_of(eval(*k), *k, "a tuple element"));
            return Value::tuple(std::move(elems));
        }
        case K::List: {
            std::vector<Value> elems;
            for (const auto& k : e.kids) elems.push_back(value_of(eval(*k), *k, "a list element"));
            return Value::seq(std::move(elems));
        }
        case K::Neg: return Value::integer(-int_of(eval(*e.kids[0]), *e.kids[0]));
        case K::Binary: return binary(e);
        case K::If: {
            Attr c = eval(*e.kids[0]);
            const Value& v = value_of(c, *e.kids[0], "a condition");
            if (!v.is(Value::Kind::Bool)) script_error(e.kids[0]->pos, "condition is not a bool");
            return eval(*e.kids[v.as_bool() ? 1 : 2]);
        }
        case K::Match: {
            Attr scrutinee = eval(*e.kids[0]);
            const Value& v = value_of(scrutinee, *e.kids[0], "a match scrutinee");
            for (const auto& [pat, body] : e.cases) {
                std::size_t mark = locals_.size();
                if (match(*pat, v)) {
                    Attr out = eval(*body);
                    locals_.resize(mark);
                    return out;
                }
                locals_.resize(mark);
            }
            script_error(e.pos, "no case matches " + print_value(v));
        }
        case K::Let: {
            Attr bound = eval(*e.kids[0]);
            locals_.emplace_back(e.text, bound);
            Attr out = eval(*e.kids[1]);
            locals_.pop_back();
            return out;
        }
        }
        script_error(e.pos, "malformed expression");
    }

private:
    const HandlerFrame& frame(const ScriptExpr& e, std::string_view what) const {
        if (frame_ == nullptr) script_error(e.pos, std::string(what) + " is only available inside a handler");
        return *frame_;
    }

    static const Value& value_of(const Attr& a, const ScriptExpr& at, std::string_view what) {
        if (a.is(Attr::Kind::Value) || a.is(Attr::Kind::Interned)) return a.value();
        script_error(at.pos, std::string(what) + " must be a value, got " + std::string(attr_kind_name(a.kind())));
    }

    static const BigInt& int_of(const Attr& a, const ScriptExpr& at) {
        const Value& v = value_of(a, at, "an operand");
        if (!v.is(Value::Kind::Int)) script_error(at.pos, "expected an int, got " + print_value(v));
        return v.as_int();
    }

    static const std::string& str_of(const Attr& a, const ScriptExpr& at) {
        const Value& v = value_of(a, at, "an operand");
        if (!v.is(Value::Kind::Str)) script_error(at.pos, "expected a string, got " + print_value(v));
        return v.as_str();
    }

    Attr lookup_name(const ScriptExpr& e) const {
        for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
            if (it->first == e.text) return it->second;
        }
        if (auto it = constants_.find(e.text); it != constants_.end()) return it->second;
        script_error(e.pos, "unbound name " + e.text);
    }

    void arity(const ScriptExpr& e, std::size_t lo, std::size_t hi) const {
        if (e.kids.size() < lo || e.kids.size() > hi) {
            std::string want = lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi);
            script_error(e.pos, e.text + " takes " + want + " arguments, got " + std::to_string(e.kids.size()));
        }
    }

    // Argument naming a type or a field: a bare name or a string literal.
    static std::string label(const ScriptExpr& e) {
        if (e.kind == ScriptExpr::Kind::Name || e.kind == ScriptExpr::Kind::Str) return e.text;
        script_error(e.pos, "expected a name");
    }

    Attr call(const ScriptExpr& e) {
        const std::string& f = e.text;
        if (f == "arg") {
            arity(e, 1, 1);
            const HandlerFrame& fr = frame(e, "arg");
            const BigInt& i = int_of(eval(*e.kids[0]), *e.kids[0]);
            if (i < 0 || i >= fr.args.size()) {
                std::size_t n = fr.args.size();
                script_error(e.pos, "argument index " + i.str() + " out of range; " + fr.subject.tag() + " has " +
                                        std::to_string(n) + (n == 1 ? " argument" : " arguments"));
            }
            return fr.args[static_cast<std::size_t>(i)];
        }
        if (f == "field") {
            arity(e, 1, 1);
            const HandlerFrame& fr = frame(e, "field");
            std::string name = label(*e.kids[0]);
            const Value* v = fr.subject.field(name);
            if (v == nullptr) script_error(e.pos, fr.subject.tag() + " has no field " + name);
            return *v;
        }
        if (f == "self") {
            arity(e, 1, 2);
            const HandlerFrame& fr = frame(e, "self");
            return apply(fr.scope.self(), e, 0);
        }
        if (f == "sibling") {
            arity(e, 2, 3);
            const HandlerFrame& fr = frame(e, "sibling");
            std::string type = label(*e.kids[0]);
            auto it = std::find(fr.group.begin(), fr.group.end(), type);
            if (it == fr.group.end()) script_error(e.kids[0]->pos, type + " is not in the recursion group");
            return apply(fr.scope.sibling(static_cast<std::size_t>(it - fr.group.begin())), e, 1);
        }
        if (f == "super") {
            arity(e, 0, 1);
            const HandlerFrame& fr = frame(e, "super");
            Attr inh = e.kids.empty() ? fr.inh : eval(*e.kids[0]);
            return fr.scope.super(inh, fr.subject, fr.args);
        }
        if (f == "str") {
            arity(e, 1, 1);
            return Value::str(print_attr(eval(*e.kids[0])));
        }
        if (f == "max" || f == "min") {
            arity(e, 2, 2);
            BigInt a = int_of(eval(*e.kids[0]), *e.kids[0]);
            BigInt b = int_of(eval(*e.kids[1]), *e.kids[1]);
            return Value::integer(f == "max" ? std::max(a, b) : std::min(a, b));
        }
        if (f == "lookup") {
            arity(e, 2, 2);
            const std::string& key = str_of(eval(*e.kids[0]), *e.kids[0]);
            if (auto it = constants_.find(key); it != constants_.end()) return it->second;
            return eval(*e.kids[1]);
        }
        if (f == "length") {
            arity(e, 1, 1);
            const Value& v = value_of(eval(*e.kids[0]), *e.kids[0], "an operand");
            if (v.is(Value::Kind::Str)) return Value::integer(static_cast<long long>(v.as_str().size()));
            if (v.is(Value::Kind::Seq) || v.is(Value::Kind::Tuple)) {
                return Value::integer(static_cast<long long>(v.items().size()));
            }
            script_error(e.pos, "length of " + print_value(v));
        }
        script_error(e.pos, "unknown function " + f);
    }

    // self(x) / self(i, x), with the subject argument last.
    Attr apply(const TransformFn& fn, const ScriptExpr& e, std::size_t first) {
        std::size_t n = e.kids.size() - first;
        Attr inh = n == 2 ? eval(*e.kids[first]) : frame_->inh;
        const ScriptExpr& subj = *e.kids.back();
        Attr x = eval(subj);
        return fn(inh, value_of(x, subj, "a traversal subject"));
    }

    Attr binary(const ScriptExpr& e) {
        const std::string& op = e.text;
        const ScriptExpr& l = *e.kids[0];
        const ScriptExpr& r = *e.kids[1];
        Attr a = eval(l);
        Attr b = eval(r);
        if (op == "+") return Value::integer(int_of(a, l) + int_of(b, r));
        if (op == "-") return Value::integer(int_of(a, l) - int_of(b, r));
        if (op == "*") return Value::integer(int_of(a, l) * int_of(b, r));
        if (op == "/" || op == "%") {
            const BigInt& d = int_of(b, r);
            if (d == 0) script_error(e.pos, "division by zero");
            BigInt q = op == "/" ? BigInt(int_of(a, l) / d) : BigInt(int_of(a, l) % d);
            return Value::integer(q);
        }
        if (op == "^") return Value::str(str_of(a, l) + str_of(b, r));
        if (op == "::") {
            const Value& tail = value_of(b, r, "a list");
            if (!tail.is(Value::Kind::Seq)) script_error(r.pos, "right operand of :: is not a list: " + print_value(tail));
            std::vector<Value> elems{value_of(a, l, "a list element")};
            elems.insert(elems.end(), tail.items().begin(), tail.items().end());
            return Value::seq(std::move(elems));
        }
        if (op == "==" || op == "!=") {
            bool same = false;
            if (a.is(Attr::Kind::Cmp) && b.is(Attr::Kind::Cmp)) {
                same = a.ordering() == b.ordering();
            } else {
                same = value_of(a, l, "an operand") == value_of(b, r, "an operand");
            }
            return Value::boolean(op == "==" ? same : !same);
        }
        const Value& va = value_of(a, l, "an operand");
        const Value& vb = value_of(b, r, "an operand");
        int c = 0;
        if (va.is(Value::Kind::Int) && vb.is(Value::Kind::Int)) {
            c = va.as_int() < vb.as_int() ? -1 : (vb.as_int() < va.as_int() ? 1 : 0);
        } else if (va.is(Value::Kind::Str) && vb.is(Value::Kind::Str)) {
            c = va.as_str().compare(vb.as_str());
        } else {
            script_error(e.pos, "cannot order " + print_value(va) + " and " + print_value(vb));
        }
        if (op == "<") return Value::boolean(c < 0);
        if (op == "<=") return Value::boolean(c <= 0);
        if (op == ">") return Value::boolean(c > 0);
        return Value::boolean(c >= 0);
    }

    bool match(const ScriptPattern& p, const Value& v) {
        using K = ScriptPattern::Kind;
        switch (p.kind) {
        case K::Wild: return true;
        case K::Bind: locals_.emplace_back(p.text, Attr(v)); return true;
        case K::Int: return v.is(Value::Kind::Int) && v.as_int() == p.integer;
        case K::Str: return v.is(Value::Kind::Str) && v.as_str() == p.text;
        case K::Bool: return v.is(Value::Kind::Bool) && v.as_bool() == p.boolean;
        case K::Unit: return v.is(Value::Kind::Unit);
        case K::Nil: return v.is(Value::Kind::Seq) && v.items().empty();
        case K::Con:
            return v.is_constructor() && v.tag() == p.text && v.items().size() == p.kids.size() && all(p.kids, v.items());
        case K::Tuple: return v.is(Value::Kind::Tuple) && v.items().size() == p.kids.size() && all(p.kids, v.items());
        case K::Cons: {
            if (!v.is(Value::Kind::Seq) || v.items().empty()) return false;
            std::vector<Value> rest(v.items().begin() + 1, v.items().end());
            return match(*p.kids[0], v.items()[0]) && match(*p.kids[1], Value::seq(std::move(rest)));
        }
        }
        return false;
    }

    bool all(const std::vector<PatternPtr>& pats, std::span<const Value> items) {
        for (std::size_t i = 0; i < pats.size(); ++i) {
            if (!match(*pats[i], items[i])) return false;
        }
        return true;
    }

    const Constants& constants_;
    const HandlerFrame* frame_;
    std::vector<std::pair<std::string, Attr>> locals_;
};

} // namespace

Script Script::parse(std::string_view text) {
    Parser parser(text);
    TokenStream& ts = parser.tokens();
    auto constants = std::make_shared<Constants>();
    Script script;
    while (!ts.at_end()) {
        if (ts.peek().is_keyword("let")) {
            SourcePos pos = ts.next().pos;
            std::string name = parser.binder();
            ts.expect_punct("=");
            ExprPtr e = parser.expr();
            if (constants->count(name) != 0) script_error(pos, "constant " + name + " defined twice");
            (*constants)[name] = Evaluator(*constants, nullptr).eval(*e);
            continue;
        }
        ScriptRule rule;
        rule.pos = ts.peek().pos;
        if (ts.peek().kind == Token::Kind::LowerIdent) {
            rule.member = ts.next().text;
            ts.expect_punct(".");
        }
        rule.tag = ts.expect(Token::Kind::UpperIdent, "a constructor tag").text;
        ts.expect_punct("=>");
        rule.body = parser.expr();
        script.rules_.push_back(std::move(rule));
    }
    script.constants_ = std::move(constants);
    return script;
}

std::vector<Overrides> Script::overrides_for(const std::vector<std::string>& group,
                                             const std::vector<std::vector<std::string>>& tags) const {
    std::vector<Overrides> out(group.size());
    auto declares = [&](std::size_t k, const std::string& tag) {
        return std::find(tags[k].begin(), tags[k].end(), tag) != tags[k].end();
    };
    for (const ScriptRule& rule : rules_) {
        std::vector<std::size_t> targets;
        if (!rule.member.empty()) {
            auto it = std::find(group.begin(), group.end(), rule.member);
            if (it == group.end()) script_error(rule.pos, rule.member + " is not in the recursion group of the run type");
            std::size_t k = static_cast<std::size_t>(it - group.begin());
            if (!declares(k, rule.tag)) {
                throw Error(ErrorCode::UnknownOverrideTag, rule.member + " has no constructor " + rule.tag, rule.pos);
            }
            targets.push_back(k);
        } else {
            for (std::size_t k = 0; k < group.size(); ++k) {
                if (declares(k, rule.tag)) targets.push_back(k);
            }
            if (targets.empty()) {
                throw Error(ErrorCode::UnknownOverrideTag, "no type in the group has a constructor " + rule.tag,
                            rule.pos);
            }
        }
        for (std::size_t k : targets) {
            if (out[k].count(rule.tag) != 0) {
                script_error(rule.pos, "second rule for " + group[k] + "." + rule.tag);
            }
            out[k][rule.tag] = [body = rule.body, constants = constants_, group](
                                   const Scope& scope, const Attr& inh, const Value& subject, const Args& args) {
                HandlerFrame frame{scope, inh, subject, args, group};
                return Evaluator(*constants, &frame).eval(*body);
            };
        }
    }
    return out;
}

} // namespace gentrans::cli
