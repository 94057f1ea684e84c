// Value literal parsing (typed and untyped) and conformance checking.

#include <algorithm>
#include <optional>

#include "gentrans/detail/lexer.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

using detail::Token;
using detail::TokenStream;

namespace {

struct Literal {
    enum class Kind { Con, Rec, Int, Str, Bool, Unit, Tuple, Seq };
    Kind kind = Kind::Unit;
    std::string text;
    BigInt number;
    bool flag = false;
    std::vector<Literal> items; // Con: zero or one argument literal; Rec: field values
    std::vector<std::string> names;
    SourcePos pos;
};

class LiteralParser {
public:
    explicit LiteralParser(std::string_view text) : ts_(detail::tokenize(text)) {}

    Literal parse_all() {
        Literal lit = parse();
        if (!ts_.at_end()) ts_.fail("end of value");
        return lit;
    }

private:
    Literal parse() {
        if (ts_.peek().kind == Token::Kind::UpperIdent) {
            Literal lit;
            lit.pos = ts_.peek().pos;
            lit.text = ts_.next().text;
            if (ts_.peek().is_punct("{")) {
                lit.kind = Literal::Kind::Rec;
                ts_.next();
                do {
                    if (ts_.peek().is_punct("}")) break;
                    lit.names.push_back(ts_.expect(Token::Kind::LowerIdent, "field name").text);
                    ts_.expect_punct("=");
                    lit.items.push_back(parse());
                } while (ts_.accept_punct(";"));
                ts_.expect_punct("}");
                return lit;
            }
            lit.kind = Literal::Kind::Con;
            if (starts_atom(ts_.peek())) lit.items.push_back(parse_atom());
            return lit;
        }
        return parse_atom();
    }

    static bool starts_atom(const Token& t) {
        return t.kind == Token::Kind::Int || t.kind == Token::Kind::String || t.kind == Token::Kind::UpperIdent ||
               t.is_keyword("true") || t.is_keyword("false") || t.is_punct("(") || t.is_punct("[") ||
               t.is_punct("-");
    }

    Literal parse_atom() {
        Literal lit;
        const Token& tok = ts_.peek();
        lit.pos = tok.pos;
        if (tok.kind == Token::Kind::Int) {
            lit.kind = Literal::Kind::Int;
            lit.number = BigInt(ts_.next().text);
        } else if (tok.is_punct("-") && ts_.peek(1).kind == Token::Kind::Int) {
            ts_.next();
            lit.kind = Literal::Kind::Int;
            lit.number = -BigInt(ts_.next().text);
        } else if (tok.kind == Token::Kind::String) {
            lit.kind = Literal::Kind::Str;
            lit.text = ts_.next().text;
        } else if (tok.is_keyword("true") || tok.is_keyword("false")) {
            lit.kind = Literal::Kind::Bool;
            lit.flag = ts_.next().text == "true";
        } else if (tok.kind == Token::Kind::UpperIdent) {
            lit.kind = Literal::Kind::Con;
            lit.text = ts_.next().text;
        } else if (tok.is_punct("(")) {
            ts_.next();
            if (ts_.accept_punct(")")) {
                lit.kind = Literal::Kind::Unit;
                return lit;
            }
            Literal first = parse();
            if (!ts_.peek().is_punct(",")) {
                ts_.expect_punct(")");
                return first;
            }
            lit.kind = Literal::Kind::Tuple;
            lit.items.push_back(std::move(first));
            while (ts_.accept_punct(",")) lit.items.push_back(parse());
            ts_.expect_punct(")");
        } else if (tok.is_punct("[")) {
            ts_.next();
            lit.kind = Literal::Kind::Seq;
            if (!ts_.accept_punct("]")) {
                do {
                    if (ts_.peek().is_punct("]")) break;
                    lit.items.push_back(parse());
                } while (ts_.accept_punct(";"));
                ts_.expect_punct("]");
            }
        } else {
            ts_.fail("value");
        }
        return lit;
    }

    TokenStream ts_;
};

std::string describe_literal(const Literal& lit) {
    switch (lit.kind) {
    case Literal::Kind::Con:
    case Literal::Kind::Rec: return "constructor " + lit.text;
    case Literal::Kind::Int: return "int " + lit.number.str();
    case Literal::Kind::Str: return "string " + detail::quote_string(lit.text);
    case Literal::Kind::Bool: return lit.flag ? "true" : "false";
    case Literal::Kind::Unit: return "()";
    case Literal::Kind::Tuple: return std::to_string(lit.items.size()) + "-tuple";
    case Literal::Kind::Seq: return "list";
    }
    return "?";
}

std::string join_path(const std::string& base, const std::string& seg) {
    return base.empty() ? seg : base + "." + seg;
}

bool tag_declared_anywhere(const ValidatedSchema& schema, std::string_view tag) {
    for (const auto& d : schema.decls()) {
        if (d.find_constructor(tag)) return true;
    }
    return false;
}

class TypedConverter {
public:
    explicit TypedConverter(const ValidatedSchema& schema) : schema_(schema) {}

    Value convert(const Literal& lit, const TypeExpr& t, const std::string& path) {
        switch (t.kind) {
        case TypeExpr::Kind::Param:
            throw Error(ErrorCode::UnboundParam,
                        "cannot read a value of open type '" + to_string(t) + "'; bind the parameter first");
        case TypeExpr::Kind::Builtin:
            switch (t.builtin) {
            case BuiltinKind::Int:
                expect(lit, Literal::Kind::Int, t, path);
                return Value::integer(lit.number);
            case BuiltinKind::String:
                expect(lit, Literal::Kind::Str, t, path);
                return Value::str(lit.text);
            case BuiltinKind::Bool:
                expect(lit, Literal::Kind::Bool, t, path);
                return Value::boolean(lit.flag);
            case BuiltinKind::Unit: expect(lit, Literal::Kind::Unit, t, path); return Value::unit();
            }
            break;
        case TypeExpr::Kind::Tuple: {
            expect(lit, Literal::Kind::Tuple, t, path);
            if (lit.items.size() != t.args.size()) mismatch(lit, t, path);
            std::vector<Value> elems;
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                elems.push_back(convert(lit.items[i], t.args[i], join_path(path, std::to_string(i))));
            }
            return Value::tuple(std::move(elems));
        }
        case TypeExpr::Kind::Seq: {
            expect(lit, Literal::Kind::Seq, t, path);
            std::vector<Value> elems;
            for (std::size_t i = 0; i < lit.items.size(); ++i) {
                elems.push_back(convert(lit.items[i], t.args[0], join_path(path, std::to_string(i))));
            }
            return Value::seq(std::move(elems));
        }
        case TypeExpr::Kind::Apply: return convert_constructor(lit, t, path);
        }
        mismatch(lit, t, path);
    }

private:
    Value convert_constructor(const Literal& lit, const TypeExpr& t, const std::string& path) {
        if (lit.kind != Literal::Kind::Con && lit.kind != Literal::Kind::Rec) mismatch(lit, t, path);
        auto ctors = schema_.constructors(t);
        auto it = std::find_if(ctors.begin(), ctors.end(), [&](const InstCtor& c) { return c.tag == lit.text; });
        if (it == ctors.end()) {
            if (!tag_declared_anywhere(schema_, lit.text)) {
                throw Error(ErrorCode::UnknownConstructor, "unknown constructor '" + lit.text + "'", lit.pos);
            }
            mismatch(lit, t, path);
        }
        const InstCtor& c = *it;
        std::string here = join_path(path, c.tag);
        if (c.decl->is_record) {
            if (lit.kind != Literal::Kind::Rec) {
                throw Error(ErrorCode::TypeMismatch,
                            "at " + display(path) + ": constructor " + c.tag + " takes a record {...}", lit.pos);
            }
            std::vector<std::pair<std::string, Value>> fields;
            for (std::size_t i = 0; i < c.decl->fields.size(); ++i) {
                const std::string& name = c.decl->fields[i];
                auto f = std::find(lit.names.begin(), lit.names.end(), name);
                if (f == lit.names.end()) {
                    throw Error(ErrorCode::TypeMismatch,
                                "at " + display(here) + ": missing field '" + name + "'", lit.pos);
                }
                const Literal& fl = lit.items[static_cast<std::size_t>(f - lit.names.begin())];
                fields.emplace_back(name, convert(fl, c.arg_types[i], join_path(here, name)));
            }
            if (lit.names.size() != c.decl->fields.size()) {
                throw Error(ErrorCode::TypeMismatch, "at " + display(here) + ": unexpected extra field", lit.pos);
            }
            return Value::rec(c.tag, std::move(fields));
        }
        if (lit.kind == Literal::Kind::Rec) mismatch(lit, t, path);
        const std::size_t arity = c.arg_types.size();
        std::vector<Value> args;
        if (arity == 0) {
            if (!lit.items.empty()) arity_error(lit, c, here);
        } else if (arity == 1) {
            if (lit.items.size() != 1) arity_error(lit, c, here);
            args.push_back(convert(lit.items[0], c.arg_types[0], join_path(here, "0")));
        } else {
            if (lit.items.size() != 1 || lit.items[0].kind != Literal::Kind::Tuple ||
                lit.items[0].items.size() != arity) {
                arity_error(lit, c, here);
            }
            for (std::size_t i = 0; i < arity; ++i) {
                args.push_back(convert(lit.items[0].items[i], c.arg_types[i], join_path(here, std::to_string(i))));
            }
        }
        return Value::con(c.tag, std::move(args));
    }

    static std::string display(const std::string& path) { return path.empty() ? "<root>" : path; }

    [[noreturn]] static void arity_error(const Literal& lit, const InstCtor& c, const std::string& path) {
        throw Error(ErrorCode::TypeMismatch,
                    "at " + display(path) + ": constructor " + c.tag + " expects " +
                        std::to_string(c.arg_types.size()) + " argument(s)",
                    lit.pos);
    }

    static void expect(const Literal& lit, Literal::Kind k, const TypeExpr& t, const std::string& path) {
        if (lit.kind != k) mismatch(lit, t, path);
    }

    [[noreturn]] static void mismatch(const Literal& lit, const TypeExpr& t, const std::string& path) {
        throw Error(ErrorCode::TypeMismatch,
                    "at " + display(path) + ": expected " + to_string(t) + ", found " + describe_literal(lit),
                    lit.pos);
    }

    const ValidatedSchema& schema_;
};

Value convert_untyped(const Literal& lit) {
    switch (lit.kind) {
    case Literal::Kind::Int: return Value::integer(lit.number);
    case Literal::Kind::Str: return Value::str(lit.text);
    case Literal::Kind::Bool: return Value::boolean(lit.flag);
    case Literal::Kind::Unit: return Value::unit();
    case Literal::Kind::Tuple:
    case Literal::Kind::Seq: {
        std::vector<Value> elems;
        for (const auto& i : lit.items) elems.push_back(convert_untyped(i));
        return lit.kind == Literal::Kind::Tuple ? Value::tuple(std::move(elems)) : Value::seq(std::move(elems));
    }
    case Literal::Kind::Rec: {
        std::vector<std::pair<std::string, Value>> fields;
        for (std::size_t i = 0; i < lit.items.size(); ++i) fields.emplace_back(lit.names[i], convert_untyped(lit.items[i]));
        return Value::rec(lit.text, std::move(fields));
    }
    case Literal::Kind::Con: {
        std::vector<Value> args;
        if (!lit.items.empty()) {
            const Literal& a = lit.items[0];
            if (a.kind == Literal::Kind::Tuple) {
                for (const auto& i : a.items) args.push_back(convert_untyped(i));
            } else {
                args.push_back(convert_untyped(a));
            }
        }
        return Value::con(lit.text, std::move(args));
    }
    }
    return Value::unit();
}

std::string describe_value(const Value& v) {
    if (v.is_constructor()) return "constructor " + v.tag();
    std::string printed = print_value(v);
    if (printed.size() > 40) printed = printed.substr(0, 37) + "...";
    return std::string(kind_name(v.kind())) + " " + printed;
}

class ConformanceChecker {
public:
    explicit ConformanceChecker(const ValidatedSchema& schema) : schema_(schema) {}

    Conformance check(const Value& v, const TypeExpr& t, const std::string& path) {
        auto fail = [&](std::string expected) {
            Conformance c;
            c.ok = false;
            c.path = path;
            c.expected = std::move(expected);
            c.found = describe_value(v);
            return c;
        };
        switch (t.kind) {
        case TypeExpr::Kind::Param: return fail("closed type (unbound parameter '" + t.name + ")");
        case TypeExpr::Kind::Builtin: {
            Value::Kind want = Value::Kind::Unit;
            switch (t.builtin) {
            case BuiltinKind::Int: want = Value::Kind::Int; break;
            case BuiltinKind::String: want = Value::Kind::Str; break;
            case BuiltinKind::Bool: want = Value::Kind::Bool; break;
            case BuiltinKind::Unit: want = Value::Kind::Unit; break;
            }
            if (v.kind() != want) return fail(to_string(t));
            return {};
        }
        case TypeExpr::Kind::Tuple: {
            if (!v.is(Value::Kind::Tuple) || v.items().size() != t.args.size()) return fail(to_string(t));
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                auto r = check(v.items()[i], t.args[i], join_path(path, std::to_string(i)));
                if (!r) return r;
            }
            return {};
        }
        case TypeExpr::Kind::Seq: {
            if (!v.is(Value::Kind::Seq)) return fail(to_string(t));
            for (std::size_t i = 0; i < v.items().size(); ++i) {
                auto r = check(v.items()[i], t.args[0], join_path(path, std::to_string(i)));
                if (!r) return r;
            }
            return {};
        }
        case TypeExpr::Kind::Apply: {
            if (!v.is_constructor()) return fail(to_string(t));
            auto ctors = schema_.constructors(t);
            auto it = std::find_if(ctors.begin(), ctors.end(), [&](const InstCtor& c) { return c.tag == v.tag(); });
            if (it == ctors.end()) return fail("constructor of " + to_string(t));
            const InstCtor& c = *it;
            std::string here = join_path(path, c.tag);
            if (c.decl->is_record != v.is(Value::Kind::Rec) || v.items().size() != c.arg_types.size()) {
                return fail(c.tag + " with " + std::to_string(c.arg_types.size()) +
                            (c.decl->is_record ? " field(s)" : " argument(s)"));
            }
            for (std::size_t i = 0; i < c.arg_types.size(); ++i) {
                std::string seg = c.decl->is_record ? c.decl->fields[i] : std::to_string(i);
                if (c.decl->is_record && v.field_names()[i] != c.decl->fields[i]) {
                    return fail(c.tag + " field '" + c.decl->fields[i] + "'");
                }
                auto r = check(v.items()[i], c.arg_types[i], join_path(here, seg));
                if (!r) return r;
            }
            return {};
        }
        }
        return fail(to_string(t));
    }

private:
    const ValidatedSchema& schema_;
};

} // namespace

Value parse_value(std::string_view text, const ValidatedSchema& schema, const TypeExpr& expected) {
    Literal lit = LiteralParser(text).parse_all();
    return TypedConverter(schema).convert(lit, expected, "");
}

Value parse_untyped_value(std::string_view text) { return convert_untyped(LiteralParser(text).parse_all()); }

std::string Conformance::describe() const {
    if (ok) return "ok";
    return "at " + (path.empty() ? std::string("<root>") : path) + ": expected " + expected + ", found " + found;
}

Conformance conforms(const Value& value, const TypeExpr& expected, const ValidatedSchema& schema) {
    return ConformanceChecker(schema).check(value, expected, "");
}

void require_conforms(const Value& value, const TypeExpr& expected, const ValidatedSchema& schema, ErrorCode code) {
    auto r = conforms(value, expected, schema);
    if (!r) throw Error(code, "value does not conform to " + to_string(expected) + " " + r.describe());
}

} // namespace gentrans
