// Schema surface syntax: type expression helpers, the `.gt` parser and printer.

#include <algorithm>
#include <sstream>

#include "gentrans/detail/lexer.hpp"
#include "gentrans/schema.hpp"

namespace gentrans {

using detail::Token;
using detail::TokenStream;

std::string_view builtin_name(BuiltinKind kind) {
    switch (kind) {
    case BuiltinKind::Int: return "int";
    case BuiltinKind::String: return "string";
    case BuiltinKind::Bool: return "bool";
    case BuiltinKind::Unit: return "unit";
    }
    return "?";
}

TypeExpr TypeExpr::param(std::string name, SourcePos pos) {
    TypeExpr t;
    t.kind = Kind::Param;
    t.name = std::move(name);
    t.pos = pos;
    return t;
}

TypeExpr TypeExpr::apply(std::string name, std::vector<TypeExpr> args, SourcePos pos) {
    TypeExpr t;
    t.kind = Kind::Apply;
    t.name = std::move(name);
    t.args = std::move(args);
    t.pos = pos;
    return t;
}

TypeExpr TypeExpr::tuple(std::vector<TypeExpr> elems, SourcePos pos) {
    TypeExpr t;
    t.kind = Kind::Tuple;
    t.args = std::move(elems);
    t.pos = pos;
    return t;
}

TypeExpr TypeExpr::of_builtin(BuiltinKind kind, SourcePos pos) {
    TypeExpr t;
    t.kind = Kind::Builtin;
    t.builtin = kind;
    t.pos = pos;
    return t;
}

TypeExpr TypeExpr::seq(TypeExpr elem, SourcePos pos) {
    TypeExpr t;
    t.kind = Kind::Seq;
    t.args.push_back(std::move(elem));
    t.pos = pos;
    return t;
}

bool TypeExpr::is_closed() const {
    if (kind == Kind::Param) return false;
    return std::all_of(args.begin(), args.end(), [](const TypeExpr& a) { return a.is_closed(); });
}

bool operator==(const TypeExpr& a, const TypeExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case TypeExpr::Kind::Param: return a.name == b.name;
    case TypeExpr::Kind::Builtin: return a.builtin == b.builtin;
    case TypeExpr::Kind::Apply: return a.name == b.name && a.args == b.args;
    case TypeExpr::Kind::Tuple:
    case TypeExpr::Kind::Seq: return a.args == b.args;
    }
    return false;
}

bool operator==(const ConstructorDecl& a, const ConstructorDecl& b) {
    return a.name == b.name && a.is_record == b.is_record && a.args == b.args && a.fields == b.fields;
}

bool operator==(const TypeDecl& a, const TypeDecl& b) {
    return a.name == b.name && a.params == b.params && a.kind == b.kind && a.constructors == b.constructors &&
           a.alias_target == b.alias_target && a.members == b.members && a.plugins == b.plugins &&
           a.block == b.block;
}

const ConstructorDecl* TypeDecl::find_constructor(std::string_view tag) const {
    for (const auto& c : constructors) {
        if (c.name == tag) return &c;
    }
    return nullptr;
}

std::string to_string(const TypeExpr& t) {
    switch (t.kind) {
    case TypeExpr::Kind::Param: return "'" + t.name;
    case TypeExpr::Kind::Builtin: return std::string(builtin_name(t.builtin));
    case TypeExpr::Kind::Seq: return to_string(t.args[0]) + " list";
    case TypeExpr::Kind::Tuple: {
        std::string out = "(";
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i) out += " * ";
            out += to_string(t.args[i]);
        }
        return out + ")";
    }
    case TypeExpr::Kind::Apply: {
        if (t.args.empty()) return t.name;
        if (t.args.size() == 1) return to_string(t.args[0]) + " " + t.name;
        std::string out = "(";
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i) out += ", ";
            out += to_string(t.args[i]);
        }
        return out + ") " + t.name;
    }
    }
    return "?";
}

TypeExpr substitute(const TypeExpr& t, const TypeSubst& subst) {
    if (t.kind == TypeExpr::Kind::Param) {
        auto it = subst.find(t.name);
        return it == subst.end() ? t : it->second;
    }
    TypeExpr out = t;
    for (auto& a : out.args) a = substitute(a, subst);
    return out;
}

void Schema::add(TypeDecl decl) {
    if (index_.count(decl.name)) {
        throw Error(ErrorCode::DuplicateTypeName, "type '" + decl.name + "' is declared more than once", decl.pos);
    }
    index_.emplace(decl.name, decls_.size());
    decls_.push_back(std::move(decl));
}

const TypeDecl* Schema::find(std::string_view name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &decls_[it->second];
}

namespace {

bool is_reserved_type_name(std::string_view name) {
    return name == "int" || name == "string" || name == "bool" || name == "unit" || name == "list";
}

bool is_keyword(std::string_view name) {
    static constexpr std::string_view kws[] = {"type", "and", "of", "open", "with", "nonrec",
                                               "constraint", "private", "mutable"};
    return std::find(std::begin(kws), std::end(kws), name) != std::end(kws);
}

class SchemaParser {
public:
    explicit SchemaParser(std::string_view text) : ts_(detail::tokenize(text)) {}

    Schema parse_schema() {
        Schema schema;
        std::size_t block = 0;
        while (!ts_.at_end()) {
            if (!ts_.peek().is_keyword("type")) ts_.fail("'type'");
            ts_.next();
            reject_unsupported_after_type();
            schema.add(parse_decl(block));
            while (ts_.accept_keyword("and")) {
                schema.add(parse_decl(block));
            }
            ++block;
        }
        return schema;
    }

    TypeExpr parse_standalone_type() {
        TypeExpr t = parse_tuple_or_type();
        if (!ts_.at_end()) ts_.fail("end of type expression");
        return t;
    }

private:
    void reject_unsupported_after_type() {
        const Token& tok = ts_.peek();
        if (tok.is_keyword("nonrec")) {
            throw Error(ErrorCode::SyntaxError, "'nonrec' declarations are not supported", tok.pos);
        }
    }

    TypeDecl parse_decl(std::size_t block) {
        TypeDecl decl;
        decl.block = block;
        decl.pos = ts_.peek().pos;
        decl.params = parse_params();
        const Token& name = ts_.expect(Token::Kind::LowerIdent, "type name");
        if (is_keyword(name.text)) ts_.fail_at(name, "type name");
        if (is_reserved_type_name(name.text)) {
            throw Error(ErrorCode::SyntaxError, "'" + name.text + "' is a builtin type and cannot be redeclared",
                        name.pos);
        }
        decl.name = name.text;
        decl.pos = name.pos;
        if (ts_.peek().is_punct("+=")) {
            throw Error(ErrorCode::SyntaxError, "extensible types ('+=') are not supported", ts_.peek().pos);
        }
        ts_.expect_punct("=");
        if (ts_.peek().is_keyword("private")) {
            throw Error(ErrorCode::SyntaxError, "private types are not supported", ts_.peek().pos);
        }
        parse_body(decl);
        if (ts_.peek().is_keyword("constraint")) {
            throw Error(ErrorCode::SyntaxError, "type constraints are not supported", ts_.peek().pos);
        }
        if (ts_.accept_keyword("with")) {
            do {
                const Token& p = ts_.expect(Token::Kind::LowerIdent, "plugin name");
                decl.plugins.push_back(p.text);
            } while (ts_.accept_punct(","));
        }
        return decl;
    }

    std::vector<std::string> parse_params() {
        std::vector<std::string> params;
        if (ts_.peek().kind == Token::Kind::TyVar) {
            params.push_back(ts_.next().text);
        } else if (ts_.peek().is_punct("(") && ts_.peek(1).kind == Token::Kind::TyVar) {
            ts_.next();
            do {
                params.push_back(ts_.expect(Token::Kind::TyVar, "type parameter").text);
            } while (ts_.accept_punct(","));
            ts_.expect_punct(")");
        }
        return params;
    }

    void parse_body(TypeDecl& decl) {
        const Token& tok = ts_.peek();
        if (tok.is_punct("..")) {
            throw Error(ErrorCode::SyntaxError, "extensible types ('..') are not supported", tok.pos);
        }
        if (tok.is_keyword("open")) {
            ts_.next();
            decl.kind = TypeDecl::Kind::OpenVariants;
            decl.constructors = parse_constructors();
        } else if (tok.is_punct("|") || tok.kind == Token::Kind::UpperIdent) {
            decl.kind = TypeDecl::Kind::Variants;
            decl.constructors = parse_constructors();
        } else if (tok.is_punct("[")) {
            ts_.next();
            decl.kind = TypeDecl::Kind::Composition;
            ts_.accept_punct("|");
            do {
                if (ts_.peek().kind == Token::Kind::UpperIdent) {
                    decl.constructors.push_back(parse_constructor());
                } else {
                    decl.members.push_back(parse_type());
                }
            } while (ts_.accept_punct("|"));
            ts_.expect_punct("]");
        } else if (tok.is_punct("{")) {
            throw Error(ErrorCode::SyntaxError, "top-level record types are not supported; use a constructor",
                        tok.pos);
        } else {
            decl.kind = TypeDecl::Kind::Alias;
            decl.alias_target = parse_tuple_or_type();
        }
    }

    std::vector<ConstructorDecl> parse_constructors() {
        std::vector<ConstructorDecl> out;
        ts_.accept_punct("|");
        do {
            out.push_back(parse_constructor());
        } while (ts_.accept_punct("|"));
        return out;
    }

    ConstructorDecl parse_constructor() {
        ConstructorDecl ctor;
        const Token& name = ts_.expect(Token::Kind::UpperIdent, "constructor name");
        ctor.name = name.text;
        ctor.pos = name.pos;
        if (ts_.peek().is_punct(":")) {
            throw Error(ErrorCode::SyntaxError, "GADT constructor syntax is not supported", ts_.peek().pos);
        }
        if (!ts_.accept_keyword("of")) return ctor;
        if (ts_.accept_punct("{")) {
            ctor.is_record = true;
            do {
                if (ts_.peek().is_punct("}")) break;
                ts_.accept_keyword("mutable");
                const Token& field = ts_.expect(Token::Kind::LowerIdent, "field name");
                if (is_keyword(field.text)) ts_.fail_at(field, "field name");
                ts_.expect_punct(":");
                ctor.fields.push_back(field.text);
                ctor.args.push_back(parse_tuple_or_type());
            } while (ts_.accept_punct(";"));
            ts_.expect_punct("}");
            if (ctor.args.empty()) {
                throw Error(ErrorCode::SyntaxError, "record constructor needs at least one field", name.pos);
            }
            return ctor;
        }
        ctor.args.push_back(parse_type());
        while (ts_.accept_punct("*")) ctor.args.push_back(parse_type());
        return ctor;
    }

    // texpr { '*' texpr } -> Tuple when more than one.
    TypeExpr parse_tuple_or_type() {
        SourcePos pos = ts_.peek().pos;
        std::vector<TypeExpr> elems;
        elems.push_back(parse_type());
        while (ts_.accept_punct("*")) elems.push_back(parse_type());
        if (elems.size() == 1) return std::move(elems[0]);
        return TypeExpr::tuple(std::move(elems), pos);
    }

    TypeExpr parse_type() {
        SourcePos pos = ts_.peek().pos;
        std::vector<TypeExpr> args;
        bool have_atom = false;
        TypeExpr current;
        const Token& tok = ts_.peek();
        if (tok.kind == Token::Kind::TyVar) {
            current = TypeExpr::param(ts_.next().text, pos);
            have_atom = true;
        } else if (tok.kind == Token::Kind::LowerIdent && !is_keyword(tok.text)) {
            current = named(ts_.next(), {});
            have_atom = true;
        } else if (tok.is_punct("(")) {
            ts_.next();
            TypeExpr first = parse_tuple_or_type();
            if (ts_.accept_punct(",")) {
                args.push_back(std::move(first));
                do {
                    args.push_back(parse_tuple_or_type());
                } while (ts_.accept_punct(","));
                ts_.expect_punct(")");
                const Token& tc = ts_.peek();
                if (tc.kind != Token::Kind::LowerIdent || is_keyword(tc.text)) {
                    ts_.fail("type constructor after argument list");
                }
                current = named(ts_.next(), std::move(args));
            } else {
                ts_.expect_punct(")");
                current = std::move(first);
            }
            have_atom = true;
        }
        if (!have_atom) ts_.fail("type expression");
        while (ts_.peek().kind == Token::Kind::LowerIdent && !is_keyword(ts_.peek().text)) {
            std::vector<TypeExpr> one;
            one.push_back(std::move(current));
            current = named(ts_.next(), std::move(one));
        }
        return current;
    }

    static TypeExpr named(const Token& tok, std::vector<TypeExpr> args) {
        if (args.empty()) {
            if (tok.text == "int") return TypeExpr::of_builtin(BuiltinKind::Int, tok.pos);
            if (tok.text == "string") return TypeExpr::of_builtin(BuiltinKind::String, tok.pos);
            if (tok.text == "bool") return TypeExpr::of_builtin(BuiltinKind::Bool, tok.pos);
            if (tok.text == "unit") return TypeExpr::of_builtin(BuiltinKind::Unit, tok.pos);
        }
        if (tok.text == "list" && args.size() == 1) return TypeExpr::seq(std::move(args[0]), tok.pos);
        return TypeExpr::apply(tok.text, std::move(args), tok.pos);
    }

    TokenStream ts_;
};

void print_params(std::ostringstream& out, const std::vector<std::string>& params) {
    if (params.empty()) return;
    if (params.size() == 1) {
        out << "'" << params[0] << " ";
        return;
    }
    out << "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out << ", ";
        out << "'" << params[i];
    }
    out << ") ";
}

void print_constructor(std::ostringstream& out, const ConstructorDecl& c) {
    out << c.name;
    if (c.args.empty()) return;
    out << " of ";
    if (c.is_record) {
        out << "{ ";
        for (std::size_t i = 0; i < c.args.size(); ++i) {
            if (i) out << "; ";
            out << c.fields[i] << " : " << to_string(c.args[i]);
        }
        out << " }";
        return;
    }
    for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) out << " * ";
        out << to_string(c.args[i]);
    }
}

} // namespace

Schema parse_schema(std::string_view text) { return SchemaParser(text).parse_schema(); }

TypeExpr parse_type_expr(std::string_view text) { return SchemaParser(text).parse_standalone_type(); }

std::string print_schema(const Schema& schema) {
    std::ostringstream out;
    const auto& decls = schema.decls();
    for (std::size_t i = 0; i < decls.size(); ++i) {
        const TypeDecl& d = decls[i];
        bool continues = i > 0 && decls[i - 1].block == d.block;
        out << (continues ? "and " : "type ");
        print_params(out, d.params);
        out << d.name << " = ";
        switch (d.kind) {
        case TypeDecl::Kind::OpenVariants: out << "open "; [[fallthrough]];
        case TypeDecl::Kind::Variants:
            for (std::size_t k = 0; k < d.constructors.size(); ++k) {
                if (k) out << " | ";
                print_constructor(out, d.constructors[k]);
            }
            break;
        case TypeDecl::Kind::Alias: out << to_string(*d.alias_target); break;
        case TypeDecl::Kind::Composition: {
            out << "[ ";
            bool first = true;
            for (const auto& m : d.members) {
                if (!first) out << " | ";
                first = false;
                out << to_string(m);
            }
            for (const auto& c : d.constructors) {
                if (!first) out << " | ";
                first = false;
                print_constructor(out, c);
            }
            out << " ]";
            break;
        }
        }
        if (!d.plugins.empty()) {
            out << " with ";
            for (std::size_t k = 0; k < d.plugins.size(); ++k) {
                if (k) out << ", ";
                out << d.plugins[k];
            }
        }
        out << "\n";
    }
    return out.str();
}

} // namespace gentrans
