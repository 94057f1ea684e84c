#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/error.hpp"

namespace gentrans {

enum class BuiltinKind { Int, String, Bool, Unit };

std::string_view builtin_name(BuiltinKind kind);

/// A type expression of the schema language. Positions are carried for
/// diagnostics only and are ignored by equality.
struct TypeExpr {
    enum class Kind { Param, Apply, Tuple, Builtin, Seq };

    Kind kind = Kind::Builtin;
    std::string name;           // Param: parameter name without the quote; Apply: type name
    std::vector<TypeExpr> args; // Apply: arguments; Tuple: elements; Seq: exactly one element
    BuiltinKind builtin = BuiltinKind::Unit;
    SourcePos pos;

    static TypeExpr param(std::string name, SourcePos pos = {});
    static TypeExpr apply(std::string name, std::vector<TypeExpr> args = {}, SourcePos pos = {});
    static TypeExpr tuple(std::vector<TypeExpr> elems, SourcePos pos = {});
    static TypeExpr of_builtin(BuiltinKind kind, SourcePos pos = {});
    static TypeExpr seq(TypeExpr elem, SourcePos pos = {});

    bool is_closed() const;

    friend bool operator==(const TypeExpr& a, const TypeExpr& b);
};

/// Renders in the surface syntax: `'a`, `int`, `string list`, `(a, b) t`, `(int * string)`.
std::string to_string(const TypeExpr& t);

using TypeSubst = std::map<std::string, TypeExpr, std::less<>>;

TypeExpr substitute(const TypeExpr& t, const TypeSubst& subst);

struct ConstructorDecl {
    std::string name;
    bool is_record = false;
    std::vector<TypeExpr> args;
    std::vector<std::string> fields; // record field names, parallel to args
    SourcePos pos;

    std::size_t arity() const { return args.size(); }

    friend bool operator==(const ConstructorDecl& a, const ConstructorDecl& b);
};

struct TypeDecl {
    enum class Kind { Variants, OpenVariants, Alias, Composition };

    std::string name;
    std::vector<std::string> params;
    Kind kind = Kind::Variants;
    std::vector<ConstructorDecl> constructors; // variants, or a composition's extra constructors
    std::optional<TypeExpr> alias_target;
    std::vector<TypeExpr> members; // composition constituents
    std::vector<std::string> plugins; // `with p1, p2`
    std::size_t block = 0;            // index of the `type ... and ...` statement
    SourcePos pos;

    bool is_open() const { return kind == Kind::OpenVariants || kind == Kind::Composition; }
    const ConstructorDecl* find_constructor(std::string_view tag) const;

    friend bool operator==(const TypeDecl& a, const TypeDecl& b);
};

/// Ordered declarations as written; unvalidated.
class Schema {
public:
    Schema() = default;

    void add(TypeDecl decl);
    const std::vector<TypeDecl>& decls() const { return decls_; }
    const TypeDecl* find(std::string_view name) const;
    bool empty() const { return decls_.empty(); }

    friend bool operator==(const Schema& a, const Schema& b) { return a.decls_ == b.decls_; }

private:
    std::vector<TypeDecl> decls_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// Parses `.gt` text. Only syntax is checked (plus duplicate type names).
Schema parse_schema(std::string_view text);

/// Prints a schema back in surface syntax; the output reparses to an equal schema.
std::string print_schema(const Schema& schema);

/// A constructor of some (possibly composed) type with its argument types
/// instantiated for a particular application of that type.
struct InstCtor {
    std::string tag;
    std::string owner; // declaration that introduced the constructor
    const ConstructorDecl* decl = nullptr;
    std::vector<TypeExpr> arg_types;
};

class ValidatedSchema {
public:
    ValidatedSchema();

    const Schema& schema() const;
    const std::vector<TypeDecl>& decls() const { return schema().decls(); }
    const TypeDecl& decl(std::string_view name) const; // throws UnknownType
    const TypeDecl* find(std::string_view name) const { return schema().find(name); }

    /// Strongly connected components of the dependency graph, dependencies first.
    const std::vector<std::vector<std::string>>& groups() const;
    /// The recursion group containing `name`, in declaration order.
    const std::vector<std::string>& group_of(std::string_view name) const;
    std::size_t index_in_group(std::string_view name) const;

    /// Follows alias declarations from `t` (an Apply) until a non-alias
    /// declaration is reached; returns that declaration applied to the
    /// accordingly substituted arguments.
    TypeExpr resolve_alias(const TypeExpr& t) const;

    /// Full constructor set of a closed-or-parametric application `t` of a
    /// declared type, compositions flattened in member order, extras last.
    std::vector<InstCtor> constructors(const TypeExpr& t) const;
    std::vector<InstCtor> constructors(std::string_view type_name) const;

    /// For a composition declaration: the direct member (declaration name)
    /// owning `tag`, or an empty string when the tag is one of its extra
    /// constructors. nullopt when the tag is unknown to the composition.
    std::optional<std::string> constituent_of(std::string_view composition, std::string_view tag) const;

    /// Declarations introducing an open-variant constructor with this tag.
    std::vector<std::string> open_tag_owners(std::string_view tag) const;

    /// The declared type applied to its own parameters.
    TypeExpr self_type(std::string_view name) const;

private:
    friend ValidatedSchema validate(Schema schema);
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

ValidatedSchema validate(Schema schema);

/// Convenience: recursion group lookup by name (throws UnknownType).
std::vector<std::string> recursion_group_of(const ValidatedSchema& schema, std::string_view type_name);

/// Parses a standalone type expression (e.g. a CLI `--type` argument).
TypeExpr parse_type_expr(std::string_view text);

/// Checks names and arities of a type expression against a validated schema;
/// parameters must be in `bound` (empty for closed expressions).
void check_type_expr(const ValidatedSchema& schema, const TypeExpr& t, const std::vector<std::string>& bound = {});

} // namespace gentrans
