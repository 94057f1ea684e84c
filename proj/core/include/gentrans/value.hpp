#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gentrans/schema.hpp"

namespace gentrans {

using BigInt = boost::multiprecision::cpp_int;

/// Immutable, structurally compared value conforming (or not) to some schema
/// type. Copies share the underlying node.
class Value {
public:
    enum class Kind { Con, Rec, Int, Str, Bool, Unit, Tuple, Seq };

    Value(); // unit

    static Value con(std::string tag, std::vector<Value> args = {});
    static Value rec(std::string tag, std::vector<std::pair<std::string, Value>> fields);
    static Value integer(BigInt i);
    static Value integer(long long i) { return integer(BigInt(i)); }
    static Value str(std::string s);
    static Value boolean(bool b);
    static Value unit();
    static Value tuple(std::vector<Value> elems);
    static Value seq(std::vector<Value> elems);

    Kind kind() const;
    bool is(Kind k) const { return kind() == k; }
    bool is_constructor() const { return kind() == Kind::Con || kind() == Kind::Rec; }

    /// Constructor tag (Con/Rec).
    const std::string& tag() const;
    /// Constructor arguments / record field values / tuple or sequence elements.
    std::span<const Value> items() const;
    /// Record field names, parallel to items(); empty otherwise.
    std::span<const std::string> field_names() const;
    const Value* field(std::string_view name) const;

    const BigInt& as_int() const;
    const std::string& as_str() const;
    bool as_bool() const;

    /// Identity of the shared node; equal pointers imply equal values.
    const void* identity() const { return node_.get(); }
    std::size_t hash() const;

    friend bool operator==(const Value& a, const Value& b);

private:
    struct Node;
    struct NodeFactory;
    explicit Value(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

std::string_view kind_name(Value::Kind kind);

/// Canonical literal form: `Const 5`, `Binop ("+", Const 1, Var "x")`, `()`, `["x"; "y"]`,
/// `Tag {f = 1; g = "s"}`, `(1, true)`.
std::string print_value(const Value& v);

/// Type-directed literal parsing. `expected` must be closed.
Value parse_value(std::string_view text, const ValidatedSchema& schema, const TypeExpr& expected);

/// Literal parsing without a type: constructor arity follows the literal shape
/// (`Tag (a, b)` has two arguments). Used for free-form attributes.
Value parse_untyped_value(std::string_view text);

struct Conformance {
    bool ok = true;
    std::string path;     // e.g. "Binop.2.Var.0"
    std::string expected; // description of what was expected there
    std::string found;    // description of what was found

    explicit operator bool() const { return ok; }
    std::string describe() const;
};

/// Checks `value` against the closed type `expected`. Open-variant and
/// composed types accept any tag from their (flattened) constructor set.
Conformance conforms(const Value& value, const TypeExpr& expected, const ValidatedSchema& schema);

/// Throws NonConformingSubject (or `code`) when the value does not conform.
void require_conforms(const Value& value, const TypeExpr& expected, const ValidatedSchema& schema,
                      ErrorCode code = ErrorCode::NonConformingSubject);

} // namespace gentrans
