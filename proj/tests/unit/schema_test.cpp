#include <doctest.h>

#include "check_error.hpp"
#include "gentrans/corpus.hpp"
#include "gentrans/schema.hpp"

using namespace gentrans;

namespace {

ValidatedSchema check(std::string_view text) { return validate(parse_schema(text)); }

TypeExpr ty(std::string_view text) { return parse_type_expr(text); }

} // namespace

TEST_SUITE("schema") {

TEST_CASE("expr declaration parses into three closed variants") {
    Schema s = parse_schema("type expr = Const of int | Var of string | Binop of string * expr * expr");
    REQUIRE(s.decls().size() == 1);
    const TypeDecl& d = s.decls()[0];
    CHECK(d.name == "expr");
    CHECK(d.params.empty());
    CHECK(d.kind == TypeDecl::Kind::Variants);
    REQUIRE(d.constructors.size() == 3);
    CHECK(d.constructors[0].name == "Const");
    CHECK(d.constructors[0].args == std::vector{TypeExpr::of_builtin(BuiltinKind::Int)});
    CHECK(d.constructors[1].args == std::vector{TypeExpr::of_builtin(BuiltinKind::String)});
    CHECK(d.constructors[2].args == std::vector{TypeExpr::of_builtin(BuiltinKind::String), TypeExpr::apply("expr"),
                                                TypeExpr::apply("expr")});
}

TEST_CASE("parametric logic declaration") {
    Schema s = parse_schema("type 'a logic = V of int | Value of 'a");
    const TypeDecl& d = s.decls().at(0);
    CHECK(d.params == std::vector<std::string>{"a"});
    CHECK(d.constructors[1].args == std::vector{TypeExpr::param("a")});
}

TEST_CASE("empty input is an empty schema") {
    CHECK(parse_schema("").empty());
    CHECK(parse_schema("  (* only a comment *)\n").empty());
    CHECK(check("").groups().empty());
}

TEST_CASE("leading bar, records, lists, tuples, nullary constructors") {
    Schema s = parse_schema(R"(
type shape =
  | Circle of { radius : int }
  | Rect of { width : int; height : int }
  | Group of { name : string; items : shape list }
  | Pair of (int * bool) list
  | Empty
)");
    const TypeDecl& d = s.decls().at(0);
    REQUIRE(d.constructors.size() == 5);
    CHECK(d.constructors[0].is_record);
    CHECK(d.constructors[1].fields == std::vector<std::string>{"width", "height"});
    CHECK(d.constructors[2].args[1] == TypeExpr::seq(TypeExpr::apply("shape")));
    CHECK(d.constructors[3].args[0] ==
          TypeExpr::seq(TypeExpr::tuple({TypeExpr::of_builtin(BuiltinKind::Int), TypeExpr::of_builtin(BuiltinKind::Bool)})));
    CHECK(d.constructors[4].arity() == 0);
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("syntax errors carry positions") {
    try {
        parse_schema("type t =\n  | A of\n");
        FAIL("expected a syntax error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
        REQUIRE(e.pos().has_value());
        CHECK(e.pos()->line == 3);
    }
    CHECK_ERROR(parse_schema("type = A"), SyntaxError);
    CHECK_ERROR(parse_schema("type t = a of int"), SyntaxError);
    CHECK_ERROR(parse_schema("type t = A of int type"), SyntaxError);
    CHECK_ERROR(parse_schema("type t = A of int (* unterminated"), SyntaxError);
}

TEST_CASE("unsupported declaration forms are rejected, not degraded") {
    CHECK_ERROR(parse_schema("type nonrec t = A"), SyntaxError);
    CHECK_ERROR(parse_schema("type t += A"), SyntaxError);
    CHECK_ERROR(parse_schema("type t = A : t"), SyntaxError);
}

TEST_CASE("duplicate type names are reported by the parser") {
    CHECK_ERROR(parse_schema("type t = A\ntype t = B"), DuplicateTypeName);
}

TEST_CASE("name and arity errors") {
    CHECK_ERROR(check("type t = A of u"), UnknownType);
    CHECK_ERROR(check("type 'a t = A of 'a\ntype u = B of t"), ArityMismatch);
    CHECK_ERROR(check("type t = A of int list list list\ntype u = B of (int, int) t"), ArityMismatch);
    CHECK_ERROR(check("type t = A of 'a"), UnboundParam);
    CHECK_ERROR(check("type ('a, 'a) t = A of 'a"), DuplicateParam);
    CHECK_ERROR(check("type t = A | A"), DuplicateConstructor);
    CHECK_ERROR(check("type t = A of { x : int; x : int }"), DuplicateField);
}

TEST_CASE("mutual recursion forms one group in declaration order") {
    ValidatedSchema s = check(corpus::mutual_schema_text());
    CHECK(s.group_of("expr") == std::vector<std::string>{"expr", "def"});
    CHECK(s.group_of("def") == std::vector<std::string>{"expr", "def"});
    CHECK(recursion_group_of(s, "def") == std::vector<std::string>{"expr", "def"});
    CHECK(s.index_in_group("def") == 1);
    CHECK_ERROR(recursion_group_of(s, "nope"), UnknownType);
}

TEST_CASE("an isolated type is a singleton group") {
    ValidatedSchema s = check(corpus::expr_schema_text());
    CHECK(recursion_group_of(s, "expr") == std::vector<std::string>{"expr"});
}

TEST_CASE("lambda declarations: named is its own group") {
    ValidatedSchema s = check(corpus::lambda_schema_text());
    CHECK(recursion_group_of(s, "named") == std::vector<std::string>{"named"});
    CHECK(recursion_group_of(s, "nameless") == std::vector<std::string>{"nameless"});
}

TEST_CASE("groups come dependencies first") {
    ValidatedSchema s = check("type b = B of a\ntype a = A of int");
    REQUIRE(s.groups().size() == 2);
    CHECK(s.groups()[0] == std::vector<std::string>{"a"});
    CHECK(s.groups()[1] == std::vector<std::string>{"b"});
}

TEST_CASE("permuting independent declarations keeps the groups") {
    ValidatedSchema s1 = check("type x = X of int\ntype y = Y of bool\ntype z = Z of x * y");
    ValidatedSchema s2 = check("type y = Y of bool\ntype z = Z of x * y\ntype x = X of int");
    for (const char* n : {"x", "y", "z"}) CHECK(s1.group_of(n) == s2.group_of(n));
    CHECK(s1.groups().back() == std::vector<std::string>{"z"});
    CHECK(s2.groups().back() == std::vector<std::string>{"z"});
}

TEST_CASE("non-regular recursion is rejected") {
    CHECK_ERROR(check("type ('a, 'b) a = A of 'b b * 'b b\nand 'b b = X of ('b, 'b) a"), NonRegularRecursion);
    CHECK_ERROR(check("type 'a t = Leaf of 'a | Node of ('a * 'a) t"), NonRegularRecursion);
    CHECK_ERROR(check("type 'a t = Leaf | Node of int t"), NonRegularRecursion);
    CHECK_NOTHROW(check("type 'a t = Leaf | Node of 'a * 'a t * 'a t"));
}

TEST_CASE("a group that is not essentially mutual is rejected") {
    CHECK_ERROR(check("type a = A of b\nand b = int"), NonEssentialGroup);
    CHECK_ERROR(check("type a = A of int\nand b = B of a"), NonEssentialGroup);
    try {
        check("type a = A of b\nand b = int");
    } catch (const Error& e) {
        CHECK(e.message().find("split") != std::string::npos);
    }
}

TEST_CASE("aliases: constructor applications only, recursion allowed") {
    ValidatedSchema s = check(corpus::logic_schema_text());
    CHECK(s.decl("expr").kind == TypeDecl::Kind::Alias);
    CHECK(s.resolve_alias(ty("expr")) == ty("(string, int, expr) a_expr"));
    CHECK(s.resolve_alias(ty("lexpr")) == ty("(string logic, int logic, lexpr) a_expr logic"));
    CHECK(s.constructors("lexpr").size() == 2);
    CHECK_ERROR(check("type t = int"), InvalidAlias);
    CHECK_ERROR(check("type t = int * int"), InvalidAlias);
    CHECK_ERROR(check("type t = u\ntype u = t"), CyclicDefinition);
}

TEST_CASE("compositions flatten members, extras last") {
    ValidatedSchema s = check(corpus::lambda_schema_text());
    std::vector<std::string> tags;
    for (const auto& c : s.constructors("named")) tags.push_back(c.tag);
    CHECK(tags == std::vector<std::string>{"App", "Var", "Abs"});
    CHECK(s.constituent_of("term", "App") == std::optional<std::string>("lam"));
    CHECK(s.constituent_of("term", "Abs") == std::optional<std::string>("abs"));
    CHECK(s.constituent_of("term", "Nope") == std::nullopt);
    CHECK(s.constituent_of("nameless", "Abs") == std::optional<std::string>(""));
    auto named = s.constructors(ty("named"));
    CHECK(named[2].arg_types == std::vector{TypeExpr::of_builtin(BuiltinKind::String), ty("named")});
    CHECK(s.open_tag_owners("Abs") == std::vector<std::string>{"abs", "nameless"});
}

TEST_CASE("composition members must be open; clashing tags must agree") {
    CHECK_ERROR(check("type a = A\ntype b = open B\ntype c = [ a | b ]"), InvalidComposition);
    CHECK_ERROR(check("type a = open A of int\ntype b = open A of string\ntype c = [ a | b ]"),
                AmbiguousTagInComposition);
    CHECK_NOTHROW(check("type a = open A of int\ntype b = open A of int | B\ntype c = [ a | b ]"));
}

TEST_CASE("print and reparse give an equal schema") {
    for (std::string_view text : {corpus::expr_schema_text(), corpus::mutual_schema_text(), corpus::logic_schema_text(),
                                  corpus::lambda_schema_text()}) {
        Schema s = parse_schema(text);
        CHECK(parse_schema(print_schema(s)) == s);
    }
    Schema rec = parse_schema("type r = R of { a : int; b : string list } | S of (int * bool) | T");
    CHECK(parse_schema(print_schema(rec)) == rec);
}

TEST_CASE("type expressions print in surface syntax") {
    CHECK(to_string(ty("'a")) == "'a");
    CHECK(to_string(ty("string list")) == "string list");
    CHECK(to_string(ty("(int, string) t")) == "(int, string) t");
    CHECK(to_string(ty("int logic list")) == "int logic list");
}

TEST_CASE("check_type_expr against the schema") {
    ValidatedSchema s = check(corpus::logic_schema_text());
    CHECK_NOTHROW(check_type_expr(s, ty("int logic")));
    CHECK_ERROR(check_type_expr(s, ty("logic")), ArityMismatch);
    CHECK_ERROR(check_type_expr(s, ty("'a logic")), UnboundParam);
    CHECK_NOTHROW(check_type_expr(s, ty("'a logic"), {"a"}));
    CHECK_ERROR(check_type_expr(s, ty("foo")), UnknownType);
}

TEST_CASE("with clauses are recorded") {
    Schema s = parse_schema(corpus::logic_schema_text());
    CHECK(s.find("logic")->plugins == std::vector<std::string>{"show", "gmap"});
}

}
