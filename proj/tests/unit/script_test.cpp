#include <doctest.h>

#include "check_error.hpp"
#include "gentrans/cli/script.hpp"
#include "gentrans/corpus.hpp"
#include "gentrans/plugins.hpp"
#include "oracles.hpp"

using namespace gentrans;
using gentrans::cli::Script;

namespace {

const PluginRegistry& reg() {
    static const PluginRegistry r = PluginRegistry::with_builtins();
    return r;
}

const ValidatedSchema& expr_schema() {
    static const ValidatedSchema s = validate(parse_schema(corpus::expr_schema_text()));
    return s;
}

const ValidatedSchema& mutual_schema() {
    static const ValidatedSchema s = validate(parse_schema(corpus::mutual_schema_text()));
    return s;
}

std::vector<std::vector<std::string>> tags_of(const ValidatedSchema& s, const std::vector<std::string>& group) {
    std::vector<std::vector<std::string>> out;
    for (const auto& m : group) {
        std::vector<std::string> tags;
        for (const auto& c : s.constructors(m)) tags.push_back(c.tag);
        out.push_back(tags);
    }
    return out;
}

// Runs `script` over `plugin` at `type` with `inh`.
Attr run(std::string_view script, std::string_view plugin, const ValidatedSchema& s, const std::string& type,
         const Attr& inh, std::string_view value) {
    Script sc = Script::parse(script);
    std::vector<std::string> group = s.group_of(type);
    auto gens = reg().derive_group(plugin, s, type);
    auto overrides = sc.overrides_for(group, tags_of(s, group));
    for (std::size_t k = 0; k < gens.size(); ++k) gens[k] = extend(std::move(gens[k]), overrides[k]);
    auto ts = fix_group(group, s, std::move(gens));
    return ts[s.index_in_group(type)](inh, parse_value(value, s, TypeExpr::apply(type)));
}

Attr run_expr(std::string_view script, std::string_view plugin, const Attr& inh, std::string_view value) {
    return run(script, plugin, expr_schema(), "expr", inh, value);
}

Value eval_const(std::string_view body) {
    return run_expr(std::string("Const => ") + std::string(body), "gmap", Attr(), "Const 0").value();
}

} // namespace

TEST_SUITE("script") {

TEST_CASE("arithmetic and precedence") {
    CHECK(eval_const("1 + 2 * 3") == Value::integer(7));
    CHECK(eval_const("(1 + 2) * 3") == Value::integer(9));
    CHECK(eval_const("-7 / 2") == Value::integer(-3));
    CHECK(eval_const("-7 % 2") == Value::integer(-1));
    CHECK(eval_const("10 - 2 - 3") == Value::integer(5));
    CHECK(eval_const("max(2, 5) - min(2, 5)") == Value::integer(3));
    CHECK(eval_const("123456789012345678901234567890 + 1") ==
          Value::integer(BigInt("123456789012345678901234567891")));
}

TEST_CASE("strings, booleans and comparisons") {
    CHECK(eval_const(R"("a" ^ "b" ^ str(3))") == Value::str("ab3"));
    CHECK(eval_const("1 < 2") == Value::boolean(true));
    CHECK(eval_const(R"("b" <= "a")") == Value::boolean(false));
    CHECK(eval_const("if 1 == 1 then true else false") == Value::boolean(true));
    CHECK(eval_const("(1, \"x\") != (1, \"y\")") == Value::boolean(true));
}

TEST_CASE("lists, tuples and constructors") {
    CHECK(eval_const("1 :: 2 :: []") == Value::seq({Value::integer(1), Value::integer(2)}));
    CHECK(eval_const("length([1; 2; 3])") == Value::integer(3));
    CHECK(print_value(eval_const("Binop(\"+\", Const(1), Var(\"x\"))")) == R"(Binop ("+", Const 1, Var "x"))");
    CHECK(eval_const("()") == Value::unit());
    CHECK(eval_const("(1, 2)") == Value::tuple({Value::integer(1), Value::integer(2)}));
}

TEST_CASE("let and match") {
    CHECK(eval_const("let x = 4 in x * x") == Value::integer(16));
    CHECK(eval_const("match [1; 2] with | [] -> 0 | h :: t -> h + length(t) end") == Value::integer(2));
    CHECK(eval_const("match Const(5) with | Var(_) -> 0 | Const(n) -> n end") == Value::integer(5));
    CHECK(eval_const("match (1, true) with | (1, false) -> 0 | (a, b) -> if b then a else 9 end") ==
          Value::integer(1));
}

TEST_CASE("top-level constants and lookup") {
    Script sc = Script::parse("let base = 10\nlet twice = base * 2\nConst => twice + lookup(\"base\", 0)");
    CHECK(sc.constants().at("twice").integer() == 20);
    CHECK(run_expr("let base = 10\nConst => lookup(\"nope\", base)", "gmap", Attr(), "Const 0").value() ==
          Value::integer(10));
}

TEST_CASE("height and free variables") {
    CHECK(run_expr("Binop => 1 + max(self(inh, arg(1)), self(inh, arg(2)))", "foldl", Value::integer(0),
                   R"(Binop ("+", Const 1, Binop ("*", Var "a", Const 2)))")
              .integer() == 2);
    Attr fv = run_expr("Var => arg(0) :: inh", "foldl", Value::seq({}),
                       R"(Binop ("+", Var "x", Binop ("*", Var "y", Var "x")))");
    CHECK(print_value(fv.value()) == R"(["x"; "y"; "x"])");
}

TEST_CASE("pretty printing as a script matches the reference") {
    const char* script = R"ovr(Const => str(arg(0))
Var => arg(0)
Binop =>
  let op = arg(0) in
  let p = match op with "+" -> 1 | "-" -> 1 | "*" -> 2 | "/" -> 2 | _ -> 0 end in
  let s = self(p, arg(1)) ^ " " ^ op ^ " " ^ self(p, arg(2)) in
  if p <= inh then "(" ^ s ^ ")" else s
)ovr";
    Script sc = Script::parse(script);
    auto gens = reg().derive_group("show", expr_schema(), "expr");
    gens[0] = extend(std::move(gens[0]), sc.overrides_for({"expr"}, tags_of(expr_schema(), {"expr"}))[0]);
    Transform t = fix("expr", expr_schema(), gens[0]);
    gen::Rng rng;
    for (int i = 0; i < 100; ++i) {
        Value e = gen::expr(rng, 6, true);
        CHECK(t(Value::integer(-1000000), e).text() == oracle::pretty(e));
    }
}

TEST_CASE("super, field and subject") {
    CHECK(run_expr(R"(Var => "<" ^ super() ^ ">")", "show", Attr(), R"(Var "x")").text() == R"(<Var ("x")>)");
    CHECK(run_expr("Var => subject", "gmap", Attr(), R"(Var "x")").value() ==
          Value::con("Var", {Value::str("x")}));
    ValidatedSchema s = validate(parse_schema("type r = R of { a : int; b : string }"));
    CHECK(run("R => str(field(a)) ^ field(\"b\")", "show", s, "r", Attr(), R"(R {a = 1; b = "z"})").text() == "1z");
}

TEST_CASE("qualified and unqualified rules across a group") {
    const char* v = R"(LocalDef (Def ("x", Const 1), Const 2))";
    CHECK(run(R"(Const => "c")", "show", mutual_schema(), "expr", Attr(), v).text() == R"(LocalDef (Def ("x", c), c))");
    CHECK(run(R"(def.Def => "d")", "show", mutual_schema(), "expr", Attr(), v).text() ==
          R"(LocalDef (d, Const (2)))");
    CHECK(run(R"(def.Def => arg(0) ^ "=" ^ sibling(expr, arg(1)))", "show", mutual_schema(), "expr", Attr(), v).text() ==
          R"(LocalDef (x=Const (1), Const (2)))");
}

TEST_CASE("rule errors") {
    auto group = mutual_schema().group_of("expr");
    auto tags = tags_of(mutual_schema(), group);
    CHECK_ERROR(Script::parse("Nope => 1").overrides_for(group, tags), UnknownOverrideTag);
    CHECK_ERROR(Script::parse("def.Const => 1").overrides_for(group, tags), UnknownOverrideTag);
    CHECK_ERROR(Script::parse("other.Const => 1").overrides_for(group, tags), ScriptError);
    CHECK_ERROR(Script::parse("Const => 1\nConst => 2").overrides_for(group, tags), ScriptError);
}

TEST_CASE("syntax errors carry positions") {
    try {
        Script::parse("Const =>\n  1 +");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
        REQUIRE(e.pos().has_value());
        CHECK(e.pos()->line == 2);
    }
    CHECK_ERROR(Script::parse("Const 1"), SyntaxError);
    CHECK_ERROR(Script::parse("Const => match 1 with | 1 -> 2"), SyntaxError);
}

TEST_CASE("runtime errors") {
    CHECK_ERROR(eval_const("1 + \"a\""), ScriptError);
    CHECK_ERROR(eval_const("1 / 0"), ScriptError);
    CHECK_ERROR(eval_const("arg(4)"), ScriptError);
    CHECK_ERROR(eval_const("unknown_name"), ScriptError);
    CHECK_ERROR(eval_const("match 1 with | 2 -> 0 end"), ScriptError);
    CHECK_ERROR(Script::parse("let a = 1 / 0"), ScriptError);
    try {
        eval_const("\n  nope(1)");
        FAIL("expected an error");
    } catch (const Error& e) {
        REQUIRE(e.pos().has_value());
        CHECK(e.pos()->line == 2);
    }
}

TEST_CASE("comments and blank lines") {
    Script sc = Script::parse("# header\n\nConst => 1 # trailing\n\n# end\n");
    CHECK(sc.rules().size() == 1);
    CHECK(sc.rules()[0].tag == "Const");
    CHECK(sc.rules()[0].member.empty());
}

}
