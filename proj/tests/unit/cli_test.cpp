#include <doctest.h>

#include <sstream>

#include "gentrans/cli/commands.hpp"

using namespace gentrans;
using namespace gentrans::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

std::string path_of(std::string_view rel) { return std::string(GENTRANS_SOURCE_DIR) + "/" + std::string(rel); }

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "gentrans");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("check") {
    Outcome ok = invoke({"check", path_of("schemas/mutual.gt")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find(": ok, 2 types in 1 recursion group") != std::string::npos);

    Outcome bad = invoke({"check", path_of("schemas/nonregular.gt")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("nonregular.gt:3:26: error[NonRegularRecursion]") != std::string::npos);

    Outcome ne = invoke({"check", path_of("schemas/nonessential.gt")});
    CHECK(ne.code == 1);
    CHECK(ne.err.find("error[NonEssentialGroup]") != std::string::npos);

    Outcome missing = invoke({"check", path_of("schemas/does-not-exist.gt")});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("error[IoError]") != std::string::npos);
}

TEST_CASE("run with a plugin") {
    Outcome r = invoke({"run", "--schema", path_of("schemas/expr.gt"), "--type", "expr", "--plugin", "show", "--value",
                     R"(Binop ("+", Const 1, Var "x"))"});
    CHECK(r.code == 0);
    CHECK(r.out == "Binop (\"+\", Const (1), Var (\"x\"))\n");

    Outcome c = invoke({"run", "--schema", path_of("schemas/expr.gt"), "--type", "expr", "--plugin", "compare", "--inh",
                     "Var \"x\"", "--value", "Const 1"});
    CHECK(c.out == "LT\n");
}

TEST_CASE("run with an override file") {
    Outcome r = invoke({"run", "--schema", path_of("schemas/expr.gt"), "--type", "expr", "--plugin", "show", "--inh",
                     "-1000000", "--override", path_of("overrides/pretty.ovr"), "--value",
                     R"(Binop ("*", Binop ("+", Var "a", Var "b"), Var "c"))"});
    CHECK(r.code == 0);
    CHECK(r.out == "(a + b) * c\n");
}

TEST_CASE("structured output") {
    Outcome r = invoke({"run", "--schema", path_of("schemas/expr.gt"), "--type", "expr", "--plugin", "hc", "--format",
                     "structured", "--value",
                     R"(Binop ("+", Binop ("-", Var "b", Binop ("*", Var "b", Var "a")), Binop ("*", Var "b", Var "a")))"});
    CHECK(r.code == 0);
    CHECK(r.out.find("store.size=10\n") != std::string::npos);
    CHECK(r.out.find("store.constructors=5\n") != std::string::npos);
    CHECK(r.out.find("stats.tables_built=1\n") != std::string::npos);
}

TEST_CASE("semantic and usage errors") {
    Outcome p = invoke({"run", "--schema", path_of("schemas/expr.gt"), "--type", "expr", "--plugin", "nope", "--value",
                     "Const 1"});
    CHECK(p.code == 1);
    CHECK(p.err.find("error[UnknownPlugin]") != std::string::npos);

    Outcome v = invoke({"run", "--schema", path_of("schemas/expr.gt"), "--type", "expr", "--plugin", "show", "--value",
                     "Var 3"});
    CHECK(v.code == 1);
    CHECK(v.err.find("--value:1:5: error[TypeMismatch]") != std::string::npos);

    CHECK(invoke({"run", "--schema", path_of("schemas/expr.gt")}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"run", "--schema", path_of("schemas/expr.gt"), "--type", "expr", "--plugin", "show", "--format",
               "yaml", "--value", "Const 1"})
              .code == 2);
}

TEST_CASE("parametric types need their parameters bound") {
    Outcome u = invoke({"run", "--schema", path_of("schemas/logic.gt"), "--type", "logic", "--plugin", "show", "--value",
                     "V 1"});
    CHECK(u.code == 1);
    CHECK(u.err.find("error[UnboundParam]") != std::string::npos);
    Outcome b = invoke({"run", "--schema", path_of("schemas/logic.gt"), "--type", "logic", "--param", "a=int", "--plugin",
                     "show", "--value", "Value 3"});
    CHECK(b.code == 0);
    CHECK(b.out == "Value (3)\n");
}

TEST_CASE("demo") {
    Outcome all = invoke({"demo", "all"});
    CHECK(all.code == 0);
    CHECK(all.out.find("FAILED") == std::string::npos);
    Outcome one = invoke({"demo", "pretty"});
    CHECK(one.code == 0);
    CHECK(one.out.find("(a + b) * c") != std::string::npos);
    Outcome none = invoke({"demo", "nope"});
    CHECK(none.code == 2);
    CHECK(none.err.find("available: ") != std::string::npos);
}

TEST_CASE("list") {
    Outcome l = invoke({"list"});
    CHECK(l.code == 0);
    CHECK(l.out.rfind("plugins (9):", 0) == 0);
    Outcome t = invoke({"list", "--schema", path_of("schemas/mutual.gt")});
    CHECK(t.out.find("group: expr, def") != std::string::npos);
}

TEST_CASE("diagnostic formatting") {
    Error e(ErrorCode::SyntaxError, "unexpected ')'", SourcePos{2, 7});
    CHECK(format_diagnostic("a.gt", e) == "a.gt:2:7: error[SyntaxError]: unexpected ')'");
    CHECK(format_diagnostic("", Error(ErrorCode::UsageError, "bad")) == "error[UsageError]: bad");
    std::string colored = format_diagnostic("a.gt", e, true);
    CHECK(colored.find("\x1b[") != std::string::npos);
    CHECK(colored.find("error[SyntaxError]") != std::string::npos);
}

}
