#include <functional>
#include <sstream>

#include "gentrans/corpus.hpp"

namespace gentrans::corpus {

namespace {

class Report {
public:
    explicit Report(std::string_view title) { out_ << "== " << title << "\n"; }

    void section(std::string_view name) { out_ << "-- " << name << "\n"; }

    void note(std::string_view line) { out_ << "   " << line << "\n"; }

    void check(std::string_view input, const std::function<std::string()>& run, std::string_view expected) {
        std::string actual;
        try {
            actual = run();
        } catch (const Error& e) {
            actual = "error[" + std::string(error_code_name(e.code())) + "]: " + e.message();
        }
        out_ << "   " << input << "\n     => " << actual << "\n";
        ++total_;
        if (actual == expected) {
            ++passed_;
        } else {
            out_ << "     MISMATCH, expected " << expected << "\n";
        }
    }

    DemoResult finish() {
        out_ << (passed_ == total_ ? "ok" : "FAILED") << ": " << passed_ << "/" << total_ << " cases match\n";
        return DemoResult{out_.str(), passed_ == total_};
    }

private:
    std::ostringstream out_;
    int total_ = 0;
    int passed_ = 0;
};

const State& demo_state() {
    static const State s{{"x", 3}, {"y", 4}};
    return s;
}

DemoResult demo_pretty() {
    ExprCorpus c;
    Report r("pretty: infix rendering with minimal brackets");
    const std::pair<const char*, const char*> cases[] = {
        {R"(Binop ("*", Binop ("+", Var "a", Var "b"), Var "c"))", "(a + b) * c"},
        {R"(Binop ("+", Var "a", Binop ("*", Var "b", Var "c")))", "a + b * c"},
        {R"(Binop ("-", Binop ("-", Var "a", Var "b"), Var "c"))", "(a - b) - c"},
        {R"(Binop ("/", Const 8, Binop ("/", Const 4, Const 2)))", "8 / (4 / 2)"},
        {R"(Binop ("+", Const 1, Binop ("^", Var "x", Const 2)))", "1 + (x ^ 2)"},
        {R"(Binop ("*", Const (-1), Var "x"))", "-1 * x"},
        {R"(Var "x")", "x"},
    };
    for (const auto& [in, want] : cases) {
        r.check(in, [&, in = in] { return c.pretty(c.parse(in)); }, want);
    }
    return r.finish();
}

DemoResult demo_fv() {
    ExprCorpus c;
    Report r("fv: variables collected by an extended left fold");
    const std::pair<const char*, const char*> cases[] = {
        {R"(Binop ("+", Var "x", Binop ("*", Var "y", Var "x")))", R"(["x"; "y"; "x"])"},
        {R"(Const 1)", "[]"},
        {R"(Var "a")", R"(["a"])"},
        {R"(Binop ("-", Var "a", Var "b"))", R"(["b"; "a"])"},
        {R"(Binop ("+", Binop ("*", Var "a", Const 2), Var "c"))", R"(["c"; "a"])"},
    };
    for (const auto& [in, want] : cases) {
        r.check(in, [&, in = in] { return print_value(c.fv(c.parse(in))); }, want);
    }
    return r.finish();
}

DemoResult demo_height() {
    ExprCorpus c;
    Report r("height: an extended left fold");
    const std::pair<const char*, const char*> cases[] = {
        {R"(Binop ("+", Const 1, Binop ("*", Var "a", Const 2)))", "2"},
        {R"(Const 1)", "0"},
        {R"(Var "x")", "0"},
        {R"(Binop ("+", Var "a", Var "b"))", "1"},
        {R"(Binop ("+", Binop ("-", Binop ("*", Const 1, Const 2), Const 3), Var "x"))", "3"},
    };
    for (const auto& [in, want] : cases) {
        r.check(in, [&, in = in] { return c.height(c.parse(in)).str(); }, want);
    }
    return r.finish();
}

DemoResult demo_eval() {
    ExprCorpus c;
    Report r("eval: substitute and simplify combined over gmap");
    r.note("state: x = 3, y = 4");
    r.section("simplify");
    const std::pair<const char*, const char*> simplify[] = {
        {R"(Binop ("+", Const 1, Const 2))", "Const (3)"},
        {R"(Binop ("*", Binop ("+", Const 1, Const 2), Var "x"))", R"(Binop ("*", Const (3), Var ("x")))"},
        {R"(Binop ("/", Const 7, Const 2))", "Const (3)"},
        {R"(Binop ("/", Const 1, Const 0))", R"(Binop ("/", Const (1), Const (0)))"},
        {R"(Binop ("-", Const 2, Const 5))", "Const (-3)"},
    };
    for (const auto& [in, want] : simplify) {
        r.check(in, [&, in = in] { return c.show(c.simplify(c.parse(in))); }, want);
    }
    r.section("substitute");
    const std::pair<const char*, const char*> substitute[] = {
        {R"(Var "x")", "Const (3)"},
        {R"(Binop ("+", Var "x", Var "y"))", R"(Binop ("+", Const (3), Const (4)))"},
        {R"(Var "z")", R"(Var ("z"))"},
        {R"(Const 7)", "Const (7)"},
        {R"(Binop ("*", Var "x", Binop ("-", Var "z", Const 1)))",
         R"(Binop ("*", Const (3), Binop ("-", Var ("z"), Const (1))))"},
    };
    for (const auto& [in, want] : substitute) {
        r.check(in, [&, in = in] { return c.show(c.substitute(demo_state(), c.parse(in))); }, want);
    }
    r.section("eval");
    const std::pair<const char*, const char*> eval[] = {
        {R"(Binop ("+", Var "x", Const 2))", "Const (5)"},
        {R"(Binop ("*", Var "x", Var "y"))", "Const (12)"},
        {R"(Binop ("-", Var "x", Binop ("*", Var "y", Const 2)))", "Const (-5)"},
        {R"(Binop ("+", Var "z", Binop ("+", Var "x", Var "y")))", R"(Binop ("+", Var ("z"), Const (7)))"},
        {R"(Binop ("/", Var "y", Binop ("-", Var "x", Const 3)))", R"(Binop ("/", Const (4), Const (0)))"},
    };
    for (const auto& [in, want] : eval) {
        r.check(in, [&, in = in] { return c.show(c.eval(demo_state(), c.parse(in))); }, want);
    }
    return r.finish();
}

DemoResult demo_logic() {
    LogicCorpus c;
    Report r("logic: conversion to and from logic values via gmap");
    r.section("to_logic");
    const std::pair<const char*, const char*> to[] = {
        {R"(Binop ("+", Const 1, Var "x"))",
         R"(Value (Binop (Value "+", Value (Const (Value 1)), Value (Var (Value "x")))))"},
        {R"(Const 7)", "Value (Const (Value 7))"},
    };
    for (const auto& [in, want] : to) {
        r.check(in, [&, in = in] { return print_value(c.to_logic(c.parse("expr", in))); }, want);
    }
    r.section("from_logic");
    const std::pair<const char*, const char*> from[] = {
        {R"(Value (Binop (Value "+", Value (Const (Value 1)), Value (Var (Value "x")))))",
         R"(Binop ("+", Const 1, Var "x"))"},
        {R"(Value (Binop (V 1, Value (Const (V 2)), V 3)))", "error[FreeVariable]: Free variable"},
        {R"(V 0)", "error[FreeVariable]: Free variable"},
    };
    for (const auto& [in, want] : from) {
        r.check(in, [&, in = in] { return print_value(c.from_logic(c.parse("lexpr", in))); }, want);
    }
    r.section("round trip");
    const char* round[] = {R"(Binop ("*", Var "a", Binop ("-", Const 2, Var "b")))", R"(Var "q")"};
    for (const char* in : round) {
        r.check(in, [&] {
            Value e = c.parse("expr", in);
            return c.from_logic(c.to_logic(e)) == e ? std::string("identity") : std::string("changed");
        }, "identity");
    }
    return r.finish();
}

DemoResult demo_nameless() {
    LambdaCorpus c;
    Report r("nameless: de Bruijn conversion composed from lam and abs fragments");
    const std::pair<const char*, const char*> cases[] = {
        {R"(Abs ("x", Abs ("y", App (Var "x", Var "y"))))", "Abs (Abs (App (Var 1, Var 0)))"},
        {R"(Abs ("x", Var "x"))", "Abs (Var 0)"},
        {R"(Abs ("x", Abs ("x", Var "x")))", "Abs (Abs (Var 0))"},
        {R"(App (Abs ("x", Var "x"), Abs ("y", App (Var "y", Var "y"))))",
         "App (Abs (Var 0), Abs (App (Var 0, Var 0)))"},
        {R"(Abs ("f", Abs ("x", App (Var "f", App (Var "f", Var "x")))))",
         "Abs (Abs (App (Var 1, App (Var 1, Var 0))))"},
        {R"(Abs ("x", Var "y"))", "error[UnboundName]: unbound name \"y\""},
    };
    for (const auto& [in, want] : cases) {
        r.check(in, [&, in = in] { return print_value(c.to_nameless(c.parse("named", in))); }, want);
    }
    return r.finish();
}

DemoResult demo_hashcons() {
    ExprCorpus c;
    Report r("hashcons: maximal sharing with the hc plugin");
    const char* in = R"(Binop ("+", Binop ("-", Var "b", Binop ("*", Var "b", Var "a")), Binop ("*", Var "b", Var "a")))";
    Value tree = c.parse(in);
    TypeExpr expr = TypeExpr::apply("expr");
    auto res = eval_hc(c.plugins(), c.schema(), expr, HcStore(), tree);
    r.note(in);
    r.check("interned nodes (all / constructors)", [&] {
        return std::to_string(res.store.size()) + " / " + std::to_string(res.store.constructor_count());
    }, "10 / 5");
    r.check("the two Binop (\"*\", Var \"b\", Var \"a\") subtrees", [&] {
        const Value& left = res.value.items()[1].items()[2];
        const Value& right = res.value.items()[2];
        return left.identity() == right.identity() ? std::string("one shared node") : std::string("two nodes");
    }, "one shared node");
    r.check("re-interning the tree", [&] {
        auto again = eval_hc(c.plugins(), c.schema(), expr, res.store, tree);
        return again.handle == res.handle && again.store == res.store ? std::string("same handle, store unchanged")
                                                                       : std::string("store changed");
    }, "same handle, store unchanged");
    return r.finish();
}

DemoResult demo_mutualshow() {
    MutualCorpus c;
    Report r("mutualshow: show over the group (expr, def)");
    const char* in = R"(LocalDef (Def ("x", Const 1), Var "x"))";
    Value v = c.parse(in);
    std::size_t k = c.schema().index_in_group("expr");
    r.section("default");
    r.check(in, [&] { return c.default_show()[k](Attr(), v).text(); }, R"(LocalDef (Def ("x", Const (1)), Var ("x")))");
    r.section("Const overridden in expr");
    r.check(in, [&] { return c.custom_show()[k](Attr(), v).text(); }, R"(LocalDef (Def ("x", a constant), Var ("x")))");
    return r.finish();
}

DemoResult demo_show() {
    ExprCorpus c;
    Report r("show: derived string conversion");
    const std::pair<const char*, const char*> cases[] = {
        {R"(Const 5)", "Const (5)"},
        {R"(Var "x")", R"(Var ("x"))"},
        {R"(Binop ("+", Const 1, Var "x"))", R"(Binop ("+", Const (1), Var ("x")))"},
        {R"(Binop ("*", Binop ("-", Var "a", Const 2), Var "b"))",
         R"(Binop ("*", Binop ("-", Var ("a"), Const (2)), Var ("b")))"},
        {R"(Var "say \"hi\"")", R"(Var ("say \"hi\""))"},
    };
    for (const auto& [in, want] : cases) {
        r.check(in, [&, in = in] { return c.show(c.parse(in)); }, want);
    }
    return r.finish();
}

} // namespace

std::vector<std::string> demo_names() {
    return {"pretty", "fv", "height", "eval", "logic", "nameless", "hashcons", "mutualshow", "show"};
}

DemoResult run_demo(std::string_view name) {
    if (name == "pretty") return demo_pretty();
    if (name == "fv") return demo_fv();
    if (name == "height") return demo_height();
    if (name == "eval") return demo_eval();
    if (name == "logic") return demo_logic();
    if (name == "nameless") return demo_nameless();
    if (name == "hashcons") return demo_hashcons();
    if (name == "mutualshow") return demo_mutualshow();
    if (name == "show") return demo_show();
    throw Error(ErrorCode::UsageError, "unknown demo " + std::string(name));
}

} // namespace gentrans::corpus
