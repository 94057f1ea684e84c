#include "gentrans/corpus.hpp"

#include <limits>

namespace gentrans::corpus {

std::string_view expr_schema_text() {
    return R"(type expr =
  | Const of int
  | Var of string
  | Binop of string * expr * expr
)";
}

std::string_view mutual_schema_text() {
    return R"(type expr =
  | Const of int
  | Var of string
  | Binop of string * expr * expr
  | LocalDef of def * expr
and def = Def of string * expr
)";
}

std::string_view logic_schema_text() {
    return R"(type 'a logic =
  | V of int
  | Value of 'a
  with show, gmap

type ('string, 'int, 'expr) a_expr =
  | Var of 'string
  | Const of 'int
  | Binop of 'string * 'expr * 'expr
  with show, gmap

type expr = (string, int, expr) a_expr with show, gmap
type lexpr = (string logic, int logic, lexpr) a_expr logic with show, gmap
)";
}

std::string_view lambda_schema_text() {
    return R"(type ('name, 'lam) lam = open
  | App of 'lam * 'lam
  | Var of 'name
  with show

type ('name, 'lam) abs = open Abs of 'name * 'lam with show
type ('name, 'lam) term = [ ('name, 'lam) lam | ('name, 'lam) abs ] with show
type named = (string, named) term with show
type nameless = [ (int, nameless) lam | Abs of nameless ] with show
)";
}

int priority(std::string_view op) {
    if (op == "+" || op == "-") return 1;
    if (op == "*" || op == "/") return 2;
    return 0;
}

std::optional<BigInt> apply_op(std::string_view op, const BigInt& a, const BigInt& b) {
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") {
        if (b == 0) return std::nullopt;
        return a / b;
    }
    return std::nullopt;
}

namespace {

Value const_of(BigInt n) { return Value::con("Const", {Value::integer(std::move(n))}); }

// Binop handler shared by simplify and eval: fold when both sides reduce to constants.
Attr fold_binop(const Scope& s, const Attr&, const Value&, const Args& args) {
    const std::string& op = args[0].as_str();
    Value l = s.self()(Attr(), args[1]).value();
    Value r = s.self()(Attr(), args[2]).value();
    if (l.tag() == "Const" && r.tag() == "Const") {
        if (auto v = apply_op(op, l.items()[0].as_int(), r.items()[0].as_int())) return const_of(*v);
    }
    return Value::con("Binop", {args[0], l, r});
}

TableGenerator only_gen(const PluginRegistry& plugins, std::string_view plugin, const ValidatedSchema& schema,
                        std::string_view type, std::vector<ParamTransformer> params = {}) {
    return plugins.derive(plugin, schema, type, std::move(params)).gen;
}

} // namespace

// Arithmetic expressions

ExprCorpus::ExprCorpus(PluginRegistry plugins)
    : schema_(validate(parse_schema(expr_schema_text()))), plugins_(std::move(plugins)) {}

Value ExprCorpus::parse(std::string_view literal) const {
    return parse_value(literal, schema_, TypeExpr::apply("expr"));
}

Attr ExprCorpus::pretty_start() { return Value::integer(std::numeric_limits<long long>::min()); }

TableGenerator ExprCorpus::pretty_gen() const {
    return extend(only_gen(plugins_, "show", schema_, "expr"),
                  {
                      {"Const", [](const Scope&, const Attr&, const Value&, const Args& a) -> Attr {
                           return Value::str(a[0].as_int().str());
                       }},
                      {"Var", [](const Scope&, const Attr&, const Value&, const Args& a) -> Attr { return a[0]; }},
                      {"Binop", [](const Scope& s, const Attr& inh, const Value&, const Args& a) -> Attr {
                           const std::string& op = a[0].as_str();
                           Attr po = Value::integer(priority(op));
                           std::string text = s.self()(po, a[1]).text() + " " + op + " " + s.self()(po, a[2]).text();
                           if (BigInt(priority(op)) <= inh.integer()) text = "(" + text + ")";
                           return Value::str(text);
                       }},
                  });
}

TableGenerator ExprCorpus::fv_gen() const {
    return extend(only_gen(plugins_, "foldl", schema_, "expr"),
                  {{"Var", [](const Scope&, const Attr& inh, const Value&, const Args& a) -> Attr {
                        std::vector<Value> acc{a[0]};
                        for (const auto& x : inh.value().items()) acc.push_back(x);
                        return Value::seq(std::move(acc));
                    }}});
}

TableGenerator ExprCorpus::height_gen() const {
    return extend(only_gen(plugins_, "foldl", schema_, "expr"),
                  {{"Binop", [](const Scope& s, const Attr& inh, const Value&, const Args& a) -> Attr {
                        BigInt l = s.self()(inh, a[1]).integer();
                        BigInt r = s.self()(inh, a[2]).integer();
                        return Value::integer(1 + (l < r ? r : l));
                    }}});
}

TableGenerator ExprCorpus::simplify_gen() const {
    return extend(only_gen(plugins_, "gmap", schema_, "expr"), {{"Binop", fold_binop}});
}

TableGenerator ExprCorpus::substitute_gen(State state) const {
    return extend(only_gen(plugins_, "gmap", schema_, "expr"),
                  {{"Var", [state = std::move(state)](const Scope&, const Attr&, const Value& subject,
                                                      const Args& a) -> Attr {
                        auto it = state.find(a[0].as_str());
                        if (it == state.end()) return subject;
                        return const_of(it->second);
                    }}});
}

TableGenerator ExprCorpus::eval_gen(State state) const {
    return extend(substitute_gen(std::move(state)), {{"Binop", fold_binop}});
}

std::string ExprCorpus::show(const Value& e) const { return eval_show(plugins_, schema_, TypeExpr::apply("expr"), e); }

std::string ExprCorpus::pretty(const Value& e) const {
    require_conforms(e, TypeExpr::apply("expr"), schema_);
    return fix("expr", schema_, pretty_gen())(pretty_start(), e).text();
}

Value ExprCorpus::fv(const Value& e) const {
    require_conforms(e, TypeExpr::apply("expr"), schema_);
    return fix("expr", schema_, fv_gen())(Value::seq({}), e).value();
}

BigInt ExprCorpus::height(const Value& e) const {
    require_conforms(e, TypeExpr::apply("expr"), schema_);
    return fix("expr", schema_, height_gen())(Value::integer(0), e).integer();
}

Value ExprCorpus::simplify(const Value& e) const {
    require_conforms(e, TypeExpr::apply("expr"), schema_);
    return fix("expr", schema_, simplify_gen())(Attr(), e).value();
}

Value ExprCorpus::substitute(const State& state, const Value& e) const {
    require_conforms(e, TypeExpr::apply("expr"), schema_);
    return fix("expr", schema_, substitute_gen(state))(Attr(), e).value();
}

Value ExprCorpus::eval(const State& state, const Value& e) const {
    require_conforms(e, TypeExpr::apply("expr"), schema_);
    return fix("expr", schema_, eval_gen(state))(Attr(), e).value();
}

// Mutual recursion

MutualCorpus::MutualCorpus(PluginRegistry plugins)
    : schema_(validate(parse_schema(mutual_schema_text()))), plugins_(std::move(plugins)) {}

Value MutualCorpus::parse(std::string_view literal) const {
    return parse_value(literal, schema_, TypeExpr::apply("expr"));
}

std::vector<Transform> MutualCorpus::default_show() const {
    return fix_group(schema_.group_of("expr"), schema_, plugins_.derive_group("show", schema_, "expr"));
}

std::vector<Transform> MutualCorpus::custom_show() const {
    auto gens = plugins_.derive_group("show", schema_, "expr");
    std::size_t k = schema_.index_in_group("expr");
    gens[k] = extend(std::move(gens[k]), {{"Const", [](const Scope&, const Attr&, const Value&, const Args&) -> Attr {
                                               return Value::str("a constant");
                                           }}});
    return fix_group(schema_.group_of("expr"), schema_, std::move(gens));
}

// Logic values

Value LogicCorpus::lift(const Value& x) { return Value::con("Value", {x}); }

Value LogicCorpus::reify(const Value& x) {
    if (x.tag() == "V") throw Error(ErrorCode::FreeVariable, "Free variable");
    if (x.tag() == "Value" && x.items().size() == 1) return x.items()[0];
    throw Error(ErrorCode::NonConformingSubject, "not a logic value: " + print_value(x));
}

LogicCorpus::LogicCorpus(PluginRegistry plugins)
    : schema_(validate(parse_schema(logic_schema_text()))), plugins_(std::move(plugins)) {
    auto lift_fn = ParamTransformer::fixed([](const Attr&, const Value& x) -> Attr { return lift(x); });
    auto reify_fn = ParamTransformer::fixed([](const Attr&, const Value& x) -> Attr { return reify(x); });

    // to_logic e = lift (gmap lift lift to_logic e)
    auto to_self = ParamTransformer::from_self([](const SelfFns& s) -> TransformFn {
        return [self = s[0]](const Attr& i, const Value& x) -> Attr { return lift(self(i, x).value()); };
    });
    to_logic_ = fix("a_expr", schema_, only_gen(plugins_, "gmap", schema_, "a_expr", {lift_fn, lift_fn, to_self}));

    // from_logic l = gmap reify reify from_logic (reify l)
    auto from_self = ParamTransformer::from_self([](const SelfFns& s) -> TransformFn {
        return [self = s[0]](const Attr& i, const Value& x) -> Attr { return self(i, reify(x)); };
    });
    from_logic_ =
        fix("a_expr", schema_, only_gen(plugins_, "gmap", schema_, "a_expr", {reify_fn, reify_fn, from_self}));
}

Value LogicCorpus::parse(std::string_view type, std::string_view literal) const {
    return parse_value(literal, schema_, parse_type_expr(type));
}

Value LogicCorpus::to_logic(const Value& e) const {
    require_conforms(e, TypeExpr::apply("expr"), schema_);
    return lift(to_logic_(Attr(), e).value());
}

Value LogicCorpus::from_logic(const Value& l) const {
    require_conforms(l, TypeExpr::apply("lexpr"), schema_);
    return from_logic_(Attr(), reify(l)).value();
}

// Lambda terms

LambdaCorpus::LambdaCorpus(PluginRegistry plugins)
    : schema_(validate(parse_schema(lambda_schema_text()))), plugins_(std::move(plugins)) {}

Value LambdaCorpus::parse(std::string_view type, std::string_view literal) const {
    return parse_value(literal, schema_, parse_type_expr(type));
}

namespace {

// Position of a name in the environment, innermost binder first.
Attr index_in_env(const Attr& env, const Value& name) {
    auto names = env.value().items();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return Value::integer(static_cast<long long>(i));
    }
    throw Error(ErrorCode::UnboundName, "unbound name " + print_value(name));
}

} // namespace

TableGenerator LambdaCorpus::lam_to_nameless() const {
    return only_gen(plugins_, "gmap", schema_, "lam", {ParamTransformer::fixed(index_in_env), ParamTransformer::self(0)});
}

TableGenerator LambdaCorpus::abs_to_nameless() const {
    auto base =
        only_gen(plugins_, "gmap", schema_, "abs", {ParamTransformer::fixed(index_in_env), ParamTransformer::self(0)});
    return extend(std::move(base), {{"Abs", [](const Scope& s, const Attr& env, const Value&, const Args& a) -> Attr {
                                         std::vector<Value> inner{a[0]};
                                         for (const auto& x : env.value().items()) inner.push_back(x);
                                         return Value::con("Abs", {s.self()(Value::seq(std::move(inner)), a[1]).value()});
                                     }}});
}

TableGenerator LambdaCorpus::to_nameless_gen() const {
    return compose_tables("named", schema_, {{"lam", lam_to_nameless()}, {"abs", abs_to_nameless()}});
}

Value LambdaCorpus::to_nameless(const Value& term) const {
    require_conforms(term, TypeExpr::apply("named"), schema_);
    return fix("named", schema_, to_nameless_gen())(Value::seq({}), term).value();
}

Value LambdaCorpus::lam_only(const Value& term) const {
    return fix("lam", schema_, lam_to_nameless())(Value::seq({}), term).value();
}

} // namespace gentrans::corpus
