#include <doctest.h>

#include "check_error.hpp"
#include "gentrans/corpus.hpp"
#include "gentrans/hashcons.hpp"
#include "gentrans/plugins.hpp"
#include "oracles.hpp"

using namespace gentrans;

namespace {

Value var(std::string x) { return Value::con("Var", {Value::str(std::move(x))}); }
Value bin(std::string op, Value l, Value r) { return Value::con("Binop", {Value::str(std::move(op)), l, r}); }

Value example_tree() {
    Value ba = bin("*", var("b"), var("a"));
    return bin("+", bin("-", var("b"), ba), bin("*", var("b"), var("a")));
}

const ValidatedSchema& expr_schema() {
    static const ValidatedSchema s = validate(parse_schema(corpus::expr_schema_text()));
    return s;
}

} // namespace

TEST_SUITE("hashcons") {

TEST_CASE("interning the sample tree shares the repeated subtree") {
    Value e = example_tree();
    HcStore::Result r = HcStore().hc(e);
    oracle::SubtreeCount want = oracle::distinct_subtrees({e});
    CHECK(r.store.size() == want.all);
    CHECK(r.store.constructor_count() == want.constructors);
    CHECK(want.constructors == 5);

    std::vector<Handle> top = r.store.children(r.handle);
    REQUIRE(top.size() == 3);
    std::vector<Handle> minus = r.store.children(top[1]);
    CHECK(minus[2] == top[2]);
    CHECK(r.store.node(top[2]) == bin("*", var("b"), var("a")));
    CHECK(r.value == e);
}

TEST_CASE("interned values share physically") {
    HcStore::Result r = HcStore().hc(example_tree());
    const Value& v = r.value;
    const Value& left_mul = v.items()[1].items()[2];
    const Value& right_mul = v.items()[2];
    CHECK(left_mul.identity() == right_mul.identity());
}

TEST_CASE("re-interning is a no-op") {
    gen::Rng rng;
    HcStore store;
    for (int i = 0; i < 200; ++i) {
        Value e = gen::expr(rng, 6);
        HcStore::Result a = store.hc(e);
        HcStore::Result b = a.store.hc(e);
        CHECK(b.handle == a.handle);
        CHECK(b.store.size() == a.store.size());
        CHECK(b.value == e);
        store = a.store;
    }
}

TEST_CASE("node count equals distinct subtrees over many values") {
    gen::Rng rng(11);
    std::vector<Value> roots;
    HcStore store;
    for (int i = 0; i < 100; ++i) {
        roots.push_back(gen::expr(rng, 5));
        store = store.hc(roots.back()).store;
    }
    oracle::SubtreeCount want = oracle::distinct_subtrees(roots);
    CHECK(store.size() == want.all);
    CHECK(store.constructor_count() == want.constructors);
}

TEST_CASE("stores are values") {
    HcStore empty;
    HcStore::Result a = empty.hc(var("x"));
    CHECK(empty.size() == 0);
    CHECK(a.store.size() == 2);
    HcStore::Result b = empty.hc(var("y"));
    HcStore::Result c = a.store.hc(var("y"));
    CHECK(b.store.size() == 2);
    CHECK(c.store.size() == 4);
    CHECK(a.store.size() == 2);
    CHECK(c.store.node(c.handle) == var("y"));
    CHECK(a.store.contains(a.handle));
    CHECK_FALSE(a.store.contains(3));
}

TEST_CASE("intern_node takes child handles") {
    HcStore::Result x = HcStore().hc(Value::str("x"));
    Handle kids[] = {x.handle};
    HcStore::Result v = x.store.intern_node(var("x"), kids);
    CHECK(v.store.size() == 2);
    CHECK(v.store.hc(var("x")).handle == v.handle);
}

TEST_CASE("different kinds never share") {
    HcStore s;
    auto a = s.hc(Value::integer(1));
    auto b = a.store.hc(Value::str("1"));
    auto c = b.store.hc(Value::tuple({Value::integer(1)}));
    auto d = c.store.hc(Value::seq({Value::integer(1)}));
    CHECK(d.store.size() == 4);
}

TEST_CASE("equal shapes from different declared types share a handle") {
    ValidatedSchema s = validate(parse_schema("type a = Leaf of int | Pair of a * a\ntype b = Leaf of int | Node of b list"));
    PluginRegistry reg = PluginRegistry::with_builtins();
    Value leaf = Value::con("Leaf", {Value::integer(7)});
    HcStore::Result ra = eval_hc(reg, s, TypeExpr::apply("a"), HcStore(), Value::con("Pair", {leaf, leaf}));
    HcStore::Result rb = eval_hc(reg, s, TypeExpr::apply("b"), ra.store, Value::con("Node", {Value::seq({leaf})}));
    Handle from_a = ra.store.children(ra.handle)[0];
    Handle from_b = rb.store.children(rb.store.children(rb.handle)[0])[0];
    CHECK(from_a == from_b);
    CHECK(rb.store.size() == ra.store.size() + 2);
}

TEST_CASE("hc through the plugin matches direct interning") {
    PluginRegistry reg = PluginRegistry::with_builtins();
    gen::Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        Value e = gen::expr(rng, 5);
        HcStore::Result p = eval_hc(reg, expr_schema(), TypeExpr::apply("expr"), HcStore(), e);
        HcStore::Result d = HcStore().hc(e);
        CHECK(p.store.size() == d.store.size());
        CHECK(p.handle == d.handle);
        CHECK(p.value == e);
    }
}

}
