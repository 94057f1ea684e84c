#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <span>
#include <set>
#include <stdexcept>

namespace oracle {

namespace {

const Value& arg(const Value& v, std::size_t i) { return v.items()[i]; }

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\\\"";
        } else if (c == '\\') {
            out += "\\\\";
        } else if (c == '\n') {
            out += "\\n";
        } else if (c == '\t') {
            out += "\\t";
        } else if (c == '\r') {
            out += "\\r";
        } else {
            out += c;
        }
    }
    return out + "\"";
}

Value binop(const std::string& op, Value l, Value r) { return Value::con("Binop", {Value::str(op), l, r}); }

} // namespace

int prio(const std::string& op) {
    if (op == "+" || op == "-") return 1;
    if (op == "*" || op == "/") return 2;
    return 0;
}

std::string pretty(const Value& e, long long ctx) {
    const std::string& tag = e.tag();
    if (tag == "Const") return arg(e, 0).as_int().str();
    if (tag == "Var") return arg(e, 0).as_str();
    const std::string& op = arg(e, 0).as_str();
    int p = prio(op);
    std::string s = pretty(arg(e, 1), p) + " " + op + " " + pretty(arg(e, 2), p);
    return p <= ctx ? "(" + s + ")" : s;
}

std::vector<std::string> fv(const Value& e) {
    // foldl threads left to right and conses, so the latest variable comes first.
    std::vector<std::string> order;
    std::function<void(const Value&)> walk = [&](const Value& x) {
        if (x.tag() == "Var") order.push_back(arg(x, 0).as_str());
        if (x.tag() == "Binop") {
            walk(arg(x, 1));
            walk(arg(x, 2));
        }
    };
    walk(e);
    std::reverse(order.begin(), order.end());
    return order;
}

int height(const Value& e) {
    if (e.tag() != "Binop") return 0;
    return 1 + std::max(height(arg(e, 1)), height(arg(e, 2)));
}

std::optional<BigInt> arith(const std::string& op, const BigInt& a, const BigInt& b) {
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") {
        if (b == 0) return std::nullopt;
        return BigInt(a / b);
    }
    return std::nullopt;
}

Value simplify(const Value& e) {
    if (e.tag() != "Binop") return e;
    const std::string& op = arg(e, 0).as_str();
    Value l = simplify(arg(e, 1));
    Value r = simplify(arg(e, 2));
    if (l.tag() == "Const" && r.tag() == "Const") {
        if (auto v = arith(op, arg(l, 0).as_int(), arg(r, 0).as_int())) return Value::con("Const", {Value::integer(*v)});
    }
    return binop(op, l, r);
}

Value substitute(const std::map<std::string, BigInt>& s, const Value& e) {
    if (e.tag() == "Var") {
        auto it = s.find(arg(e, 0).as_str());
        return it == s.end() ? e : Value::con("Const", {Value::integer(it->second)});
    }
    if (e.tag() == "Binop") return binop(arg(e, 0).as_str(), substitute(s, arg(e, 1)), substitute(s, arg(e, 2)));
    return e;
}

Value eval(const std::map<std::string, BigInt>& s, const Value& e) { return simplify(substitute(s, e)); }

std::string show(const Value& v) {
    auto join = [](const std::vector<std::string>& xs, const std::string& sep) {
        std::string out;
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
        return out;
    };
    std::vector<std::string> parts;
    for (const Value& x : v.items()) parts.push_back(show(x));
    switch (v.kind()) {
    case Value::Kind::Con: return parts.empty() ? v.tag() : v.tag() + " (" + join(parts, ", ") + ")";
    case Value::Kind::Rec: {
        std::vector<std::string> fields;
        for (std::size_t i = 0; i < parts.size(); ++i) fields.push_back(v.field_names()[i] + " = " + parts[i]);
        return v.tag() + " {" + join(fields, "; ") + "}";
    }
    case Value::Kind::Int: return v.as_int().str();
    case Value::Kind::Str: return quoted(v.as_str());
    case Value::Kind::Bool: return v.as_bool() ? "true" : "false";
    case Value::Kind::Unit: return "()";
    case Value::Kind::Tuple: return "(" + join(parts, ", ") + ")";
    case Value::Kind::Seq: return "[" + join(parts, "; ") + "]";
    }
    return "?";
}

std::optional<Value> de_bruijn(const Value& t, std::vector<std::string> env) {
    if (t.tag() == "Var") {
        const std::string& x = arg(t, 0).as_str();
        for (std::size_t i = env.size(); i-- > 0;) {
            if (env[i] == x) return Value::con("Var", {Value::integer(static_cast<long long>(env.size() - 1 - i))});
        }
        return std::nullopt;
    }
    if (t.tag() == "App") {
        auto f = de_bruijn(arg(t, 0), env);
        auto a = de_bruijn(arg(t, 1), env);
        if (!f || !a) return std::nullopt;
        return Value::con("App", {*f, *a});
    }
    env.push_back(arg(t, 0).as_str());
    auto body = de_bruijn(arg(t, 1), env);
    if (!body) return std::nullopt;
    return Value::con("Abs", {*body});
}

int compare(const Value& a, const Value& b, const std::map<std::string, int>& rank) {
    auto sign = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
    auto seq = [&](std::span<const Value> xs, std::span<const Value> ys) {
        for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
            if (int c = compare(xs[i], ys[i], rank)) return c;
        }
        return sign(xs.size(), ys.size());
    };
    if (a.is_constructor()) {
        if (a.tag() != b.tag()) return sign(rank.at(a.tag()), rank.at(b.tag()));
        return seq(a.items(), b.items());
    }
    switch (a.kind()) {
    case Value::Kind::Int: return sign(a.as_int(), b.as_int());
    case Value::Kind::Str: return sign(a.as_str(), b.as_str());
    case Value::Kind::Bool: return sign(a.as_bool(), b.as_bool());
    case Value::Kind::Unit: return 0;
    default: return seq(a.items(), b.items());
    }
}

SubtreeCount distinct_subtrees(const std::vector<Value>& roots) {
    std::set<std::string> all;
    std::set<std::string> cons;
    std::function<void(const Value&)> walk = [&](const Value& v) {
        // Record constructors print their field names, tuples and sequences
        // their brackets, so printed forms separate all node kinds.
        std::string key = gentrans::print_value(v) + "@" + std::string(gentrans::kind_name(v.kind()));
        all.insert(key);
        if (v.is_constructor()) cons.insert(key);
        for (const Value& x : v.items()) walk(x);
    };
    for (const Value& r : roots) walk(r);
    return SubtreeCount{all.size(), cons.size()};
}

bool contains_tag(const Value& v, const std::string& tag) {
    if (v.is_constructor() && v.tag() == tag) return true;
    for (const Value& x : v.items()) {
        if (contains_tag(x, tag)) return true;
    }
    return false;
}

} // namespace oracle

namespace gen {

namespace {
const char* const names[] = {"a", "b", "c", "x", "y", "z"};
const char* const ops[] = {"+", "-", "*", "/"};
const char* const odd_ops[] = {"^", "%", "max"};
} // namespace

Value expr(Rng& rng, int depth, bool with_unknown_ops) {
    int pick = depth <= 0 ? rng.below(2) : rng.below(5);
    if (pick == 0) return Value::con("Const", {Value::integer(rng.below(21) - 5)});
    if (pick == 1) return Value::con("Var", {Value::str(names[rng.below(6)])});
    std::string op = with_unknown_ops && rng.below(6) == 0 ? odd_ops[rng.below(3)] : ops[rng.below(4)];
    Value l = expr(rng, depth - 1, with_unknown_ops);
    Value r = expr(rng, depth - 1, with_unknown_ops);
    return Value::con("Binop", {Value::str(op), l, r});
}

Value balanced_expr(int nodes) {
    if (nodes <= 1) return Value::con("Var", {Value::str("x")});
    int inner = nodes - 1;
    int left = inner / 2;
    if (left % 2 == 0) --left;
    int right = inner - left;
    return Value::con("Binop", {Value::str("+"), balanced_expr(left), balanced_expr(right)});
}

Value closed_term(Rng& rng, int depth, std::vector<std::string> scope) {
    int pick = rng.below(depth <= 0 ? 1 : 3);
    if (scope.empty() || pick == 1) {
        std::string x = names[rng.below(6)];
        scope.push_back(x);
        if (depth <= 0) return Value::con("Abs", {Value::str(x), Value::con("Var", {Value::str(x)})});
        return Value::con("Abs", {Value::str(x), closed_term(rng, depth - 1, scope)});
    }
    if (pick == 0) return Value::con("Var", {Value::str(scope[rng.below(static_cast<int>(scope.size()))])});
    return Value::con("App", {closed_term(rng, depth - 1, scope), closed_term(rng, depth - 1, scope)});
}

namespace {

bool mentions_declared(const gentrans::TypeExpr& t) {
    if (t.kind == gentrans::TypeExpr::Kind::Apply) return true;
    return std::any_of(t.args.begin(), t.args.end(), mentions_declared);
}

} // namespace

Value of_type(Rng& rng, const gentrans::ValidatedSchema& schema, const gentrans::TypeExpr& type, int depth) {
    using gentrans::TypeExpr;
    if (depth < -8) throw std::runtime_error("of_type: no finite value reachable for " + gentrans::to_string(type));
    switch (type.kind) {
    case TypeExpr::Kind::Builtin:
        switch (type.builtin) {
        case gentrans::BuiltinKind::Int: return Value::integer(rng.below(11) - 5);
        case gentrans::BuiltinKind::String: return Value::str(names[rng.below(4)]);
        case gentrans::BuiltinKind::Bool: return Value::boolean(rng.coin());
        case gentrans::BuiltinKind::Unit: return Value::unit();
        }
        break;
    case TypeExpr::Kind::Tuple: {
        std::vector<Value> elems;
        for (const auto& t : type.args) elems.push_back(of_type(rng, schema, t, depth - 1));
        return Value::tuple(std::move(elems));
    }
    case TypeExpr::Kind::Seq: {
        std::vector<Value> elems;
        int n = depth <= 0 ? 0 : rng.below(4);
        for (int i = 0; i < n; ++i) elems.push_back(of_type(rng, schema, type.args[0], depth - 1));
        return Value::seq(std::move(elems));
    }
    case TypeExpr::Kind::Apply: {
        std::vector<gentrans::InstCtor> ctors = schema.constructors(type);
        std::vector<const gentrans::InstCtor*> pool;
        if (depth <= 0) {
            for (const auto& c : ctors) {
                if (std::none_of(c.arg_types.begin(), c.arg_types.end(), mentions_declared)) pool.push_back(&c);
            }
        }
        if (pool.empty()) {
            for (const auto& c : ctors) pool.push_back(&c);
        }
        const gentrans::InstCtor& c = *pool[rng.below(static_cast<int>(pool.size()))];
        if (c.decl->is_record) {
            std::vector<std::pair<std::string, Value>> fields;
            for (std::size_t i = 0; i < c.arg_types.size(); ++i) {
                fields.emplace_back(c.decl->fields[i], of_type(rng, schema, c.arg_types[i], depth - 1));
            }
            return Value::rec(c.tag, std::move(fields));
        }
        std::vector<Value> args;
        for (const auto& t : c.arg_types) args.push_back(of_type(rng, schema, t, depth - 1));
        return Value::con(c.tag, std::move(args));
    }
    case TypeExpr::Kind::Param: break;
    }
    throw std::runtime_error("of_type: open type " + gentrans::to_string(type));
}

} // namespace gen
