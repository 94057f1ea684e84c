#include "gentrans/value.hpp"

#include <functional>

#include "gentrans/detail/lexer.hpp"

namespace gentrans {

struct Value::Node {
    Kind kind = Kind::Unit;
    std::string text; // tag or string payload
    BigInt number;
    bool flag = false;
    std::vector<Value> items;
    std::vector<std::string> names;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace

struct Value::NodeFactory {
    static std::shared_ptr<Value::Node> make(Value::Kind k) {
        auto n = std::make_shared<Value::Node>();
        n->kind = k;
        return n;
    }
};

Value::Value() : node_(nullptr) {}

Value Value::con(std::string tag, std::vector<Value> args) {
    auto n = NodeFactory::make(Kind::Con);
    n->text = std::move(tag);
    n->items = std::move(args);
    std::size_t h = mix(std::hash<std::string>{}(n->text), 1);
    for (const auto& a : n->items) h = mix(h, a.hash());
    n->hash = h;
    return Value(std::move(n));
}

Value Value::rec(std::string tag, std::vector<std::pair<std::string, Value>> fields) {
    auto n = NodeFactory::make(Kind::Rec);
    n->text = std::move(tag);
    std::size_t h = mix(std::hash<std::string>{}(n->text), 2);
    for (auto& [name, v] : fields) {
        h = mix(mix(h, std::hash<std::string>{}(name)), v.hash());
        n->names.push_back(std::move(name));
        n->items.push_back(std::move(v));
    }
    n->hash = h;
    return Value(std::move(n));
}

Value Value::integer(BigInt i) {
    auto n = NodeFactory::make(Kind::Int);
    n->hash = mix(3, std::hash<std::string>{}(i.str()));
    n->number = std::move(i);
    return Value(std::move(n));
}

Value Value::str(std::string s) {
    auto n = NodeFactory::make(Kind::Str);
    n->hash = mix(4, std::hash<std::string>{}(s));
    n->text = std::move(s);
    return Value(std::move(n));
}

Value Value::boolean(bool b) {
    auto n = NodeFactory::make(Kind::Bool);
    n->flag = b;
    n->hash = mix(5, b ? 1 : 0);
    return Value(std::move(n));
}

Value Value::unit() { return Value(); }

Value Value::tuple(std::vector<Value> elems) {
    auto n = NodeFactory::make(Kind::Tuple);
    std::size_t h = 6;
    for (const auto& e : elems) h = mix(h, e.hash());
    n->items = std::move(elems);
    n->hash = h;
    return Value(std::move(n));
}

Value Value::seq(std::vector<Value> elems) {
    auto n = NodeFactory::make(Kind::Seq);
    std::size_t h = 7;
    for (const auto& e : elems) h = mix(h, e.hash());
    n->items = std::move(elems);
    n->hash = h;
    return Value(std::move(n));
}

Value::Kind Value::kind() const { return node_ ? node_->kind : Kind::Unit; }

namespace {
const std::string& empty_string() {
    static const std::string s;
    return s;
}
} // namespace

const std::string& Value::tag() const {
    return node_ && (node_->kind == Kind::Con || node_->kind == Kind::Rec) ? node_->text : empty_string();
}

std::span<const Value> Value::items() const {
    if (!node_) return {};
    return node_->items;
}

std::span<const std::string> Value::field_names() const {
    if (!node_) return {};
    return node_->names;
}

const Value* Value::field(std::string_view name) const {
    if (!node_) return nullptr;
    for (std::size_t i = 0; i < node_->names.size(); ++i) {
        if (node_->names[i] == name) return &node_->items[i];
    }
    return nullptr;
}

const BigInt& Value::as_int() const {
    if (kind() != Kind::Int) throw Error(ErrorCode::TypeMismatch, "expected an integer value, found " + print_value(*this));
    return node_->number;
}

const std::string& Value::as_str() const {
    if (kind() != Kind::Str) throw Error(ErrorCode::TypeMismatch, "expected a string value, found " + print_value(*this));
    return node_->text;
}

bool Value::as_bool() const {
    if (kind() != Kind::Bool) throw Error(ErrorCode::TypeMismatch, "expected a boolean value, found " + print_value(*this));
    return node_->flag;
}

std::size_t Value::hash() const { return node_ ? node_->hash : 0x51ed270b; }

bool operator==(const Value& a, const Value& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.hash() != b.hash()) return false;
    if (!a.node_ || !b.node_) return a.kind() == Value::Kind::Unit && b.kind() == Value::Kind::Unit;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    switch (x.kind) {
    case Value::Kind::Unit: return true;
    case Value::Kind::Int: return x.number == y.number;
    case Value::Kind::Str: return x.text == y.text;
    case Value::Kind::Bool: return x.flag == y.flag;
    case Value::Kind::Con:
    case Value::Kind::Rec:
        if (x.text != y.text || x.names != y.names) return false;
        [[fallthrough]];
    case Value::Kind::Tuple:
    case Value::Kind::Seq: return x.items == y.items;
    }
    return false;
}

std::string_view kind_name(Value::Kind kind) {
    switch (kind) {
    case Value::Kind::Con: return "constructor";
    case Value::Kind::Rec: return "record constructor";
    case Value::Kind::Int: return "int";
    case Value::Kind::Str: return "string";
    case Value::Kind::Bool: return "bool";
    case Value::Kind::Unit: return "unit";
    case Value::Kind::Tuple: return "tuple";
    case Value::Kind::Seq: return "list";
    }
    return "?";
}

namespace {

bool needs_parens_as_arg(const Value& v) {
    switch (v.kind()) {
    case Value::Kind::Con: return !v.items().empty();
    case Value::Kind::Rec: return true;
    case Value::Kind::Int: return v.as_int() < 0;
    default: return false;
    }
}

void print_into(std::string& out, const Value& v);

void print_arg(std::string& out, const Value& v) {
    if (needs_parens_as_arg(v)) {
        out += '(';
        print_into(out, v);
        out += ')';
    } else {
        print_into(out, v);
    }
}

void print_into(std::string& out, const Value& v) {
    switch (v.kind()) {
    case Value::Kind::Unit: out += "()"; return;
    case Value::Kind::Int: out += v.as_int().str(); return;
    case Value::Kind::Str: out += detail::quote_string(v.as_str()); return;
    case Value::Kind::Bool: out += v.as_bool() ? "true" : "false"; return;
    case Value::Kind::Tuple:
        out += '(';
        for (std::size_t i = 0; i < v.items().size(); ++i) {
            if (i) out += ", ";
            print_into(out, v.items()[i]);
        }
        out += ')';
        return;
    case Value::Kind::Seq:
        out += '[';
        for (std::size_t i = 0; i < v.items().size(); ++i) {
            if (i) out += "; ";
            print_into(out, v.items()[i]);
        }
        out += ']';
        return;
    case Value::Kind::Rec:
        out += v.tag();
        out += " {";
        for (std::size_t i = 0; i < v.items().size(); ++i) {
            if (i) out += "; ";
            out += v.field_names()[i];
            out += " = ";
            print_into(out, v.items()[i]);
        }
        out += '}';
        return;
    case Value::Kind::Con: {
        out += v.tag();
        auto args = v.items();
        if (args.empty()) return;
        out += ' ';
        if (args.size() == 1) {
            print_arg(out, args[0]);
            return;
        }
        out += '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) out += ", ";
            print_into(out, args[i]);
        }
        out += ')';
        return;
    }
    }
}

} // namespace

std::string print_value(const Value& v) {
    std::string out;
    print_into(out, v);
    return out;
}

} // namespace gentrans
