#include "gentrans/attr.hpp"

namespace gentrans {

std::string_view ordering_name(Ordering o) {
    switch (o) {
    case Ordering::Less: return "LT";
    case Ordering::Equal: return "EQ";
    case Ordering::Greater: return "GT";
    }
    return "?";
}

std::string_view attr_kind_name(Attr::Kind k) {
    switch (k) {
    case Attr::Kind::Value: return "value";
    case Attr::Kind::Fun: return "function";
    case Attr::Kind::Cmp: return "comparison";
    case Attr::Kind::Store: return "store";
    case Attr::Kind::Interned: return "interned value";
    }
    return "?";
}

namespace {
[[noreturn]] void mismatch(std::string_view wanted, Attr::Kind found) {
    throw Error(ErrorCode::AttrTypeMismatch,
                "expected a " + std::string(wanted) + " attribute, found a " + std::string(attr_kind_name(found)));
}
} // namespace

Attr Attr::fun(TransformFn f) {
    Attr a;
    a.data_ = std::make_shared<const TransformFn>(std::move(f));
    return a;
}

Attr Attr::cmp(Ordering o) {
    Attr a;
    a.data_ = o;
    return a;
}

Attr Attr::store(HcStore s) {
    Attr a;
    a.data_ = std::move(s);
    return a;
}

Attr Attr::interned(HcStore s, Handle h, Value v) {
    Attr a;
    a.data_ = Interned{std::move(s), h, std::move(v)};
    return a;
}

const Value& Attr::value() const {
    if (auto* v = std::get_if<Value>(&data_)) return *v;
    if (auto* i = std::get_if<Interned>(&data_)) return i->value;
    mismatch("value", kind());
}

const TransformFn& Attr::fun() const {
    if (auto* f = std::get_if<std::shared_ptr<const TransformFn>>(&data_)) return **f;
    mismatch("function", kind());
}

Ordering Attr::ordering() const {
    if (auto* o = std::get_if<Ordering>(&data_)) return *o;
    mismatch("comparison", kind());
}

const HcStore& Attr::store() const {
    if (auto* s = std::get_if<HcStore>(&data_)) return *s;
    if (auto* i = std::get_if<Interned>(&data_)) return i->store;
    mismatch("store", kind());
}

Handle Attr::handle() const {
    if (auto* i = std::get_if<Interned>(&data_)) return i->handle;
    mismatch("interned value", kind());
}

std::string print_attr(const Attr& a) {
    switch (a.kind()) {
    case Attr::Kind::Value:
        if (a.value().is(Value::Kind::Str)) return a.value().as_str();
        return print_value(a.value());
    case Attr::Kind::Fun: return "<function>";
    case Attr::Kind::Cmp: return std::string(ordering_name(a.ordering()));
    case Attr::Kind::Store: return "<store " + std::to_string(a.store().size()) + ">";
    case Attr::Kind::Interned: return "#" + std::to_string(a.handle()) + " " + print_value(a.value());
    }
    return {};
}

} // namespace gentrans
