#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "gentrans/hashcons.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

enum class Ordering { Less, Equal, Greater };

std::string_view ordering_name(Ordering o); // "LT", "EQ", "GT"

class Attr;

/// A transformation: inherited attribute and subject in, synthesised attribute out.
using TransformFn = std::function<Attr(const Attr&, const Value&)>;

/// Inherited or synthesised attribute. Besides plain values it can hold a
/// transformation (argument transformers passed as attributes), a comparison
/// result, a hash-cons store, or an interned (store, handle, value) triple.
class Attr {
public:
    enum class Kind { Value, Fun, Cmp, Store, Interned };

    Attr() = default; // unit value
    Attr(Value v) : data_(std::move(v)) {} // NOLINT(google-explicit-constructor)

    static Attr fun(TransformFn f);
    static Attr cmp(Ordering o);
    static Attr store(HcStore s);
    static Attr interned(HcStore s, Handle h, Value v);

    Kind kind() const { return static_cast<Kind>(data_.index()); }
    bool is(Kind k) const { return kind() == k; }

    /// The plain value; for Interned attributes, the interned value.
    const Value& value() const;
    const TransformFn& fun() const;
    Ordering ordering() const;
    /// The store of a Store or Interned attribute.
    const HcStore& store() const;
    Handle handle() const;

    // Shorthands over value().
    const std::string& text() const { return value().as_str(); }
    const BigInt& integer() const { return value().as_int(); }
    bool boolean() const { return value().as_bool(); }

private:
    struct Interned {
        HcStore store;
        Handle handle;
        Value value;
    };
    std::variant<Value, std::shared_ptr<const TransformFn>, Ordering, HcStore, Interned> data_;
};

std::string_view attr_kind_name(Attr::Kind k);

/// Text form used by the CLI: strings raw, other values via print_value,
/// orderings as LT/EQ/GT, stores as `<store N>`, interned triples as
/// `#handle value`.
std::string print_attr(const Attr& a);

} // namespace gentrans
