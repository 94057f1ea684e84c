#include <algorithm>
#include <string>

#include "gentrans/detail/lexer.hpp"
#include "gentrans/plugins.hpp"

namespace gentrans {

namespace {

AttrSig uniform_sig(const TypeDecl& d, AttrKind inh, AttrKind syn) {
    AttrSig s;
    s.inh_for_param.assign(d.params.size(), inh);
    s.syn_for_param.assign(d.params.size(), syn);
    s.inh_self = inh;
    s.syn_self = syn;
    return s;
}

Value rebuild(const Value& subject, std::vector<Value> items) {
    switch (subject.kind()) {
    case Value::Kind::Con: return Value::con(subject.tag(), std::move(items));
    case Value::Kind::Rec: {
        std::vector<std::pair<std::string, Value>> fields;
        auto names = subject.field_names();
        for (std::size_t i = 0; i < items.size(); ++i) fields.emplace_back(names[i], std::move(items[i]));
        return Value::rec(subject.tag(), std::move(fields));
    }
    case Value::Kind::Tuple: return Value::tuple(std::move(items));
    case Value::Kind::Seq: return Value::seq(std::move(items));
    default: return subject;
    }
}

void expect_kind(const Value& v, Value::Kind k) {
    if (!v.is(k)) {
        throw Error(ErrorCode::NonConformingSubject,
                    "expected a " + std::string(kind_name(k)) + ", found " + print_value(v));
    }
}

void expect_tuple(const Value& v, std::size_t n) {
    expect_kind(v, Value::Kind::Tuple);
    if (v.items().size() != n) {
        throw Error(ErrorCode::NonConformingSubject,
                    "expected a tuple of " + std::to_string(n) + " elements, found " + print_value(v));
    }
}

std::string builtin_text(BuiltinKind k, const Value& v) {
    switch (k) {
    case BuiltinKind::Int: return v.as_int().str();
    case BuiltinKind::String: return detail::quote_string(v.as_str());
    case BuiltinKind::Bool: return v.as_bool() ? "true" : "false";
    case BuiltinKind::Unit: expect_kind(v, Value::Kind::Unit); return "()";
    }
    return {};
}

// show

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string ctor_text(const DeriveEnv::Ctor& c, const std::vector<std::string>& args) {
    if (args.empty()) return c.tag;
    if (c.is_record) {
        std::vector<std::string> fields;
        for (std::size_t i = 0; i < args.size(); ++i) fields.push_back(c.fields[i] + " = " + args[i]);
        return c.tag + " {" + join(fields, "; ") + "}";
    }
    return c.tag + " (" + join(args, ", ") + ")";
}

using TextWrap = std::string (*)(std::string);

HandlerMap text_handlers(const DeriveEnv& env, TextWrap wrap) {
    HandlerMap out;
    for (auto& c : env.compile_constructors()) {
        out.emplace(c.tag, [c, wrap](const Attr& inh, const Value&, const Args& args) -> Attr {
            std::vector<std::string> parts;
            for (std::size_t i = 0; i < args.size(); ++i) parts.push_back(c.fns[i](inh, args[i]).text());
            return Value::str(wrap(ctor_text(c, parts)));
        });
    }
    return out;
}

std::string no_wrap(std::string s) { return s; }

std::string html_escape(std::string_view s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string html_item(std::string s) { return "<ul><li>" + std::move(s) + "</li></ul>"; }

TransformFn text_tuple(std::vector<TransformFn> elems) {
    return [elems = std::move(elems)](const Attr& inh, const Value& v) -> Attr {
        expect_tuple(v, elems.size());
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < elems.size(); ++i) parts.push_back(elems[i](inh, v.items()[i]).text());
        return Value::str("(" + join(parts, ", ") + ")");
    };
}

TransformFn text_seq(TransformFn elem) {
    return [elem = std::move(elem)](const Attr& inh, const Value& v) -> Attr {
        expect_kind(v, Value::Kind::Seq);
        std::vector<std::string> parts;
        for (const auto& x : v.items()) parts.push_back(elem(inh, x).text());
        return Value::str("[" + join(parts, "; ") + "]");
    };
}

// fmt

std::string layout(std::size_t indent, const std::string& head, std::string_view open, std::string_view close,
                   std::string_view sep, const std::vector<std::string>& parts) {
    std::string flat = head + std::string(open) + join(parts, std::string(sep) + " ") + std::string(close);
    bool multiline = std::any_of(parts.begin(), parts.end(), [](const std::string& p) {
        return p.find('\n') != std::string::npos;
    });
    if (!multiline && indent + flat.size() <= fmt_width) return flat;
    std::string inner(indent + fmt_indent, ' ');
    std::string out = head + std::string(open) + "\n";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += inner + parts[i];
        if (i + 1 < parts.size()) out += sep;
        out += "\n";
    }
    out += std::string(indent, ' ') + std::string(close);
    return out;
}

std::size_t indent_of(const Attr& inh) {
    const BigInt& i = inh.integer();
    if (i < 0 || i > 10000) throw Error(ErrorCode::AttrTypeMismatch, "fmt indentation out of range: " + i.str());
    return i.convert_to<std::size_t>();
}

HandlerMap fmt_handlers(const DeriveEnv& env) {
    HandlerMap out;
    for (auto& c : env.compile_constructors()) {
        out.emplace(c.tag, [c](const Attr& inh, const Value&, const Args& args) -> Attr {
            std::size_t indent = indent_of(inh);
            if (args.size() == 0) return Value::str(c.tag);
            Attr child = Value::integer(static_cast<long long>(indent + fmt_indent));
            std::vector<std::string> parts;
            for (std::size_t i = 0; i < args.size(); ++i) {
                std::string s = c.fns[i](child, args[i]).text();
                parts.push_back(c.is_record ? c.fields[i] + " = " + s : s);
            }
            if (c.is_record) return Value::str(layout(indent, c.tag + " ", "{", "}", ";", parts));
            return Value::str(layout(indent, c.tag + " ", "(", ")", ",", parts));
        });
    }
    return out;
}

// compare / eq

Ordering compare_ranks(std::size_t a, std::size_t b) {
    return a < b ? Ordering::Less : (a > b ? Ordering::Greater : Ordering::Equal);
}

template <class T>
Ordering natural(const T& a, const T& b) {
    return a < b ? Ordering::Less : (b < a ? Ordering::Greater : Ordering::Equal);
}

const Value& other_of(const Attr& inh) {
    if (!inh.is(Attr::Kind::Value)) {
        throw Error(ErrorCode::AttrTypeMismatch, "comparison needs a value to compare with, found " + print_attr(inh));
    }
    return inh.value();
}

void same_shape(const Value& a, const Value& b) {
    if (a.kind() != b.kind() || a.items().size() != b.items().size()) {
        throw Error(ErrorCode::NonConformingSubject,
                    "cannot compare " + print_value(a) + " with " + print_value(b) + ": different shapes");
    }
}

Ordering builtin_order(BuiltinKind k, const Value& a, const Value& b) {
    switch (k) {
    case BuiltinKind::Int: return natural(a.as_int(), b.as_int());
    case BuiltinKind::String: return natural(a.as_str(), b.as_str());
    case BuiltinKind::Bool: return natural(a.as_bool(), b.as_bool());
    case BuiltinKind::Unit: expect_kind(a, Value::Kind::Unit); expect_kind(b, Value::Kind::Unit); return Ordering::Equal;
    }
    return Ordering::Equal;
}

std::size_t rank_of(const DeriveEnv& env, std::string_view tag) {
    auto r = env.tag_rank(tag);
    if (!r) throw Error(ErrorCode::NonConformingSubject, "constructor " + std::string(tag) + " has no rank here");
    return *r;
}

HandlerMap compare_handlers(const DeriveEnv& env) {
    HandlerMap out;
    for (auto& c : env.compile_constructors()) {
        std::size_t mine = rank_of(env, c.tag);
        out.emplace(c.tag, [c, mine, env](const Attr& inh, const Value&, const Args& args) -> Attr {
            const Value& other = other_of(inh);
            if (!other.is_constructor()) {
                throw Error(ErrorCode::NonConformingSubject, "cannot compare " + c.tag + " with " + print_value(other));
            }
            if (other.tag() != c.tag) return Attr::cmp(compare_ranks(mine, rank_of(env, other.tag())));
            if (other.items().size() != args.size()) {
                throw Error(ErrorCode::NonConformingSubject, "arity mismatch comparing with " + print_value(other));
            }
            for (std::size_t i = 0; i < args.size(); ++i) {
                Ordering o = c.fns[i](other.items()[i], args[i]).ordering();
                if (o != Ordering::Equal) return Attr::cmp(o);
            }
            return Attr::cmp(Ordering::Equal);
        });
    }
    return out;
}

HandlerMap eq_handlers(const DeriveEnv& env) {
    HandlerMap out;
    for (auto& c : env.compile_constructors()) {
        out.emplace(c.tag, [c](const Attr& inh, const Value&, const Args& args) -> Attr {
            const Value& other = other_of(inh);
            if (!other.is_constructor() || other.tag() != c.tag || other.items().size() != args.size()) {
                return Value::boolean(false);
            }
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (!c.fns[i](other.items()[i], args[i]).boolean()) return Value::boolean(false);
            }
            return Value::boolean(true);
        });
    }
    return out;
}

// foldl / foldr

HandlerMap fold_handlers(const DeriveEnv& env, bool reversed) {
    HandlerMap out;
    for (auto& c : env.compile_constructors()) {
        out.emplace(c.tag, [c, reversed](const Attr& inh, const Value&, const Args& args) -> Attr {
            Attr acc = inh;
            for (std::size_t k = 0; k < args.size(); ++k) {
                std::size_t i = reversed ? args.size() - 1 - k : k;
                acc = c.fns[i](acc, args[i]);
            }
            return acc;
        });
    }
    return out;
}

TransformFn fold_tuple(std::vector<TransformFn> elems, bool reversed) {
    return [elems = std::move(elems), reversed](const Attr& inh, const Value& v) -> Attr {
        expect_tuple(v, elems.size());
        Attr acc = inh;
        for (std::size_t k = 0; k < elems.size(); ++k) {
            std::size_t i = reversed ? elems.size() - 1 - k : k;
            acc = elems[i](acc, v.items()[i]);
        }
        return acc;
    };
}

TransformFn fold_seq(TransformFn elem, bool reversed) {
    return [elem = std::move(elem), reversed](const Attr& inh, const Value& v) -> Attr {
        expect_kind(v, Value::Kind::Seq);
        Attr acc = inh;
        auto items = v.items();
        for (std::size_t k = 0; k < items.size(); ++k) acc = elem(acc, items[reversed ? items.size() - 1 - k : k]);
        return acc;
    };
}

PluginSpec fold_plugin(std::string name, bool reversed) {
    PluginSpec s;
    s.name = std::move(name);
    s.summary = reversed ? "threads an accumulator through the arguments, last to first"
                         : "threads an accumulator through the arguments, first to last";
    s.signature_of = [](const TypeDecl& d) { return uniform_sig(d, AttrKind::Accumulator, AttrKind::Accumulator); };
    s.derive_handlers = [reversed](const DeriveEnv& env) { return fold_handlers(env, reversed); };
    s.builtin = [](BuiltinKind) -> TransformFn { return [](const Attr& acc, const Value&) { return acc; }; };
    s.tuple = [reversed](std::vector<TransformFn> e) { return fold_tuple(std::move(e), reversed); };
    s.seq = [reversed](TransformFn e) { return fold_seq(std::move(e), reversed); };
    return s;
}

// hc

Attr intern(const HcStore& store, const Value& shallow, const std::vector<Handle>& children) {
    auto r = store.intern_node(shallow, children);
    return Attr::interned(std::move(r.store), r.handle, std::move(r.value));
}

Attr hc_children(const Attr& inh, const Value& subject, std::span<const Value> items,
                 const std::function<const TransformFn&(std::size_t)>& fn_at) {
    HcStore store = inh.store();
    std::vector<Handle> handles;
    std::vector<Value> values;
    for (std::size_t i = 0; i < items.size(); ++i) {
        Attr r = fn_at(i)(Attr::store(store), items[i]);
        store = r.store();
        handles.push_back(r.handle());
        values.push_back(r.value());
    }
    return intern(store, rebuild(subject, std::move(values)), handles);
}

} // namespace

PluginSpec show_plugin() {
    PluginSpec s;
    s.name = "show";
    s.summary = "conversion to a string";
    s.signature_of = [](const TypeDecl& d) { return uniform_sig(d, AttrKind::Unit, AttrKind::Text); };
    s.derive_handlers = [](const DeriveEnv& env) { return text_handlers(env, no_wrap); };
    s.builtin = [](BuiltinKind k) -> TransformFn {
        return [k](const Attr&, const Value& v) -> Attr { return Value::str(builtin_text(k, v)); };
    };
    s.tuple = text_tuple;
    s.seq = text_seq;
    return s;
}

PluginSpec html_plugin() {
    PluginSpec s;
    s.name = "html";
    s.summary = "conversion to an HTML representation";
    s.signature_of = [](const TypeDecl& d) { return uniform_sig(d, AttrKind::Unit, AttrKind::Text); };
    s.derive_handlers = [](const DeriveEnv& env) { return text_handlers(env, html_item); };
    s.builtin = [](BuiltinKind k) -> TransformFn {
        return [k](const Attr&, const Value& v) -> Attr { return Value::str(html_escape(builtin_text(k, v))); };
    };
    s.tuple = text_tuple;
    s.seq = text_seq;
    return s;
}

PluginSpec fmt_plugin() {
    PluginSpec s;
    s.name = "fmt";
    s.summary = "formatted output with line breaks and indentation";
    s.signature_of = [](const TypeDecl& d) { return uniform_sig(d, AttrKind::Int, AttrKind::Text); };
    s.derive_handlers = fmt_handlers;
    s.builtin = [](BuiltinKind k) -> TransformFn {
        return [k](const Attr&, const Value& v) -> Attr { return Value::str(builtin_text(k, v)); };
    };
    s.tuple = [](std::vector<TransformFn> elems) -> TransformFn {
        return [elems = std::move(elems)](const Attr& inh, const Value& v) -> Attr {
            expect_tuple(v, elems.size());
            std::size_t indent = indent_of(inh);
            Attr child = Value::integer(static_cast<long long>(indent + fmt_indent));
            std::vector<std::string> parts;
            for (std::size_t i = 0; i < elems.size(); ++i) parts.push_back(elems[i](child, v.items()[i]).text());
            return Value::str(layout(indent, "", "(", ")", ",", parts));
        };
    };
    s.seq = [](TransformFn elem) -> TransformFn {
        return [elem = std::move(elem)](const Attr& inh, const Value& v) -> Attr {
            expect_kind(v, Value::Kind::Seq);
            std::size_t indent = indent_of(inh);
            Attr child = Value::integer(static_cast<long long>(indent + fmt_indent));
            std::vector<std::string> parts;
            for (const auto& x : v.items()) parts.push_back(elem(child, x).text());
            return Value::str(layout(indent, "", "[", "]", ";", parts));
        };
    };
    return s;
}

PluginSpec compare_plugin() {
    PluginSpec s;
    s.name = "compare";
    s.summary = "comparison";
    s.signature_of = [](const TypeDecl& d) { return uniform_sig(d, AttrKind::Subject, AttrKind::Ordering); };
    s.derive_handlers = compare_handlers;
    s.builtin = [](BuiltinKind k) -> TransformFn {
        return [k](const Attr& inh, const Value& v) -> Attr { return Attr::cmp(builtin_order(k, v, other_of(inh))); };
    };
    s.tuple = [](std::vector<TransformFn> elems) -> TransformFn {
        return [elems = std::move(elems)](const Attr& inh, const Value& v) -> Attr {
            const Value& other = other_of(inh);
            expect_tuple(v, elems.size());
            same_shape(v, other);
            for (std::size_t i = 0; i < elems.size(); ++i) {
                Ordering o = elems[i](other.items()[i], v.items()[i]).ordering();
                if (o != Ordering::Equal) return Attr::cmp(o);
            }
            return Attr::cmp(Ordering::Equal);
        };
    };
    s.seq = [](TransformFn elem) -> TransformFn {
        return [elem = std::move(elem)](const Attr& inh, const Value& v) -> Attr {
            const Value& other = other_of(inh);
            expect_kind(v, Value::Kind::Seq);
            expect_kind(other, Value::Kind::Seq);
            auto a = v.items();
            auto b = other.items();
            for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
                Ordering o = elem(b[i], a[i]).ordering();
                if (o != Ordering::Equal) return Attr::cmp(o);
            }
            return Attr::cmp(compare_ranks(a.size(), b.size()));
        };
    };
    return s;
}

PluginSpec eq_plugin() {
    PluginSpec s;
    s.name = "eq";
    s.summary = "equality test";
    s.signature_of = [](const TypeDecl& d) { return uniform_sig(d, AttrKind::Subject, AttrKind::Bool); };
    s.derive_handlers = eq_handlers;
    s.builtin = [](BuiltinKind k) -> TransformFn {
        return [k](const Attr& inh, const Value& v) -> Attr {
            const Value& other = other_of(inh);
            if (v.kind() != other.kind()) return Value::boolean(false);
            return Value::boolean(builtin_order(k, v, other) == Ordering::Equal);
        };
    };
    s.tuple = [](std::vector<TransformFn> elems) -> TransformFn {
        return [elems = std::move(elems)](const Attr& inh, const Value& v) -> Attr {
            const Value& other = other_of(inh);
            expect_tuple(v, elems.size());
            if (!other.is(Value::Kind::Tuple) || other.items().size() != elems.size()) return Value::boolean(false);
            for (std::size_t i = 0; i < elems.size(); ++i) {
                if (!elems[i](other.items()[i], v.items()[i]).boolean()) return Value::boolean(false);
            }
            return Value::boolean(true);
        };
    };
    s.seq = [](TransformFn elem) -> TransformFn {
        return [elem = std::move(elem)](const Attr& inh, const Value& v) -> Attr {
            const Value& other = other_of(inh);
            expect_kind(v, Value::Kind::Seq);
            if (!other.is(Value::Kind::Seq) || other.items().size() != v.items().size()) return Value::boolean(false);
            for (std::size_t i = 0; i < v.items().size(); ++i) {
                if (!elem(other.items()[i], v.items()[i]).boolean()) return Value::boolean(false);
            }
            return Value::boolean(true);
        };
    };
    return s;
}

PluginSpec foldl_plugin() { return fold_plugin("foldl", false); }
PluginSpec foldr_plugin() { return fold_plugin("foldr", true); }

PluginSpec gmap_plugin() {
    PluginSpec s;
    s.name = "gmap";
    s.summary = "a functor: maps parameter positions, copies the rest";
    s.signature_of = [](const TypeDecl& d) { return uniform_sig(d, AttrKind::Unit, AttrKind::AnyValue); };
    s.derive_handlers = [](const DeriveEnv& env) {
        HandlerMap out;
        for (auto& c : env.compile_constructors()) {
            out.emplace(c.tag, [c](const Attr& inh, const Value& subject, const Args& args) -> Attr {
                std::vector<Value> items;
                for (std::size_t i = 0; i < args.size(); ++i) items.push_back(c.fns[i](inh, args[i]).value());
                return rebuild(subject, std::move(items));
            });
        }
        return out;
    };
    s.builtin = [](BuiltinKind k) -> TransformFn {
        return [k](const Attr&, const Value& v) -> Attr {
            builtin_text(k, v); // kind check
            return v;
        };
    };
    s.tuple = [](std::vector<TransformFn> elems) -> TransformFn {
        return [elems = std::move(elems)](const Attr& inh, const Value& v) -> Attr {
            expect_tuple(v, elems.size());
            std::vector<Value> items;
            for (std::size_t i = 0; i < elems.size(); ++i) items.push_back(elems[i](inh, v.items()[i]).value());
            return Value::tuple(std::move(items));
        };
    };
    s.seq = [](TransformFn elem) -> TransformFn {
        return [elem = std::move(elem)](const Attr& inh, const Value& v) -> Attr {
            expect_kind(v, Value::Kind::Seq);
            std::vector<Value> items;
            for (const auto& x : v.items()) items.push_back(elem(inh, x).value());
            return Value::seq(std::move(items));
        };
    };
    return s;
}

PluginSpec hc_plugin() {
    PluginSpec s;
    s.name = "hc";
    s.summary = "hash-consing into a maximally shared representation";
    s.signature_of = [](const TypeDecl& d) { return uniform_sig(d, AttrKind::Store, AttrKind::StoreWithSubject); };
    s.derive_handlers = [](const DeriveEnv& env) {
        HandlerMap out;
        for (auto& c : env.compile_constructors()) {
            out.emplace(c.tag, [c](const Attr& inh, const Value& subject, const Args& args) -> Attr {
                return hc_children(inh, subject, args.values, [&c](std::size_t i) -> const TransformFn& { return c.fns[i]; });
            });
        }
        return out;
    };
    s.builtin = [](BuiltinKind k) -> TransformFn {
        return [k](const Attr& inh, const Value& v) -> Attr {
            builtin_text(k, v);
            return intern(inh.store(), v, {});
        };
    };
    s.tuple = [](std::vector<TransformFn> elems) -> TransformFn {
        return [elems = std::move(elems)](const Attr& inh, const Value& v) -> Attr {
            expect_tuple(v, elems.size());
            return hc_children(inh, v, v.items(), [&elems](std::size_t i) -> const TransformFn& { return elems[i]; });
        };
    };
    s.seq = [](TransformFn elem) -> TransformFn {
        return [elem = std::move(elem)](const Attr& inh, const Value& v) -> Attr {
            expect_kind(v, Value::Kind::Seq);
            return hc_children(inh, v, v.items(), [&elem](std::size_t) -> const TransformFn& { return elem; });
        };
    };
    return s;
}

} // namespace gentrans
