#include "gentrans/engine.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>

namespace gentrans {

const Value& Args::field(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return values[i];
    }
    throw Error(ErrorCode::TypeMismatch, "no field `" + std::string(name) + "` in constructor arguments");
}

namespace {

const TypeDecl& dispatch_decl(const ValidatedSchema& schema, std::string_view type_name) {
    const TypeDecl* d = &schema.decl(type_name);
    while (d->kind == TypeDecl::Kind::Alias) d = &schema.decl(d->alias_target->name);
    return *d;
}

[[noreturn]] void not_conforming(const TypeDecl& d, const Value& subject, std::string_view why) {
    throw Error(ErrorCode::NonConformingSubject,
                "value " + print_value(subject) + " does not conform to type " + d.name + ": " + std::string(why));
}

void check_shape(const TypeDecl& d, const ConstructorDecl& c, const Value& subject) {
    if (c.is_record != subject.is(Value::Kind::Rec)) {
        not_conforming(d, subject, c.is_record ? "constructor " + c.name + " takes a record"
                                               : "constructor " + c.name + " does not take a record");
    }
    if (subject.items().size() != c.arity()) {
        not_conforming(d, subject, "constructor " + c.name + " expects " + std::to_string(c.arity()) + " argument(s)");
    }
    if (c.is_record) {
        auto names = subject.field_names();
        if (!std::equal(names.begin(), names.end(), c.fields.begin(), c.fields.end())) {
            not_conforming(d, subject, "record fields of " + c.name + " do not match its declaration");
        }
    }
}

Attr invoke(const TransformTable& table, const TypeDecl& d, const Attr& inh, const Value& subject) {
    auto h = table.handlers.find(subject.tag());
    if (h == table.handlers.end()) {
        throw Error(ErrorCode::MissingHandler, "no handler for constructor " + subject.tag() + " in table for " + d.name);
    }
    return h->second(inh, subject, Args::of(subject));
}

} // namespace

Attr gcata(std::string_view type_name, const ValidatedSchema& schema, const TransformTable& table, const Attr& inh,
           const Value& subject) {
    const TypeDecl& d = dispatch_decl(schema, type_name);
    if (!subject.is_constructor()) not_conforming(d, subject, "expected a constructor");
    const std::string& tag = subject.tag();

    if (d.kind != TypeDecl::Kind::Composition) {
        const ConstructorDecl* c = d.find_constructor(tag);
        if (!c) not_conforming(d, subject, "unknown constructor " + tag);
        check_shape(d, *c, subject);
        return invoke(table, d, inh, subject);
    }

    auto owner = schema.constituent_of(d.name, tag);
    if (!owner) not_conforming(d, subject, "unknown constructor " + tag);
    if (owner->empty()) {
        check_shape(d, *d.find_constructor(tag), subject);
        return invoke(table, d, inh, subject);
    }
    auto sub = table.sub_tables.find(*owner);
    if (sub == table.sub_tables.end()) {
        throw Error(ErrorCode::MissingHandler, "no table for constituent " + *owner + " of " + d.name);
    }
    return gcata(*owner, schema, *sub->second, inh, subject);
}

void check_table(const ValidatedSchema& schema, std::string_view type_name, const TransformTable& table) {
    const TypeDecl& d = dispatch_decl(schema, type_name);
    std::set<std::string, std::less<>> expected;
    for (const auto& c : d.constructors) expected.insert(c.name);
    for (const auto& tag : expected) {
        if (!table.handlers.contains(tag)) {
            throw Error(ErrorCode::MissingHandler, "table for " + d.name + " has no handler for constructor " + tag);
        }
    }
    for (const auto& [tag, h] : table.handlers) {
        if (!expected.contains(tag)) {
            throw Error(ErrorCode::UnknownConstructor,
                        "table for " + d.name + " has a handler for " + tag + ", which is not one of its constructors");
        }
        if (!h) throw Error(ErrorCode::MissingHandler, "empty handler for constructor " + tag + " of " + d.name);
    }
    if (d.kind != TypeDecl::Kind::Composition) {
        if (!table.sub_tables.empty()) {
            throw Error(ErrorCode::InvalidComposition, "table for " + d.name + " has constituent tables but is not composed");
        }
        return;
    }
    for (const auto& m : d.members) {
        auto sub = table.sub_tables.find(m.name);
        if (sub == table.sub_tables.end() || !sub->second) {
            throw Error(ErrorCode::MissingHandler, "table for " + d.name + " has no table for constituent " + m.name);
        }
        check_table(schema, m.name, *sub->second);
    }
    if (table.sub_tables.size() != d.members.size()) {
        throw Error(ErrorCode::InvalidComposition, "table for " + d.name + " has tables for unknown constituents");
    }
}

// ParamTransformer

ParamTransformer ParamTransformer::fixed(TransformFn f) {
    ParamTransformer p;
    p.make_ = [f = std::move(f)](const SelfFns&) { return f; };
    return p;
}

ParamTransformer ParamTransformer::self(std::size_t member) {
    ParamTransformer p;
    p.make_ = [member](const SelfFns& s) {
        if (member >= s.size()) {
            throw Error(ErrorCode::GroupArityMismatch, "parameter bound to group member " + std::to_string(member) +
                                                           " of a group of " + std::to_string(s.size()));
        }
        return s[member];
    };
    return p;
}

ParamTransformer ParamTransformer::from_self(std::function<TransformFn(const SelfFns&)> make) {
    ParamTransformer p;
    p.make_ = std::move(make);
    return p;
}

ParamTransformer ParamTransformer::unbound(std::string param_name) {
    return fixed([name = std::move(param_name)](const Attr&, const Value&) -> Attr {
        throw Error(ErrorCode::UnboundTypeParameter, "no transformer supplied for type parameter '" + name);
    });
}

TransformFn ParamTransformer::resolve(const SelfFns& self_fns) const {
    if (!make_) throw Error(ErrorCode::UnboundTypeParameter, "empty parameter transformer");
    return make_(self_fns);
}

TransformTable TableGenerator::build(const SelfFns& self_fns) const {
    if (self_fns.size() != group_arity) {
        throw Error(ErrorCode::GroupArityMismatch, "generator for " + type_name + " expects " +
                                                       std::to_string(group_arity) + " self transformation(s), got " +
                                                       std::to_string(self_fns.size()));
    }
    if (arg_transformers.size() != param_names.size()) {
        throw Error(ErrorCode::ArityMismatch, "generator for " + type_name + " has " + std::to_string(param_names.size()) +
                                                  " parameter(s) but " + std::to_string(arg_transformers.size()) +
                                                  " argument transformer(s)");
    }
    std::vector<TransformFn> params;
    params.reserve(arg_transformers.size());
    for (const auto& p : arg_transformers) params.push_back(p.resolve(self_fns));
    return gen(self_fns, params);
}

const TransformFn& Scope::sibling(std::size_t k) const {
    if (k >= self_fns.size()) {
        throw Error(ErrorCode::GroupArityMismatch,
                    "sibling " + std::to_string(k) + " requested in a group of " + std::to_string(self_fns.size()));
    }
    return self_fns[k];
}

const TransformFn& Scope::param(std::size_t i) const {
    if (i >= params.size()) {
        throw Error(ErrorCode::UnboundTypeParameter, "no transformer for type parameter " + std::to_string(i));
    }
    return params[i];
}

// Fixpoint

struct Transform::State {
    std::vector<std::string> group;
    ValidatedSchema schema;
    std::vector<TableGenerator> gens;
    std::vector<std::once_flag> once;
    std::vector<std::shared_ptr<const TransformTable>> tables;
    std::vector<std::atomic<std::size_t>> built;
    std::vector<std::atomic<std::size_t>> visited;
    SelfFns selfs;

    State(std::vector<std::string> g, ValidatedSchema s, std::vector<TableGenerator> gs)
        : group(std::move(g)), schema(std::move(s)), gens(std::move(gs)), once(group.size()), tables(group.size()),
          built(group.size()), visited(group.size()) {}

    Attr apply(std::size_t k, const Attr& inh, const Value& subject) {
        std::call_once(once[k], [&] {
            auto table = std::make_shared<const TransformTable>(gens[k].build(selfs));
            check_table(schema, group[k], *table);
            tables[k] = std::move(table);
            built[k].fetch_add(1, std::memory_order_relaxed);
        });
        visited[k].fetch_add(1, std::memory_order_relaxed);
        return gcata(group[k], schema, *tables[k], inh, subject);
    }
};

Attr Transform::operator()(const Attr& inh, const Value& subject) const {
    if (!state_) throw Error(ErrorCode::MissingHandler, "empty transformation");
    return state_->apply(index_, inh, subject);
}

TransformFn Transform::fn() const {
    if (!state_) throw Error(ErrorCode::MissingHandler, "empty transformation");
    return [state = state_, k = index_](const Attr& inh, const Value& subject) { return state->apply(k, inh, subject); };
}

const std::string& Transform::type_name() const {
    static const std::string none;
    return state_ ? state_->group[index_] : none;
}

Instrumentation Transform::stats() const {
    if (!state_) return {};
    return {state_->built[index_].load(), state_->visited[index_].load()};
}

Instrumentation Transform::group_stats() const {
    Instrumentation total;
    if (!state_) return total;
    for (std::size_t k = 0; k < state_->group.size(); ++k) {
        total.tables_built += state_->built[k].load();
        total.nodes_visited += state_->visited[k].load();
    }
    return total;
}

std::vector<Transform> fix_group(const std::vector<std::string>& group, const ValidatedSchema& schema,
                                 std::vector<TableGenerator> gens) {
    if (group.empty()) throw Error(ErrorCode::GroupArityMismatch, "empty recursion group");
    const auto& actual = schema.group_of(group.front());
    if (actual != group) {
        std::string names;
        for (const auto& n : actual) names += (names.empty() ? "" : ", ") + n;
        throw Error(ErrorCode::GroupArityMismatch, "the recursion group of " + group.front() + " is [" + names + "]");
    }
    if (gens.size() != group.size()) {
        throw Error(ErrorCode::GroupArityMismatch, "group of " + std::to_string(group.size()) + " needs as many generators, got " +
                                                       std::to_string(gens.size()));
    }
    for (std::size_t k = 0; k < gens.size(); ++k) {
        if (gens[k].group_arity != group.size()) {
            throw Error(ErrorCode::GroupArityMismatch, "generator for " + gens[k].type_name + " has group arity " +
                                                           std::to_string(gens[k].group_arity) + ", group has " +
                                                           std::to_string(group.size()) + " member(s)");
        }
        if (gens[k].type_name != group[k] || gens[k].member_index != k) {
            throw Error(ErrorCode::GroupArityMismatch,
                        "generator for " + gens[k].type_name + " given for group member " + group[k]);
        }
    }
    auto state = std::make_shared<Transform::State>(group, schema, std::move(gens));
    std::weak_ptr<Transform::State> weak = state;
    for (std::size_t k = 0; k < group.size(); ++k) {
        state->selfs.push_back([weak, k](const Attr& inh, const Value& subject) {
            auto s = weak.lock();
            if (!s) throw Error(ErrorCode::MissingHandler, "transformation used after its group was released");
            return s->apply(k, inh, subject);
        });
    }
    std::vector<Transform> out;
    for (std::size_t k = 0; k < group.size(); ++k) out.push_back(Transform(state, k));
    return out;
}

Transform fix(std::string_view type_name, const ValidatedSchema& schema, TableGenerator gen) {
    const auto& group = schema.group_of(type_name);
    if (group.size() != 1 || gen.group_arity != 1) {
        throw Error(ErrorCode::GroupArityMismatch,
                    "fix needs a singleton group and a generator of arity 1; " + std::string(type_name) +
                        " is in a group of " + std::to_string(group.size()) + ", generator arity is " +
                        std::to_string(gen.group_arity));
    }
    std::vector<TableGenerator> gens;
    gens.push_back(std::move(gen));
    return fix_group(group, schema, std::move(gens)).front();
}

// Extension and composition

namespace {

struct OverrideContext {
    SelfFns self_fns;
    std::vector<TransformFn> params;
};

bool replace_handler(TransformTable& table, std::string_view tag, const std::function<Handler(Handler)>& wrap) {
    if (auto it = table.handlers.find(tag); it != table.handlers.end()) {
        it->second = wrap(std::move(it->second));
        return true;
    }
    for (auto& [name, sub] : table.sub_tables) {
        TransformTable copy = *sub;
        if (replace_handler(copy, tag, wrap)) {
            sub = std::make_shared<const TransformTable>(std::move(copy));
            return true;
        }
    }
    return false;
}

Handler bind_open(std::shared_ptr<const OverrideContext> ctx, std::size_t member, OpenHandler h, Handler super) {
    return [ctx = std::move(ctx), member, h = std::move(h), super = std::move(super)](
               const Attr& inh, const Value& subject, const Args& args) {
        Scope scope{ctx->self_fns, member, ctx->params, super};
        return h(scope, inh, subject, args);
    };
}

} // namespace

TableGenerator extend(TableGenerator base, Overrides overrides) {
    for (const auto& [tag, h] : overrides) {
        if (std::find(base.tags.begin(), base.tags.end(), tag) == base.tags.end()) {
            throw Error(ErrorCode::UnknownOverrideTag, "cannot override " + tag + ": not a constructor of " + base.type_name);
        }
        if (!h) throw Error(ErrorCode::MissingHandler, "empty override for " + tag);
    }
    TableGenerator out = base;
    out.gen = [base_gen = std::move(base.gen), overrides = std::move(overrides), member = base.member_index](
                  const SelfFns& self_fns, std::span<const TransformFn> params) {
        TransformTable table = base_gen(self_fns, params);
        auto ctx = std::make_shared<const OverrideContext>(
            OverrideContext{self_fns, std::vector<TransformFn>(params.begin(), params.end())});
        for (const auto& [tag, h] : overrides) {
            bool found = replace_handler(table, tag, [&](Handler old) { return bind_open(ctx, member, h, std::move(old)); });
            if (!found) throw Error(ErrorCode::UnknownOverrideTag, "no handler for " + tag + " in table for " + table.type_name);
        }
        return table;
    };
    return out;
}

TableGenerator compose_tables(std::string_view composed_type, const ValidatedSchema& schema,
                              std::map<std::string, TableGenerator, std::less<>> parts, Overrides extras,
                              std::size_t group_arity, std::size_t member_index) {
    const TypeDecl& d = dispatch_decl(schema, composed_type);
    if (d.kind != TypeDecl::Kind::Composition) {
        throw Error(ErrorCode::InvalidComposition, std::string(composed_type) + " is not a composed type");
    }
    for (const auto& m : d.members) {
        if (!parts.contains(m.name)) {
            throw Error(ErrorCode::MissingConstituent, "no generator for constituent " + m.name + " of " + d.name);
        }
    }
    for (const auto& [name, part] : parts) {
        bool member = std::any_of(d.members.begin(), d.members.end(), [&](const TypeExpr& m) { return m.name == name; });
        if (!member) throw Error(ErrorCode::InvalidComposition, name + " is not a constituent of " + d.name);
        if (part.group_arity != group_arity) {
            throw Error(ErrorCode::GroupArityMismatch, "generator for " + name + " has group arity " +
                                                           std::to_string(part.group_arity) + ", expected " +
                                                           std::to_string(group_arity));
        }
    }
    for (const auto& [tag, h] : extras) {
        if (!d.find_constructor(tag)) {
            throw Error(ErrorCode::UnknownExtraTag, tag + " is not an extra constructor of " + d.name);
        }
    }
    for (const auto& c : d.constructors) {
        if (!extras.contains(c.name)) {
            throw Error(ErrorCode::MissingHandler, "no handler for extra constructor " + c.name + " of " + d.name);
        }
    }

    TableGenerator out;
    out.type_name = std::string(composed_type);
    out.group_arity = group_arity;
    out.member_index = member_index;
    for (const auto& c : schema.constructors(composed_type)) out.tags.push_back(c.tag);
    out.gen = [dispatch = d.name, parts = std::move(parts), extras = std::move(extras),
               member_index](const SelfFns& self_fns, std::span<const TransformFn> params) {
        TransformTable table;
        table.type_name = dispatch;
        for (const auto& [name, part] : parts) {
            table.sub_tables.emplace(name, std::make_shared<const TransformTable>(part.build(self_fns)));
        }
        if (!extras.empty()) {
            auto ctx = std::make_shared<const OverrideContext>(
                OverrideContext{self_fns, std::vector<TransformFn>(params.begin(), params.end())});
            for (const auto& [tag, h] : extras) {
                Handler none = [tag = tag](const Attr&, const Value&, const Args&) -> Attr {
                    throw Error(ErrorCode::MissingHandler, "no inherited handler for extra constructor " + tag);
                };
                table.handlers.emplace(tag, bind_open(ctx, member_index, h, std::move(none)));
            }
        }
        return table;
    };
    return out;
}

} // namespace gentrans
