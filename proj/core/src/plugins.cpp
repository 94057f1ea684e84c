#include "gentrans/plugins.hpp"

#include <algorithm>
#include <set>

namespace gentrans {

std::string_view attr_kind_name(AttrKind k) {
    switch (k) {
    case AttrKind::Unit: return "unit";
    case AttrKind::Int: return "int";
    case AttrKind::Text: return "string";
    case AttrKind::Bool: return "bool";
    case AttrKind::Ordering: return "comparison";
    case AttrKind::Subject: return "self";
    case AttrKind::AnyValue: return "value";
    case AttrKind::Accumulator: return "acc";
    case AttrKind::Store: return "store";
    case AttrKind::StoreWithSubject: return "store * self";
    }
    return "?";
}

std::string AttrSig::describe(const std::vector<std::string>& params) const {
    std::string out = std::string(attr_kind_name(inh_self)) + " -> t -> " + std::string(attr_kind_name(syn_self));
    for (std::size_t i = 0; i < inh_for_param.size() && i < syn_for_param.size(); ++i) {
        std::string p = i < params.size() ? "'" + params[i] : "'" + std::to_string(i);
        out += "; " + std::string(attr_kind_name(inh_for_param[i])) + " -> " + p + " -> " +
               std::string(attr_kind_name(syn_for_param[i]));
    }
    return out;
}

bool attr_conforms(AttrKind kind, const Attr& a, const ValidatedSchema& schema, const TypeExpr* subject_type) {
    auto value_is = [&](Value::Kind k) { return a.is(Attr::Kind::Value) && a.value().is(k); };
    switch (kind) {
    case AttrKind::Unit: return value_is(Value::Kind::Unit);
    case AttrKind::Int: return value_is(Value::Kind::Int);
    case AttrKind::Text: return value_is(Value::Kind::Str);
    case AttrKind::Bool: return value_is(Value::Kind::Bool);
    case AttrKind::Ordering: return a.is(Attr::Kind::Cmp);
    case AttrKind::Subject:
        return a.is(Attr::Kind::Value) && (!subject_type || conforms(a.value(), *subject_type, schema).ok);
    case AttrKind::AnyValue: return a.is(Attr::Kind::Value);
    case AttrKind::Accumulator: return !a.is(Attr::Kind::Fun);
    case AttrKind::Store: return a.is(Attr::Kind::Store);
    case AttrKind::StoreWithSubject:
        return a.is(Attr::Kind::Interned) && (!subject_type || conforms(a.value(), *subject_type, schema).ok);
    }
    return false;
}

// Derivation

struct DeriveEnv::Context {
    std::shared_ptr<const PluginSpec> spec;
    ValidatedSchema schema;
    const TypeDecl* decl = nullptr;
    std::map<std::string, TransformFn, std::less<>> params;
    std::vector<std::string> group;
    SelfFns self_fns;
    std::map<std::string, std::size_t, std::less<>> ranks;
};

namespace {

using ParamEnv = std::map<std::string, ParamTransformer, std::less<>>;
using SpecPtr = std::shared_ptr<const PluginSpec>;

[[noreturn]] void unsupported(const PluginSpec& spec, std::string_view what) {
    throw Error(ErrorCode::UnsupportedForType, "plugin " + spec.name + " does not support " + std::string(what));
}

TransformFn compile(const DeriveEnv::Context& c, const TypeExpr& t);
std::vector<TableGenerator> derive_group_impl(const SpecPtr& spec, const ValidatedSchema& schema,
                                              std::string_view type_name, const ParamEnv& env);

std::map<std::string, std::size_t, std::less<>> ranks_of(const ValidatedSchema& schema, std::string_view type_name) {
    std::map<std::string, std::size_t, std::less<>> ranks;
    for (const auto& c : schema.constructors(type_name)) ranks.emplace(c.tag, ranks.size());
    return ranks;
}

TransformTable derive_table(const SpecPtr& spec, const ValidatedSchema& schema, const TypeDecl& decl,
                            std::map<std::string, TransformFn, std::less<>> params,
                            const std::vector<std::string>& group, const SelfFns& self_fns, std::string_view rank_type) {
    auto ctx = std::make_shared<DeriveEnv::Context>();
    ctx->spec = spec;
    ctx->schema = schema;
    ctx->decl = &decl;
    ctx->params = std::move(params);
    ctx->group = group;
    ctx->self_fns = self_fns;
    ctx->ranks = ranks_of(schema, rank_type);

    auto bind_params = [&](const TypeDecl& target, const std::vector<TypeExpr>& args) {
        std::map<std::string, TransformFn, std::less<>> out;
        for (std::size_t i = 0; i < target.params.size() && i < args.size(); ++i) {
            out.emplace(target.params[i], compile(*ctx, args[i]));
        }
        return out;
    };

    switch (decl.kind) {
    case TypeDecl::Kind::Variants:
    case TypeDecl::Kind::OpenVariants: {
        TransformTable table;
        table.type_name = decl.name;
        table.handlers = spec->derive_handlers(DeriveEnv(ctx));
        return table;
    }
    case TypeDecl::Kind::Composition: {
        TransformTable table;
        table.type_name = decl.name;
        for (const auto& m : decl.members) {
            const TypeDecl& md = schema.decl(m.name);
            auto sub = derive_table(spec, schema, md, bind_params(md, m.args), group, self_fns, rank_type);
            table.sub_tables.emplace(m.name, std::make_shared<const TransformTable>(std::move(sub)));
        }
        if (!decl.constructors.empty()) table.handlers = spec->derive_handlers(DeriveEnv(ctx));
        return table;
    }
    case TypeDecl::Kind::Alias: {
        const TypeExpr& target = *decl.alias_target;
        const TypeDecl& td = schema.decl(target.name);
        auto target_params = bind_params(td, target.args);
        if (std::find(group.begin(), group.end(), td.name) != group.end()) {
            return derive_table(spec, schema, td, std::move(target_params), group, self_fns, td.name);
        }
        ParamEnv env;
        for (const auto& [name, fn] : target_params) env.emplace(name, ParamTransformer::fixed(fn));
        const auto& tgroup = schema.group_of(td.name);
        auto fixed = fix_group(tgroup, schema, derive_group_impl(spec, schema, td.name, env));
        SelfFns nested;
        for (const auto& f : fixed) nested.push_back(f.fn());
        return derive_table(spec, schema, td, std::move(target_params), tgroup, nested, td.name);
    }
    }
    throw Error(ErrorCode::UnsupportedForType, "unknown declaration kind");
}

TransformFn compile(const DeriveEnv::Context& c, const TypeExpr& t) {
    const PluginSpec& spec = *c.spec;
    switch (t.kind) {
    case TypeExpr::Kind::Param: {
        if (auto it = c.params.find(t.name); it != c.params.end()) return it->second;
        return ParamTransformer::unbound(t.name).resolve({});
    }
    case TypeExpr::Kind::Builtin:
        if (!spec.builtin) unsupported(spec, builtin_name(t.builtin));
        return spec.builtin(t.builtin);
    case TypeExpr::Kind::Tuple: {
        if (!spec.tuple) unsupported(spec, "tuples");
        std::vector<TransformFn> elems;
        for (const auto& e : t.args) elems.push_back(compile(c, e));
        return spec.tuple(std::move(elems));
    }
    case TypeExpr::Kind::Seq:
        if (!spec.seq) unsupported(spec, "lists");
        return spec.seq(compile(c, t.args.front()));
    case TypeExpr::Kind::Apply: {
        auto it = std::find(c.group.begin(), c.group.end(), t.name);
        if (it != c.group.end()) return c.self_fns[static_cast<std::size_t>(it - c.group.begin())];
        const TypeDecl& d = c.schema.decl(t.name);
        ParamEnv env;
        for (std::size_t i = 0; i < d.params.size() && i < t.args.size(); ++i) {
            env.emplace(d.params[i], ParamTransformer::fixed(compile(c, t.args[i])));
        }
        const auto& group = c.schema.group_of(t.name);
        auto fixed = fix_group(group, c.schema, derive_group_impl(c.spec, c.schema, t.name, env));
        return fixed[c.schema.index_in_group(t.name)].fn();
    }
    }
    throw Error(ErrorCode::UnsupportedForType, "unknown type expression");
}

void check_support(const PluginSpec& spec, const ValidatedSchema& schema, const TypeExpr& t,
                   std::set<std::string, std::less<>>& seen);

void check_decl_support(const PluginSpec& spec, const ValidatedSchema& schema, std::string_view name,
                        std::set<std::string, std::less<>>& seen) {
    if (!seen.insert(std::string(name)).second) return;
    const TypeDecl& d = schema.decl(name);
    for (const auto& c : d.constructors) {
        for (const auto& a : c.args) check_support(spec, schema, a, seen);
    }
    if (d.alias_target) check_support(spec, schema, *d.alias_target, seen);
    for (const auto& m : d.members) check_support(spec, schema, m, seen);
}

void check_support(const PluginSpec& spec, const ValidatedSchema& schema, const TypeExpr& t,
                   std::set<std::string, std::less<>>& seen) {
    switch (t.kind) {
    case TypeExpr::Kind::Param: return;
    case TypeExpr::Kind::Builtin:
        if (!spec.builtin) unsupported(spec, builtin_name(t.builtin));
        return;
    case TypeExpr::Kind::Tuple:
        if (!spec.tuple) unsupported(spec, "tuples");
        break;
    case TypeExpr::Kind::Seq:
        if (!spec.seq) unsupported(spec, "lists");
        break;
    case TypeExpr::Kind::Apply: check_decl_support(spec, schema, t.name, seen); break;
    }
    for (const auto& a : t.args) check_support(spec, schema, a, seen);
}

std::vector<TableGenerator> derive_group_impl(const SpecPtr& spec, const ValidatedSchema& schema,
                                              std::string_view type_name, const ParamEnv& env) {
    const auto& group = schema.group_of(type_name);
    std::vector<TableGenerator> gens;
    for (std::size_t k = 0; k < group.size(); ++k) {
        const TypeDecl& d = schema.decl(group[k]);
        TableGenerator g;
        g.type_name = d.name;
        g.group_arity = group.size();
        g.member_index = k;
        g.param_names = d.params;
        for (const auto& p : d.params) {
            auto it = env.find(p);
            g.arg_transformers.push_back(it != env.end() ? it->second : ParamTransformer::unbound(p));
        }
        for (const auto& c : schema.constructors(d.name)) g.tags.push_back(c.tag);
        g.gen = [spec, schema, name = d.name, group](const SelfFns& self_fns, std::span<const TransformFn> ps) {
            const TypeDecl& decl = schema.decl(name);
            std::map<std::string, TransformFn, std::less<>> params;
            for (std::size_t i = 0; i < decl.params.size() && i < ps.size(); ++i) params.emplace(decl.params[i], ps[i]);
            return derive_table(spec, schema, decl, std::move(params), group, self_fns, name);
        };
        gens.push_back(std::move(g));
    }
    return gens;
}

} // namespace

const TypeDecl& DeriveEnv::decl() const { return *ctx_->decl; }
const ValidatedSchema& DeriveEnv::schema() const { return ctx_->schema; }
const PluginSpec& DeriveEnv::plugin() const { return *ctx_->spec; }
TransformFn DeriveEnv::transformer(const TypeExpr& t) const { return compile(*ctx_, t); }
const SelfFns& DeriveEnv::self_fns() const { return ctx_->self_fns; }

const TransformFn& DeriveEnv::self() const {
    auto it = std::find(ctx_->group.begin(), ctx_->group.end(), ctx_->decl->name);
    if (it == ctx_->group.end()) {
        if (ctx_->self_fns.size() == 1) return ctx_->self_fns.front();
        throw Error(ErrorCode::GroupArityMismatch, ctx_->decl->name + " is not a member of the current group");
    }
    return ctx_->self_fns[static_cast<std::size_t>(it - ctx_->group.begin())];
}

const TransformFn& DeriveEnv::sibling(std::size_t k) const {
    if (k >= ctx_->self_fns.size()) {
        throw Error(ErrorCode::GroupArityMismatch, "sibling " + std::to_string(k) + " requested in a group of " +
                                                       std::to_string(ctx_->self_fns.size()));
    }
    return ctx_->self_fns[k];
}

TransformFn DeriveEnv::param(std::string_view name) const {
    if (auto it = ctx_->params.find(name); it != ctx_->params.end()) return it->second;
    return ParamTransformer::unbound(std::string(name)).resolve({});
}

std::optional<std::size_t> DeriveEnv::tag_rank(std::string_view tag) const {
    if (auto it = ctx_->ranks.find(tag); it != ctx_->ranks.end()) return it->second;
    return std::nullopt;
}

std::vector<DeriveEnv::Ctor> DeriveEnv::compile_constructors() const {
    std::vector<Ctor> out;
    for (const auto& c : decl().constructors) {
        Ctor k;
        k.tag = c.name;
        k.is_record = c.is_record;
        k.fields = c.fields;
        k.types = c.args;
        for (const auto& a : c.args) k.fns.push_back(transformer(a));
        out.push_back(std::move(k));
    }
    return out;
}

// Registry

PluginRegistry PluginRegistry::with_builtins() {
    PluginRegistry r;
    r.register_plugin(show_plugin());
    r.register_plugin(fmt_plugin());
    r.register_plugin(html_plugin());
    r.register_plugin(compare_plugin());
    r.register_plugin(eq_plugin());
    r.register_plugin(foldl_plugin());
    r.register_plugin(foldr_plugin());
    r.register_plugin(gmap_plugin());
    r.register_plugin(hc_plugin());
    return r;
}

void PluginRegistry::register_plugin(PluginSpec spec) {
    if (spec.name.empty()) throw Error(ErrorCode::UnknownPlugin, "plugin without a name");
    if (contains(spec.name)) throw Error(ErrorCode::DuplicatePlugin, "plugin " + spec.name + " is already registered");
    if (!spec.signature_of || !spec.derive_handlers) {
        throw Error(ErrorCode::UnsupportedForType, "plugin " + spec.name + " lacks a signature or handler derivation");
    }
    plugins_.push_back(std::make_shared<const PluginSpec>(std::move(spec)));
}

std::shared_ptr<const PluginSpec> PluginRegistry::find(std::string_view name) const {
    for (const auto& p : plugins_) {
        if (p->name == name) return p;
    }
    return nullptr;
}

bool PluginRegistry::contains(std::string_view name) const { return find(name) != nullptr; }

const PluginSpec& PluginRegistry::get(std::string_view name) const {
    auto p = find(name);
    if (!p) throw Error(ErrorCode::UnknownPlugin, "unknown plugin " + std::string(name));
    return *p;
}

std::vector<std::string> PluginRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& p : plugins_) out.push_back(p->name);
    return out;
}

Derived PluginRegistry::derive(std::string_view plugin, const ValidatedSchema& schema, std::string_view type_name,
                               std::vector<ParamTransformer> params) const {
    auto spec = find(plugin);
    if (!spec) throw Error(ErrorCode::UnknownPlugin, "unknown plugin " + std::string(plugin));
    const TypeDecl& d = schema.decl(type_name);
    if (params.size() > d.params.size()) {
        throw Error(ErrorCode::ArityMismatch, d.name + " has " + std::to_string(d.params.size()) + " parameter(s), " +
                                                  std::to_string(params.size()) + " transformer(s) given");
    }
    std::set<std::string, std::less<>> seen;
    check_decl_support(*spec, schema, d.name, seen);
    ParamEnv env;
    for (std::size_t i = 0; i < params.size(); ++i) env.emplace(d.params[i], params[i]);
    auto gens = derive_group_impl(spec, schema, d.name, env);
    Derived out{std::move(gens[schema.index_in_group(d.name)]), spec->signature_of(d)};
    return out;
}

std::vector<TableGenerator> PluginRegistry::derive_group(std::string_view plugin, const ValidatedSchema& schema,
                                                         std::string_view type_name, const ParamEnv& params) const {
    auto spec = find(plugin);
    if (!spec) throw Error(ErrorCode::UnknownPlugin, "unknown plugin " + std::string(plugin));
    std::set<std::string, std::less<>> seen;
    for (const auto& member : schema.group_of(type_name)) check_decl_support(*spec, schema, member, seen);
    return derive_group_impl(spec, schema, type_name, params);
}

TransformFn PluginRegistry::instantiate(std::string_view plugin, const ValidatedSchema& schema,
                                        const TypeExpr& type) const {
    return instantiate_with(plugin, schema, type, {});
}

TransformFn PluginRegistry::instantiate_with(std::string_view plugin, const ValidatedSchema& schema,
                                             const TypeExpr& type, const std::vector<TransformFn>& params) const {
    auto spec = find(plugin);
    if (!spec) throw Error(ErrorCode::UnknownPlugin, "unknown plugin " + std::string(plugin));
    check_type_expr(schema, type);
    std::set<std::string, std::less<>> seen;
    if (params.empty()) {
        check_support(*spec, schema, type, seen);
        DeriveEnv::Context ctx;
        ctx.spec = spec;
        ctx.schema = schema;
        return compile(ctx, type);
    }
    if (type.kind != TypeExpr::Kind::Apply) {
        throw Error(ErrorCode::ArityMismatch, "argument transformers given for " + to_string(type) +
                                                  ", which is not a type application");
    }
    const TypeDecl& d = schema.decl(type.name);
    if (params.size() != d.params.size()) {
        throw Error(ErrorCode::ArityMismatch, d.name + " has " + std::to_string(d.params.size()) + " parameter(s), " +
                                                  std::to_string(params.size()) + " transformer(s) given");
    }
    check_decl_support(*spec, schema, d.name, seen);
    ParamEnv env;
    for (std::size_t i = 0; i < params.size(); ++i) env.emplace(d.params[i], ParamTransformer::fixed(params[i]));
    auto fixed = fix_group(schema.group_of(d.name), schema, derive_group_impl(spec, schema, d.name, env));
    return fixed[schema.index_in_group(d.name)].fn();
}

// Checked entry points

namespace {

void require_attr(AttrKind kind, const Attr& a, const ValidatedSchema& schema, const TypeExpr* type,
                  std::string_view plugin, std::string_view role) {
    if (!attr_conforms(kind, a, schema, type)) {
        throw Error(ErrorCode::AttrTypeMismatch, std::string(plugin) + ": " + std::string(role) + " attribute " +
                                                     print_attr(a) + " is not of type " +
                                                     std::string(attr_kind_name(kind)));
    }
}

AttrSig sig_for(const PluginRegistry& reg, std::string_view plugin, const ValidatedSchema& schema, const TypeExpr& type) {
    if (type.kind == TypeExpr::Kind::Apply) return reg.get(plugin).signature_of(schema.decl(type.name));
    TypeDecl anonymous;
    anonymous.name = to_string(type);
    return reg.get(plugin).signature_of(anonymous);
}

Attr run_checked(const PluginRegistry& reg, std::string_view plugin, const ValidatedSchema& schema,
                 const TypeExpr& type, const std::vector<TransformFn>& params, const Attr& inh, const Value& v,
                 const TypeExpr* inh_type, const TypeExpr* syn_type) {
    require_conforms(v, type, schema);
    AttrSig sig = sig_for(reg, plugin, schema, type);
    require_attr(sig.inh_self, inh, schema, inh_type, plugin, "inherited");
    Attr out = reg.instantiate_with(plugin, schema, type, params)(inh, v);
    require_attr(sig.syn_self, out, schema, syn_type, plugin, "synthesised");
    return out;
}

} // namespace

std::string eval_show(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& v) {
    return run_checked(reg, "show", schema, type, {}, Attr(), v, nullptr, nullptr).text();
}

std::string eval_fmt(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& v) {
    return run_checked(reg, "fmt", schema, type, {}, Value::integer(0), v, nullptr, nullptr).text();
}

std::string eval_html(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& v) {
    return run_checked(reg, "html", schema, type, {}, Attr(), v, nullptr, nullptr).text();
}

Ordering eval_compare(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& a,
                      const Value& b) {
    return run_checked(reg, "compare", schema, type, {}, b, a, &type, nullptr).ordering();
}

bool eval_eq(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& a,
             const Value& b) {
    return run_checked(reg, "eq", schema, type, {}, b, a, &type, nullptr).boolean();
}

Value eval_gmap(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type,
                const std::vector<TransformFn>& params, const Value& v) {
    return run_checked(reg, "gmap", schema, type, params, Attr(), v, nullptr, nullptr).value();
}

Attr eval_fold(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, FoldDirection dir,
               const std::vector<TransformFn>& steps, const Attr& init, const Value& v) {
    std::string_view plugin = dir == FoldDirection::Left ? "foldl" : "foldr";
    std::vector<TransformFn> params = steps;
    if (params.empty() && type.kind == TypeExpr::Kind::Apply) {
        // Parameter positions are skipped, like builtins.
        std::size_t n = schema.decl(type.name).params.size();
        for (std::size_t i = 0; i < n; ++i) params.push_back([](const Attr& acc, const Value&) { return acc; });
    }
    return run_checked(reg, plugin, schema, type, params, init, v, nullptr, nullptr);
}

HcStore::Result eval_hc(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type,
                        const HcStore& store, const Value& v) {
    Attr out = run_checked(reg, "hc", schema, type, {}, Attr::store(store), v, nullptr, &type);
    return HcStore::Result{out.store(), out.handle(), out.value()};
}

std::optional<Attr> default_inh(std::string_view plugin) {
    if (plugin == "compare" || plugin == "eq") return std::nullopt;
    if (plugin == "fmt") return Attr(Value::integer(0));
    if (plugin == "hc") return Attr::store(HcStore());
    return Attr();
}

} // namespace gentrans
