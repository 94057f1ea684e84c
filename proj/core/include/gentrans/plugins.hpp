#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/attr.hpp"
#include "gentrans/engine.hpp"
#include "gentrans/schema.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

/// Semantic attribute types used in signatures.
enum class AttrKind {
    Unit,
    Int,
    Text,
    Bool,
    Ordering,
    Subject,          // a value of the transformed type (or of the parameter's type)
    AnyValue,         // some value, e.g. the image of gmap
    Accumulator,      // any attribute, threaded unchanged in type
    Store,            // a hash-cons store
    StoreWithSubject, // an interned value together with the updated store
};

std::string_view attr_kind_name(AttrKind k);

/// Inherited/synthesised attribute types per type parameter and for the type itself.
struct AttrSig {
    std::vector<AttrKind> inh_for_param;
    std::vector<AttrKind> syn_for_param;
    AttrKind inh_self = AttrKind::Unit;
    AttrKind syn_self = AttrKind::Unit;

    /// `inh -> t -> syn` plus one `inh_i -> 'p -> syn_i` entry per parameter.
    std::string describe(const std::vector<std::string>& params = {}) const;
    friend bool operator==(const AttrSig&, const AttrSig&) = default;
};

/// Does `a` inhabit `kind`? `subject_type`, when given, is used for Subject
/// and StoreWithSubject conformance.
bool attr_conforms(AttrKind kind, const Attr& a, const ValidatedSchema& schema, const TypeExpr* subject_type = nullptr);

struct PluginSpec;

/// What a plugin sees while deriving the handlers of one declaration: the
/// declaration, compiled transformers for any type expression in its scope,
/// and the group's self transformations.
class DeriveEnv {
public:
    struct Context;
    explicit DeriveEnv(std::shared_ptr<const Context> ctx) : ctx_(std::move(ctx)) {}

    const TypeDecl& decl() const;
    const ValidatedSchema& schema() const;
    const PluginSpec& plugin() const;

    /// Transformer for a type expression in the scope of decl(): parameters map
    /// to the supplied argument transformers, group members to self
    /// transformations, other declarations to nested fixpoints, and
    /// builtins/tuples/sequences to the plugin's combinators.
    TransformFn transformer(const TypeExpr& t) const;

    const SelfFns& self_fns() const;
    const TransformFn& self() const;
    const TransformFn& sibling(std::size_t k) const;
    TransformFn param(std::string_view name) const;

    /// Position of a tag in the declaration order of the outermost type
    /// being dispatched on (compositions flattened).
    std::optional<std::size_t> tag_rank(std::string_view tag) const;

    /// Constructors of decl() with their argument transformers compiled.
    struct Ctor {
        std::string tag;
        bool is_record = false;
        std::vector<std::string> fields;
        std::vector<TypeExpr> types;
        std::vector<TransformFn> fns;
    };
    std::vector<Ctor> compile_constructors() const;

private:
    std::shared_ptr<const Context> ctx_;
};

using HandlerMap = std::map<std::string, Handler, std::less<>>;

/// A plugin derives handler maps from declarations. Combinators for builtins,
/// tuples and sequences are optional; types needing a missing one are
/// reported as UnsupportedForType.
struct PluginSpec {
    std::string name;
    std::string summary;
    std::function<AttrSig(const TypeDecl&)> signature_of;
    std::function<HandlerMap(const DeriveEnv&)> derive_handlers;
    std::function<TransformFn(BuiltinKind)> builtin;
    std::function<TransformFn(std::vector<TransformFn>)> tuple;
    std::function<TransformFn(TransformFn)> seq;
};

struct Derived {
    TableGenerator gen;
    AttrSig sig;
};

class PluginRegistry {
public:
    PluginRegistry() = default;

    /// show, fmt, html, compare, eq, foldl, foldr, gmap, hc.
    static PluginRegistry with_builtins();

    void register_plugin(PluginSpec spec); // throws DuplicatePlugin
    bool contains(std::string_view name) const;
    const PluginSpec& get(std::string_view name) const; // throws UnknownPlugin
    /// Registration order.
    std::vector<std::string> names() const;

    /// Generator for one declaration. `params` are its argument transformers;
    /// missing ones throw UnboundTypeParameter when reached.
    Derived derive(std::string_view plugin, const ValidatedSchema& schema, std::string_view type_name,
                   std::vector<ParamTransformer> params = {}) const;

    /// Generators for the whole recursion group of `type_name`, in group
    /// order. Parameters are bound by name across the group.
    std::vector<TableGenerator> derive_group(std::string_view plugin, const ValidatedSchema& schema,
                                             std::string_view type_name,
                                             const std::map<std::string, ParamTransformer, std::less<>>& params = {}) const;

    /// A closed transformation for an arbitrary closed type expression.
    TransformFn instantiate(std::string_view plugin, const ValidatedSchema& schema, const TypeExpr& type) const;

    /// A transformation for `type`; when `params` is non-empty, `type` must be
    /// an application whose parameters are transformed by `params` instead.
    TransformFn instantiate_with(std::string_view plugin, const ValidatedSchema& schema, const TypeExpr& type,
                                 const std::vector<TransformFn>& params) const;

private:
    std::vector<std::shared_ptr<const PluginSpec>> plugins_;
    std::shared_ptr<const PluginSpec> find(std::string_view name) const;
};

/// Built-in plugin specifications.
PluginSpec show_plugin();
PluginSpec fmt_plugin();
PluginSpec html_plugin();
PluginSpec compare_plugin();
PluginSpec eq_plugin();
PluginSpec foldl_plugin();
PluginSpec foldr_plugin();
PluginSpec gmap_plugin();
PluginSpec hc_plugin();

/// Column limit and indentation step of fmt.
inline constexpr std::size_t fmt_width = 60;
inline constexpr std::size_t fmt_indent = 2;

// Checked entry points: the value must conform to `type`, attributes are
// checked against the plugin's signature.

std::string eval_show(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& v);
std::string eval_fmt(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& v);
std::string eval_html(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& v);
Ordering eval_compare(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& a,
                      const Value& b);
bool eval_eq(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, const Value& a,
             const Value& b);
/// `params` replace the parameters of the application `type` (empty: copy them).
Value eval_gmap(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type,
                const std::vector<TransformFn>& params, const Value& v);

enum class FoldDirection { Left, Right };

/// `steps` transform parameter positions (empty: parameters skipped like builtins).
Attr eval_fold(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type, FoldDirection dir,
               const std::vector<TransformFn>& steps, const Attr& init, const Value& v);
HcStore::Result eval_hc(const PluginRegistry& reg, const ValidatedSchema& schema, const TypeExpr& type,
                        const HcStore& store, const Value& v);

/// Default inherited attribute a plugin starts a traversal with (unit, indent
/// 0, empty store, ...). Compare and eq have none; nullopt there.
std::optional<Attr> default_inh(std::string_view plugin);

} // namespace gentrans
