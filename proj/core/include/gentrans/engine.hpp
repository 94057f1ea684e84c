#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/attr.hpp"
#include "gentrans/schema.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

/// Transformations of every member of a recursion group, in group order.
using SelfFns = std::vector<TransformFn>;

/// Deconstructed constructor arguments. `names` is non-empty for record
/// constructors and parallel to `values`.
struct Args {
    std::span<const Value> values;
    std::span<const std::string> names;

    std::size_t size() const { return values.size(); }
    const Value& operator[](std::size_t i) const { return values[i]; }
    bool is_record() const { return !names.empty(); }
    /// Record field by name; throws TypeMismatch when absent.
    const Value& field(std::string_view name) const;

    static Args of(const Value& subject) { return Args{subject.items(), subject.field_names()}; }
};

/// Per-constructor transformation. Receives the whole subject besides its arguments.
using Handler = std::function<Attr(const Attr& inh, const Value& subject, const Args& args)>;

struct TransformTable {
    /// Dispatch declaration (aliases already resolved).
    std::string type_name;
    std::map<std::string, Handler, std::less<>> handlers;
    /// Composition tables only: one table per direct constituent.
    std::map<std::string, std::shared_ptr<const TransformTable>, std::less<>> sub_tables;
};

/// Checks that `table` covers exactly the constructor set of `type_name`.
/// Throws MissingHandler or UnknownConstructor.
void check_table(const ValidatedSchema& schema, std::string_view type_name, const TransformTable& table);

/// Transformer for a type parameter, possibly depending on the group's
/// self transformations (e.g. a parameter instantiated with the type itself).
class ParamTransformer {
public:
    ParamTransformer() = default;

    static ParamTransformer fixed(TransformFn f);
    static ParamTransformer self(std::size_t member);
    static ParamTransformer from_self(std::function<TransformFn(const SelfFns&)> make);
    /// Throws UnboundTypeParameter when applied.
    static ParamTransformer unbound(std::string param_name);

    TransformFn resolve(const SelfFns& self_fns) const;

private:
    std::function<TransformFn(const SelfFns&)> make_;
};

/// Open-recursive description of one group member's transformation table.
struct TableGenerator {
    using Gen = std::function<TransformTable(const SelfFns& self_fns, std::span<const TransformFn> params)>;

    std::string type_name;
    std::size_t group_arity = 1;
    std::size_t member_index = 0;
    std::vector<std::string> param_names;
    std::vector<ParamTransformer> arg_transformers; // parallel to param_names
    std::vector<std::string> tags;                  // constructor set, for override checks
    Gen gen;

    TransformTable build(const SelfFns& self_fns) const;
};

/// What an overriding handler sees besides its arguments.
struct Scope {
    const SelfFns& self_fns;
    std::size_t member_index;
    std::span<const TransformFn> params;
    const Handler& super;

    const TransformFn& self() const { return self_fns[member_index]; }
    const TransformFn& sibling(std::size_t k) const;
    const TransformFn& param(std::size_t i) const;
};

using OpenHandler = std::function<Attr(const Scope& scope, const Attr& inh, const Value& subject, const Args& args)>;
using Overrides = std::map<std::string, OpenHandler, std::less<>>;

/// Dispatches `subject` by tag into `table`. Compositions dispatch into the
/// sub-table of the constituent owning the tag; aliases dispatch through
/// their target declaration.
Attr gcata(std::string_view type_name, const ValidatedSchema& schema, const TransformTable& table, const Attr& inh,
           const Value& subject);

struct Instrumentation {
    std::size_t tables_built = 0;
    std::size_t nodes_visited = 0;
};

/// A fixed (closed) transformation for one group member. Copies share state.
class Transform {
public:
    Transform() = default;

    Attr operator()(const Attr& inh, const Value& subject) const;
    /// The transformation as a plain function; keeps the group alive.
    TransformFn fn() const;
    const std::string& type_name() const;
    std::size_t member_index() const { return index_; }

    Instrumentation stats() const;
    /// Summed over every member of the group.
    Instrumentation group_stats() const;

private:
    friend std::vector<Transform> fix_group(const std::vector<std::string>&, const ValidatedSchema&,
                                            std::vector<TableGenerator>);
    struct State;
    Transform(std::shared_ptr<State> state, std::size_t index) : state_(std::move(state)), index_(index) {}

    std::shared_ptr<State> state_;
    std::size_t index_ = 0;
};

/// Fixpoint for a singleton group. The table is built at most once, on first use.
Transform fix(std::string_view type_name, const ValidatedSchema& schema, TableGenerator gen);

/// Group fixpoint: gens[k] describes group[k]; each table is built at most once.
std::vector<Transform> fix_group(const std::vector<std::string>& group, const ValidatedSchema& schema,
                                 std::vector<TableGenerator> gens);

/// Replaces handlers of `base`. Overriding handlers receive the extended
/// transformation as self (late binding) and the replaced handler as super.
TableGenerator extend(TableGenerator base, Overrides overrides);

/// Generator for a composition from generators of its constituents (keyed by
/// constituent declaration name) and handlers for its extra constructors.
/// All parts receive the same self transformations.
TableGenerator compose_tables(std::string_view composed_type, const ValidatedSchema& schema,
                              std::map<std::string, TableGenerator, std::less<>> parts, Overrides extras = {},
                              std::size_t group_arity = 1, std::size_t member_index = 0);

} // namespace gentrans
