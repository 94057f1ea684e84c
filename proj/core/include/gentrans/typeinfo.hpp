#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/engine.hpp"
#include "gentrans/plugins.hpp"

namespace gentrans {

/// Everything known about one declared type: its recursion group, its
/// dispatcher, the group fixpoint, and the default transformation of every
/// requested plugin.
struct TypeInfo {
    std::string type_name;
    std::vector<std::string> group;
    ValidatedSchema schema;
    std::function<Attr(const TransformTable&, const Attr&, const Value&)> gcata;
    /// Group fixpoint over one generator per group member; returns the
    /// transformation of this type.
    std::function<Transform(std::vector<TableGenerator>)> fix;
    std::map<std::string, Transform, std::less<>> defaults;

    const Transform& default_of(std::string_view plugin) const; // throws PluginNotRequested
};

using PluginRequests = std::map<std::string, std::set<std::string>, std::less<>>;

class TypeInfoRegistry {
public:
    /// Plugins requested for a type (here or by a `with` clause) are derived
    /// for its whole recursion group.
    static TypeInfoRegistry build(const ValidatedSchema& schema, const PluginRegistry& plugins,
                                  const PluginRequests& requested = {});

    const TypeInfo& get(std::string_view type_name) const; // throws UnknownType
    const Transform& default_of(std::string_view type_name, std::string_view plugin) const;
    /// Declaration order.
    std::vector<std::string> type_names() const;
    const ValidatedSchema& schema() const { return schema_; }

private:
    ValidatedSchema schema_;
    std::vector<std::string> order_;
    std::map<std::string, TypeInfo, std::less<>> infos_;
};

/// fix/fix_group through a type's info: a single generator for singleton
/// groups, throws GroupArityMismatch otherwise.
Transform transform(const TypeInfo& info, TableGenerator gen);
/// One generator per group member, in group order.
std::vector<Transform> transform_group(const TypeInfo& info, std::vector<TableGenerator> gens);

} // namespace gentrans
