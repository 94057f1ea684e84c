#include "gentrans/typeinfo.hpp"

namespace gentrans {

const Transform& TypeInfo::default_of(std::string_view plugin) const {
    auto it = defaults.find(plugin);
    if (it == defaults.end()) {
        throw Error(ErrorCode::PluginNotRequested,
                    "plugin " + std::string(plugin) + " was not requested for type " + type_name);
    }
    return it->second;
}

TypeInfoRegistry TypeInfoRegistry::build(const ValidatedSchema& schema, const PluginRegistry& plugins,
                                          const PluginRequests& requested) {
    TypeInfoRegistry r;
    r.schema_ = schema;

    PluginRequests merged;
    for (const auto& d : schema.decls()) {
        merged[d.name].insert(d.plugins.begin(), d.plugins.end());
    }
    for (const auto& [type, names] : requested) {
        schema.decl(type);
        merged[type].insert(names.begin(), names.end());
    }
    for (const auto& [type, names] : merged) {
        for (const auto& p : names) plugins.get(p);
    }

    for (const auto& d : schema.decls()) {
        TypeInfo info;
        info.type_name = d.name;
        info.group = schema.group_of(d.name);
        info.schema = schema;
        info.gcata = [schema, name = d.name](const TransformTable& table, const Attr& inh, const Value& v) {
            return gcata(name, schema, table, inh, v);
        };
        info.fix = [schema, name = d.name](std::vector<TableGenerator> gens) {
            const auto& group = schema.group_of(name);
            return fix_group(group, schema, std::move(gens))[schema.index_in_group(name)];
        };
        r.order_.push_back(d.name);
        r.infos_.emplace(d.name, std::move(info));
    }

    for (const auto& group : schema.groups()) {
        std::set<std::string> wanted;
        for (const auto& member : group) {
            if (auto it = merged.find(member); it != merged.end()) wanted.insert(it->second.begin(), it->second.end());
        }
        for (const auto& p : wanted) {
            auto fixed = fix_group(group, schema, plugins.derive_group(p, schema, group.front()));
            for (std::size_t k = 0; k < group.size(); ++k) r.infos_.at(group[k]).defaults.emplace(p, fixed[k]);
        }
    }
    return r;
}

const TypeInfo& TypeInfoRegistry::get(std::string_view type_name) const {
    auto it = infos_.find(type_name);
    if (it == infos_.end()) throw Error(ErrorCode::UnknownType, "unknown type " + std::string(type_name));
    return it->second;
}

const Transform& TypeInfoRegistry::default_of(std::string_view type_name, std::string_view plugin) const {
    return get(type_name).default_of(plugin);
}

std::vector<std::string> TypeInfoRegistry::type_names() const { return order_; }

Transform transform(const TypeInfo& info, TableGenerator gen) {
    if (info.group.size() != 1) {
        throw Error(ErrorCode::GroupArityMismatch, info.type_name + " is in a group of " +
                                                       std::to_string(info.group.size()) +
                                                       "; supply one generator per member");
    }
    std::vector<TableGenerator> gens;
    gens.push_back(std::move(gen));
    return info.fix(std::move(gens));
}

std::vector<Transform> transform_group(const TypeInfo& info, std::vector<TableGenerator> gens) {
    return fix_group(info.group, info.schema, std::move(gens));
}

} // namespace gentrans
