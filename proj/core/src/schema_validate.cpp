#include <algorithm>
#include <functional>
#include <set>

#include "gentrans/schema.hpp"

namespace gentrans {

struct ValidatedSchema::Impl {
    Schema schema;
    std::vector<std::vector<std::string>> groups;
    std::map<std::string, std::size_t, std::less<>> group_index;
    std::map<std::string, std::size_t, std::less<>> index_in_group;
    std::map<std::string, std::vector<std::string>, std::less<>> open_tags;
    // composition name -> tag -> direct member name ("" for extras)
    std::map<std::string, std::map<std::string, std::string, std::less<>>, std::less<>> comp_owner;
};

namespace {

bool is_builtin_name(std::string_view n) {
    return n == "int" || n == "string" || n == "bool" || n == "unit" || n == "list";
}

void check_expr(const Schema& schema, const TypeExpr& t, const std::vector<std::string>& bound) {
    switch (t.kind) {
    case TypeExpr::Kind::Param:
        if (std::find(bound.begin(), bound.end(), t.name) == bound.end()) {
            throw Error(ErrorCode::UnboundParam, "type parameter '" + t.name + " is not bound here", t.pos);
        }
        return;
    case TypeExpr::Kind::Builtin: return;
    case TypeExpr::Kind::Apply: {
        const TypeDecl* d = schema.find(t.name);
        if (!d) {
            if (is_builtin_name(t.name)) {
                std::size_t want = t.name == "list" ? 1 : 0;
                throw Error(ErrorCode::ArityMismatch,
                            "builtin '" + t.name + "' expects " + std::to_string(want) + " argument(s), got " +
                                std::to_string(t.args.size()),
                            t.pos);
            }
            throw Error(ErrorCode::UnknownType, "unknown type '" + t.name + "'", t.pos);
        }
        if (d->params.size() != t.args.size()) {
            throw Error(ErrorCode::ArityMismatch,
                        "type '" + t.name + "' expects " + std::to_string(d->params.size()) +
                            " argument(s), got " + std::to_string(t.args.size()),
                        t.pos);
        }
        for (const auto& a : t.args) check_expr(schema, a, bound);
        return;
    }
    case TypeExpr::Kind::Tuple:
    case TypeExpr::Kind::Seq:
        for (const auto& a : t.args) check_expr(schema, a, bound);
        return;
    }
}

template <class F>
void for_each_expr(const TypeDecl& d, F&& f) {
    for (const auto& c : d.constructors) {
        for (const auto& a : c.args) f(a);
    }
    if (d.alias_target) f(*d.alias_target);
    for (const auto& m : d.members) f(m);
}

void collect_applies(const TypeExpr& t, std::vector<const TypeExpr*>& out) {
    if (t.kind == TypeExpr::Kind::Apply) out.push_back(&t);
    for (const auto& a : t.args) collect_applies(a, out);
}

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

// Tarjan's algorithm; components are emitted dependencies-first.
std::vector<std::vector<std::size_t>> strongly_connected(const std::vector<std::vector<std::size_t>>& edges) {
    const std::size_t n = edges.size();
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    int counter = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : edges[v]) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (index[v] < 0) visit(v);
    }
    return out;
}

bool same_signature(const InstCtor& a, const InstCtor& b) {
    return a.decl->is_record == b.decl->is_record && a.decl->fields == b.decl->fields && a.arg_types == b.arg_types;
}

} // namespace

ValidatedSchema::ValidatedSchema() : impl_(std::make_shared<Impl>()) {}

const Schema& ValidatedSchema::schema() const { return impl_->schema; }

const TypeDecl& ValidatedSchema::decl(std::string_view name) const {
    const TypeDecl* d = impl_->schema.find(name);
    if (!d) throw Error(ErrorCode::UnknownType, "unknown type '" + std::string(name) + "'");
    return *d;
}

const std::vector<std::vector<std::string>>& ValidatedSchema::groups() const { return impl_->groups; }

const std::vector<std::string>& ValidatedSchema::group_of(std::string_view name) const {
    auto it = impl_->group_index.find(name);
    if (it == impl_->group_index.end()) {
        throw Error(ErrorCode::UnknownType, "unknown type '" + std::string(name) + "'");
    }
    return impl_->groups[it->second];
}

std::size_t ValidatedSchema::index_in_group(std::string_view name) const {
    auto it = impl_->index_in_group.find(name);
    if (it == impl_->index_in_group.end()) {
        throw Error(ErrorCode::UnknownType, "unknown type '" + std::string(name) + "'");
    }
    return it->second;
}

TypeExpr ValidatedSchema::self_type(std::string_view name) const {
    const TypeDecl& d = decl(name);
    std::vector<TypeExpr> args;
    for (const auto& p : d.params) args.push_back(TypeExpr::param(p));
    return TypeExpr::apply(d.name, std::move(args));
}

TypeExpr ValidatedSchema::resolve_alias(const TypeExpr& t) const {
    if (t.kind != TypeExpr::Kind::Apply) return t;
    TypeExpr cur = t;
    for (;;) {
        const TypeDecl& d = decl(cur.name);
        if (d.kind != TypeDecl::Kind::Alias) return cur;
        TypeSubst subst;
        for (std::size_t i = 0; i < d.params.size() && i < cur.args.size(); ++i) subst.emplace(d.params[i], cur.args[i]);
        cur = substitute(*d.alias_target, subst);
    }
}

std::vector<InstCtor> ValidatedSchema::constructors(const TypeExpr& t) const {
    TypeExpr resolved = resolve_alias(t);
    if (resolved.kind != TypeExpr::Kind::Apply) return {};
    const TypeDecl& d = decl(resolved.name);
    TypeSubst subst;
    for (std::size_t i = 0; i < d.params.size() && i < resolved.args.size(); ++i) {
        subst.emplace(d.params[i], resolved.args[i]);
    }
    std::vector<InstCtor> out;
    auto add = [&out](InstCtor c) {
        for (const auto& existing : out) {
            if (existing.tag == c.tag) return;
        }
        out.push_back(std::move(c));
    };
    if (d.kind == TypeDecl::Kind::Composition) {
        for (const auto& m : d.members) {
            for (auto& c : constructors(substitute(m, subst))) add(std::move(c));
        }
    }
    for (const auto& c : d.constructors) {
        InstCtor ic;
        ic.tag = c.name;
        ic.owner = d.name;
        ic.decl = &c;
        for (const auto& a : c.args) ic.arg_types.push_back(substitute(a, subst));
        add(std::move(ic));
    }
    return out;
}

std::vector<InstCtor> ValidatedSchema::constructors(std::string_view type_name) const {
    return constructors(self_type(type_name));
}

std::optional<std::string> ValidatedSchema::constituent_of(std::string_view composition, std::string_view tag) const {
    auto it = impl_->comp_owner.find(composition);
    if (it == impl_->comp_owner.end()) return std::nullopt;
    auto jt = it->second.find(tag);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

std::vector<std::string> ValidatedSchema::open_tag_owners(std::string_view tag) const {
    auto it = impl_->open_tags.find(tag);
    return it == impl_->open_tags.end() ? std::vector<std::string>{} : it->second;
}

ValidatedSchema validate(Schema schema) {
    auto impl = std::make_shared<ValidatedSchema::Impl>();
    impl->schema = std::move(schema);
    const Schema& s = impl->schema;
    const auto& decls = s.decls();

    // Local well-formedness and name resolution.
    for (const auto& d : decls) {
        std::set<std::string> seen;
        for (const auto& p : d.params) {
            if (!seen.insert(p).second) {
                throw Error(ErrorCode::DuplicateParam, "parameter '" + p + " repeated in '" + d.name + "'", d.pos);
            }
        }
        std::set<std::string> tags;
        for (const auto& c : d.constructors) {
            if (!tags.insert(c.name).second) {
                throw Error(ErrorCode::DuplicateConstructor,
                            "constructor '" + c.name + "' repeated in '" + d.name + "'", c.pos);
            }
            std::set<std::string> fields;
            for (const auto& f : c.fields) {
                if (!fields.insert(f).second) {
                    throw Error(ErrorCode::DuplicateField, "field '" + f + "' repeated in '" + c.name + "'", c.pos);
                }
            }
        }
        for_each_expr(d, [&](const TypeExpr& t) { check_expr(s, t, d.params); });
    }

    // Dependency graph and recursion groups.
    std::map<std::string, std::size_t, std::less<>> pos;
    for (std::size_t i = 0; i < decls.size(); ++i) pos.emplace(decls[i].name, i);
    std::vector<std::vector<std::size_t>> edges(decls.size());
    for (std::size_t i = 0; i < decls.size(); ++i) {
        std::vector<const TypeExpr*> applies;
        for_each_expr(decls[i], [&](const TypeExpr& t) { collect_applies(t, applies); });
        for (const TypeExpr* a : applies) {
            std::size_t j = pos.at(a->name);
            if (std::find(edges[i].begin(), edges[i].end(), j) == edges[i].end()) edges[i].push_back(j);
        }
    }
    auto comps = strongly_connected(edges);
    std::vector<std::size_t> comp_of(decls.size());
    for (std::size_t g = 0; g < comps.size(); ++g) {
        std::vector<std::string> names;
        for (std::size_t k = 0; k < comps[g].size(); ++k) {
            const std::string& n = decls[comps[g][k]].name;
            names.push_back(n);
            impl->group_index.emplace(n, g);
            impl->index_in_group.emplace(n, k);
            comp_of[comps[g][k]] = g;
        }
        impl->groups.push_back(std::move(names));
    }

    // `type ... and ...` statements must be essential mutual recursion.
    std::map<std::size_t, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < decls.size(); ++i) blocks[decls[i].block].push_back(i);
    for (const auto& [block, members] : blocks) {
        if (members.size() < 2) continue;
        for (std::size_t m : members) {
            if (comp_of[m] != comp_of[members.front()]) {
                std::vector<std::string> names;
                for (std::size_t k : members) names.push_back(decls[k].name);
                throw Error(ErrorCode::NonEssentialGroup,
                            "declarations {" + join(names) +
                                "} are not all mutually recursive; split the definitions into separate 'type' "
                                "statements",
                            decls[members.front()].pos);
            }
        }
    }

    // Aliases and compositions.
    for (const auto& d : decls) {
        if (d.kind == TypeDecl::Kind::Alias && d.alias_target->kind != TypeExpr::Kind::Apply) {
            throw Error(ErrorCode::InvalidAlias,
                        "alias '" + d.name + "' must name a declared type constructor, not '" +
                            to_string(*d.alias_target) + "'",
                        d.alias_target->pos);
        }
        if (d.kind == TypeDecl::Kind::Composition) {
            for (const auto& m : d.members) {
                if (m.kind != TypeExpr::Kind::Apply || !s.find(m.name)->is_open()) {
                    throw Error(ErrorCode::InvalidComposition,
                                "member '" + to_string(m) + "' of '" + d.name + "' is not an open variant type",
                                m.pos);
                }
            }
        }
    }

    // Alias/composition chains must bottom out in constructors.
    {
        std::vector<std::vector<std::size_t>> structural(decls.size());
        for (std::size_t i = 0; i < decls.size(); ++i) {
            const auto& d = decls[i];
            if (d.alias_target) structural[i].push_back(pos.at(d.alias_target->name));
            for (const auto& m : d.members) structural[i].push_back(pos.at(m.name));
        }
        for (const auto& comp : strongly_connected(structural)) {
            bool self_loop = comp.size() == 1 && std::find(structural[comp[0]].begin(), structural[comp[0]].end(),
                                                           comp[0]) != structural[comp[0]].end();
            if (comp.size() > 1 || self_loop) {
                std::vector<std::string> names;
                for (std::size_t k : comp) names.push_back(decls[k].name);
                throw Error(ErrorCode::CyclicDefinition,
                            "aliases/compositions {" + join(names) + "} refer to each other without a constructor",
                            decls[comp[0]].pos);
            }
        }
    }

    // Regularity: recursive occurrences use exactly the declared parameters.
    for (const auto& d : decls) {
        const auto& group = impl->groups[impl->group_index.at(d.name)];
        std::vector<const TypeExpr*> applies;
        for_each_expr(d, [&](const TypeExpr& t) { collect_applies(t, applies); });
        for (const TypeExpr* a : applies) {
            if (std::find(group.begin(), group.end(), a->name) == group.end()) continue;
            const TypeDecl& target = *s.find(a->name);
            bool regular = a->args.size() == target.params.size();
            for (std::size_t k = 0; regular && k < a->args.size(); ++k) {
                regular = a->args[k].kind == TypeExpr::Kind::Param && a->args[k].name == target.params[k];
            }
            if (!regular) {
                throw Error(ErrorCode::NonRegularRecursion,
                            "type '" + d.name + "': recursive occurrence '" + to_string(*a) +
                                "' must be applied to exactly its declared parameters",
                            a->pos);
            }
        }
    }

    ValidatedSchema out;
    out.impl_ = impl;

    // Composition tag ownership and ambiguity; global open tag namespace.
    for (const auto& d : decls) {
        if (d.kind == TypeDecl::Kind::OpenVariants || d.kind == TypeDecl::Kind::Composition) {
            for (const auto& c : d.constructors) impl->open_tags[c.name].push_back(d.name);
        }
        if (d.kind != TypeDecl::Kind::Composition) continue;
        TypeSubst identity;
        std::vector<std::pair<std::string, InstCtor>> seen; // member name, ctor
        auto& owners = impl->comp_owner[d.name];
        auto record = [&](const std::string& member, InstCtor c, SourcePos where) {
            for (const auto& [m, prev] : seen) {
                if (prev.tag != c.tag) continue;
                if (!same_signature(prev, c)) {
                    throw Error(ErrorCode::AmbiguousTagInComposition,
                                "constructor '" + c.tag + "' of '" + d.name + "' comes from both '" + m +
                                    "' and '" + (member.empty() ? d.name : member) + "' with different signatures",
                                where);
                }
                return;
            }
            owners.emplace(c.tag, member);
            seen.emplace_back(member, std::move(c));
        };
        for (const auto& m : d.members) {
            for (auto& c : out.constructors(m)) record(m.name, std::move(c), m.pos);
        }
        for (const auto& c : d.constructors) {
            InstCtor ic;
            ic.tag = c.name;
            ic.owner = d.name;
            ic.decl = &c;
            ic.arg_types = c.args;
            record("", std::move(ic), c.pos);
        }
    }
    return out;
}

std::vector<std::string> recursion_group_of(const ValidatedSchema& schema, std::string_view type_name) {
    return schema.group_of(type_name);
}

void check_type_expr(const ValidatedSchema& schema, const TypeExpr& t, const std::vector<std::string>& bound) {
    check_expr(schema.schema(), t, bound);
}

} // namespace gentrans
