#include "gentrans/cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gentrans/cli/script.hpp"
#include "gentrans/corpus.hpp"
#include "gentrans/plugins.hpp"
#include "gentrans/typeinfo.hpp"

namespace gentrans::cli {

namespace {

// An error together with the input it points into.
struct SourcedError {
    std::string source;
    Error error;
};

template <typename F>
auto from_source(std::string_view source, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw SourcedError{std::string(source), e};
    }
}

int exit_code_for(const Error& e) {
    return e.code() == ErrorCode::IoError || e.code() == ErrorCode::UsageError ? IoOrUsageError : SemanticError;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IoError, "error while reading " + path);
    return buf.str();
}

ValidatedSchema load_schema(const std::string& path) {
    std::string text = from_source(path, [&] { return read_file(path); });
    return from_source(path, [&] { return validate(parse_schema(text)); });
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != 0) out += sep;
        out += parts[i];
    }
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

TypeExpr resolve_run_type(const ValidatedSchema& schema, const RunRequest& req) {
    TypeSubst subst = from_source("--param", [&] {
        TypeSubst out;
        for (const std::string& binding : req.params) {
            auto eq = binding.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::UsageError, "expected NAME=TYPE, got " + binding);
            std::string name = trim(std::string_view(binding).substr(0, eq));
            if (!name.empty() && name.front() == '\'') name.erase(0, 1);
            if (name.empty()) throw Error(ErrorCode::UsageError, "empty parameter name in " + binding);
            TypeExpr t = parse_type_expr(binding.substr(eq + 1));
            check_type_expr(schema, t);
            if (!out.emplace(name, std::move(t)).second) {
                throw Error(ErrorCode::UsageError, "parameter " + name + " bound twice");
            }
        }
        return out;
    });
    return from_source("--type", [&] {
        TypeExpr t = parse_type_expr(req.type);
        if (t.kind == TypeExpr::Kind::Apply && t.args.empty()) {
            const TypeDecl& decl = schema.decl(t.name);
            for (const std::string& p : decl.params) {
                auto it = subst.find(p);
                if (it == subst.end()) {
                    throw Error(ErrorCode::UnboundParam,
                                t.name + " takes a parameter '" + p + "'; bind it with --param " + p + "=TYPE");
                }
                t.args.push_back(it->second);
            }
        }
        t = substitute(t, subst);
        check_type_expr(schema, t);
        return t;
    });
}

Attr resolve_inh(const RunRequest& req, const ValidatedSchema& schema, const TypeExpr& type) {
    bool binary = req.plugin == "compare" || req.plugin == "eq";
    if (!req.inh) {
        if (binary) throw Error(ErrorCode::UsageError, req.plugin + " needs the second operand as --inh");
        std::optional<Attr> d = default_inh(req.plugin);
        return d ? *d : Attr();
    }
    if (req.plugin == "hc") throw Error(ErrorCode::UsageError, "hc starts from an empty store; --inh is not accepted");
    return from_source("--inh", [&] {
        return Attr(binary ? parse_value(*req.inh, schema, type) : parse_untyped_value(*req.inh));
    });
}

std::string node_line(const HcStore& store, Handle h) {
    Value v = store.node(h);
    std::vector<Handle> kids = store.children(h);
    std::vector<std::string> refs;
    for (Handle c : kids) refs.push_back("#" + std::to_string(c));
    switch (v.kind()) {
    case Value::Kind::Con: return refs.empty() ? v.tag() : v.tag() + " (" + join(refs, ", ") + ")";
    case Value::Kind::Rec: {
        std::vector<std::string> fields;
        for (std::size_t i = 0; i < refs.size(); ++i) fields.push_back(v.field_names()[i] + " = " + refs[i]);
        return v.tag() + " {" + join(fields, "; ") + "}";
    }
    case Value::Kind::Tuple: return "(" + join(refs, ", ") + ")";
    case Value::Kind::Seq: return "[" + join(refs, "; ") + "]";
    default: return print_value(v);
    }
}

void print_structured(std::ostream& out, const RunRequest& req, const TypeExpr& type, const Attr& result,
                      const std::optional<Instrumentation>& stats) {
    out << "type=" << to_string(type) << "\n";
    out << "plugin=" << req.plugin << "\n";
    if (req.override_path) out << "override=" << *req.override_path << "\n";
    switch (result.kind()) {
    case Attr::Kind::Value:
        out << "result.kind=" << kind_name(result.value().kind()) << "\n";
        out << "result=" << print_value(result.value()) << "\n";
        break;
    case Attr::Kind::Interned:
        out << "result.kind=interned\n";
        out << "result=" << print_value(result.value()) << "\n";
        out << "root=#" << result.handle() << "\n";
        break;
    default:
        out << "result.kind=" << attr_kind_name(result.kind()) << "\n";
        out << "result=" << print_attr(result) << "\n";
        break;
    }
    if (result.is(Attr::Kind::Store) || result.is(Attr::Kind::Interned)) {
        const HcStore& store = result.store();
        out << "store.size=" << store.size() << "\n";
        out << "store.constructors=" << store.constructor_count() << "\n";
        for (Handle h = 0; h < store.size(); ++h) out << "node." << h << "=" << node_line(store, h) << "\n";
    }
    if (stats) {
        out << "stats.tables_built=" << stats->tables_built << "\n";
        out << "stats.nodes_visited=" << stats->nodes_visited << "\n";
    }
}

int report(std::ostream& err, const SourcedError& e, bool color) {
    err << format_diagnostic(e.source, e.error, color) << "\n";
    return exit_code_for(e.error);
}

int report(std::ostream& err, const Error& e, bool color) {
    err << format_diagnostic("", e, color) << "\n";
    return exit_code_for(e);
}

AttrSig generic_signature(const PluginSpec& spec) {
    TypeDecl decl;
    decl.name = "t";
    decl.params = {"a"};
    return spec.signature_of(decl);
}

std::string decl_kind_name(const TypeDecl& d) {
    switch (d.kind) {
    case TypeDecl::Kind::Variants: return "variants";
    case TypeDecl::Kind::OpenVariants: return "open variants";
    case TypeDecl::Kind::Alias: return "alias";
    case TypeDecl::Kind::Composition: return "composition";
    }
    return "?";
}

} // namespace

std::string format_diagnostic(std::string_view source, const Error& e, bool color) {
    std::string where(source);
    if (e.pos() && e.pos()->valid()) where += (where.empty() ? "" : ":") + e.pos()->str();
    std::string label = "error[" + std::string(error_code_name(e.code())) + "]";
    if (color) {
        if (!where.empty()) where = "\x1b[1m" + where + "\x1b[0m";
        label = "\x1b[1;31m" + label + "\x1b[0m";
    }
    return (where.empty() ? "" : where + ": ") + label + ": " + e.message();
}

bool color_from_env() {
    const char* v = std::getenv("GT_COLOR");
    return v != nullptr && std::string_view(v) == "1";
}

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err, bool color) {
    try {
        ValidatedSchema schema = load_schema(path);
        std::size_t types = schema.decls().size();
        std::size_t groups = schema.groups().size();
        out << path << ": ok, " << types << (types == 1 ? " type in " : " types in ") << groups
            << (groups == 1 ? " recursion group\n" : " recursion groups\n");
        return Success;
    } catch (const SourcedError& e) {
        return report(err, e, color);
    }
}

int cmd_run(const RunRequest& req, std::ostream& out, std::ostream& err, bool color) {
    try {
        ValidatedSchema schema = load_schema(req.schema_path);
        PluginRegistry plugins = PluginRegistry::with_builtins();
        const PluginSpec& spec = plugins.get(req.plugin);
        TypeExpr type = resolve_run_type(schema, req);
        Value subject = from_source("--value", [&] { return parse_value(req.value, schema, type); });
        Attr inh = resolve_inh(req, schema, type);
        std::optional<Script> script;
        if (req.override_path) {
            std::string text = from_source(*req.override_path, [&] { return read_file(*req.override_path); });
            script = from_source(*req.override_path, [&] { return Script::parse(text); });
        }

        Attr result;
        std::optional<Instrumentation> stats;
        if (type.kind == TypeExpr::Kind::Apply) {
            const TypeDecl& decl = schema.decl(type.name);
            std::map<std::string, ParamTransformer, std::less<>> params;
            for (std::size_t i = 0; i < decl.params.size(); ++i) {
                params[decl.params[i]] = ParamTransformer::fixed(plugins.instantiate(req.plugin, schema, type.args[i]));
            }
            const std::vector<std::string>& group = schema.group_of(type.name);
            std::vector<TableGenerator> gens = plugins.derive_group(req.plugin, schema, type.name, params);
            if (script) {
                std::vector<std::vector<std::string>> tags;
                for (const auto& g : gens) tags.push_back(g.tags);
                std::vector<Overrides> overrides =
                    from_source(*req.override_path, [&] { return script->overrides_for(group, tags); });
                for (std::size_t k = 0; k < gens.size(); ++k) {
                    if (!overrides[k].empty()) gens[k] = extend(std::move(gens[k]), std::move(overrides[k]));
                }
            } else if (!attr_conforms(spec.signature_of(decl).inh_self, inh, schema, &type)) {
                throw Error(ErrorCode::AttrTypeMismatch,
                            req.plugin + " expects an inherited attribute of kind " +
                                std::string(attr_kind_name(spec.signature_of(decl).inh_self)));
            }
            std::vector<Transform> fixed = fix_group(group, schema, std::move(gens));
            const Transform& t = fixed[schema.index_in_group(type.name)];
            try {
                result = t(inh, subject);
            } catch (const Error& e) {
                if (script && e.code() == ErrorCode::ScriptError) throw SourcedError{*req.override_path, e};
                throw;
            }
            stats = t.group_stats();
        } else {
            if (script) throw Error(ErrorCode::UsageError, "--override needs --type to name a declared type");
            result = plugins.instantiate(req.plugin, schema, type)(inh, subject);
        }

        if (req.format == OutputFormat::Structured) {
            print_structured(out, req, type, result, stats);
        } else {
            out << print_attr(result) << "\n";
        }
        return Success;
    } catch (const SourcedError& e) {
        return report(err, e, color);
    } catch (const Error& e) {
        return report(err, e, color);
    }
}

int cmd_demo(const std::string& name, std::ostream& out, std::ostream& err) {
    std::vector<std::string> names = name == "all" ? corpus::demo_names() : std::vector<std::string>{name};
    bool ok = true;
    try {
        for (const std::string& n : names) {
            corpus::DemoResult r = corpus::run_demo(n);
            out << r.output;
            ok = ok && r.ok;
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UsageError) {
            err << format_diagnostic("", e) << "; available: " << join(corpus::demo_names(), ", ") << "\n";
            return IoOrUsageError;
        }
        return report(err, e, false);
    }
    return ok ? Success : SemanticError;
}

int cmd_list(const std::optional<std::string>& schema_path, std::ostream& out, std::ostream& err, bool color) {
    PluginRegistry plugins = PluginRegistry::with_builtins();
    std::optional<TypeInfoRegistry> types;
    if (schema_path) {
        try {
            ValidatedSchema schema = load_schema(*schema_path);
            types = from_source(*schema_path, [&] { return TypeInfoRegistry::build(schema, plugins); });
        } catch (const SourcedError& e) {
            return report(err, e, color);
        }
    }

    std::vector<std::string> names = plugins.names();
    out << "plugins (" << names.size() << "):\n";
    for (const std::string& n : names) {
        const PluginSpec& spec = plugins.get(n);
        out << "  " << std::left << std::setw(8) << n << spec.summary << "\n";
        out << "          " << generic_signature(spec).describe({"a"}) << "\n";
    }

    if (!types) return Success;
    std::vector<std::string> type_names = types->type_names();
    out << "types (" << type_names.size() << "):\n";
    for (const std::string& n : type_names) {
        const TypeDecl& d = types->schema().decl(n);
        const TypeInfo& info = types->get(n);
        out << "  " << to_string(types->schema().self_type(n)) << ": " << decl_kind_name(d);
        if (d.kind != TypeDecl::Kind::Alias) {
            std::size_t n_ctors = types->schema().constructors(n).size();
            out << ", " << n_ctors << (n_ctors == 1 ? " constructor" : " constructors");
        }
        out << "; group: " << join(info.group, ", ");
        if (!info.defaults.empty()) {
            std::vector<std::string> with;
            for (const auto& [p, _] : info.defaults) with.push_back(p);
            out << "; with: " << join(with, ", ");
        }
        out << "\n";
    }
    return Success;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"gentrans: generic transformations over algebraic data type schemas", "gentrans"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gentrans 0.1.0");

    std::string check_path;
    auto* check = app.add_subcommand("check", "Validate a schema file");
    check->add_option("path", check_path, "Schema file (.gt)")->required();

    RunRequest req;
    std::string format = "text";
    auto* run = app.add_subcommand("run", "Run a derived or overridden transformation on a value");
    run->add_option("--schema", req.schema_path, "Schema file (.gt)")->required();
    run->add_option("--type", req.type, "Type of the value, e.g. expr or 'int logic'")->required();
    run->add_option("--plugin", req.plugin, "Plugin name (see `gentrans list`)")->required();
    run->add_option("--value", req.value, "Value literal")->required();
    run->add_option("--inh", req.inh, "Inherited attribute literal");
    run->add_option("--override", req.override_path, "Handler override script");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "structured"}));
    run->add_option("--param", req.params, "Type parameter binding NAME=TYPE (repeatable)");

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "Run a self-checking worked example");
    demo->add_option("name", demo_name, "Demo name or `all`")->required();

    std::optional<std::string> list_schema;
    auto* list = app.add_subcommand("list", "List plugins and, with --schema, declared types");
    list->add_option("--schema", list_schema, "Schema file (.gt)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::ostringstream r;
            app.exit(e, out, r);
            return Success;
        }
        err << format_diagnostic("", Error(ErrorCode::UsageError, e.what()), color_from_env())
            << "\nRun with --help for more information.\n";
        return IoOrUsageError;
    }

    bool color = color_from_env();
    if (*check) return cmd_check(check_path, out, err, color);
    if (*run) {
        req.format = format == "structured" ? OutputFormat::Structured : OutputFormat::Text;
        return cmd_run(req, out, err, color);
    }
    if (*demo) return cmd_demo(demo_name, out, err);
    return cmd_list(list_schema, out, err, color);
}

} // namespace gentrans::cli
