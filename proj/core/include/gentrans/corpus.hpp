#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/engine.hpp"
#include "gentrans/plugins.hpp"

/// Worked transformations over small fixed schemas: arithmetic expressions,
/// mutually recursive expressions with local definitions, typed logic values
/// and named/nameless lambda terms. Every transformation here is obtained by
/// extending or composing plugin-derived generators.
namespace gentrans::corpus {

std::string_view expr_schema_text();
std::string_view mutual_schema_text();
std::string_view logic_schema_text();
std::string_view lambda_schema_text();

/// Operator priorities for pretty printing: + and - bind at 1, * and / at 2,
/// anything else at 0.
int priority(std::string_view op);

/// Integer semantics of a binary operator; nullopt for unknown operators and
/// division by zero. Division truncates toward zero.
std::optional<BigInt> apply_op(std::string_view op, const BigInt& a, const BigInt& b);

using State = std::map<std::string, BigInt, std::less<>>;

class ExprCorpus {
public:
    explicit ExprCorpus(PluginRegistry plugins = PluginRegistry::with_builtins());

    const ValidatedSchema& schema() const { return schema_; }
    const PluginRegistry& plugins() const { return plugins_; }
    Value parse(std::string_view literal) const;

    TableGenerator pretty_gen() const;
    TableGenerator fv_gen() const;
    TableGenerator height_gen() const;
    TableGenerator simplify_gen() const;
    TableGenerator substitute_gen(State state) const;
    TableGenerator eval_gen(State state) const;

    std::string show(const Value& e) const;
    std::string pretty(const Value& e) const;
    Value fv(const Value& e) const;
    BigInt height(const Value& e) const;
    Value simplify(const Value& e) const;
    Value substitute(const State& state, const Value& e) const;
    Value eval(const State& state, const Value& e) const;

    /// Inherited attribute pretty printing starts with (the smallest priority).
    static Attr pretty_start();

private:
    ValidatedSchema schema_;
    PluginRegistry plugins_;
};

class MutualCorpus {
public:
    explicit MutualCorpus(PluginRegistry plugins = PluginRegistry::with_builtins());

    const ValidatedSchema& schema() const { return schema_; }
    Value parse(std::string_view literal) const;

    /// Group show for (expr, def).
    std::vector<Transform> default_show() const;
    /// Group show with Const rendered as "a constant" in every member.
    std::vector<Transform> custom_show() const;

private:
    ValidatedSchema schema_;
    PluginRegistry plugins_;
};

class LogicCorpus {
public:
    explicit LogicCorpus(PluginRegistry plugins = PluginRegistry::with_builtins());

    const ValidatedSchema& schema() const { return schema_; }
    Value parse(std::string_view type, std::string_view literal) const;

    static Value lift(const Value& x);
    /// Throws FreeVariable on a V node.
    static Value reify(const Value& x);

    Value to_logic(const Value& e) const;
    Value from_logic(const Value& l) const;

private:
    ValidatedSchema schema_;
    PluginRegistry plugins_;
    Transform to_logic_;
    Transform from_logic_;
};

class LambdaCorpus {
public:
    explicit LambdaCorpus(PluginRegistry plugins = PluginRegistry::with_builtins());

    const ValidatedSchema& schema() const { return schema_; }
    Value parse(std::string_view type, std::string_view literal) const;

    /// Fragment for the non-binding constructors.
    TableGenerator lam_to_nameless() const;
    /// Fragment for abstraction.
    TableGenerator abs_to_nameless() const;
    /// Both fragments composed at type `named`.
    TableGenerator to_nameless_gen() const;

    Value to_nameless(const Value& term) const;
    /// The lam fragment alone, closed over itself (terms without Abs).
    Value lam_only(const Value& term) const;

private:
    ValidatedSchema schema_;
    PluginRegistry plugins_;
};

struct DemoResult {
    std::string output;
    bool ok = true;
};

std::vector<std::string> demo_names();
/// Runs a self-checking demo. Throws UsageError for an unknown name.
DemoResult run_demo(std::string_view name);

} // namespace gentrans::corpus
