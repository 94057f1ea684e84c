#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/engine.hpp"
#include "gentrans/error.hpp"

/// Handler override scripts for `gentrans run --override`.
///
///   # comment
///   let x = 3
///   Var => cons(arg(0), inh)
///   expr.Binop => 1 + max(self(inh, arg(1)), self(inh, arg(2)))
///
/// A rule `[type.]Tag => EXPR` replaces the handler of Tag in the named group
/// member, or in every member declaring Tag when unqualified. Expressions see
/// the inherited attribute `inh`, the `subject`, constructor arguments via
/// `arg(N)` and `field(name)`, and the group transformations via `self`,
/// `sibling(type, ...)` and `super`. See docs/override-dsl.md.
namespace gentrans::cli {

struct ScriptExpr;
struct ScriptPattern;

struct ScriptRule {
    std::string member; // empty: every member declaring the tag
    std::string tag;
    std::shared_ptr<const ScriptExpr> body;
    SourcePos pos;
};

class Script {
public:
    /// Parses and evaluates the top-level `let` constants. Throws SyntaxError
    /// or ScriptError with positions.
    static Script parse(std::string_view text);

    const std::vector<ScriptRule>& rules() const { return rules_; }
    /// Top-level constants, also reachable from handlers via `lookup`.
    const std::map<std::string, Attr, std::less<>>& constants() const { return *constants_; }

    /// Overrides for every member of `group` (parallel to it). `tags[k]` is
    /// the constructor set of group[k]. Throws UnknownOverrideTag for a tag
    /// no targeted member declares and ScriptError for unknown members or
    /// duplicate rules.
    std::vector<Overrides> overrides_for(const std::vector<std::string>& group,
                                         const std::vector<std::vector<std::string>>& tags) const;

private:
    std::vector<ScriptRule> rules_;
    std::shared_ptr<const std::map<std::string, Attr, std::less<>>> constants_;
};

} // namespace gentrans::cli
