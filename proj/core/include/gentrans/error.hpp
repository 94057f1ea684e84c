#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gentrans {

/// 1-based line/column into a source text.
struct SourcePos {
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    bool valid() const { return line != 0; }
    std::string str() const;
};

enum class ErrorCode {
    // schema
    SyntaxError,
    DuplicateTypeName,
    UnknownType,
    ArityMismatch,
    UnboundParam,
    NonRegularRecursion,
    NonEssentialGroup,
    AmbiguousTagInComposition,
    DuplicateConstructor,
    DuplicateField,
    DuplicateParam,
    InvalidAlias,
    InvalidComposition,
    CyclicDefinition,
    // values
    TypeMismatch,
    UnknownConstructor,
    // engine
    MissingHandler,
    NonConformingSubject,
    GroupArityMismatch,
    UnknownOverrideTag,
    MissingConstituent,
    UnknownExtraTag,
    // plugins / typeinfo
    DuplicatePlugin,
    UnknownPlugin,
    UnsupportedForType,
    PluginNotRequested,
    AttrTypeMismatch,
    UnboundTypeParameter,
    // demo corpus
    FreeVariable,
    UnboundName,
    // cli / scripts
    ScriptError,
    UsageError,
    IoError,
};

std::string_view error_code_name(ErrorCode code);

/// The single exception type thrown by the library. Carries a machine-readable
/// code and, for source-level problems, a position.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::optional<SourcePos> pos = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    const std::optional<SourcePos>& pos() const noexcept { return pos_; }
    /// Message without the code/position decoration.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::optional<SourcePos> pos_;
    std::string message_;
};

} // namespace gentrans
