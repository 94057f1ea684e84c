#include "gentrans/error.hpp"

namespace gentrans {

std::string SourcePos::str() const {
    return std::to_string(line) + ":" + std::to_string(column);
}

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateTypeName: return "DuplicateTypeName";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnboundParam: return "UnboundParam";
    case ErrorCode::NonRegularRecursion: return "NonRegularRecursion";
    case ErrorCode::NonEssentialGroup: return "NonEssentialGroup";
    case ErrorCode::AmbiguousTagInComposition: return "AmbiguousTagInComposition";
    case ErrorCode::DuplicateConstructor: return "DuplicateConstructor";
    case ErrorCode::DuplicateField: return "DuplicateField";
    case ErrorCode::DuplicateParam: return "DuplicateParam";
    case ErrorCode::InvalidAlias: return "InvalidAlias";
    case ErrorCode::InvalidComposition: return "InvalidComposition";
    case ErrorCode::CyclicDefinition: return "CyclicDefinition";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::UnknownConstructor: return "UnknownConstructor";
    case ErrorCode::MissingHandler: return "MissingHandler";
    case ErrorCode::NonConformingSubject: return "NonConformingSubject";
    case ErrorCode::GroupArityMismatch: return "GroupArityMismatch";
    case ErrorCode::UnknownOverrideTag: return "UnknownOverrideTag";
    case ErrorCode::MissingConstituent: return "MissingConstituent";
    case ErrorCode::UnknownExtraTag: return "UnknownExtraTag";
    case ErrorCode::DuplicatePlugin: return "DuplicatePlugin";
    case ErrorCode::UnknownPlugin: return "UnknownPlugin";
    case ErrorCode::UnsupportedForType: return "UnsupportedForType";
    case ErrorCode::PluginNotRequested: return "PluginNotRequested";
    case ErrorCode::AttrTypeMismatch: return "AttrTypeMismatch";
    case ErrorCode::UnboundTypeParameter: return "UnboundTypeParameter";
    case ErrorCode::FreeVariable: return "FreeVariable";
    case ErrorCode::UnboundName: return "UnboundName";
    case ErrorCode::ScriptError: return "ScriptError";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Error";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, const std::optional<SourcePos>& pos) {
    std::string out(error_code_name(code));
    if (pos && pos->valid()) {
        out += " at " + pos->str();
    }
    out += ": ";
    out += message;
    return out;
}

} // namespace

Error::Error(ErrorCode code, std::string message, std::optional<SourcePos> pos)
    : std::runtime_error(decorate(code, message, pos)), code_(code), pos_(pos), message_(std::move(message)) {}

} // namespace gentrans
