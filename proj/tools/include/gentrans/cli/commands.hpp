#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/error.hpp"

namespace gentrans::cli {

enum ExitCode : int { Success = 0, SemanticError = 1, IoOrUsageError = 2 };

enum class OutputFormat { Text, Structured };

struct RunRequest {
    std::string schema_path;
    std::string type;
    std::string plugin;
    std::optional<std::string> inh;
    std::optional<std::string> override_path;
    std::string value;
    OutputFormat format = OutputFormat::Text;
    /// `NAME=TYPE` bindings for type parameters left open in `type`.
    std::vector<std::string> params;
};

/// `SOURCE:LINE:COL: error[Code]: message`; the position part is dropped
/// when the error has none, the source part when `source` is empty.
std::string format_diagnostic(std::string_view source, const Error& e, bool color = false);

/// True when GT_COLOR=1.
bool color_from_env();

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err, bool color = false);
int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err, bool color = false);
/// `name` may be `all`.
int cmd_demo(const std::string& name, std::ostream& out, std::ostream& err);
int cmd_list(const std::optional<std::string>& schema_path, std::ostream& out, std::ostream& err,
             bool color = false);

/// Full command line (argv[0] included).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gentrans::cli
