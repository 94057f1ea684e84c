#include "golden.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace golden {

Case load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    Case c;
    c.name = file.stem().string();
    enum { Args, Out, Err, Done } section = Args;
    std::string line;
    while (std::getline(in, line)) {
        if (line == "--- stdout") {
            section = Out;
        } else if (line == "--- stderr") {
            section = Err;
        } else if (line.rfind("--- exit ", 0) == 0) {
            c.exit_code = std::stoi(line.substr(9));
            section = Done;
        } else if (section == Args) {
            if (line.rfind("arg: ", 0) == 0) {
                c.args.push_back(line.substr(5));
            } else if (line == "arg:") {
                c.args.emplace_back();
            } else if (!line.empty() && line[0] != '#') {
                throw std::runtime_error(file.string() + ": unexpected line: " + line);
            }
        } else if (section == Out) {
            c.out += line + "\n";
        } else if (section == Err) {
            c.err += line + "\n";
        }
    }
    if (section != Done) throw std::runtime_error(file.string() + ": missing --- exit line");
    return c;
}

std::vector<Case> load_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".case") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Case> out;
    for (const auto& f : files) out.push_back(load(f));
    return out;
}

std::string render(const Case& c, const Outcome& o) {
    std::ostringstream s;
    for (const auto& a : c.args) s << (a.empty() ? "arg:" : "arg: " + a) << "\n";
    s << "--- stdout\n" << o.out << "--- stderr\n" << o.err << "--- exit " << o.exit_code << "\n";
    return s.str();
}

std::string diff(const Case& c, const Outcome& o) {
    if (o.exit_code != c.exit_code) {
        return "exit status " + std::to_string(o.exit_code) + ", expected " + std::to_string(c.exit_code);
    }
    auto first_diff = [](const std::string& what, const std::string& want, const std::string& got) -> std::string {
        if (want == got) return "";
        std::istringstream a(want);
        std::istringstream b(got);
        std::string la;
        std::string lb;
        for (int n = 1;; ++n) {
            bool ha = static_cast<bool>(std::getline(a, la));
            bool hb = static_cast<bool>(std::getline(b, lb));
            if (!ha && !hb) return what + " differs in trailing newline";
            if (!ha || !hb || la != lb) {
                return what + " line " + std::to_string(n) + ":\n  expected: " + (ha ? la : "<eof>") +
                       "\n  actual:   " + (hb ? lb : "<eof>");
            }
        }
    };
    std::string d = first_diff("stdout", c.out, o.out);
    if (!d.empty()) return d;
    return first_diff("stderr", c.err, o.err);
}

} // namespace golden
