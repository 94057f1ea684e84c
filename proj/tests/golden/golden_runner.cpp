// Runs the gentrans executable on every golden case and compares its output.
//
//   golden_runner GENTRANS CASES_DIR REPO_ROOT [--update]

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>

#include "golden.hpp"

extern char** environ;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

golden::Outcome run(const std::string& exe, const golden::Case& c, const std::filesystem::path& tmp) {
    std::vector<std::string> args{exe};
    args.insert(args.end(), c.args.begin(), c.args.end());
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);

    std::filesystem::path out_file = tmp / "stdout";
    std::filesystem::path err_file = tmp / "stderr";
    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_addopen(&fa, 1, out_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_addopen(&fa, 2, err_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    pid_t pid = 0;
    int rc = posix_spawn(&pid, exe.c_str(), &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
    if (rc != 0) throw std::runtime_error("cannot start " + exe + ": " + std::strerror(rc));
    int status = 0;
    waitpid(pid, &status, 0);
    golden::Outcome o;
    o.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    o.out = slurp(out_file);
    o.err = slurp(err_file);
    return o;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::cerr << "usage: golden_runner GENTRANS CASES_DIR REPO_ROOT [--update]\n";
        return 2;
    }
    std::string exe = std::filesystem::absolute(argv[1]).string();
    std::filesystem::path cases = std::filesystem::absolute(argv[2]);
    bool update = argc > 4 && std::string(argv[4]) == "--update";
    std::filesystem::path tmp = std::filesystem::temp_directory_path() / ("gentrans-golden-" + std::to_string(getpid()));
    std::filesystem::create_directories(tmp);
    std::filesystem::current_path(argv[3]);
    setenv("GT_COLOR", "0", 1);

    int failed = 0;
    std::vector<golden::Case> all = golden::load_dir(cases);
    for (const auto& c : all) {
        golden::Outcome o = run(exe, c, tmp);
        if (update) {
            std::ofstream(cases / (c.name + ".case"), std::ios::binary) << golden::render(c, o);
            continue;
        }
        std::string d = golden::diff(c, o);
        if (d.empty()) {
            std::cout << "ok    " << c.name << "\n";
        } else {
            ++failed;
            std::cout << "FAIL  " << c.name << ": " << d << "\n";
        }
    }
    std::filesystem::remove_all(tmp);
    std::cout << (all.size() - failed) << "/" << all.size() << " golden cases match\n";
    return failed == 0 ? 0 : 1;
}
