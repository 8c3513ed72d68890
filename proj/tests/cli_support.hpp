#pragma once

// Helpers for tests that drive the pcarf executable.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "test_support.hpp"

namespace pcarf::testing {

namespace fs = std::filesystem;

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs `pcarf <args>` with an optional environment prefix ("VAR=value").
inline Outcome run_cli(const fs::path& work, const std::string& args, const std::string& env = {}) {
  const fs::path out = work / "stdout.txt";
  const fs::path err = work / "stderr.txt";
  const std::string cmd = (env.empty() ? "" : "env " + env + " ") + quote(PCARF_CLI_PATH) + " " + args + " >" +
                          quote(out.string()) + " 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(out);
  o.err = slurp(err);
  return o;
}

// Every regular file under `a` exists under `b` with identical bytes.
inline bool same_tree(const fs::path& a, const fs::path& b, std::size_t* files = nullptr) {
  std::size_t n = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path other = b / fs::relative(entry.path(), a);
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) return false;
    ++n;
  }
  std::size_t m = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) m += entry.is_regular_file() ? 1 : 0;
  if (files) *files = n;
  return n == m;
}

// A small two-class dataset and a config running every model and PCA mode
// on it.
inline fs::path write_demo_experiment(const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "demo.csv", to_csv(two_gaussians(160, 8, 1.0, 21, 0.25)));
  write_text(dir / "demo.ini",
             "[data]\n"
             "path = demo.csv\n"
             "[pca]\n"
             "mode = both\n"
             "[forest]\n"
             "n_trees = 20\n"
             "[mlp]\n"
             "hidden = 8\n"
             "epochs = 20\n"
             "[run]\n"
             "seeds = 1..3\n"
             "output_dir = out\n");
  return dir / "demo.ini";
}

}  // namespace pcarf::testing
