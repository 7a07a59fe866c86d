#pragma once

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace testutil {

// Self-cleaning unique directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("deflectstats-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Byte-compares two directory trees: same relative file set, same contents.
inline bool trees_equal(const std::filesystem::path& a, const std::filesystem::path& b,
                        std::string* why = nullptr) {
  std::map<std::string, std::filesystem::path> fa, fb;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a))
    if (e.is_regular_file()) fa.emplace(std::filesystem::relative(e.path(), a).string(), e.path());
  for (const auto& e : std::filesystem::recursive_directory_iterator(b))
    if (e.is_regular_file()) fb.emplace(std::filesystem::relative(e.path(), b).string(), e.path());
  if (fa.size() != fb.size()) {
    if (why) *why = "file count differs";
    return false;
  }
  for (const auto& [rel, pa] : fa) {
    auto it = fb.find(rel);
    if (it == fb.end()) {
      if (why) *why = "missing " + rel;
      return false;
    }
    if (read_file(pa) != read_file(it->second)) {
      if (why) *why = "content differs: " + rel;
      return false;
    }
  }
  return true;
}

// Path of the built CLI binary, provided by the test harness environment.
inline std::string cli_path() {
  const char* p = std::getenv("DEFLECTSTATS_CLI");
  return p == nullptr ? std::string() : std::string(p);
}

// Runs a shell command, returning the process exit code (-1 if it did not
// exit normally).
inline int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

// Minimal well-formedness check for the emitted SVGs: one root element,
// balanced tags, nothing after the root closes.
inline bool xml_well_formed(const std::string& text, std::string* why = nullptr) {
  std::size_t i = 0;
  int depth = 0;
  int roots = 0;
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  while (i < text.size()) {
    const std::size_t open = text.find('<', i);
    if (open == std::string::npos) break;
    const std::size_t close = text.find('>', open);
    if (close == std::string::npos) return fail("unterminated tag");
    const std::string tag = text.substr(open, close - open + 1);
    if (tag.rfind("<?", 0) == 0 || tag.rfind("<!--", 0) == 0) {
      i = close + 1;
      continue;
    }
    if (tag.rfind("</", 0) == 0) {
      if (depth == 0) return fail("close without open");
      --depth;
    } else if (tag[tag.size() - 2] != '/') {
      if (depth == 0) {
        if (++roots > 1) return fail("multiple root elements");
      }
      ++depth;
    } else if (depth == 0) {
      if (++roots > 1) return fail("multiple root elements");
    }
    i = close + 1;
  }
  if (depth != 0) return fail("unbalanced tags");
  if (roots != 1) return fail("expected exactly one root element");
  return true;
}

}  // namespace testutil
