// Copyright 2026 The verimoa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stand-in for iverilog/vvp driven by magic substrings, for tests and
// offline runs.
//
//   verimoa-stubsim compile -o <image> <sources...>
//   verimoa-stubsim run <image>
//   verimoa-stubsim check <source>
//
// compile fails on SYNTAXERR, on sources without a module, or on an
// unbalanced module/endmodule count. run prints a mismatch for FUNCFAIL
// or for any `// STUB_EXPECT: <text>` line of testbench.v that the other
// sources do not contain (whitespace ignored), else ALL_TESTS_PASSED.
// check fails on CHECKERR. STUB_COMPILE_SLEEP_MS, STUB_RUN_SLEEP_MS and
// STUB_EXIT tweak timing and exit status.

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kFileMark = "//@@STUBSIM_FILE ";

bool slurp(const fs::path& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

void sleep_from_env(const char* name) {
  if (const char* v = std::getenv(name)) std::this_thread::sleep_for(std::chrono::milliseconds(std::atoll(v)));
}

std::string strip_comments(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, 2, "//") == 0) {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (s.compare(i, 2, "/*") == 0) {
      const auto end = s.find("*/", i + 2);
      i = end == std::string::npos ? s.size() : end + 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

int count_word(const std::string& s, std::string_view word) {
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  int n = 0;
  for (auto pos = s.find(word); pos != std::string::npos; pos = s.find(word, pos + 1)) {
    const bool left = pos == 0 || !ident(s[pos - 1]);
    const bool right = pos + word.size() >= s.size() || !ident(s[pos + word.size()]);
    if (left && right) ++n;
  }
  return n;
}

std::string squash(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

int compile(int argc, char** argv) {
  fs::path image;
  std::vector<fs::path> sources;
  for (int i = 2; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "-o" && i + 1 < argc)
      image = argv[++i];
    else if (a.rfind("-", 0) != 0)
      sources.emplace_back(a);
  }
  if (image.empty() || sources.empty()) {
    std::cerr << "stubsim: usage: compile -o <image> <sources...>\n";
    return 2;
  }
  sleep_from_env("STUB_COMPILE_SLEEP_MS");
  std::string bundle;
  int errors = 0;
  for (const auto& src : sources) {
    std::string text;
    if (!slurp(src, text)) {
      std::cerr << src.string() << ": Unable to open input file.\n";
      return 1;
    }
    const auto code = strip_comments(text);
    if (text.find("SYNTAXERR") != std::string::npos) {
      std::cerr << src.filename().string() << ":1: syntax error\n";
      ++errors;
    }
    const int opens = count_word(code, "module");
    const int closes = count_word(code, "endmodule");
    if (opens == 0) {
      std::cerr << src.filename().string() << ":1: error: no module declaration\n";
      ++errors;
    } else if (opens != closes) {
      std::cerr << src.filename().string() << ": error: module/endmodule mismatch (" << opens << " vs " << closes
                << ")\n";
      ++errors;
    }
    bundle += std::string(kFileMark) + src.filename().string() + "\n" + text + "\n";
  }
  if (errors) {
    std::cerr << errors << " error(s) during elaboration.\n";
    return 1;
  }
  std::ofstream out(image, std::ios::binary);
  out << bundle;
  return out ? 0 : 1;
}

int run(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "stubsim: usage: run <image>\n";
    return 2;
  }
  std::string bundle;
  if (!slurp(argv[2], bundle)) {
    std::cerr << "stubsim: cannot open image " << argv[2] << "\n";
    return 1;
  }
  sleep_from_env("STUB_RUN_SLEEP_MS");

  std::string testbench, others;
  std::size_t pos = 0;
  while ((pos = bundle.find(kFileMark, pos)) != std::string::npos) {
    const auto name_end = bundle.find('\n', pos);
    const auto name = bundle.substr(pos + kFileMark.size(), name_end - pos - kFileMark.size());
    const auto next = bundle.find(kFileMark, name_end);
    const auto body = bundle.substr(name_end + 1, (next == std::string::npos ? bundle.size() : next) - name_end - 1);
    (name == "testbench.v" ? testbench : others) += body + "\n";
    pos = name_end;
  }

  if (others.find("FUNCFAIL") != std::string::npos) {
    std::cout << "MISMATCH at t=40: expected 1, got 0\n";
    return 0;
  }
  std::string stripped;
  {
    std::istringstream lines(others);
    std::string line;
    while (std::getline(lines, line))
      if (line.find("STUB_EXPECT:") == std::string::npos) stripped += line + "\n";
  }
  const auto haystack = squash(stripped);
  std::istringstream lines(testbench);
  std::string line;
  int missing = 0;
  while (std::getline(lines, line)) {
    const auto at = line.find("STUB_EXPECT:");
    if (at == std::string::npos) continue;
    const auto needle = squash(line.substr(at + 12));
    if (!needle.empty() && haystack.find(needle) == std::string::npos) {
      std::cout << "MISMATCH: behaviour '" << needle << "' not observed\n";
      ++missing;
    }
  }
  if (missing) return 0;
  std::cout << "ALL_TESTS_PASSED\n";
  if (const char* e = std::getenv("STUB_EXIT")) return std::atoi(e);
  return 0;
}

int check(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "stubsim: usage: check <source>\n";
    return 2;
  }
  std::string text;
  if (!slurp(argv[2], text)) {
    std::cerr << "stubsim: cannot open " << argv[2] << "\n";
    return 1;
  }
  if (text.find("CHECKERR") != std::string::npos) {
    std::cerr << fs::path(argv[2]).filename().string() << ":1: error: expected ';'\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cmd = argc > 1 ? argv[1] : "";
  if (cmd == "compile") return compile(argc, argv);
  if (cmd == "run") return run(argc, argv);
  if (cmd == "check") return check(argc, argv);
  std::cerr << "usage: verimoa-stubsim compile|run|check ...\n";
  return 2;
}
