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

#include "verimoa/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

extern char** environ;

namespace verimoa {

namespace {

std::string first_word(const std::string& command) {
  std::istringstream in(command);
  std::string word;
  in >> word;
  if (word.size() >= 2 && (word.front() == '\'' || word.front() == '"') && word.back() == word.front())
    word = word.substr(1, word.size() - 2);
  return word;
}

bool executable(const std::string& path) {
  struct stat st {};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
}

}  // namespace

bool command_available(const std::string& command) {
  const auto word = first_word(command);
  if (word.empty()) return false;
  if (word.find('/') != std::string::npos) return executable(word);
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    if (executable(dir + "/" + word)) return true;
  }
  return false;
}

CommandResult run_command(const std::string& command, const CommandOptions& options) {
  CommandResult result;
  const auto start = std::chrono::steady_clock::now();

  // Everything the child needs is prepared before fork.
  std::vector<std::string> env_storage;
  for (char** e = environ; e && *e; ++e) {
    std::string_view entry(*e);
    bool drop = false;
    for (const auto& name : options.scrub_env)
      if (entry.size() > name.size() && entry.substr(0, name.size()) == name && entry[name.size()] == '=')
        drop = true;
    if (!drop) env_storage.emplace_back(entry);
  }
  std::vector<char*> envp;
  for (auto& e : env_storage) envp.push_back(e.data());
  envp.push_back(nullptr);
  const std::string wd = options.working_dir.string();
  std::string shell = "/bin/sh";
  std::string flag = "-c";
  std::string cmd = command;
  char* argv[] = {shell.data(), flag.data(), cmd.data(), nullptr};

  int pipefd[2];
  if (::pipe2(pipefd, O_CLOEXEC) != 0) {
    result.not_found = true;
    result.output = std::string("pipe failed: ") + std::strerror(errno);
    return result;
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    result.not_found = true;
    result.output = std::string("fork failed: ") + std::strerror(errno);
    return result;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(pipefd[1], STDOUT_FILENO);
    ::dup2(pipefd[1], STDERR_FILENO);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    if (!wd.empty() && ::chdir(wd.c_str()) != 0) ::_exit(126);
    ::execve(argv[0], argv, envp.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(pipefd[1]);

  const auto deadline = start + options.timeout;
  char buf[8192];
  bool open = true;
  while (open) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      break;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{pipefd[0], POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining, 100)) + 1);
    if (rc < 0 && errno == EINTR) continue;
    if (rc <= 0) continue;
    const auto n = ::read(pipefd[0], buf, sizeof buf);
    if (n > 0) {
      if (result.output.size() < options.max_output_bytes) result.output.append(buf, static_cast<std::size_t>(n));
      else {
        // Keep the tail.
        result.output.append(buf, static_cast<std::size_t>(n));
        result.output.erase(0, result.output.size() - options.max_output_bytes);
      }
    } else if (n == 0 || (n < 0 && errno != EINTR && errno != EAGAIN)) {
      open = false;
    }
  }
  if (result.timed_out) ::kill(-pid, SIGKILL);
  ::close(pipefd[0]);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!result.timed_out) {
    // Output closed; grandchildren holding the pipe are gone too.
    ::kill(-pid, SIGKILL);
  }
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
  if (!result.timed_out && result.exit_code == 127) result.not_found = true;
  result.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return result;
}

}  // namespace verimoa
