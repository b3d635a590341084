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

#pragma once

#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>

namespace verimoa {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

std::string sha256_hex(std::string_view data);

std::string trim(std::string_view text);

// Collapses every whitespace run to a single space and trims the ends.
std::string normalize_whitespace(std::string_view text);

// Last `max_bytes` bytes of `text`, never splitting a UTF-8 sequence.
std::string tail_bytes(std::string_view text, std::size_t max_bytes);

// Single-quotes `arg` for /bin/sh.
std::string shell_quote(std::string_view arg);

// Replaces every `{key}` occurrence.
std::string replace_all(std::string text, std::string_view from, std::string_view to);

// Counting semaphore with a runtime limit.
class Semaphore {
 public:
  explicit Semaphore(std::size_t permits) : permits_(permits == 0 ? 1 : permits) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return permits_ > 0; });
    --permits_;
  }

  void release() {
    {
      std::lock_guard lock(mutex_);
      ++permits_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t permits_;
};

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(Semaphore& sem) : sem_(sem) { sem_.acquire(); }
  ~SemaphoreGuard() { sem_.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

 private:
  Semaphore& sem_;
};

}  // namespace verimoa
