// Copyright 2026 The ZTD Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Helpers for driving the command-line tool from tests: scratch
// directories, process invocation and output comparison.

#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "ztd/io.hpp"

namespace ztd::testing {

namespace fs = std::filesystem;
using Json = nlohmann::json;

/// Removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("ztd_" + tag + "_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

struct CliResult {
  int exit_code = -1;
  std::string out;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

/// Runs the tool with `args`; standard output is captured, standard error
/// is discarded.
inline CliResult run_cli(const std::vector<std::string>& args) {
  const fs::path capture = fs::temp_directory_path() / ("ztd_cli_out_" + std::to_string(std::random_device{}()));
  std::string cmd = shell_quote(ZTD_CLI_PATH);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " >" + shell_quote(capture.string()) + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::error_code ec;
  if (fs::exists(capture)) r.out = read_file(capture);
  fs::remove(capture, ec);
  return r;
}

inline std::vector<Json> read_manifest(const fs::path& dir) {
  std::vector<Json> lines;
  const std::string text = read_file(dir / "manifest.jsonl");
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    lines.push_back(Json::parse(text.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return lines;
}

/// Per-item records of a manifest, without the header and summary.
inline std::vector<Json> manifest_items(const std::vector<Json>& manifest) {
  if (manifest.size() < 2) return {};
  return {manifest.begin() + 1, manifest.end() - 1};
}

/// File name to contents for every file in `dir` except the manifest.
inline std::map<std::string, std::string> output_files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name != "manifest.jsonl") files[name] = read_file(e.path());
  }
  return files;
}

}  // namespace ztd::testing
