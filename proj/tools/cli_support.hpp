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

// Shared plumbing for the command-line tool: input discovery, per-item
// parallel execution, stage timing and run manifests.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ztd/errors.hpp"
#include "ztd/io.hpp"

namespace ztd::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

inline constexpr const char* kManifestName = "manifest.jsonl";

/// Sample identifier: the file name up to its first dot.
inline std::string stem_of(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.substr(0, name.find('.'));
}

inline bool has_suffix(const std::string& name, const std::vector<std::string>& suffixes) {
  return std::any_of(suffixes.begin(), suffixes.end(),
                     [&](const std::string& s) { return name.ends_with(s); });
}

/// Files named on the command line are kept as given; directories
/// contribute their regular files whose names end with one of `suffixes`,
/// in lexicographic order. Manifests are never inputs.
inline std::vector<fs::path> expand_inputs(const std::vector<std::string>& args,
                                           const std::vector<std::string>& suffixes) {
  std::vector<fs::path> out;
  for (const std::string& a : args) {
    const fs::path p(a);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        const std::string name = e.path().filename().string();
        if (e.is_regular_file() && name != kManifestName && has_suffix(name, suffixes)) {
          found.push_back(e.path());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

/// Runs `work(i)` for i in [0, n) on up to `jobs` threads.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& work) {
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) work(i);
    });
  }
  for (auto& th : pool) th.join();
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  /// Milliseconds since construction or the previous lap.
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Outcome of one input item.
struct ItemRecord {
  std::string input;
  std::vector<std::string> outputs;
  std::map<std::string, double> stage_ms;
  Json extra = Json::object();
  std::string error;
};

/// Line-record manifest: a header with the command and configuration, one
/// record per item in input order, and a summary.
inline Json manifest_summary(const std::vector<ItemRecord>& items, double total_ms) {
  std::size_t failed = 0;
  std::map<std::string, double> stages;
  for (const ItemRecord& it : items) {
    failed += !it.error.empty();
    for (const auto& [k, v] : it.stage_ms) stages[k] += v;
  }
  Json s;
  s["summary"] = true;
  s["items"] = items.size();
  s["failed"] = failed;
  s["stage_ms"] = stages;
  s["total_ms"] = total_ms;
  return s;
}

inline void write_manifest(const fs::path& out_dir, const std::string& command, const Json& config,
                           const std::vector<ItemRecord>& items, double total_ms,
                           const Json& extra_summary = Json::object()) {
  std::string text;
  Json header;
  header["command"] = command;
  header["config"] = config;
  text += header.dump() + "\n";
  for (const ItemRecord& it : items) {
    Json r;
    r["input"] = it.input;
    r["outputs"] = it.outputs;
    r["stage_ms"] = it.stage_ms;
    for (const auto& [k, v] : it.extra.items()) r[k] = v;
    r["status"] = it.error.empty() ? "ok" : "error";
    if (!it.error.empty()) r["error"] = it.error;
    text += r.dump() + "\n";
  }
  Json summary = manifest_summary(items, total_ms);
  for (const auto& [k, v] : extra_summary.items()) summary[k] = v;
  text += summary.dump() + "\n";
  write_file(out_dir / kManifestName, text);
}

inline int exit_code(const std::vector<ItemRecord>& items) {
  return std::any_of(items.begin(), items.end(), [](const ItemRecord& it) { return !it.error.empty(); })
             ? 1
             : 0;
}

/// Nearest-rank percentile of a non-empty sample.
inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

}  // namespace ztd::cli
