/* Copyright 2026 The mlprov Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "mlprov/corpus.h"

#include <algorithm>
#include <filesystem>

namespace mlprov {

namespace fs = std::filesystem;

std::vector<std::string> ListTraceFiles(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("corpus directory not found: " + dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == kTraceExtension) {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Trace> ReadCorpus(const std::string& dir) {
  std::vector<Trace> traces;
  for (const auto& path : ListTraceFiles(dir)) traces.push_back(ReadTraceFile(path));
  return traces;
}

std::vector<Pipeline> SegmentCorpus(std::vector<Trace> traces, const StopSet& stop) {
  std::vector<Pipeline> out;
  out.reserve(traces.size());
  for (Trace& t : traces) {
    auto violations = ValidateTrace(t);
    if (!violations.empty()) {
      throw Error("trace " + t.pipeline_id + " is invalid: " + violations.front().ToString());
    }
    out.push_back(SegmentPipeline(std::move(t), stop));
  }
  return out;
}

std::vector<Pipeline> LoadCorpus(const std::string& dir, const StopSet& stop) {
  return SegmentCorpus(ReadCorpus(dir), stop);
}

}  // namespace mlprov
