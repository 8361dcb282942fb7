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

// A corpus is a directory of trace files, one pipeline per file.

#ifndef MLPROV_CORPUS_H_
#define MLPROV_CORPUS_H_

#include <string>
#include <utility>
#include <vector>

#include "mlprov/segmentation.h"
#include "mlprov/trace.h"

namespace mlprov {

inline constexpr const char* kTraceExtension = ".jsonl";

// Trace files directly under `dir`, sorted by file name.
std::vector<std::string> ListTraceFiles(const std::string& dir);

std::vector<Trace> ReadCorpus(const std::string& dir);

// Parses and segments every trace in `dir`. Throws if a trace has
// validation violations.
std::vector<Pipeline> LoadCorpus(const std::string& dir, const StopSet& stop = {});

// Validates and segments already-parsed traces.
std::vector<Pipeline> SegmentCorpus(std::vector<Trace> traces, const StopSet& stop = {});

}  // namespace mlprov

#endif  // MLPROV_CORPUS_H_
