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

// Command-line driver. Exit codes: 0 success, 1 validation violations or
// unusable input data, 2 usage errors.

#ifndef MLPROV_CLI_H_
#define MLPROV_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "mlprov/featurization.h"

namespace mlprov {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// The features table: feature columns, then label, cost_to_acquire,
// pipeline_id, anchor, stage, model_type, graphlet_cost and the
// acquisition cost of every stage.
void WriteFeatureMatrix(const FeatureMatrix& m, std::ostream& out);
FeatureMatrix ReadFeatureMatrix(std::istream& in);

}  // namespace mlprov

#endif  // MLPROV_CLI_H_
