//
// Copyright 2026 The ptrdp Authors
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
//

#ifndef PTRDP_CLI_H_
#define PTRDP_CLI_H_

#include <iosfwd>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "ptrdp/core_model.h"

namespace ptrdp {

inline constexpr int kExitOk = 0;
// Unreadable or malformed input data.
inline constexpr int kExitInputError = 1;
// Invalid flags or violated calibration preconditions.
inline constexpr int kExitValidation = 2;
// The mechanism declined to answer.
inline constexpr int kExitNoReply = 3;

enum class InputFormat { kCsv, kJsonLines };

// ".jsonl" and ".ndjson" are JSON-lines, anything else CSV.
InputFormat InferInputFormat(const std::string& path);

// CSV: a header naming a "value" column, or a single column with an optional
// non-numeric header line. JSON-lines: one number (or {"value": number}) per
// line. Blank lines are skipped. Errors carry the 1-based line number:
//   "parse error at line 2: ...", "non-finite value at line 7", and
//   "empty input" when no value was read.
// A one-line summary of rows read and skipped goes to `diagnostics`.
absl::StatusOr<Sample> IngestStream(std::istream& in, InputFormat format,
                                    std::ostream& diagnostics);
absl::StatusOr<Sample> IngestFile(const std::string& path,
                                  std::optional<InputFormat> format,
                                  std::ostream& diagnostics);

// Entry point of the `ptrdp` tool. Subcommands: median, mean, mean-density,
// simulate, audit. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace ptrdp

#endif  // PTRDP_CLI_H_
