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

#ifndef PTRDP_REPORT_IO_H_
#define PTRDP_REPORT_IO_H_

#include <cstdint>
#include <string>

#include "ptrdp/audit.h"
#include "ptrdp/estimators.h"
#include "ptrdp/mechanisms.h"
#include "ptrdp/simlab.h"

namespace ptrdp {

// Bumped whenever a key is renamed or removed. Adding keys does not bump it.
inline constexpr int kReportSchemaVersion = 1;

// JSON documents use a fixed key order and shortest round-trip number
// formatting, so equal inputs serialize to identical bytes. Infinite values
// are written as the string "inf", NaN as null.

// One DP estimate. On no reply the document carries only data-independent
// quantities (eta, C, the threshold, the bound) next to "result": "no_reply".
std::string EstimateJson(const std::string& command,
                         const DpEstimateReport& report, std::size_t n,
                         std::size_t block_count, std::uint64_t seed,
                         const PrivacyGuarantee& guarantee,
                         double noreply_threshold);

std::string ExperimentReportJson(const ExperimentReport& report);
std::string ScalingTableJson(const ScalingTable& table);
std::string AuditReportJson(const std::string& preset,
                            const AuditReport& report, double proven_epsilon,
                            double proven_delta);

// Plot-ready CSV, header "series,x,quantile_or_rate,lower,upper". Interval
// columns are empty where no interval exists.
std::string EstimateCsv(const DpEstimateReport& report, std::size_t n);
std::string ExperimentReportCsv(const ExperimentReport& report);
std::string ScalingTableCsv(const ScalingTable& table);
std::string AuditReportCsv(const AuditReport& report);

}  // namespace ptrdp

#endif  // PTRDP_REPORT_IO_H_
