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

#include "ptrdp/report_io.h"

#include <cmath>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"

namespace ptrdp {
namespace {

using Json = nlohmann::ordered_json;

Json Number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string CsvNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return absl::StrFormat("%.17g", v);
}

constexpr char kCsvHeader[] = "series,x,quantile_or_rate,lower,upper\n";

void CsvRow(std::string& out, const std::string& series, double x,
            const std::string& value, const std::string& lower = "",
            const std::string& upper = "") {
  absl::StrAppend(&out, series, ",", CsvNumber(x), ",", value, ",", lower, ",",
                  upper, "\n");
}

Json ChecksJson(const std::vector<PreconditionCheck>& checks) {
  Json out = Json::array();
  for (const PreconditionCheck& check : checks) {
    Json c;
    c["name"] = check.name;
    c["satisfied"] = check.satisfied;
    c["enforced"] = check.enforced;
    c["actual"] = Number(check.actual);
    c["required"] = Number(check.required);
    c["margin"] = Number(check.margin);
    out.push_back(std::move(c));
  }
  return out;
}

Json BoundJson(const BoundTerms& terms) {
  Json b;
  b["total"] = Number(terms.total());
  b["sampling"] = Number(terms.sampling);
  b["bias"] = Number(terms.bias);
  b["privacy"] = Number(terms.privacy);
  return b;
}

Json RateJson(const RateEstimate& rate) {
  Json r;
  r["rate"] = Number(rate.rate);
  r["count"] = rate.successes;
  r["lower"] = Number(rate.lower);
  r["upper"] = Number(rate.upper);
  return r;
}

std::string Dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string EstimateJson(const std::string& command,
                         const DpEstimateReport& report, std::size_t n,
                         std::size_t block_count, std::uint64_t seed,
                         const PrivacyGuarantee& guarantee,
                         double noreply_threshold) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["command"] = command;
  if (report.outcome.is_reply()) {
    doc["result"] = Number(report.outcome.value());
  } else {
    doc["result"] = "no_reply";
  }
  doc["n"] = n;
  if (block_count > 0) doc["K"] = block_count;
  doc["eta"] = Number(report.eta_used);
  doc["C"] = Number(report.c_used);
  doc["noreply_threshold"] = Number(noreply_threshold);
  doc["bound"] = BoundJson(report.bound_terms);
  doc["preconditions"] = ChecksJson(report.precondition_checks);
  doc["seed"] = seed;
  Json privacy;
  privacy["epsilon"] = Number(guarantee.epsilon);
  privacy["delta"] = Number(guarantee.delta);
  doc["privacy_guarantee"] = std::move(privacy);
  return Dump(doc);
}

std::string ExperimentReportJson(const ExperimentReport& report) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["distribution"] = report.distribution;
  doc["estimator"] = EstimatorKindName(report.kind);
  doc["n"] = report.n;
  if (report.block_count > 0) doc["K"] = report.block_count;
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["truth"] = Number(report.truth);
  doc["coverage"] = RateJson(report.coverage);
  doc["noreply"] = RateJson(report.noreply);
  Json quantiles = Json::array();
  for (const auto& [tau, q] : report.error_quantiles) {
    Json entry;
    entry["tau"] = tau;
    entry["quantile"] = Number(q);
    quantiles.push_back(std::move(entry));
  }
  doc["error_quantiles"] = std::move(quantiles);
  doc["eta"] = Number(report.eta);
  doc["C"] = Number(report.c);
  doc["bound"] = BoundJson(report.bound_terms);
  doc["preconditions"] = ChecksJson(report.precondition_checks);
  return Dump(doc);
}

std::string ScalingTableJson(const ScalingTable& table) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["distribution"] = table.distribution;
  doc["estimator"] = EstimatorKindName(table.kind);
  doc["seed"] = table.seed;
  Json cells = Json::array();
  for (const ScalingCell& cell : table.cells) {
    Json c;
    c["n"] = cell.n;
    if (cell.block_count > 0) c["K"] = cell.block_count;
    c["tau"] = cell.tau;
    c["quantile"] = Number(cell.quantile);
    c["noreply_rate"] = Number(cell.noreply_rate);
    c["eta"] = Number(cell.eta);
    c["bound"] = BoundJson(cell.bound_terms);
    cells.push_back(std::move(c));
  }
  doc["cells"] = std::move(cells);
  Json fits = Json::array();
  for (const SlopeFit& fit : table.fits) {
    Json f;
    f["label"] = fit.label;
    f["slope"] = Number(fit.slope);
    f["intercept"] = Number(fit.intercept);
    fits.push_back(std::move(f));
  }
  doc["fits"] = std::move(fits);
  return Dump(doc);
}

std::string AuditReportJson(const std::string& preset,
                            const AuditReport& report, double proven_epsilon,
                            double proven_delta) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["preset"] = preset;
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["target_delta"] = Number(report.target_delta);
  doc["epsilon_hat"] = Number(report.epsilon_hat);
  doc["bootstrap_stddev"] = Number(report.bootstrap_stddev);
  doc["bootstrap_radius"] = Number(report.bootstrap_radius);
  doc["proven_epsilon"] = Number(proven_epsilon);
  doc["proven_delta"] = Number(proven_delta);
  Json edges = Json::array();
  for (double e : report.edges) edges.push_back(Number(e));
  doc["edges"] = std::move(edges);
  doc["counts_x"] = report.counts_x;
  doc["counts_x_prime"] = report.counts_x_prime;
  return Dump(doc);
}

std::string EstimateCsv(const DpEstimateReport& report, std::size_t n) {
  std::string out = kCsvHeader;
  const double x = static_cast<double>(n);
  CsvRow(out, "result", x,
         report.outcome.is_reply() ? CsvNumber(report.outcome.value())
                                   : "no_reply");
  CsvRow(out, "eta", x, CsvNumber(report.eta_used));
  CsvRow(out, "C", x, CsvNumber(report.c_used));
  CsvRow(out, "bound", x, CsvNumber(report.theoretical_bound));
  return out;
}

std::string ExperimentReportCsv(const ExperimentReport& report) {
  std::string out = kCsvHeader;
  const double x = static_cast<double>(report.n);
  CsvRow(out, "coverage", x, CsvNumber(report.coverage.rate),
         CsvNumber(report.coverage.lower), CsvNumber(report.coverage.upper));
  CsvRow(out, "noreply", x, CsvNumber(report.noreply.rate),
         CsvNumber(report.noreply.lower), CsvNumber(report.noreply.upper));
  for (const auto& [tau, q] : report.error_quantiles) {
    CsvRow(out, "error_quantile", tau, CsvNumber(q));
  }
  CsvRow(out, "bound", x, CsvNumber(report.theoretical_bound));
  return out;
}

std::string ScalingTableCsv(const ScalingTable& table) {
  std::string out = kCsvHeader;
  for (const ScalingCell& cell : table.cells) {
    CsvRow(out, absl::StrFormat("quantile|tau=%g", cell.tau),
           static_cast<double>(cell.n), CsvNumber(cell.quantile));
  }
  for (const ScalingCell& cell : table.cells) {
    CsvRow(out, absl::StrFormat("privacy_term|tau=%g", cell.tau),
           static_cast<double>(cell.n), CsvNumber(cell.bound_terms.privacy));
  }
  return out;
}

std::string AuditReportCsv(const AuditReport& report) {
  std::string out = kCsvHeader;
  for (std::size_t b = 0; b < report.counts_x.size(); ++b) {
    const double m = static_cast<double>(report.trials);
    CsvRow(out, "p_x", static_cast<double>(b),
           CsvNumber(static_cast<double>(report.counts_x[b]) / m));
    CsvRow(out, "p_x_prime", static_cast<double>(b),
           CsvNumber(static_cast<double>(report.counts_x_prime[b]) / m));
  }
  CsvRow(out, "epsilon_hat", 0.0, CsvNumber(report.epsilon_hat),
         CsvNumber(report.epsilon_hat - report.bootstrap_radius),
         CsvNumber(report.epsilon_hat + report.bootstrap_radius));
  return out;
}

}  // namespace ptrdp
