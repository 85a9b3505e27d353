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

#include "ptrdp/cli.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_format.h"
#include "absl/strings/match.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "ptrdp/audit.h"
#include "ptrdp/distributions.h"
#include "ptrdp/estimators.h"
#include "ptrdp/mechanisms.h"
#include "ptrdp/noise.h"
#include "ptrdp/report_io.h"
#include "ptrdp/simlab.h"

namespace ptrdp {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Ingestion

enum class FieldParse { kOk, kNotNumber, kNonFinite };

FieldParse ParseNumber(absl::string_view field, double& value) {
  field = absl::StripAsciiWhitespace(field);
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
    field = field.substr(1, field.size() - 2);
  }
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return FieldParse::kNotNumber;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ptr != end) return FieldParse::kNotNumber;
  if (ec == std::errc::result_out_of_range) return FieldParse::kNonFinite;
  if (ec != std::errc()) return FieldParse::kNotNumber;
  if (!std::isfinite(value)) return FieldParse::kNonFinite;
  return FieldParse::kOk;
}

absl::Status FieldError(FieldParse result, std::size_t line,
                        absl::string_view field) {
  if (result == FieldParse::kNonFinite) {
    return absl::InvalidArgumentError(
        absl::StrFormat("non-finite value at line %d", line));
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "parse error at line %d: '%s' is not a number", line,
      absl::StripAsciiWhitespace(field)));
}

std::string Unquote(absl::string_view field) {
  field = absl::StripAsciiWhitespace(field);
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
    field = field.substr(1, field.size() - 2);
  }
  return std::string(field);
}

absl::StatusOr<std::vector<double>> ReadCsv(std::istream& in,
                                            std::size_t& skipped) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t column = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (absl::StripAsciiWhitespace(line).empty()) {
      ++skipped;
      continue;
    }
    std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    if (!header_seen) {
      header_seen = true;
      width = fields.size();
      double probe;
      if (width == 1 && ParseNumber(fields[0], probe) != FieldParse::kNotNumber) {
        // Headerless single column; fall through and treat as data.
      } else {
        bool found = false;
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (Unquote(fields[i]) == "value") {
            column = i;
            found = true;
            break;
          }
        }
        if (!found && width != 1) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "parse error at line %d: no 'value' column in a %d-column "
              "header",
              line_no, width));
        }
        continue;
      }
    }
    if (fields.size() != width) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "parse error at line %d: expected %d columns, found %d", line_no,
          width, fields.size()));
    }
    double value;
    const FieldParse result = ParseNumber(fields[column], value);
    if (result != FieldParse::kOk) {
      return FieldError(result, line_no, fields[column]);
    }
    values.push_back(value);
  }
  return values;
}

absl::StatusOr<std::vector<double>> ReadJsonLines(std::istream& in,
                                                  std::size_t& skipped) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) {
      ++skipped;
      continue;
    }
    nlohmann::json doc = nlohmann::json::parse(line, nullptr,
                                               /*allow_exceptions=*/false);
    if (doc.is_object() && doc.contains("value")) doc = doc["value"];
    if (!doc.is_number()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "parse error at line %d: expected a JSON number", line_no));
    }
    const double value = doc.get<double>();
    if (!std::isfinite(value)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("non-finite value at line %d", line_no));
    }
    values.push_back(value);
  }
  return values;
}

// ---------------------------------------------------------------------------
// Command plumbing

struct CommonFlags {
  double epsilon = kUnset;
  double delta = kUnset;
  double tau = kUnset;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string format = "json";
  std::string out;
};

struct DataFlags {
  std::string input;
  std::string input_format;
};

struct Outcome {
  int code = kExitOk;
  std::string document;
};

// Converts a status to an exit code and prints it to `err`.
int Fail(const absl::Status& status, int code, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return code;
}

void AddCommon(CLI::App* app, CommonFlags& f, bool needs_tau) {
  app->add_option("--epsilon", f.epsilon, "privacy parameter epsilon > 0")
      ->required();
  app->add_option("--delta", f.delta, "privacy parameter delta in (0, 1)")
      ->required();
  if (needs_tau) {
    app->add_option("--tau", f.tau, "failure probability tau in (0, 1)")
        ->required();
  }
  app->add_option("--seed", f.seed, "seed of the noise stream");
  app->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", f.out, "write the report here instead of stdout");
}

void AddData(CLI::App* app, DataFlags& f) {
  app->add_option("--input", f.input, "CSV or JSON-lines file")->required();
  app->add_option("--input-format", f.input_format,
                  "override the extension-based input format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

absl::StatusOr<Confidence> MakeConfidence(const CommonFlags& f) {
  return Confidence::Create(f.tau);
}

std::uint64_t ResolveSeed(CommonFlags& f) {
  if (!f.seed_given) {
    std::random_device device;
    f.seed = (static_cast<std::uint64_t>(device()) << 32) | device();
  }
  return f.seed;
}

absl::StatusOr<Sample> Ingest(const DataFlags& f, std::ostream& err) {
  std::optional<InputFormat> format;
  if (f.input_format == "csv") format = InputFormat::kCsv;
  if (f.input_format == "jsonl") format = InputFormat::kJsonLines;
  return IngestFile(f.input, format, err);
}

absl::Status CheckBlockCount(std::size_t k) {
  if (k == 0) return absl::InvalidArgumentError("--K must be at least 1");
  return absl::OkStatus();
}

// Shared tail of the three estimate commands.
Outcome FinishEstimate(const std::string& command,
                       const absl::StatusOr<DpEstimateReport>& report,
                       std::size_t n, std::size_t k, const CommonFlags& flags,
                       const PtrConfig& config, std::ostream& err) {
  if (!report.ok()) {
    const int code =
        absl::IsFailedPrecondition(report.status()) ||
                absl::IsInvalidArgument(report.status())
            ? kExitValidation
            : kExitInputError;
    return {Fail(report.status(), code, err), ""};
  }
  Outcome outcome;
  outcome.code = report->outcome.is_reply() ? kExitOk : kExitNoReply;
  outcome.document =
      flags.format == "csv"
          ? EstimateCsv(*report, n)
          : EstimateJson(command, *report, n, k, flags.seed,
                         PtrGuarantee(config), config.NoReplyThreshold());
  if (!report->outcome.is_reply()) err << "no reply: the release test failed\n";
  return outcome;
}

absl::StatusOr<DistributionSpec> MakeDistribution(const std::string& family,
                                                  double mu, double sigma,
                                                  double nu, double loc,
                                                  double scale, double alpha,
                                                  double x_m, bool centered) {
  if (family == "normal") return DistributionSpec::Normal(mu, sigma);
  if (family == "student-t") return DistributionSpec::StudentT(nu, loc, scale);
  if (family == "pareto") return DistributionSpec::Pareto(alpha, x_m, centered);
  if (family == "lognormal") return DistributionSpec::LogNormal(mu, sigma);
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown distribution '%s'", family));
}

EstimatorKind ParseKind(const std::string& name) {
  if (name == "mom") return EstimatorKind::kMom;
  if (name == "mom-density") return EstimatorKind::kMomDensity;
  if (name == "nonprivate-median") return EstimatorKind::kNonPrivateMedian;
  return EstimatorKind::kMedian;
}

}  // namespace

InputFormat InferInputFormat(const std::string& path) {
  if (absl::EndsWith(path, ".jsonl") || absl::EndsWith(path, ".ndjson")) {
    return InputFormat::kJsonLines;
  }
  return InputFormat::kCsv;
}

absl::StatusOr<Sample> IngestStream(std::istream& in, InputFormat format,
                                    std::ostream& diagnostics) {
  std::size_t skipped = 0;
  absl::StatusOr<std::vector<double>> values =
      format == InputFormat::kCsv ? ReadCsv(in, skipped)
                                  : ReadJsonLines(in, skipped);
  if (!values.ok()) return values.status();
  if (values->empty()) return absl::InvalidArgumentError("empty input");
  diagnostics << absl::StrFormat("ingested %d values (%d blank lines skipped)\n",
                                 values->size(), skipped);
  return Sample::Create(*std::move(values));
}

absl::StatusOr<Sample> IngestFile(const std::string& path,
                                  std::optional<InputFormat> format,
                                  std::ostream& diagnostics) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  return IngestStream(in, format.value_or(InferInputFormat(path)),
                      diagnostics);
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Differentially private median and mean estimation via "
               "propose-test-release"};
  app.require_subcommand(1);

  CommonFlags common;
  DataFlags data;
  double r = kUnset;
  double l = kUnset;
  double sigma = kUnset;
  double rho = kUnset;
  std::size_t k = 0;
  std::string rule = "window";
  double eta_constant = kMomEtaDefaultConstant;
  std::uint64_t shuffle_seed = 0;
  bool assume_density = false;
  bool truncate = false;

  CLI::App* median = app.add_subcommand("median", "DP left median");
  AddCommon(median, common, true);
  AddData(median, data);
  median->add_option("--r", r, "radius of the density lower bound")
      ->required();
  median->add_option("--L", l, "density lower bound on [m - r, m + r]")
      ->required();
  median->add_option("--rule", rule, "breakdown rule")
      ->check(CLI::IsMember({"endpoint", "window"}));

  CLI::App* mean = app.add_subcommand("mean", "DP median of means");
  CLI::App* density = app.add_subcommand(
      "mean-density", "DP median of means, density-regime calibration");
  for (CLI::App* sub : {mean, density}) {
    AddCommon(sub, common, true);
    AddData(sub, data);
    sub->add_option("--sigma", sigma, "standard deviation")->required();
    sub->add_option("--rho", rho, "third absolute central moment, cube root")
        ->required();
    sub->add_option("--K", k, "number of blocks")->required();
    sub->add_option("--shuffle-seed", shuffle_seed,
                    "permute the data before blocking");
  }
  mean->add_option("--eta-constant", eta_constant,
                   "eta = constant * sigma * sqrt(K/n)");
  density->add_flag("--assume-density", assume_density,
                    "assert that the data distribution has a density");
  density->add_flag("--truncate", truncate,
                    "drop the last n mod K values so that K divides n");

  // simulate
  std::string dist = "normal";
  std::string estimator = "median";
  double dist_mu = 0.0;
  double dist_sigma = 1.0;
  double nu = 5.0;
  double loc = 0.0;
  double scale = 1.0;
  double alpha = 4.0;
  double x_m = 1.0;
  bool centered = false;
  std::size_t n = 0;
  std::size_t trials = 1000;
  unsigned threads = 0;
  bool report_only = false;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo coverage experiment");
  AddCommon(simulate, common, true);
  simulate->add_option("--dist", dist, "data distribution")
      ->check(CLI::IsMember({"normal", "student-t", "pareto", "lognormal"}));
  simulate->add_option("--estimator", estimator, "estimator under test")
      ->check(CLI::IsMember(
          {"median", "mom", "mom-density", "nonprivate-median"}));
  simulate->add_option("--mu", dist_mu, "normal/lognormal location");
  simulate->add_option("--sigma", dist_sigma, "normal/lognormal scale");
  simulate->add_option("--nu", nu, "student-t degrees of freedom");
  simulate->add_option("--loc", loc, "student-t location");
  simulate->add_option("--scale", scale, "student-t scale");
  simulate->add_option("--alpha", alpha, "pareto tail index");
  simulate->add_option("--xm", x_m, "pareto scale");
  simulate->add_flag("--centered", centered, "center the pareto at its mean");
  simulate->add_option("--n", n, "sample size")->required();
  simulate->add_option("--K", k, "number of blocks (mean estimators)");
  simulate->add_option("--trials", trials, "replications");
  simulate->add_option("--threads", threads, "worker threads, 0 = all");
  simulate->add_flag("--report-only", report_only,
                     "record violated preconditions instead of failing");

  // audit
  std::string preset;
  AuditConfig audit_config;
  CLI::App* audit =
      app.add_subcommand("audit", "heuristic neighboring-dataset audit");
  AddCommon(audit, common, false);
  audit->add_option("--preset", preset, "neighbor pair")
      ->required()
      ->check(CLI::IsMember(AuditPresetNames()));
  audit->add_option("--trials", audit_config.trials, "runs per dataset");
  audit->add_option("--bins", audit_config.bins, "equal-mass output bins");
  audit->add_option("--bootstrap", audit_config.bootstrap_rounds,
                    "bootstrap rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }
  for (CLI::App* sub : {median, mean, density, simulate, audit}) {
    if (sub->parsed() && sub->count("--seed") > 0) common.seed_given = true;
  }

  // Every numeric flag is checked before any data is read.
  absl::StatusOr<PrivacyBudget> budget =
      PrivacyBudget::Create(common.epsilon, common.delta);
  if (!budget.ok()) return Fail(budget.status(), kExitValidation, err);
  std::optional<Confidence> confidence;
  if (!audit->parsed()) {
    absl::StatusOr<Confidence> c = MakeConfidence(common);
    if (!c.ok()) return Fail(c.status(), kExitValidation, err);
    confidence = *c;
  }
  ResolveSeed(common);

  Outcome outcome;
  if (median->parsed()) {
    absl::StatusOr<MedianProfile> profile = MedianProfile::Create(r, l);
    if (!profile.ok()) return Fail(profile.status(), kExitValidation, err);
    absl::StatusOr<Sample> sample = Ingest(data, err);
    if (!sample.ok()) return Fail(sample.status(), kExitInputError, err);
    absl::StatusOr<double> eta =
        MedianEta(*profile, sample->size(), *budget, *confidence);
    if (!eta.ok()) return Fail(eta.status(), kExitValidation, err);
    absl::StatusOr<PtrConfig> config =
        PtrConfig::Create(*eta, PtrVariant::kGaussian, *budget, *confidence);
    if (!config.ok()) return Fail(config.status(), kExitValidation, err);
    EstimatorOptions options;
    options.rule =
        rule == "window" ? BreakdownRule::kWindow : BreakdownRule::kEndpoint;
    NoiseSource source(common.seed, 0);
    outcome = FinishEstimate(
        "median",
        DpMedian(*sample, *profile, *budget, *confidence, source, options),
        sample->size(), 0, common, *config, err);
  } else if (mean->parsed() || density->parsed()) {
    const bool is_density = density->parsed();
    absl::StatusOr<MomentProfile> profile =
        MomentProfile::Create(0.0, sigma, rho);
    if (!profile.ok()) return Fail(profile.status(), kExitValidation, err);
    if (absl::Status s = CheckBlockCount(k); !s.ok()) {
      return Fail(s, kExitValidation, err);
    }
    if (!is_density && !(eta_constant > 0 && std::isfinite(eta_constant))) {
      return Fail(absl::InvalidArgumentError("--eta-constant must be positive"),
                  kExitValidation, err);
    }
    absl::StatusOr<Sample> sample = Ingest(data, err);
    if (!sample.ok()) return Fail(sample.status(), kExitInputError, err);
    if (is_density && truncate && k <= sample->size() &&
        sample->size() % k != 0) {
      const std::size_t keep = sample->size() / k * k;
      err << absl::StrFormat("truncating %d values to %d (multiple of K=%d)\n",
                             sample->size(), keep, k);
      absl::StatusOr<Sample> cut =
          Sample::Create(sample->values().subspan(0, keep));
      if (!cut.ok()) return Fail(cut.status(), kExitInputError, err);
      sample = *std::move(cut);
    }
    const std::size_t size = sample->size();
    if (k > size) {
      return Fail(absl::FailedPreconditionError(absl::StrFormat(
                      "K=%d exceeds the sample size n=%d", k, size)),
                  kExitValidation, err);
    }
    EstimatorOptions options;
    options.mom_eta_constant = eta_constant;
    options.data_has_density = assume_density;
    CLI::App* chosen = is_density ? density : mean;
    if (chosen->count("--shuffle-seed") > 0) {
      options.shuffle_seed = shuffle_seed;
    }
    absl::StatusOr<double> eta =
        is_density
            ? MomDensityEta(*profile, size, k, *budget, *confidence)
            : MomEta(*profile, size, k, *budget, *confidence, eta_constant);
    if (!eta.ok()) return Fail(eta.status(), kExitValidation, err);
    absl::StatusOr<PtrConfig> config =
        PtrConfig::Create(*eta, PtrVariant::kGaussian, *budget, *confidence);
    if (!config.ok()) return Fail(config.status(), kExitValidation, err);
    NoiseSource source(common.seed, 0);
    outcome = FinishEstimate(
        is_density ? "mean-density" : "mean",
        is_density ? DpMomDensity(*sample, *profile, k, *budget, *confidence,
                                  source, options)
                   : DpMom(*sample, *profile, k, *budget, *confidence, source,
                           options),
        size, k, common, *config, err);
  } else if (simulate->parsed()) {
    absl::StatusOr<DistributionSpec> spec = MakeDistribution(
        dist, dist_mu, dist_sigma, nu, loc, scale, alpha, x_m, centered);
    if (!spec.ok()) return Fail(spec.status(), kExitValidation, err);
    CoverageConfig config;
    config.kind = ParseKind(estimator);
    config.n = n;
    config.block_count = k;
    config.trials = trials;
    config.seed = common.seed;
    config.threads = threads;
    if (report_only) config.options.policy = PreconditionPolicy::kReportOnly;
    if (config.kind == EstimatorKind::kMom ||
        config.kind == EstimatorKind::kMomDensity) {
      if (absl::Status s = CheckBlockCount(k); !s.ok()) {
        return Fail(s, kExitValidation, err);
      }
    }
    if (trials == 0) {
      return Fail(absl::InvalidArgumentError("--trials must be positive"),
                  kExitValidation, err);
    }
    absl::StatusOr<ExperimentReport> report =
        RunCoverage(*spec, config, *budget, *confidence);
    if (!report.ok()) return Fail(report.status(), kExitValidation, err);
    outcome.document = common.format == "csv" ? ExperimentReportCsv(*report)
                                              : ExperimentReportJson(*report);
  } else if (audit->parsed()) {
    absl::StatusOr<AuditPreset> chosen = MakeAuditPreset(preset, *budget);
    if (!chosen.ok()) return Fail(chosen.status(), kExitValidation, err);
    audit_config.seed = common.seed;
    absl::StatusOr<AuditReport> report =
        DpAudit(chosen->sampler, chosen->x, chosen->x_prime, audit_config);
    if (!report.ok()) return Fail(report.status(), kExitValidation, err);
    outcome.document =
        common.format == "csv"
            ? AuditReportCsv(*report)
            : AuditReportJson(preset, *report, chosen->proven_epsilon,
                              chosen->proven_delta);
  }

  if (outcome.document.empty()) return outcome.code;
  if (common.out.empty()) {
    out << outcome.document;
  } else {
    std::ofstream file(common.out, std::ios::binary);
    if (!file) {
      return Fail(absl::NotFoundError(absl::StrFormat(
                      "cannot write '%s'", common.out)),
                  kExitInputError, err);
    }
    file << outcome.document;
  }
  return outcome.code;
}

}  // namespace ptrdp
