// Copyright 2026 The ctrace Authors
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


#include "commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ctrace/abm.h"
#include "ctrace/abm_config.h"
#include "ctrace/cluster_discovery.h"
#include "ctrace/cluster_mc.h"
#include "ctrace/contact_graph.h"
#include "ctrace/contact_log.h"
#include "ctrace/epi_analytics.h"
#include "ctrace/format.h"
#include "ctrace/kernels.h"

#ifndef CTRACE_VERSION
#define CTRACE_VERSION "0.0.0"
#endif

namespace ctrace::cli {
namespace {

using nlohmann::json;

absl::Status Invalid(const std::string& msg) {
  return absl::InvalidArgumentError(msg);
}

absl::StatusOr<double> GetReal(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_number()) {
    return Invalid(absl::StrFormat("'%s' must be a number", key));
  }
  return p[key].get<double>();
}

absl::StatusOr<int64_t> GetInt(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_number_integer()) {
    return Invalid(absl::StrFormat("'%s' must be an integer", key));
  }
  return p[key].get<int64_t>();
}

absl::StatusOr<std::string> GetString(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_string()) {
    return Invalid(absl::StrFormat("'%s' must be a string", key));
  }
  return p[key].get<std::string>();
}

absl::StatusOr<std::vector<double>> GetReals(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_array() || p[key].empty()) {
    return Invalid(absl::StrFormat("'%s' must be a nonempty list", key));
  }
  std::vector<double> out;
  for (const json& v : p[key]) {
    if (!v.is_number()) {
      return Invalid(absl::StrFormat("'%s' must hold numbers", key));
    }
    out.push_back(v.get<double>());
  }
  return out;
}

absl::StatusOr<FileDigest> DigestInput(const std::string& path,
                                       std::string* contents) {
  absl::StatusOr<std::string> bytes = ReadFile(path);
  if (!bytes.ok()) return Invalid(std::string(bytes.status().message()));
  FileDigest d{path, Sha256Hex(*bytes), static_cast<int64_t>(bytes->size())};
  *contents = *std::move(bytes);
  return d;
}

// "a:b:step" with a <= b and step > 0; the end point is kept when the grid
// reaches it.
absl::StatusOr<std::vector<double>> ParseRange(const std::string& spec) {
  double a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !(in >> std::ws).eof()) {
    return Invalid(absl::StrFormat("range '%s' is not a:b:step", spec));
  }
  if (!(step > 0.0) || !(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    return Invalid(absl::StrFormat("range '%s' needs a <= b and step > 0", spec));
  }
  const int64_t n = static_cast<int64_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (n > 1000000) return Invalid("range has more than 10^6 points");
  std::vector<double> grid;
  for (int64_t i = 0; i < n; ++i) grid.push_back(a + static_cast<double>(i) * step);
  return grid;
}

absl::StatusOr<CommandResult> RunExtinction(const json& p) {
  absl::StatusOr<std::vector<double>> r0 = GetReals(p, "r0");
  if (!r0.ok()) return r0.status();
  absl::StatusOr<std::vector<ExtinctionRow>> rows = ExtinctionTable(*r0);
  if (!rows.ok()) return rows.status();
  CommandResult out;
  out.outputs.push_back(
      {"extinction.csv", ExtinctionCsv(*rows)});
  return out;
}

absl::StatusOr<CommandResult> RunBounds(const json& p) {
  absl::StatusOr<std::vector<double>> r0 = GetReals(p, "r0");
  if (!r0.ok()) return r0.status();
  absl::StatusOr<std::vector<double>> nu = GetReals(p, "nu");
  if (!nu.ok()) return nu.status();
  absl::StatusOr<std::vector<BoundsRow>> rows = BoundsTable(*r0, *nu);
  if (!rows.ok()) return rows.status();
  CommandResult out;
  out.outputs.push_back({"bounds.csv", BoundsCsv(*rows)});
  return out;
}

absl::StatusOr<CommandResult> RunSweep(const json& p) {
  absl::StatusOr<std::vector<double>> r0 = GetReals(p, "r0");
  if (!r0.ok()) return r0.status();
  absl::StatusOr<std::string> range = GetString(p, "nu_range");
  if (!range.ok()) return range.status();
  absl::StatusOr<std::vector<double>> grid = ParseRange(*range);
  if (!grid.ok()) return grid.status();
  absl::StatusOr<std::vector<SweepRow>> rows = SweepUpperBound(*r0, *grid);
  if (!rows.ok()) return rows.status();
  CommandResult out;
  out.outputs.push_back({"sweep.csv", SweepCsv(*rows)});
  return out;
}

absl::StatusOr<CommandResult> RunMc(const json& p) {
  absl::StatusOr<double> r0 = GetReal(p, "r0");
  absl::StatusOr<double> nu = GetReal(p, "nu");
  absl::StatusOr<std::vector<double>> grid = GetReals(p, "p_grid");
  absl::StatusOr<int64_t> trials = GetInt(p, "trials");
  absl::StatusOr<int64_t> cap = GetInt(p, "cap");
  absl::StatusOr<int64_t> seed = GetInt(p, "seed");
  absl::StatusOr<std::string> rule = GetString(p, "rule");
  absl::StatusOr<int64_t> workers = GetInt(p, "workers");
  for (const absl::Status& s :
       {r0.status(), nu.status(), grid.status(), trials.status(), cap.status(),
        seed.status(), rule.status(), workers.status()}) {
    if (!s.ok()) return s;
  }
  if (*seed < 0) return Invalid("'seed' must be nonnegative");
  if (*workers < 0) return Invalid("'workers' must be nonnegative");
  absl::StatusOr<DiseaseParams> params = DiseaseParams::Create(*r0, *nu);
  if (!params.ok()) return params.status();
  EstimateOptions opts;
  opts.n_trials = *trials;
  opts.cap = *cap;
  opts.master_seed = static_cast<uint64_t>(*seed);
  opts.workers = static_cast<int>(*workers);
  if (*rule == "detection") {
    opts.finite_rule = FiniteClusterRule::kConditionOnDetection;
  } else if (*rule == "literal") {
    opts.finite_rule = FiniteClusterRule::kLiteral;
  } else {
    return Invalid(absl::StrFormat("unknown rule '%s'", *rule));
  }
  const OffspringDistribution dist = OffspringDistribution::Poisson(*r0);
  absl::StatusOr<PStarEstimate> est = EstimatePStar(*params, dist, *grid, opts);
  if (!est.ok()) return est.status();
  absl::StatusOr<ExtinctionResult> ext = SolveExtinction(dist);
  if (!ext.ok()) return ext.status();

  std::vector<double> low(grid->size()), high(grid->size());
  kernels::TracedBracketBatch(*nu, ext->pi0, *grid, low, high);
  std::ostringstream csv;
  csv << "p,p_hat,ci_low,ci_high,re_hat,bracket_low,bracket_high,traced,trials\n";
  for (size_t i = 0; i < est->curve.size(); ++i) {
    const CurvePoint& c = est->curve[i];
    csv << FormatFixed5(c.p) << ',' << FormatFixed5(c.estimate.p_hat) << ','
        << FormatFixed5(c.estimate.ci_low) << ','
        << FormatFixed5(c.estimate.ci_high) << ','
        << FormatFixed5(c.estimate.r_e_hat) << ',' << FormatFixed5(low[i])
        << ',' << FormatFixed5(high[i]) << ',' << c.estimate.traced << ','
        << c.estimate.n_trials << '\n';
  }
  json summary = {{"r0", FormatFixed5(*r0)},
                  {"nu", FormatFixed5(*nu)},
                  {"rule", *rule},
                  {"p_star", est->p_star_hat ? json(FormatFixed5(*est->p_star_hat))
                                             : json(nullptr)}};
  CommandResult out;
  out.master_seed = opts.master_seed;
  out.outputs.push_back({"mc.csv", csv.str()});
  out.outputs.push_back({"mc_summary.json", summary.dump(2) + "\n"});
  return out;
}

// Parses "<n>", "<n>s", "<n>h" or "<n>d" into seconds.
absl::StatusOr<int64_t> ParseTime(const std::string& text) {
  std::istringstream in(text);
  int64_t value = 0;
  std::string unit;
  if (!(in >> value) || value < 0) {
    return Invalid(absl::StrFormat("bad time '%s'", text));
  }
  in >> unit;
  if (unit.empty() || unit == "s") return value;
  if (unit == "h") return value * 3600;
  if (unit == "d") return value * kSecondsPerDay;
  return Invalid(absl::StrFormat("bad time unit in '%s'", text));
}

absl::StatusOr<CommandResult> RunTrace(const json& p) {
  absl::StatusOr<std::string> log = GetString(p, "log");
  absl::StatusOr<std::string> seed_case = GetString(p, "seed_case");
  absl::StatusOr<std::string> now_text = GetString(p, "now");
  absl::StatusOr<int64_t> lookback_days = GetInt(p, "lookback_days");
  for (const absl::Status& s : {log.status(), seed_case.status(),
                                now_text.status(), lookback_days.status()}) {
    if (!s.ok()) return s;
  }
  absl::StatusOr<int64_t> now = ParseTime(*now_text);
  if (!now.ok()) return now.status();
  if (*lookback_days <= 0) return Invalid("'lookback_days' must be positive");

  CommandResult out;
  std::string contents;
  absl::StatusOr<FileDigest> digest = DigestInput(*log, &contents);
  if (!digest.ok()) return digest.status();
  out.inputs.push_back(*digest);
  std::istringstream in(contents);
  absl::StatusOr<std::vector<LogEvent>> events = ReadContactLog(in);
  if (!events.ok()) return events.status();

  GraphOptions gopts;
  gopts.retention = std::max(gopts.retention, *lookback_days * kSecondsPerDay);
  ContactGraph graph(gopts);
  std::map<uint64_t, bool> tests;
  std::map<std::string, uint64_t> by_name;
  std::map<uint64_t, std::string> names;
  for (const LogEvent& ev : *events) {
    if (const auto* c = std::get_if<ContactEvent>(&ev)) {
      if (absl::Status s = graph.Ingest(*c); !s.ok()) return s;
    } else if (const auto* b = std::get_if<BeaconEvent>(&ev)) {
      if (!graph.HasBeacon(b->beacon)) graph.RegisterBeacon(b->beacon, "");
      if (absl::Status s = graph.Ingest(*b); !s.ok()) return s;
    } else if (const auto* d = std::get_if<DeviceRecord>(&ev)) {
      if (by_name.contains(d->name) && by_name[d->name] != d->device.value) {
        return Invalid(absl::StrFormat("device name '%s' used twice", d->name));
      }
      graph.RegisterDevice(d->device, d->name);
      by_name[d->name] = d->device.value;
      names[d->device.value] = d->name;
    } else {
      const TestRecord& t = std::get<TestRecord>(ev);
      tests[t.device.value] = t.positive;
    }
  }

  uint64_t seed_id = 0;
  if (auto it = by_name.find(*seed_case); it != by_name.end()) {
    seed_id = it->second;
  } else {
    std::istringstream id(*seed_case);
    if (!(id >> seed_id) || !(id >> std::ws).eof()) {
      return Invalid(absl::StrFormat("unknown seed case '%s'", *seed_case));
    }
  }
  auto positive = [&](uint64_t d) {
    auto it = tests.find(d);
    return it != tests.end() && it->second;
  };
  if (!positive(seed_id)) {
    return Invalid(absl::StrFormat("seed case '%s' has no positive test",
                                   *seed_case));
  }
  TestOracle oracle = [&](DeviceId d, int64_t) -> absl::StatusOr<bool> {
    return positive(d.value);
  };
  DiscoveryOptions dopts;
  dopts.lookback = *lookback_days * kSecondsPerDay;
  absl::StatusOr<ClusterReport> report = DiscoverCluster(
      CaseRecord::Confirmed(DeviceId{seed_id}, *now), graph, oracle, *now, dopts);
  if (!report.ok()) return report.status();

  json j = ReportToJson(*report);
  j["seed_case"] = seed_id;
  j["now"] = *now;
  json confirmed_names = json::array();
  for (DeviceId d : report->confirmed) {
    auto it = names.find(d.value);
    confirmed_names.push_back(it != names.end() ? json(it->second)
                                                : json(std::to_string(d.value)));
  }
  j["confirmed_names"] = confirmed_names;
  out.outputs.push_back({"trace.json", j.dump(2) + "\n"});
  return out;
}

absl::StatusOr<CommandResult> RunAbm(const json& p) {
  absl::StatusOr<std::string> path = GetString(p, "config");
  absl::StatusOr<int64_t> workers = GetInt(p, "workers");
  for (const absl::Status& s : {path.status(), workers.status()}) {
    if (!s.ok()) return s;
  }
  if (*workers < 0) return Invalid("'workers' must be nonnegative");
  CommandResult out;
  std::string contents;
  absl::StatusOr<FileDigest> digest = DigestInput(*path, &contents);
  if (!digest.ok()) return digest.status();
  out.inputs.push_back(*digest);
  absl::StatusOr<abm::ScenarioConfig> config = abm::ParseScenarioConfig(contents);
  if (!config.ok()) return config.status();
  absl::StatusOr<std::vector<abm::EpidemicTrace>> traces =
      abm::RunReplicates(*config, static_cast<int>(*workers));
  if (!traces.ok()) return traces.status();
  const abm::ReproductionEstimate re = abm::MeasureRe(*traces);

  json clusters = json::array();
  int64_t post_quarantine = 0, undiscovered = 0, confirmed_free = 0;
  int64_t closure_mismatches = 0, missed = 0;
  bool conservation = true;
  for (const abm::EpidemicTrace& t : *traces) {
    clusters.push_back(abm::ClusterRecordsJson(t));
    post_quarantine += t.post_quarantine_transmissions;
    undiscovered += t.undiscovered_active_in_discovered_trees;
    confirmed_free += t.confirmed_free_at_horizon;
    conservation = conservation && t.conservation_held;
    for (const abm::ClusterRecord& c : t.clusters) {
      closure_mismatches += c.closure_mismatches;
      missed += c.missed_chain_members;
    }
  }
  json summary = {
      {"config", abm::ConfigToJson(*config)},
      {"replicates", traces->size()},
      {"realized_re",
       {{"estimate", FormatFixed5(re.estimate)},
        {"ci_low", FormatFixed5(re.ci_low)},
        {"ci_high", FormatFixed5(re.ci_high)},
        {"completed_infectors", re.completed_infectors},
        {"max_generation", re.max_generation},
        {"low_confidence", re.low_confidence}}},
      {"conservation_held", conservation},
      {"post_quarantine_transmissions", post_quarantine},
      {"undiscovered_active_in_discovered_trees", undiscovered},
      {"confirmed_free_at_horizon", confirmed_free},
      {"audit", config->audit},
      {"closure_mismatches", closure_mismatches},
      {"missed_chain_members", missed}};
  out.master_seed = config->master_seed;
  out.outputs.push_back({"abm_summary.json", summary.dump(2) + "\n"});
  out.outputs.push_back({"abm_clusters.json", clusters.dump(2) + "\n"});
  for (size_t i = 0; i < traces->size(); ++i) {
    out.outputs.push_back(
        {absl::StrFormat("abm_trace_%d.csv", i), abm::TraceCsv((*traces)[i])});
  }
  return out;
}

int ExitCode(const absl::Status& s) {
  switch (s.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kNotFound:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

const char* ToolVersion() { return CTRACE_VERSION; }

absl::StatusOr<CommandResult> Execute(const std::string& command,
                                      const json& params) {
  if (!params.is_object()) return Invalid("params must be an object");
  if (command == "extinction") return RunExtinction(params);
  if (command == "bounds") return RunBounds(params);
  if (command == "sweep") return RunSweep(params);
  if (command == "mc") return RunMc(params);
  if (command == "trace") return RunTrace(params);
  if (command == "abm") return RunAbm(params);
  return Invalid(absl::StrFormat("unknown command '%s'", command));
}

absl::StatusOr<Manifest> ExecuteAndWrite(const std::string& command,
                                         const json& params,
                                         const std::string& out_dir,
                                         CommandResult* result) {
  absl::StatusOr<CommandResult> r = Execute(command, params);
  if (!r.ok()) return r.status();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrFormat("cannot create %s: %s", out_dir, ec.message()));
  }
  Manifest m;
  m.command = command;
  m.params = params;
  m.master_seed = r->master_seed;
  m.version = ToolVersion();
  m.inputs = r->inputs;
  for (const OutputFile& f : r->outputs) {
    const std::string path = (std::filesystem::path(out_dir) / f.name).string();
    if (absl::Status s = WriteFile(path, f.bytes); !s.ok()) return s;
    m.outputs.push_back(
        {f.name, Sha256Hex(f.bytes), static_cast<int64_t>(f.bytes.size())});
  }
  const std::string manifest =
      (std::filesystem::path(out_dir) / kManifestFile).string();
  if (absl::Status s = WriteFile(manifest, ManifestToJson(m).dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  if (result != nullptr) *result = *std::move(r);
  return m;
}

absl::StatusOr<ReplayReport> Replay(const std::string& manifest_path,
                                    const std::string& out_dir) {
  absl::StatusOr<std::string> text = ReadFile(manifest_path);
  if (!text.ok()) return text.status();
  json j = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return Invalid("manifest is not valid JSON");
  absl::StatusOr<Manifest> original = ManifestFromJson(j);
  if (!original.ok()) return original.status();
  if (original->version != ToolVersion()) {
    return absl::FailedPreconditionError(
        absl::StrFormat("manifest written by version %s, this is %s",
                        original->version, ToolVersion()));
  }
  for (const FileDigest& in : original->inputs) {
    absl::StatusOr<std::string> bytes = ReadFile(in.name);
    if (!bytes.ok()) return bytes.status();
    if (Sha256Hex(*bytes) != in.sha256) {
      return absl::FailedPreconditionError(
          absl::StrFormat("input %s changed since the manifest was written",
                          in.name));
    }
  }
  ReplayReport report;
  report.original = *original;
  absl::StatusOr<Manifest> replayed =
      ExecuteAndWrite(original->command, original->params, out_dir);
  if (!replayed.ok()) return replayed.status();
  report.replayed = *std::move(replayed);

  std::map<std::string, std::string> fresh;
  for (const FileDigest& f : report.replayed.outputs) fresh[f.name] = f.sha256;
  for (const FileDigest& f : report.original.outputs) {
    auto it = fresh.find(f.name);
    if (it == fresh.end()) {
      report.mismatches.push_back(f.name + ": not produced");
    } else if (it->second != f.sha256) {
      report.mismatches.push_back(f.name + ": digest differs");
    }
    fresh.erase(f.name);
  }
  for (const auto& [name, digest] : fresh) {
    report.mismatches.push_back(name + ": not in manifest");
  }
  return report;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"ctrace: contact-tracing analytics, Monte Carlo and simulation"};
  app.set_version_flag("--version", std::string("ctrace ") + ToolVersion());
  app.require_subcommand(1);

  std::string out_dir = ".";
  bool quiet = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", out_dir, "Output directory")
        ->capture_default_str();
    sub->add_flag("-q,--quiet", quiet, "Do not echo the primary output");
  };

  std::vector<double> r0_list, nu_list, p_grid;
  std::string nu_range, log_path, seed_case, now = "0", config_path,
                                                 manifest_path, rule = "detection";
  double r0 = 3.0, nu = 0.1;
  int64_t trials = 100000, cap = kDefaultClusterCap, lookback_days = 14;
  uint64_t seed = 1;
  int workers = 0;

  CLI::App* ext = app.add_subcommand("extinction", "pi0, pi1 and 1 - eps per r0");
  ext->add_option("--r0", r0_list, "Comma-separated r0 values")
      ->delimiter(',')
      ->required();
  common(ext);

  CLI::App* bounds = app.add_subcommand("bounds", "p_lower and p_upper per (nu, r0)");
  bounds->add_option("--r0", r0_list)->delimiter(',')->required();
  bounds->add_option("--nu", nu_list)->delimiter(',')->required();
  common(bounds);

  CLI::App* sweep = app.add_subcommand("sweep", "p_upper over a nu grid");
  sweep->add_option("--r0", r0_list)->delimiter(',')->required();
  sweep->add_option("--nu-range", nu_range, "a:b:step")->required();
  common(sweep);

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo P(X=0) over an adoption grid");
  mc->add_option("--r0", r0, "Basic reproduction ratio")->capture_default_str();
  mc->add_option("--nu", nu, "Severity probability")->capture_default_str();
  mc->add_option("--p-grid", p_grid, "Increasing adoption rates in (0, 1)")
      ->delimiter(',')
      ->required();
  mc->add_option("--trials", trials)->capture_default_str();
  mc->add_option("--cap", cap, "Cluster size cap")->capture_default_str();
  mc->add_option("--seed", seed, "Master seed")->capture_default_str();
  mc->add_option("--rule", rule, "Finite cluster rule: detection or literal")
      ->capture_default_str();
  mc->add_option("--workers", workers, "Threads; 0 = all cores")
      ->capture_default_str();
  common(mc);

  CLI::App* trace = app.add_subcommand("trace", "Discover a cluster from a contact log");
  trace->add_option("--log", log_path, "JSONL contact log")->required();
  trace->add_option("--seed-case", seed_case, "Device id or name")->required();
  trace->add_option("--now", now, "Seconds, or <n>h / <n>d")->required();
  trace->add_option("--lookback-days", lookback_days)->capture_default_str();
  common(trace);

  CLI::App* abm = app.add_subcommand("abm", "Agent-based scenario run");
  abm->add_option("--config", config_path, "YAML scenario file")->required();
  abm->add_option("--workers", workers, "Threads; 0 = all cores")
      ->capture_default_str();
  common(abm);

  CLI::App* replay = app.add_subcommand("replay", "Rerun a manifest and compare bytes");
  replay->add_option("--manifest", manifest_path)->required();
  replay->add_option("-o,--out", out_dir, "Directory for the rerun outputs")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  auto absolute = [](const std::string& path) {
    return std::filesystem::absolute(path).lexically_normal().string();
  };

  if (replay->parsed()) {
    absl::StatusOr<ReplayReport> r = Replay(manifest_path, out_dir);
    if (!r.ok()) {
      err << "error: " << r.status().message() << "\n";
      return ExitCode(r.status());
    }
    for (const std::string& m : r->mismatches) err << "mismatch: " << m << "\n";
    out << (r->mismatches.empty() ? "identical" : "DIFFERENT") << ": "
        << r->original.outputs.size() << " outputs of '" << r->original.command
        << "'\n";
    return r->mismatches.empty() ? 0 : 1;
  }

  std::string command;
  json params;
  if (ext->parsed()) {
    command = "extinction";
    params = {{"r0", r0_list}};
  } else if (bounds->parsed()) {
    command = "bounds";
    params = {{"r0", r0_list}, {"nu", nu_list}};
  } else if (sweep->parsed()) {
    command = "sweep";
    params = {{"r0", r0_list}, {"nu_range", nu_range}};
  } else if (mc->parsed()) {
    command = "mc";
    params = {{"r0", r0},       {"nu", nu},     {"p_grid", p_grid},
              {"trials", trials}, {"cap", cap}, {"seed", seed},
              {"rule", rule},   {"workers", workers}};
  } else if (trace->parsed()) {
    command = "trace";
    params = {{"log", absolute(log_path)},
              {"seed_case", seed_case},
              {"now", now},
              {"lookback_days", lookback_days}};
  } else {
    command = "abm";
    params = {{"config", absolute(config_path)}, {"workers", workers}};
  }

  CommandResult result;
  absl::StatusOr<Manifest> m = ExecuteAndWrite(command, params, out_dir, &result);
  if (!m.ok()) {
    err << "error: " << m.status().message() << "\n";
    return ExitCode(m.status());
  }
  if (!quiet && !result.outputs.empty()) out << result.outputs.front().bytes;
  return 0;
}

}  // namespace ctrace::cli
