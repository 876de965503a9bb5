// derange: command line front end to the verification harness.
//
//   derange analyze <spec>
//   derange verify <suite|all>
//   derange scan-gammal1 --q <q>
//   derange family <id> <params...>
//
// Exit status: 0 all pass, 1 some check failed, 2 usage or parse error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "derange/harness.hpp"

#ifndef DERANGE_DEFAULT_CORPUS
#define DERANGE_DEFAULT_CORPUS "corpus"
#endif

namespace {

using namespace derange;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::size_t cap = kDefaultOrderCap;
  std::string out;
  std::string format = "json";
  std::string corpus = DERANGE_DEFAULT_CORPUS;
  bool quick = false;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

int run_verify(const Options& opt, const std::string& which) {
  std::vector<std::string> suites;
  if (which == "all") {
    suites = suite_ids();
  } else if (std::find(suite_ids().begin(), suite_ids().end(), which) != suite_ids().end()) {
    suites = {which};
  } else {
    std::cerr << "unknown suite '" << which << "'; expected one of:";
    for (const auto& s : suite_ids()) std::cerr << " " << s;
    std::cerr << " all\n";
    return kExitUsage;
  }
  Harness h({opt.cap, opt.corpus, !opt.quick});
  if (!opt.out.empty()) std::filesystem::create_directories(opt.out);
  bool failed = false;
  nlohmann::json combined;
  combined["schema_version"] = kReportSchemaVersion;
  combined["suites"] = nlohmann::json::array();
  std::string csv = csv_header();
  for (const auto& id : suites) {
    const auto results = h.run_suite(id);
    failed = failed || any_failed(results);
    const auto counts = count_statuses(results);
    std::cerr << id << ": " << counts.pass << " pass, " << counts.fail << " fail, " << counts.violation
              << " violation-at-small-n, " << counts.skipped << " skipped, " << counts.statistical << " statistical\n";
    if (opt.format == "csv") {
      csv += csv_rows(id, results);
    } else if (!opt.out.empty()) {
      write_file(std::filesystem::path(opt.out) / (id + ".json"), suite_report(id, results).dump(2) + "\n");
    } else {
      combined["suites"].push_back(suite_report(id, results));
    }
  }
  if (opt.format == "csv") {
    if (opt.out.empty())
      std::cout << csv;
    else
      write_file(std::filesystem::path(opt.out) / "report.csv", csv);
  } else if (opt.out.empty()) {
    std::cout << combined.dump(2) << "\n";
  }
  const auto& skipped = h.corpus().skipped;
  for (const auto& s : skipped) std::cerr << "corpus member skipped: " << s.name << ": " << s.reason << "\n";
  return failed ? kExitFail : 0;
}

void emit(const Options& opt, const std::string& name, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(opt.out);
  write_file(std::filesystem::path(opt.out) / name, text);
}

int run_analyze(const Options& opt, const std::string& path) {
  GroupSpec spec;
  try {
    spec = read_group_spec(path);
  } catch (const ParseError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const nlohmann::json j = analyze(spec, std::filesystem::path(path).stem().string(), opt.cap);
  emit(opt, "analyze.json", j.dump(2) + "\n");
  return 0;
}

int run_scan(const Options& opt, std::uint64_t q) {
  auto [report, checks] = scan_gammal1(q);
  if (opt.format == "csv")
    emit(opt, "scan-gammal1-" + std::to_string(q) + ".csv", csv_header() + csv_rows("scan-gammal1", checks));
  else
    emit(opt, "scan-gammal1-" + std::to_string(q) + ".json", report.dump(2) + "\n");
  return any_failed(checks) ? kExitFail : 0;
}

int run_family(const Options& opt, const std::string& id, const std::vector<std::int64_t>& params) {
  FamilyMember m = make_family(id, params);
  const AffineStats s = affine_stats(*m.group, true);
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["family"] = m.family;
  j["params"] = m.params;
  j["name"] = m.name;
  j["field"] = {{"p", m.group->field().p()}, {"f", m.group->field().f()}};
  j["dim"] = m.group->dim();
  j["order"] = s.order;
  j["alpha"] = s.alpha.str();
  j["eta"] = s.eta.str();
  j["delta"] = s.delta_affine.str();
  j["A_index"] = s.a_index;
  j["semiregular_on_nonzero_vectors"] = s.semiregular_nonzero;
  bool ok = true;
  if (m.alpha) {
    j["predicted_alpha"] = m.alpha->str();
    ok = ok && *m.alpha == s.alpha;
  }
  if (m.delta) {
    j["predicted_delta"] = m.delta->str();
    ok = ok && *m.delta == s.delta_affine;
  }
  j["predictions_match"] = ok;
  j["spec"] = serialize(to_spec(*m.group, m.name));
  emit(opt, "family.json", j.dump(2) + "\n");
  return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derangement and eigenvalue-1 proportions of finite groups"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--jobs,-j", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cap", opt.cap, "largest group order to enumerate")->check(CLI::PositiveNumber);
  app.add_option("--out,-o", opt.out, "directory for report files (default: standard output)");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--corpus", opt.corpus, "directory of *.spec files added to the corpus");
  app.add_flag("--quick", opt.quick, "skip Sp_6(2), the A_10 census and the sampled orthogonal groups");

  std::string spec_path, suite;
  std::uint64_t q = 0;
  std::string family_id;
  std::vector<std::int64_t> params;

  auto* analyze_cmd = app.add_subcommand("analyze", "statistics and thresholds for one group spec");
  analyze_cmd->add_option("spec", spec_path, "group spec file")->required();
  auto* verify_cmd = app.add_subcommand("verify", "run a suite over the corpus");
  verify_cmd->add_option("suite", suite, "suite id or 'all'")->required();
  auto* scan_cmd = app.add_subcommand("scan-gammal1", "every subgroup of GammaL_1(q)");
  scan_cmd->add_option("--q", q, "field size")->required();
  auto* family_cmd = app.add_subcommand("family", "build a named family member and compare with its prediction");
  family_cmd->add_option("id", family_id, "family id")->required();
  family_cmd->add_option("params", params, "integer parameters");

  for (auto* sub : {analyze_cmd, verify_cmd, scan_cmd, family_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  set_default_jobs(opt.jobs);

  try {
    if (*analyze_cmd) return run_analyze(opt, spec_path);
    if (*verify_cmd) return run_verify(opt, suite);
    if (*scan_cmd) return run_scan(opt, q);
    if (*family_cmd) return run_family(opt, family_id, params);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
