// Acceptance gate: one PASS/FAIL line per criterion.
// Usage: acceptance <scratch-dir> [--expect-fail N]...
// Exit status is 0 only when the failing criteria are exactly the expected ones.
#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "derange/harness.hpp"

using namespace derange;
namespace fs = std::filesystem;

namespace {

std::set<int> failed_ids;

void report(int id, bool ok, const std::string& what, const std::string& detail = "") {
  if (!ok) failed_ids.insert(id);
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << what;
  if (!detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << std::endl;
}

std::string fail_summary(const std::vector<CheckResult>& rs) {
  std::size_t fails = 0;
  std::string first;
  for (const auto& r : rs)
    if (r.failed()) {
      if (fails++ < 3) first += (first.empty() ? "" : "; ") + r.check_id;
    }
  std::ostringstream os;
  os << rs.size() << " checks, " << fails << " failed";
  if (fails) os << ": " << first << (fails > 3 ? "; ..." : "");
  return os.str();
}

bool suites_clean(Harness& h, std::initializer_list<const char*> ids, std::string& detail) {
  bool ok = true;
  for (const char* id : ids) {
    const auto rs = h.run_suite(id);
    if (rs.empty() || any_failed(rs)) ok = false;
    detail += (detail.empty() ? "" : " | ") + std::string(id) + ": " + fail_summary(rs);
  }
  return ok;
}

void suite_criterion(Harness& h, int id, const std::string& what, std::initializer_list<const char*> ids) {
  std::string detail;
  bool ok = false;
  try {
    ok = suites_clean(h, ids, detail);
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(id, ok, what, detail);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_verify(const fs::path& out, int jobs) {
  fs::remove_all(out);
  const std::string cmd = std::string("\"") + DERANGE_CLI + "\" verify all --jobs " + std::to_string(jobs) +
                          " --corpus \"" + DERANGE_CORPUS_DIR + "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

void sharp_criterion() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t q : {16, 64, 81, 256}) {
    const FamilyMember m = sharp_gammal1(q);
    const AffineStats s = affine_stats(*m.group);
    const RationalEnclosure g = bound_g(q), h = bound_h(q);
    const bool hit = g.lo == g.hi && h.lo == h.hi && s.delta_affine == g.lo && s.alpha == h.lo;
    ok = ok && hit;
    detail += (detail.empty() ? "" : ", ") + std::string("q=") + std::to_string(q) + " delta " +
              s.delta_affine.str() + " alpha " + s.alpha.str() + (hit ? "" : " MISMATCH");
  }
  report(1, ok, "GL_1(q) x| <sigma> meets g and h with equality", detail);
}

void sl2_5_criterion() {
  const FamilyMember m = sl2_5_z(59, true);
  const AffineStats s = affine_stats(*m.group);
  const RationalEnclosure f = bound_f(59 * 59);
  const bool ok = f.lo == f.hi && s.delta_affine == f.lo && s.semiregular_nonzero && s.order == 60 * 58;
  report(2, ok, "Z.SL_2(5) < GL_2(59) meets f(3481) and is semiregular",
         "order " + std::to_string(s.order) + ", delta " + s.delta_affine.str() + ", f " + f.lo.str());
}

void determinism_criterion(const fs::path& scratch) {
  const fs::path a = scratch / "jobs1", b = scratch / "jobs8";
  const int ca = run_verify(a, 1), cb = run_verify(b, 8);
  bool ok = ca == cb && (ca == 0 || ca == 1) && fs::is_directory(a) && fs::is_directory(b);
  std::size_t files = 0;
  std::string diff;
  if (ok) {
    std::vector<fs::path> names;
    for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename());
    std::size_t in_b = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++in_b;
    std::sort(names.begin(), names.end());
    files = names.size();
    if (in_b != files || files == 0) ok = false;
    for (const auto& n : names)
      if (!fs::exists(b / n) || slurp(a / n) != slurp(b / n)) {
        ok = false;
        diff = n.string();
        break;
      }
  }
  report(12, ok, "verify all is byte-identical for --jobs 1 and --jobs 8",
         "exit " + std::to_string(ca) + "/" + std::to_string(cb) + ", " + std::to_string(files) + " files" +
             (diff.empty() ? "" : ", differs: " + diff));
}

}  // namespace

int main(int argc, char** argv) {
  fs::path scratch = fs::temp_directory_path() / "derange_acceptance";
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc)
      expected.insert(std::atoi(argv[++i]));
    else
      scratch = a;
  }
  fs::create_directories(scratch);
  Harness h({kDefaultOrderCap, DERANGE_CORPUS_DIR, false});

  sharp_criterion();
  sl2_5_criterion();
  suite_criterion(h, 3, "eta = 1 - delta identity", {"eta-identity"});
  suite_criterion(h, 4, "coset fixer formula and valuation criterion", {"coset-formula", "valuation-criterion"});
  suite_criterion(h, 5, "valuation lemmas", {"valuation-lemmas"});
  suite_criterion(h, 6, "trichotomy statements", {"trichotomy-cc", "trichotomy-gw"});
  suite_criterion(h, 7, "derangement subgroup index", {"subgroup-index"});
  suite_criterion(h, 8, "extraspecial normalizers", {"extraspecial"});
  suite_criterion(h, 9, "deleted permutation modules", {"alt-deleted"});
  suite_criterion(h, 10, "natural modules of classical groups", {"natural-modules"});
  suite_criterion(h, 11, "simple group estimate", {"simple-estimate"});
  determinism_criterion(scratch);

  if (failed_ids.empty()) {
    std::cout << "all criteria passed" << std::endl;
  } else {
    std::cout << failed_ids.size() << " criteria failed:";
    for (int id : failed_ids) std::cout << ' ' << id;
    std::cout << std::endl;
  }
  if (!expected.empty()) {
    std::cout << (failed_ids == expected ? "failures match the expected set" : "failures differ from the expected set")
              << std::endl;
  }
  return failed_ids == expected ? 0 : 1;
}
