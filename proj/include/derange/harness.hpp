#pragma once

// Verification driver: the default corpus, the named suites, reports and the
// per-group analysis used by the command line tool.
//
// Suites fan out over corpus members with parallel_for and collect results into
// per-member slots, so the flattened output depends only on corpus order.

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "derange/check_result.hpp"
#include "derange/errors.hpp"
#include "derange/families.hpp"
#include "derange/gammal1.hpp"
#include "derange/matgroup.hpp"
#include "derange/numtheory.hpp"
#include "derange/parallel.hpp"
#include "derange/perm.hpp"
#include "derange/spec_io.hpp"
#include "derange/split_group.hpp"

namespace derange {

inline constexpr int kReportSchemaVersion = 1;
/// |V| |G| up to which the affine group is scanned as a permutation group.
inline constexpr std::uint64_t kAffineImageCeiling = 1'000'000;
/// |V| |G| up to which the affine group is fully enumerated (block systems).
inline constexpr std::uint64_t kBlockImageCeiling = 20'000;
/// |V|^2 |G| up to which D(V x| G) is grown by brute force.
inline constexpr std::uint64_t kDerangementSubgroupBudget = 1ull << 25;

struct CorpusMember {
  std::string name;
  std::string provenance;
  std::shared_ptr<MatGroup> mat;    // matrix members (enumerated)
  std::shared_ptr<PermGroup> perm;  // permutation members (enumerated)
  std::optional<FamilyMember> family;
  std::optional<GammaL1Group> gammal1;
};

struct SkippedMember {
  std::string name;
  std::string reason;
};

struct Corpus {
  std::vector<CorpusMember> members;
  std::vector<SkippedMember> skipped;
  std::map<std::uint64_t, std::vector<GammaL1Group>> gammal1;  // every subgroup, by q

  const CorpusMember* find(const std::string& name) const {
    for (const auto& m : members)
      if (m.name == name) return &m;
    return nullptr;
  }
};

struct HarnessOptions {
  std::size_t cap = kDefaultOrderCap;
  std::string corpus_dir;  // *.spec files; empty for none
  bool large = true;       // Sp_6(2), the A_10 census and the sampled orthogonal groups
};

inline const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{
      "valuation-lemmas", "eta-identity",   "sandwich",           "coset-formula",   "valuation-criterion",
      "prop-gammal1",     "trichotomy-cc",  "trichotomy-gw",      "subgroup-index",  "families-sharpness",
      "natural-modules",  "extraspecial",   "alt-deleted",        "block-quotient",  "simple-estimate",
      "asymptotic-bounds"};
  return ids;
}

inline const std::vector<std::uint64_t>& gammal1_sweep_fields() {
  static const std::vector<std::uint64_t> qs{16, 25, 64, 81, 256};
  return qs;
}

namespace detail {

inline std::string params_string(const FamilyMember& m) {
  std::string s = m.family;
  for (auto v : m.params) s += " " + std::to_string(v);
  return s;
}

inline std::vector<std::function<FamilyMember()>> default_family_makers(std::size_t cap) {
  std::vector<std::function<FamilyMember()>> out;
  for (std::uint64_t n : {5, 7, 8, 9, 11, 13, 16})
    for (auto a : divisors(n - 1)) out.push_back([n, a] { return frobenius_affine(n, a); });
  for (std::uint64_t q : {16, 64, 81, 256}) out.push_back([q] { return sharp_gammal1(q); });
  out.push_back([] { return sl2_5_z(11, false); });
  for (std::uint64_t q : {11, 19, 59}) out.push_back([q] { return sl2_5_z(q, true); });
  for (std::uint64_t q : {3, 5, 7, 9, 11, 13})
    for (unsigned level = 0; level <= 3; ++level) out.push_back([q, level] { return q8_normalizer_member(q, level); });
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) out.push_back([q] { return sl2(q); });
  const std::vector<std::pair<ClassicalKind, std::pair<std::uint64_t, std::uint64_t>>> classical{
      {ClassicalKind::linear, {3, 2}},     {ClassicalKind::linear, {3, 3}},     {ClassicalKind::linear, {4, 2}},
      {ClassicalKind::symplectic, {4, 2}}, {ClassicalKind::symplectic, {4, 3}}, {ClassicalKind::unitary, {3, 3}}};
  for (auto [kind, ns] : classical)
    out.push_back([kind = kind, n = ns.first, s = ns.second, cap] { return classical_natural(kind, n, s, cap); });
  for (unsigned s = 1; s <= 3; ++s)
    for (int sign : {1, -1}) out.push_back([s, sign] { return extraspecial2(s, sign); });
  for (std::size_t m = 5; m <= 9; ++m)
    for (std::uint64_t p : {2, 3}) out.push_back([m, p] { return alt_deleted(m, p); });
  return out;
}

inline std::vector<std::filesystem::path> spec_files(const std::string& dir) {
  std::vector<std::filesystem::path> out;
  if (dir.empty() || !std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".spec") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Spec file to corpus member; the member is enumerated under cap.
inline CorpusMember member_from_spec(const GroupSpec& spec, const std::string& fallback_name, std::size_t cap) {
  CorpusMember m;
  if (const auto* ps = std::get_if<PermSpec>(&spec)) {
    m.name = ps->name.empty() ? fallback_name : ps->name;
    m.perm = std::make_shared<PermGroup>(to_group(*ps));
    m.perm->enumerate(cap);
  } else {
    const auto& ms = std::get<MatSpec>(spec);
    m.name = ms.name.empty() ? fallback_name : ms.name;
    m.mat = std::make_shared<MatGroup>(to_group(ms));
    m.mat->enumerate(cap);
  }
  return m;
}

/// Families, every subgroup of GammaL_1(q) for the sweep fields (minus those equal to a
/// family member), then the spec files of the corpus directory in file-name order.
inline Corpus build_default_corpus(const HarnessOptions& opt = {}) {
  Corpus c;
  const auto makers = detail::default_family_makers(opt.cap);
  std::vector<std::optional<FamilyMember>> built(makers.size());
  std::vector<std::string> errors(makers.size());
  parallel_for(makers.size(), [&](std::size_t i) {
    try {
      built[i] = makers[i]();
    } catch (const CapExceeded& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < makers.size(); ++i) {
    if (!built[i]) {
      c.skipped.push_back({"family #" + std::to_string(i), errors[i]});
      continue;
    }
    CorpusMember m;
    m.name = built[i]->name;
    m.provenance = "family " + detail::params_string(*built[i]);
    m.mat = built[i]->group;
    if (built[i]->family == "sharp_gammal1") m.gammal1 = sharp_gammal1_group(static_cast<std::uint64_t>(built[i]->params[0]));
    m.family = std::move(built[i]);
    c.members.push_back(std::move(m));
  }

  const auto& qs = gammal1_sweep_fields();
  std::vector<std::vector<GammaL1Group>> subgroups(qs.size());
  parallel_for(qs.size(), [&](std::size_t i) {
    auto [p, f] = *as_prime_power(qs[i]);
    subgroups[i] = enumerate_gammal1_subgroups(make_field(p, f));
  });
  for (std::size_t i = 0; i < qs.size(); ++i) {
    std::vector<std::uint32_t> sharp_codes;
    if (qs[i] != 25) sharp_codes = sharp_gammal1_group(qs[i]).codes();
    for (const auto& g : subgroups[i]) {
      if (g.codes() == sharp_codes) continue;
      CorpusMember m;
      m.name = g.label();
      m.provenance = "gammal1 q=" + std::to_string(qs[i]);
      m.mat = std::make_shared<MatGroup>(g.to_matgroup());
      m.gammal1 = g;
      c.members.push_back(std::move(m));
    }
    c.gammal1[qs[i]] = std::move(subgroups[i]);
  }
  // to_matgroup leaves the groups unenumerated; they are small.
  parallel_for(c.members.size(), [&](std::size_t i) { c.members[i].mat->enumerate(opt.cap); });

  for (const auto& path : detail::spec_files(opt.corpus_dir)) {
    const std::string stem = path.stem().string();
    try {
      CorpusMember m = member_from_spec(read_group_spec(path.string()), stem, opt.cap);
      m.provenance = "file " + path.filename().string();
      c.members.push_back(std::move(m));
    } catch (const CapExceeded& e) {
      c.skipped.push_back({stem, e.what()});
    } catch (const ParseError& e) {
      c.skipped.push_back({stem, std::string("parse error: ") + e.what()});
    }
  }
  return c;
}

/// Position of a value relative to a threshold: "equality", "above", "below" or
/// "undecided" (the value lies inside the enclosure of an irrational threshold).
inline std::string compare_to_threshold(const ExactRatio& x, const RationalEnclosure& t) {
  if (t.is_exact()) return x == t.lo ? "equality" : (x > t.lo ? "above" : "below");
  if (x >= t.hi) return "above";
  if (x <= t.lo) return "below";
  return "undecided";
}

namespace detail {

/// Certified x >= t (or x > t when strict) against an enclosure; undecided counts as false.
inline bool certainly_at_least(const ExactRatio& x, const RationalEnclosure& t, bool strict = false) {
  const auto c = compare_to_threshold(x, t);
  return c == "above" || (!strict && c == "equality");
}

inline nlohmann::json threshold_json(const ExactRatio& x, const RationalEnclosure& t) {
  const auto c = compare_to_threshold(x, t);
  return {{"value", x.str()},
          {"threshold", t.str()},
          {"annotation", c},
          {"status", c == "above" || c == "equality" ? "pass" : "violation-at-small-n"}};
}

/// 1/(sqrt(n) - 1), enclosed.
inline RationalEnclosure inverse_root_minus_one(std::uint64_t n) {
  const RationalEnclosure r = sqrt_enclosure(mpz_from_u64(n));
  const ExactRatio one(1);
  return {one / (r.hi - one), one / (r.lo - one)};
}

inline bool is_power_of(std::uint64_t x, std::uint64_t base) {
  if (x == 0) return false;
  while (x % base == 0) x /= base;
  return x == 1;
}

inline CheckResult skipped_check(std::string id, std::string anchor, std::string reason) {
  return make_check(std::move(id), std::move(anchor), Status::skipped, nlohmann::json{{"reason", std::move(reason)}});
}

/// Degree, order, delta and Frobenius property of the group a member acts as.
struct ActionData {
  bool transitive = false;
  std::uint64_t degree = 0;
  std::uint64_t order = 0;
  ExactRatio delta;
  bool frobenius = false;
};

}  // namespace detail

class Harness {
 public:
  explicit Harness(HarnessOptions opt = {}) : opt_(std::move(opt)) {}

  const HarnessOptions& options() const { return opt_; }

  const Corpus& corpus() {
    std::call_once(corpus_once_, [this] {
      corpus_ = build_default_corpus(opt_);
      const std::size_t n = corpus_->members.size();
      stats_.resize(n);
      stats_once_ = std::make_unique<std::once_flag[]>(n);
    });
    return *corpus_;
  }

  /// alpha, eta, delta and A(G) of a matrix member, computed once.
  const AffineStats& stats(std::size_t i) {
    const auto& m = corpus().members.at(i);
    if (!m.mat) throw std::invalid_argument("stats: not a matrix member");
    std::call_once(stats_once_[i], [&] { stats_[i] = affine_stats(*m.mat, true); });
    return *stats_[i];
  }

  std::vector<CheckResult> run_suite(const std::string& id) {
    if (id == "valuation-lemmas") return check_valuation_lemmas(50, 13, 4);
    if (id == "eta-identity") return eta_identity();
    if (id == "sandwich") return sandwich();
    if (id == "coset-formula") return coset_results("coset-formula");
    if (id == "valuation-criterion") return coset_results("valuation-criterion");
    if (id == "prop-gammal1") return prop_gammal1();
    if (id == "trichotomy-cc") return trichotomy(false);
    if (id == "trichotomy-gw") return trichotomy(true);
    if (id == "subgroup-index") return subgroup_index();
    if (id == "families-sharpness") return families_sharpness();
    if (id == "natural-modules") return natural_modules();
    if (id == "extraspecial") return extraspecial();
    if (id == "alt-deleted") return alt_deleted_suite();
    if (id == "block-quotient") return block_quotient_suite();
    if (id == "simple-estimate") return simple_estimate();
    if (id == "asymptotic-bounds") return asymptotic_bounds();
    throw std::invalid_argument("unknown suite " + id);
  }

 private:
  using MemberFn = std::function<std::vector<CheckResult>(const CorpusMember&, std::size_t)>;

  /// fn over the members selected by pred, in parallel; results in corpus order.
  std::vector<CheckResult> over_members(const std::function<bool(const CorpusMember&)>& pred, const MemberFn& fn,
                                        const std::string& suite) {
    const auto& ms = corpus().members;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (pred(ms[i])) idx.push_back(i);
    std::vector<std::vector<CheckResult>> parts(idx.size());
    parallel_for(idx.size(), [&](std::size_t j) {
      const auto& m = ms[idx[j]];
      try {
        parts[j] = fn(m, idx[j]);
      } catch (const CapExceeded& e) {
        parts[j] = {detail::skipped_check(suite + "/" + m.name, "order cap", e.what())};
      }
    });
    return flatten(parts);
  }

  static std::vector<CheckResult> flatten(std::vector<std::vector<CheckResult>>& parts) {
    std::vector<CheckResult> out;
    for (auto& p : parts)
      for (auto& r : p) out.push_back(std::move(r));
    return out;
  }

  static bool is_matrix(const CorpusMember& m) { return m.mat != nullptr; }
  static bool is_perm(const CorpusMember& m) { return m.perm != nullptr; }
  static bool in_family(const CorpusMember& m, const char* family) { return m.family && m.family->family == family; }

  static std::uint64_t affine_order(const CorpusMember& m) {
    const std::uint64_t v = m.mat->vector_count(), g = m.mat->order();
    return g > kAffineImageCeiling / v ? kAffineImageCeiling + 1 : v * g;
  }

  static std::uint64_t q_effective(const MatGroup& g) { return g.is_linear() ? g.field().q() : g.field().p(); }

  detail::ActionData action_data(const CorpusMember& m, std::size_t i) {
    detail::ActionData a;
    if (m.mat) {
      const auto& s = stats(i);
      a.transitive = true;
      a.degree = m.mat->vector_count();
      a.order = a.degree * s.order;
      a.delta = s.delta_affine;
      // V x| G is Frobenius iff G != 1 acts semiregularly on V \ {0}.
      a.frobenius = s.semiregular_nonzero && s.order > 1;
      return a;
    }
    a.transitive = is_transitive(*m.perm);
    a.degree = m.perm->degree();
    a.order = m.perm->order();
    if (a.transitive) {
      a.delta = delta(*m.perm);
      a.frobenius = is_frobenius(*m.perm);
    }
    return a;
  }

  // -- suites ---------------------------------------------------------------

  std::vector<CheckResult> eta_identity() {
    const std::string anchor = "delta(V x| G) = 1 - eta(G), eta(G) = (1/|G|) sum_g 1/|C_V(g)|";
    return over_members(is_matrix, [&](const CorpusMember& m, std::size_t i) {
      std::vector<CheckResult> out;
      const auto& s = stats(i);
      const MatGroup& g = *m.mat;
      const std::uint64_t base = g.is_linear() ? g.field().q() : g.field().p();
      bool powers = true;
      for (auto [value, count] : s.fixed_count_histogram) powers = powers && detail::is_power_of(value, base);
      nlohmann::json hist = nlohmann::json::object();
      for (auto [value, count] : s.fixed_count_histogram) hist[std::to_string(value)] = count;
      out.push_back(make_check("eta-identity.fixed-counts/" + m.name,
                               g.is_linear() ? "|C_V(g)| is a power of q" : "|C_V(g)| is a power of p",
                               pass_if(powers), {{"histogram", hist}, {"base", base}}));
      const std::uint64_t n = g.vector_count();
      if (affine_order(m) > kAffineImageCeiling) {
        out.push_back(detail::skipped_check("eta-identity/" + m.name, anchor, "|V| |G| above 10^6"));
      } else {
        const SplitPermGroup affine = affine_to_split(g, opt_.cap);
        const std::uint64_t der = affine.derangement_count();
        const ExactRatio direct = ExactRatio::from_u64(der, affine.order());
        const bool ok = affine.order() == n * s.order && direct == s.delta_affine;
        out.push_back(make_check("eta-identity/" + m.name, anchor, pass_if(ok),
                                 {{"eta", s.eta.str()},
                                  {"delta_eta", s.delta_affine.str()},
                                  {"delta_image", direct.str()},
                                  {"image_order", affine.order()},
                                  {"derangements", der}},
                                 s.delta_affine, direct));
        if (s.semiregular_nonzero) {
          const auto h = affine.fixed_point_histogram();
          bool frob_or_regular = h[n] == 1;
          for (std::size_t k = 2; k < n; ++k) frob_or_regular = frob_or_regular && h[k] == 0;
          out.push_back(make_check("eta-identity.frobenius-or-regular/" + m.name,
                                   "G semiregular on V \\ {0} => V x| G is Frobenius or regular",
                                   pass_if(frob_or_regular), {{"identity_count", h[n]}}));
        }
      }
      if (s.semiregular_nonzero) {
        const ExactRatio expect = ExactRatio::from_u64(n - 1, s.order * n);
        out.push_back(make_check("eta-identity.semiregular/" + m.name,
                                 "G semiregular on V \\ {0} => delta(V x| G) = (|V| - 1)/(|G| |V|)",
                                 pass_if(expect == s.delta_affine), {{"delta", s.delta_affine.str()}, {"formula", expect.str()}},
                                 s.delta_affine, expect));
      }
      return out;
    }, "eta-identity");
  }

  std::vector<CheckResult> sandwich() {
    return over_members(is_matrix, [&](const CorpusMember& m, std::size_t i) {
      return std::vector<CheckResult>{sandwich_check("sandwich/" + m.name, stats(i), q_effective(*m.mat))};
    }, "sandwich");
  }

  std::vector<CheckResult> coset_results(const std::string& prefix) {
    std::call_once(coset_once_, [this] {
      std::vector<const GammaL1Group*> all;
      for (const auto& [q, gs] : corpus().gammal1)
        for (const auto& g : gs) all.push_back(&g);
      std::vector<std::vector<CheckResult>> parts(all.size());
      parallel_for(all.size(), [&](std::size_t i) { parts[i] = check_coset_levels(*all[i]); });
      coset_ = flatten(parts);
    });
    std::vector<CheckResult> out;
    for (const auto& r : coset_)
      if (r.check_id.rfind(prefix, 0) == 0) out.push_back(r);
    return out;
  }

  std::vector<CheckResult> prop_gammal1() {
    std::vector<const std::vector<GammaL1Group>*> sweeps;
    for (const auto& [q, gs] : corpus().gammal1) sweeps.push_back(&gs);
    std::vector<std::vector<CheckResult>> parts(sweeps.size());
    parallel_for(sweeps.size(), [&](std::size_t i) { parts[i] = verify_prop_gammal1(*sweeps[i]); });
    return flatten(parts);
  }

  std::vector<CheckResult> trichotomy(bool gw) {
    const std::string suite = gw ? "trichotomy-gw" : "trichotomy-cc";
    return over_members([](const CorpusMember&) { return true; }, [&](const CorpusMember& m, std::size_t i) {
      std::vector<CheckResult> out;
      const auto a = action_data(m, i);
      const std::uint64_t n = a.degree;
      const std::uint64_t min_degree = gw ? 7 : 3;
      const std::string anchor_cc = "delta(G) >= 1/n, with equality iff G is Frobenius of order n(n-1)";
      const std::string anchor_gw =
          "n >= 7: G is Frobenius of order n(n-1)/a with delta = a/n, a in {1, 2}, or delta(G) > 2/n";
      if (!a.transitive) {
        out.push_back(detail::skipped_check(suite + "/" + m.name, gw ? anchor_gw : anchor_cc, "not transitive"));
        return out;
      }
      if (n < min_degree) {
        out.push_back(detail::skipped_check(suite + "/" + m.name, gw ? anchor_gw : anchor_cc,
                                            "degree below " + std::to_string(min_degree)));
        return out;
      }
      const std::uint64_t nn1 = n * (n - 1);
      const bool frob_exact = a.frobenius && nn1 % a.order == 0;
      const std::uint64_t frob_a = frob_exact ? nn1 / a.order : 0;
      nlohmann::json w{{"degree", n},           {"order", a.order},     {"delta", a.delta.str()},
                       {"frobenius", a.frobenius}, {"frobenius_a", frob_a}};
      if (!gw) {
        const ExactRatio floor = ExactRatio::from_u64(1, n);
        out.push_back(make_check("trichotomy-cc/" + m.name, "delta(G) >= 1/n", pass_if(a.delta >= floor), w, a.delta,
                                 floor));
        const bool equality = a.delta == floor;
        const bool frob_full = a.frobenius && a.order == nn1;
        out.push_back(make_check("trichotomy-cc.equality/" + m.name, anchor_cc, pass_if(equality == frob_full), w,
                                 a.delta, floor));
        if (a.frobenius) {
          const bool ok = frob_exact && a.delta == ExactRatio::from_u64(frob_a, n);
          out.push_back(make_check("trichotomy-cc.frobenius/" + m.name,
                                   "a Frobenius group of degree n has order n(n-1)/a and delta = a/n", pass_if(ok), w,
                                   a.delta, frob_exact ? std::optional(ExactRatio::from_u64(frob_a, n)) : std::nullopt));
        }
        return out;
      }
      const ExactRatio two_n = ExactRatio::from_u64(2, n);
      bool ok = true;
      if (a.delta <= two_n) ok = frob_exact && (frob_a == 1 || frob_a == 2) && a.delta == ExactRatio::from_u64(frob_a, n);
      out.push_back(make_check("trichotomy-gw/" + m.name, anchor_gw, pass_if(ok), w, a.delta, two_n));
      const bool nonstrict = a.delta >= two_n || (a.frobenius && a.order == nn1);
      out.push_back(make_check("trichotomy-gw.nonstrict/" + m.name,
                               "n >= 7: G is Frobenius of order n(n-1), or delta(G) >= 2/n", pass_if(nonstrict), w,
                               a.delta, two_n));
      if (frob_exact && frob_a == 2)
        out.push_back(make_check("trichotomy-gw.equality/" + m.name, "Frobenius of order n(n-1)/2 has delta = 2/n",
                                 pass_if(a.delta == two_n), w, a.delta, two_n));
      return out;
    }, suite);
  }

  std::vector<CheckResult> subgroup_index() {
    const std::string bound_anchor = "|G : D(G)| <= 1/delta(G)";
    return over_members([](const CorpusMember&) { return true; }, [&](const CorpusMember& m, std::size_t i) {
      std::vector<CheckResult> out;
      if (m.mat) {
        const auto& s = stats(i);
        std::uint64_t d_index = s.a_index;
        nlohmann::json w{{"G_A_index", s.a_index}, {"delta", s.delta_affine.str()}};
        if (affine_order(m) <= kDerangementSubgroupBudget / m.mat->vector_count()) {
          out.push_back(a_subgroup_index_identity("subgroup-index.identity/" + m.name, *m.mat, s, opt_.cap));
          d_index = static_cast<std::uint64_t>(out.back().lhs->numerator().get_ui());
          w["D_index_from"] = "affine image";
        } else {
          w["D_index_from"] = "|G : A(G)|";
        }
        const ExactRatio lhs = ExactRatio::from_u64(d_index), rhs = ExactRatio(1) / s.delta_affine;
        out.push_back(make_check("subgroup-index.bound/" + m.name, bound_anchor, pass_if(lhs <= rhs), w, lhs, rhs));
        return out;
      }
      if (!is_transitive(*m.perm)) {
        out.push_back(detail::skipped_check("subgroup-index.bound/" + m.name, bound_anchor, "not transitive"));
        return out;
      }
      const ExactRatio dl = delta(*m.perm);
      const auto [d, index] = derangement_subgroup(*m.perm, opt_.cap);
      const ExactRatio lhs = ExactRatio::from_u64(index), rhs = ExactRatio(1) / dl;
      out.push_back(make_check("subgroup-index.bound/" + m.name, bound_anchor, pass_if(lhs <= rhs),
                               {{"D_order", d.order()}, {"D_index", index}, {"delta", dl.str()}}, lhs, rhs));
      return out;
    }, "subgroup-index");
  }

  std::vector<CheckResult> families_sharpness() {
    auto has_prediction = [](const CorpusMember& m) {
      return m.family && (m.family->alpha || m.family->delta || m.family->family == "frobenius_affine");
    };
    return over_members(has_prediction, [&](const CorpusMember& m, std::size_t i) {
      std::vector<CheckResult> out;
      const auto& s = stats(i);
      const FamilyMember& f = *m.family;
      if (f.alpha)
        out.push_back(make_check("families-sharpness.alpha/" + m.name, "predicted alpha(G)", pass_if(s.alpha == *f.alpha),
                                 {{"alpha", s.alpha.str()}, {"predicted", f.alpha->str()}}, s.alpha, *f.alpha));
      if (f.delta)
        out.push_back(make_check("families-sharpness.delta/" + m.name, "predicted delta(V x| G)",
                                 pass_if(s.delta_affine == *f.delta),
                                 {{"delta", s.delta_affine.str()}, {"predicted", f.delta->str()}}, s.delta_affine,
                                 *f.delta));
      if (f.family == "sharp_gammal1") {
        const auto q = static_cast<std::uint64_t>(f.params[0]);
        const RationalEnclosure h = bound_h(q), g = bound_g(q);
        out.push_back(make_check("families-sharpness.h/" + m.name,
                                 "GL_1(q) x| <sigma>, sigma the q^{1/2}-th power map: alpha(G) = h(q)",
                                 pass_if(h.is_exact() && s.alpha == h.lo), {{"alpha", s.alpha.str()}, {"h", h.str()}},
                                 s.alpha, h.lo));
        out.push_back(make_check("families-sharpness.g/" + m.name,
                                 "GL_1(q) x| <sigma>, sigma the q^{1/2}-th power map: delta(V x| G) = g(q)",
                                 pass_if(g.is_exact() && s.delta_affine == g.lo),
                                 {{"delta", s.delta_affine.str()}, {"g", g.str()}}, s.delta_affine, g.lo));
      }
      if (f.family == "sl2_5_z" && f.delta) {
        const auto q = static_cast<std::uint64_t>(f.params[0]);
        const RationalEnclosure fb = bound_f(q * q);
        out.push_back(make_check("families-sharpness.f/" + m.name, "Z.SL_2(5) < GL_2(q), q = -1 mod 60: delta = f(q^2)",
                                 pass_if(fb.is_exact() && s.delta_affine == fb.lo),
                                 {{"delta", s.delta_affine.str()}, {"f", fb.str()}}, s.delta_affine, fb.lo));
        out.push_back(make_check("families-sharpness.semiregular/" + m.name,
                                 "Z.SL_2(5) < GL_2(q), q = -1 mod 60, is semiregular on V \\ {0}",
                                 pass_if(s.semiregular_nonzero), {{"alpha", s.alpha.str()}}));
      }
      if (f.family == "frobenius_affine") {
        const auto n = static_cast<std::uint64_t>(f.params[0]), a = static_cast<std::uint64_t>(f.params[1]);
        const bool frob = s.semiregular_nonzero && s.order > 1;
        out.push_back(make_check("families-sharpness.frobenius/" + m.name,
                                 "F_n x| <w^a> is Frobenius for a < n - 1 and regular for a = n - 1",
                                 pass_if(frob == (a < n - 1)), {{"order", s.order}, {"semiregular", s.semiregular_nonzero}}));
      }
      return out;
    }, "families-sharpness");
  }

  std::vector<CheckResult> natural_modules() {
    auto classical = [](const CorpusMember& m) { return in_family(m, "classical_natural") || in_family(m, "sl2q"); };
    std::vector<CheckResult> out = over_members(classical, [&](const CorpusMember& m, std::size_t i) {
      const auto& p = m.family->params;
      return std::vector<CheckResult>{natural_module_bounds(static_cast<ClassicalKind>(p[0]), static_cast<std::uint64_t>(p[1]),
                                                            static_cast<std::uint64_t>(p[2]), stats(i).alpha)};
    }, "natural-modules");
    if (!opt_.large) return out;
    std::vector<std::vector<CheckResult>> parts(3);
    parallel_for(3, [&](std::size_t j) {
      if (j == 0) {
        try {
          FamilyMember sp = classical_natural(ClassicalKind::symplectic, 6, 2, opt_.cap);
          parts[j] = {natural_module_bounds(ClassicalKind::symplectic, 6, 2, affine_stats(*sp.group, false).alpha)};
        } catch (const CapExceeded& e) {
          parts[j] = {detail::skipped_check("natural-modules/Sp_6(2)", "alpha(G, V) > 1/2 for Sp_2n(2)", e.what())};
        }
      } else {
        parts[j] = {orthogonal_sampling_check(j == 1 ? 1 : -1, 3)};
      }
    });
    for (auto& r : flatten(parts)) out.push_back(std::move(r));
    return out;
  }

  std::vector<CheckResult> extraspecial() {
    return over_members([](const CorpusMember& m) { return in_family(m, "extraspecial2"); },
                        [&](const CorpusMember& m, std::size_t) {
      const auto s = static_cast<unsigned>(m.family->params[0]);
      const int sign = static_cast<int>(m.family->params[1]);
      const std::uint64_t pred = extraspecial_involution_prediction(s, sign);
      const auto c = extraspecial_census(*m.mat);
      nlohmann::json w{{"s", s},
                       {"sign", sign},
                       {"predicted", pred},
                       {"eigenvalue_one", c.eigen1_nontrivial},
                       {"noncentral_involutions", c.noncentral_involutions}};
      const std::string formula = sign > 0 ? "4^s + 2^s - 2" : "4^s - 2^s - 2";
      return std::vector<CheckResult>{
          make_check("extraspecial.eigenvalue-one/" + m.name,
                     "nontrivial elements of 2^{1+2s} with eigenvalue 1 number " + formula,
                     pass_if(c.eigen1_nontrivial == pred), w, ExactRatio::from_u64(c.eigen1_nontrivial),
                     ExactRatio::from_u64(pred)),
          make_check("extraspecial.involutions/" + m.name, "noncentral involutions of 2^{1+2s} number " + formula,
                     pass_if(c.noncentral_involutions == pred), w, ExactRatio::from_u64(c.noncentral_involutions),
                     ExactRatio::from_u64(pred)),
          make_check("extraspecial.same-set/" + m.name,
                     "a nontrivial element has eigenvalue 1 iff it is a noncentral involution",
                     pass_if(c.eigen1_are_noncentral_involutions), w)};
    }, "extraspecial");
  }

  std::vector<CheckResult> alt_deleted_suite() {
    std::vector<std::size_t> ms{5, 6, 7, 8, 9};
    if (opt_.large) ms.push_back(10);
    std::vector<std::vector<CheckResult>> parts(ms.size());
    parallel_for(ms.size(), [&](std::size_t j) {
      const std::size_t m = ms[j];
      PermGroup a = alternating_group(m);
      a.enumerate(opt_.cap);
      const ExactRatio got = two_cycle_census(a), want = two_cycle_formula(m);
      parts[j] = {make_check("alt-deleted.census/A_" + std::to_string(m),
                             "proportion of A_m with at most two cycles: 2/m (m odd), "
                             "2(sum_{i < m/2} 1/(i(m-i)) + 2/m^2) (m even)",
                             pass_if(got == want), {{"census", got.str()}, {"formula", want.str()}, {"order", a.order()}},
                             got, want)};
    });
    std::vector<CheckResult> out = flatten(parts);
    auto members = over_members([](const CorpusMember& m) { return in_family(m, "alt_deleted"); },
                                [&](const CorpusMember& m, std::size_t i) {
      const auto mm = static_cast<std::size_t>(m.family->params[0]);
      const auto& s = stats(i);
      std::vector<CheckResult> r;
      const RationalEnclosure lg = log_enclosure(mm);
      const ExactRatio bound = ExactRatio(1) - ExactRatio(2) * (ExactRatio(1) + lg.lo) / ExactRatio::from_u64(mm);
      r.push_back(make_check("alt-deleted.log-bound/" + m.name, "alpha(A_m, fully deleted module) >= 1 - 2(1 + log m)/m",
                             pass_if(s.alpha >= bound),
                             {{"alpha", s.alpha.str()}, {"bound_upper", bound.str()}, {"log_m", lg.str()}}, s.alpha,
                             bound));
      // Second route: rebuild each matrix from its permutation.
      PermGroup a = alternating_group(mm);
      a.enumerate(opt_.cap);
      const FieldCtx& k = m.mat->field();
      const MatOps& ops = m.mat->ops();
      std::uint64_t with_fixed = 0;
      bool three_cycles_fix = true;
      const auto& el = a.elements();
      for (std::size_t e = 0; e < el.size(); ++e) {
        const auto w = deleted_module_matrix(k, el[e], mm).words();
        const bool fixes = ops.fixed_vector_count(w.data()) > 1;
        with_fixed += fixes;
        if (cycle_count(el[e], mm) >= 3 && !fixes) three_cycles_fix = false;
      }
      const ExactRatio alpha2 = ExactRatio::from_u64(with_fixed, el.size());
      r.push_back(make_check("alt-deleted.second-route/" + m.name,
                             "alpha from the matrix group equals alpha from the permutation census",
                             pass_if(alpha2 == s.alpha), {{"matrix_group", s.alpha.str()}, {"permutations", alpha2.str()}},
                             s.alpha, alpha2));
      r.push_back(make_check("alt-deleted.three-cycles/" + m.name,
                             "an element of A_m with at least three cycles has eigenvalue 1 on the deleted module",
                             pass_if(three_cycles_fix), {{"m", mm}, {"p", k.p()}}));
      return r;
    }, "alt-deleted");
    for (auto& r : members) out.push_back(std::move(r));
    return out;
  }

  std::vector<CheckResult> block_quotient_suite() {
    auto eligible = [](const CorpusMember& m) {
      if (m.perm) return true;
      return m.mat->order() <= kBlockImageCeiling / m.mat->vector_count();
    };
    return over_members(eligible, [&](const CorpusMember& m, std::size_t) {
      std::vector<CheckResult> out;
      std::shared_ptr<PermGroup> g = m.perm;
      if (!g) {
        g = std::make_shared<PermGroup>(affine_to_perm(*m.mat));
        g->enumerate(opt_.cap);
      }
      if (!is_transitive(*g)) {
        out.push_back(detail::skipped_check("block-quotient/" + m.name, "delta(G, Omega) >= delta(G^rho, Delta)",
                                            "not transitive"));
        return out;
      }
      const ExactRatio dg = delta(*g);
      const auto systems = nontrivial_block_systems(*g);
      for (std::size_t j = 0; j < systems.size(); ++j) {
        PermGroup quotient = block_quotient(*g, systems[j]);
        quotient.enumerate(opt_.cap);
        const ExactRatio dq = delta(quotient);
        const std::size_t blocks = systems[j].block_count;
        out.push_back(make_check("block-quotient/" + m.name + "/" + std::to_string(blocks) + "x" +
                                     std::to_string(g->degree() / blocks),
                                 "delta(G, Omega) >= delta(G^rho, Delta) for a block system Delta", pass_if(dg >= dq),
                                 {{"delta", dg.str()}, {"delta_quotient", dq.str()}, {"blocks", blocks},
                                  {"quotient_order", quotient.order()}},
                                 dg, dq));
      }
      return out;
    }, "block-quotient");
  }

  std::vector<CheckResult> simple_estimate() {
    const std::vector<std::uint64_t> qs{3, 4, 5, 7, 9};
    std::vector<std::vector<CheckResult>> parts(qs.size());
    parallel_for(qs.size(), [&](std::size_t j) { parts[j] = simple_estimate_checks(qs[j]); });
    return flatten(parts);
  }

  /// Bounds that hold in large degree; shortfalls are small-n violations.
  std::vector<CheckResult> asymptotic_bounds() {
    return over_members([](const CorpusMember&) { return true; }, [&](const CorpusMember& m, std::size_t i) {
      std::vector<CheckResult> out;
      auto soft = [](bool ok) { return ok ? Status::pass : Status::violation_at_small_n; };
      if (m.perm) {
        const std::string anchor = "transitive G of large degree n: G is primitive and Frobenius, or delta(G) >= g(n)";
        if (!is_transitive(*m.perm) || m.perm->degree() < 2) {
          out.push_back(detail::skipped_check("asymptotic-bounds.main/" + m.name, anchor, "not transitive"));
          return out;
        }
        if (is_primitive(*m.perm) && is_frobenius(*m.perm)) return out;
        const ExactRatio dl = delta(*m.perm);
        const RationalEnclosure g = bound_g(m.perm->degree());
        out.push_back(make_check("asymptotic-bounds.main/" + m.name, anchor, soft(detail::certainly_at_least(dl, g)),
                                 detail::threshold_json(dl, g), dl, g.hi));
        return out;
      }
      const auto& s = stats(i);
      const std::uint64_t q = m.mat->field().q();
      if (in_family(m, "sl2_5_z")) {
        for (auto& r : normalizer_bound_checks("asymptotic-bounds.sl2-5/" + m.name, s, q, 60, 31, true))
          out.push_back(std::move(r));
      }
      if (in_family(m, "q8_normalizer_member")) {
        for (auto& r : normalizer_bound_checks("asymptotic-bounds.q8/" + m.name, s, q, 24, 13, false))
          out.push_back(std::move(r));
      }
      if (!m.mat->is_linear() || s.semiregular_nonzero) return out;
      const std::string anchor =
          "G <= GL_d(q) irreducible, not semiregular on V \\ {0}: alpha(G) >= h(q^d), delta(V x| G) >= g(q^d), "
          "|A(G)|/|G| >= 1/(q^{d/2} - 1)";
      const std::uint64_t lines = (m.mat->vector_count() - 1) / (q - 1);
      if (lines > kSubspaceScanCeiling) {
        out.push_back(detail::skipped_check("asymptotic-bounds.affine/" + m.name, anchor, "too many lines to test irreducibility"));
        return out;
      }
      if (!is_irreducible(*m.mat)) return out;
      const std::uint64_t Q = m.mat->vector_count();
      const RationalEnclosure h = bound_h(Q), g = bound_g(Q), a_floor = detail::inverse_root_minus_one(Q);
      const ExactRatio a_ratio = ExactRatio::from_u64(s.a_order, s.order);
      out.push_back(make_check("asymptotic-bounds.affine-alpha/" + m.name, anchor,
                               soft(detail::certainly_at_least(s.alpha, h)), detail::threshold_json(s.alpha, h), s.alpha,
                               h.hi));
      out.push_back(make_check("asymptotic-bounds.affine-delta/" + m.name, anchor,
                               soft(detail::certainly_at_least(s.delta_affine, g)), detail::threshold_json(s.delta_affine, g),
                               s.delta_affine, g.hi));
      out.push_back(make_check("asymptotic-bounds.affine-A-index/" + m.name, anchor,
                               soft(detail::certainly_at_least(a_ratio, a_floor)), detail::threshold_json(a_ratio, a_floor),
                               a_ratio, a_floor.hi));
      return out;
    }, "asymptotic-bounds");
  }

  HarnessOptions opt_;
  std::once_flag corpus_once_;
  std::optional<Corpus> corpus_;
  std::vector<std::optional<AffineStats>> stats_;
  std::unique_ptr<std::once_flag[]> stats_once_;
  std::once_flag coset_once_;
  std::vector<CheckResult> coset_;
};

// -- reports -------------------------------------------------------------------

struct StatusCounts {
  std::uint64_t total = 0, pass = 0, fail = 0, violation = 0, skipped = 0, statistical = 0;

  void add(Status s) {
    ++total;
    switch (s) {
      case Status::pass: ++pass; break;
      case Status::fail: ++fail; break;
      case Status::violation_at_small_n: ++violation; break;
      case Status::skipped: ++skipped; break;
      case Status::statistical: ++statistical; break;
    }
  }

  nlohmann::json to_json() const {
    return {{"total", total},         {"pass", pass},       {"fail", fail}, {"violation-at-small-n", violation},
            {"skipped", skipped},     {"statistical", statistical}};
  }
};

inline StatusCounts count_statuses(const std::vector<CheckResult>& results) {
  StatusCounts c;
  for (const auto& r : results) c.add(r.status);
  return c;
}

inline bool any_failed(const std::vector<CheckResult>& results) {
  return std::any_of(results.begin(), results.end(), [](const CheckResult& r) { return r.failed(); });
}

inline nlohmann::json suite_report(const std::string& suite, const std::vector<CheckResult>& results) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["suite"] = suite;
  j["summary"] = count_statuses(results).to_json();
  j["results"] = nlohmann::json::array();
  for (const auto& r : results) j["results"].push_back(r.to_json());
  return j;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string csv_header() {
  return "# derange report, schema " + std::to_string(kReportSchemaVersion) +
         "\nsuite,check_id,status,lhs,rhs,anchor,witness\n";
}

inline std::string csv_rows(const std::string& suite, const std::vector<CheckResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += detail::csv_field(suite) + "," + detail::csv_field(r.check_id) + "," + std::string(to_string(r.status)) + "," +
           (r.lhs ? r.lhs->str() : "") + "," + (r.rhs ? r.rhs->str() : "") + "," + detail::csv_field(r.anchor) + "," +
           detail::csv_field(r.witness.dump()) + "\n";
  }
  return out;
}

// -- analysis of a single group ---------------------------------------------------

inline nlohmann::json analyze_perm(const PermGroup& g, const std::string& name, std::size_t cap = kDefaultOrderCap) {
  nlohmann::json j;
  j["kind"] = "permutation";
  j["name"] = name;
  j["degree"] = g.degree();
  j["order"] = g.order();
  const auto orb = orbits(g);
  j["orbits"] = orb.size();
  j["transitive"] = orb.size() == 1;
  if (orb.size() != 1) {
    j["delta"] = nullptr;
    j["note"] = "delta is defined for transitive groups only";
    return j;
  }
  const std::uint64_t n = g.degree();
  const ExactRatio dl = delta(g);
  const bool frob = is_frobenius(g), prim = is_primitive(g);
  j["primitive"] = prim;
  j["frobenius"] = frob;
  j["semiregular"] = is_semiregular(g);
  j["derangements"] = derangement_count(g);
  j["delta"] = dl.str();
  const auto [d, index] = derangement_subgroup(g, cap);
  j["D_index"] = index;
  j["D_index_at_most_1_over_delta"] = ExactRatio::from_u64(index) * dl <= ExactRatio(1);
  nlohmann::json t;
  if (n >= 2) {
    t["g(n) vs delta"] = detail::threshold_json(dl, bound_g(n));
    t["f(n) vs delta"] = detail::threshold_json(dl, bound_f(n));
    if (prim && frob) t["note"] = "primitive Frobenius groups are exempt from the g(n) bound";
  }
  if (n >= 3) t["1/n vs delta"] = detail::threshold_json(dl, RationalEnclosure{ExactRatio::from_u64(1, n), ExactRatio::from_u64(1, n)});
  if (n >= 7) t["2/n vs delta"] = detail::threshold_json(dl, RationalEnclosure{ExactRatio::from_u64(2, n), ExactRatio::from_u64(2, n)});
  j["thresholds"] = t;
  return j;
}

inline nlohmann::json analyze_mat(const MatGroup& g, const std::string& name, std::size_t cap = kDefaultOrderCap) {
  nlohmann::json j;
  j["kind"] = "matrix";
  j["name"] = name;
  j["field"] = {{"p", g.field().p()}, {"f", g.field().f()}, {"q", g.field().q()}};
  j["dim"] = g.dim();
  j["order"] = g.order();
  j["linear"] = g.is_linear();
  const std::uint64_t Q = g.vector_count();
  const std::uint64_t lines = (Q - 1) / (g.field().q() - 1);
  std::optional<bool> irreducible;
  if (g.is_linear() && lines <= kSubspaceScanCeiling) irreducible = is_irreducible(g);
  j["irreducible"] = irreducible ? nlohmann::json(*irreducible) : nlohmann::json(nullptr);
  const AffineStats s = affine_stats(g, true);
  j["semiregular_on_nonzero_vectors"] = s.semiregular_nonzero;
  j["alpha"] = s.alpha.str();
  j["eta"] = s.eta.str();
  j["delta"] = s.delta_affine.str();
  j["A_order"] = s.a_order;
  j["A_index"] = s.a_index;
  nlohmann::json t;
  t["h(q^d) vs alpha"] = detail::threshold_json(s.alpha, bound_h(Q));
  t["g(q^d) vs delta"] = detail::threshold_json(s.delta_affine, bound_g(Q));
  t["f(q^d) vs delta"] = detail::threshold_json(s.delta_affine, bound_f(Q));
  t["1/(q^{d/2}-1) vs |A|/|G|"] =
      detail::threshold_json(ExactRatio::from_u64(s.a_order, s.order), detail::inverse_root_minus_one(Q));
  j["thresholds"] = t;
  nlohmann::json aff;
  aff["degree"] = Q;
  aff["order"] = nlohmann::json(Q <= UINT64_MAX / s.order ? nlohmann::json(Q * s.order) : nlohmann::json(nullptr));
  aff["frobenius"] = s.semiregular_nonzero && s.order > 1;
  if (Q <= kAffineDegreeCeiling && s.order <= kAffineImageCeiling / Q) {
    const SplitPermGroup image = affine_to_split(g, cap);
    aff["delta_from_image"] = ExactRatio::from_u64(image.derangement_count(), image.order()).str();
    aff["D_index"] = derangement_subgroup_index(image, cap);
  }
  j["affine"] = aff;
  return j;
}

inline nlohmann::json analyze(const GroupSpec& spec, const std::string& fallback_name, std::size_t cap = kDefaultOrderCap) {
  CorpusMember m = member_from_spec(spec, fallback_name, cap);
  nlohmann::json j = m.perm ? analyze_perm(*m.perm, m.name, cap) : analyze_mat(*m.mat, m.name, cap);
  j["schema_version"] = kReportSchemaVersion;
  return j;
}

/// Parameters and statistics of every subgroup of GammaL_1(q), with the coset and
/// bound checks for that field.
inline std::pair<nlohmann::json, std::vector<CheckResult>> scan_gammal1(std::uint64_t q) {
  const auto pf = as_prime_power(q);
  if (!pf) throw std::invalid_argument("scan-gammal1: q must be a prime power");
  const auto subgroups = enumerate_gammal1_subgroups(make_field(pf->first, pf->second));
  std::vector<nlohmann::json> rows(subgroups.size());
  std::vector<std::vector<CheckResult>> parts(subgroups.size() + 1);
  parallel_for(subgroups.size(), [&](std::size_t i) {
    const auto& g = subgroups[i];
    const auto s = gammal1_stats(g);
    rows[i] = {{"label", g.label()}, {"order", g.order()}, {"t", g.t()},         {"e0", g.e0()},
               {"c", g.c()},         {"m", g.m()},         {"C", g.C()},         {"alpha", s.alpha.str()},
               {"eta", s.eta.str()}, {"delta", s.delta.str()}, {"A_order", s.a_order},
               {"semiregular", s.delta_count == 0}};
    parts[i] = check_coset_levels(g);
  });
  parts.back() = verify_prop_gammal1(subgroups);
  std::vector<CheckResult> checks;
  for (auto& p : parts)
    for (auto& r : p) checks.push_back(std::move(r));
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["q"] = q;
  j["subgroup_count"] = subgroups.size();
  j["subgroups"] = rows;
  j["summary"] = count_statuses(checks).to_json();
  return {std::move(j), std::move(checks)};
}

}  // namespace derange
