#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"
#include "derange/ratio.hpp"

namespace derange {

enum class Status { pass, fail, violation_at_small_n, skipped, statistical };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::violation_at_small_n: return "violation-at-small-n";
    case Status::skipped: return "skipped";
    case Status::statistical: return "statistical";
  }
  return "fail";
}

/// Outcome of one check: one identity or inequality evaluated on one input.
/// lhs/rhs hold the two sides of the comparison when there is one.
struct CheckResult {
  std::string check_id;
  std::string anchor;
  Status status = Status::pass;
  std::optional<ExactRatio> lhs;
  std::optional<ExactRatio> rhs;
  nlohmann::json witness = nlohmann::json::object();

  bool failed() const { return status == Status::fail; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["check_id"] = check_id;
    j["anchor"] = anchor;
    j["status"] = std::string(to_string(status));
    j["lhs"] = lhs ? nlohmann::json(lhs->str()) : nlohmann::json(nullptr);
    j["rhs"] = rhs ? nlohmann::json(rhs->str()) : nlohmann::json(nullptr);
    j["witness"] = witness;
    return j;
  }
};

/// Builds a CheckResult and enforces that failures carry a witness.
inline CheckResult make_check(std::string id, std::string anchor, Status status,
                              nlohmann::json witness = nlohmann::json::object(),
                              std::optional<ExactRatio> lhs = std::nullopt,
                              std::optional<ExactRatio> rhs = std::nullopt) {
  if (status == Status::fail && witness.empty())
    throw std::logic_error("failed check " + id + " has no witness");
  return CheckResult{std::move(id), std::move(anchor), status, std::move(lhs), std::move(rhs),
                     std::move(witness)};
}

inline Status pass_if(bool ok) { return ok ? Status::pass : Status::fail; }

}  // namespace derange
