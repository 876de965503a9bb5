#pragma once

// Text format for group specs.
//
//   # permutation group          # matrix group
//   name AGL_1(5)                name sharp 16
//   degree 5                     field 2 4
//   (0 1 2 3 4)                  dim 1
//   (1 2 4 3)                    gen 2 frob 0
//                                gen 1 frob 2
//
// '#' starts a comment. Field entries use the packed integer encoding of ffield
// (coefficients in base p). "frob e" is optional and defaults to 0.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "derange/errors.hpp"
#include "derange/ffield.hpp"
#include "derange/matgroup.hpp"
#include "derange/perm.hpp"

namespace derange {

struct PermSpec {
  std::string name;
  std::size_t degree = 0;
  std::vector<Perm> gens;
  friend bool operator==(const PermSpec&, const PermSpec&) = default;
};

struct MatSpec {
  std::string name;
  std::uint64_t p = 0;
  unsigned f = 0;
  std::size_t dim = 0;
  std::vector<SemilinearMap> gens;
  friend bool operator==(const MatSpec&, const MatSpec&) = default;
};

using GroupSpec = std::variant<PermSpec, MatSpec>;

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline std::uint64_t parse_uint(const Token& t, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size())
    throw ParseError(line, t.column, std::string("expected ") + what + ", found '" + std::string(t.text) + "'");
  return v;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

}  // namespace detail

inline GroupSpec parse_group_spec(std::string_view text) {
  enum class Kind { unknown, perm, mat } kind = Kind::unknown;
  PermSpec ps;
  MatSpec ms;
  std::string name;
  FieldPtr field;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    const std::string_view line = detail::strip_comment(raw);
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    const std::string_view head = tokens[0].text;
    if (head == "name") {
      const std::size_t start = tokens.size() > 1 ? tokens[1].column - 1 : line.size();
      std::string_view rest = line.substr(start);
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);
      name = std::string(rest);
      continue;
    }
    if (head == "degree") {
      if (kind != Kind::unknown) throw ParseError(line_no, tokens[0].column, "duplicate header");
      if (tokens.size() != 2) throw ParseError(line_no, tokens[0].column, "expected 'degree N'");
      ps.degree = detail::parse_uint(tokens[1], line_no, "a degree");
      if (ps.degree == 0 || ps.degree > kDegreeCeiling)
        throw ParseError(line_no, tokens[1].column, "degree must be in 1.." + std::to_string(kDegreeCeiling));
      kind = Kind::perm;
      continue;
    }
    if (head == "field") {
      if (kind != Kind::unknown) throw ParseError(line_no, tokens[0].column, "duplicate header");
      if (tokens.size() != 3) throw ParseError(line_no, tokens[0].column, "expected 'field p f'");
      ms.p = detail::parse_uint(tokens[1], line_no, "a prime");
      const std::uint64_t f = detail::parse_uint(tokens[2], line_no, "a degree");
      if (!is_prime(ms.p)) throw ParseError(line_no, tokens[1].column, "field characteristic must be prime");
      if (f == 0 || f > 32) throw ParseError(line_no, tokens[2].column, "field degree out of range");
      ms.f = static_cast<unsigned>(f);
      try {
        field = make_field(ms.p, ms.f);
        MatOps check(field, 1);
      } catch (const std::exception& e) {
        throw ParseError(line_no, tokens[1].column, e.what());
      }
      kind = Kind::mat;
      continue;
    }
    if (head == "dim") {
      if (kind != Kind::mat) throw ParseError(line_no, tokens[0].column, "'dim' needs a preceding 'field' line");
      if (ms.dim != 0) throw ParseError(line_no, tokens[0].column, "duplicate 'dim'");
      if (tokens.size() != 2) throw ParseError(line_no, tokens[0].column, "expected 'dim d'");
      ms.dim = detail::parse_uint(tokens[1], line_no, "a dimension");
      if (ms.dim == 0 || ms.dim > 16) throw ParseError(line_no, tokens[1].column, "dimension must be in 1..16");
      continue;
    }
    if (kind == Kind::perm) {
      const std::size_t first = tokens[0].column - 1;
      ps.gens.push_back(parse_cycles(line.substr(first), ps.degree, line_no, first));
      continue;
    }
    if (kind == Kind::mat) {
      if (head != "gen") throw ParseError(line_no, tokens[0].column, "expected 'gen', found '" + std::string(head) + "'");
      if (ms.dim == 0) throw ParseError(line_no, tokens[0].column, "'gen' before 'dim'");
      const std::size_t d2 = ms.dim * ms.dim;
      std::size_t n = tokens.size() - 1;
      unsigned frob = 0;
      if (n >= 2 && tokens[tokens.size() - 2].text == "frob") {
        const detail::Token& t = tokens.back();
        const std::uint64_t e = detail::parse_uint(t, line_no, "a frobenius exponent");
        if (e >= ms.f) throw ParseError(line_no, t.column, "frobenius exponent must be below f");
        frob = static_cast<unsigned>(e);
        n -= 2;
      }
      if (n != d2)
        throw ParseError(line_no, tokens[0].column,
                         "expected " + std::to_string(d2) + " entries, found " + std::to_string(n));
      SemilinearMap g{ms.dim, {}, frob};
      for (std::size_t i = 1; i <= n; ++i) {
        const std::uint64_t c = detail::parse_uint(tokens[i], line_no, "a field element");
        if (c >= field->q()) throw ParseError(line_no, tokens[i].column, "entry outside F_" + std::to_string(field->q()));
        g.a.push_back(FieldElem{static_cast<std::uint32_t>(c)});
      }
      MatOps ops(field, ms.dim);
      if (!ops.matrix_inverse(g.a)) throw ParseError(line_no, tokens[0].column, "generator is singular");
      ms.gens.push_back(std::move(g));
      continue;
    }
    throw ParseError(line_no, tokens[0].column, "expected 'degree' or 'field' header");
  }
  if (kind == Kind::unknown) throw ParseError(line_no, 1, "missing 'degree' or 'field' header");
  if (kind == Kind::perm) {
    ps.name = name;
    return ps;
  }
  if (ms.dim == 0) throw ParseError(line_no, 1, "missing 'dim' line");
  ms.name = name;
  return ms;
}

inline GroupSpec read_group_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_group_spec(ss.str());
}

inline std::string serialize(const PermSpec& s) {
  std::string out;
  if (!s.name.empty()) out += "name " + s.name + "\n";
  out += "degree " + std::to_string(s.degree) + "\n";
  for (const auto& g : s.gens) out += to_cycles(g) + "\n";
  return out;
}

inline std::string serialize(const MatSpec& s) {
  std::string out;
  if (!s.name.empty()) out += "name " + s.name + "\n";
  out += "field " + std::to_string(s.p) + " " + std::to_string(s.f) + "\n";
  out += "dim " + std::to_string(s.dim) + "\n";
  for (const auto& g : s.gens) {
    out += "gen";
    for (auto x : g.a) out += " " + std::to_string(x.code);
    out += " frob " + std::to_string(g.frob) + "\n";
  }
  return out;
}

inline std::string serialize(const GroupSpec& s) {
  return std::visit([](const auto& x) { return serialize(x); }, s);
}

inline MatSpec to_spec(const MatGroup& g, std::string name = {}) {
  return MatSpec{std::move(name), g.field().p(), g.field().f(), g.dim(), g.generators()};
}

inline PermSpec to_spec(const PermGroup& g, std::string name = {}) {
  return PermSpec{std::move(name), g.degree(), g.generators()};
}

inline PermGroup to_group(const PermSpec& s) { return PermGroup(s.degree, s.gens); }

inline MatGroup to_group(const MatSpec& s) { return MatGroup(make_field(s.p, s.f), s.dim, s.gens); }

}  // namespace derange
