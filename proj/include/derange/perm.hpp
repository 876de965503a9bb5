#pragma once

// Permutations on {0..n-1} as image arrays, cycle-notation I/O, and permutation
// groups with exhaustive enumeration.
//
// Products follow "apply left factor first": (g*h)(i) = h(g(i)).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "derange/element_table.hpp"
#include "derange/errors.hpp"
#include "derange/parallel.hpp"
#include "derange/ratio.hpp"

namespace derange {

using Point = std::uint32_t;

inline constexpr std::size_t kDegreeCeiling = 100'000;

struct Perm {
  std::vector<Point> images;

  static Perm identity(std::size_t n) {
    Perm p;
    p.images.resize(n);
    std::iota(p.images.begin(), p.images.end(), Point{0});
    return p;
  }

  /// Validates that the image list is a bijection.
  static Perm from_images(std::vector<Point> images) {
    std::vector<bool> seen(images.size(), false);
    for (Point x : images) {
      if (x >= images.size() || seen[x]) throw std::invalid_argument("image list is not a permutation");
      seen[x] = true;
    }
    return Perm{std::move(images)};
  }

  std::size_t degree() const { return images.size(); }
  Point operator()(Point i) const { return images[i]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images.size(); ++i)
      if (images[i] != i) return false;
    return true;
  }

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;
};

/// out = a then b.
inline void compose_into(const Point* a, const Point* b, Point* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = b[a[i]];
}

inline Perm operator*(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("degree mismatch in product");
  Perm r;
  r.images.resize(a.degree());
  compose_into(a.images.data(), b.images.data(), r.images.data(), a.degree());
  return r;
}

inline Perm inverse(const Perm& a) {
  Perm r;
  r.images.resize(a.degree());
  for (std::size_t i = 0; i < a.degree(); ++i) r.images[a.images[i]] = static_cast<Point>(i);
  return r;
}

inline std::size_t fixed_point_count(const Point* g, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (g[i] == i);
  return c;
}

inline bool is_derangement(const Point* g, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (g[i] == i) return false;
  return true;
}

inline std::size_t fixed_point_count(const Perm& g) { return fixed_point_count(g.images.data(), g.degree()); }
inline bool is_derangement(const Perm& g) { return is_derangement(g.images.data(), g.degree()); }

/// Cycle notation without fixed points; the identity prints as "()".
inline std::string to_cycles(const Point* g, std::size_t n) {
  std::string out;
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] || g[i] == i) continue;
    out += '(';
    for (std::size_t j = i; !seen[j]; j = g[j]) {
      if (j != i) out += ' ';
      out += std::to_string(j);
      seen[j] = true;
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

inline std::string to_cycles(const Perm& g) { return to_cycles(g.images.data(), g.degree()); }

/// Parses cycle notation such as "(0 1 2)(3 4)". Points may be separated by
/// spaces or commas. line/column locate errors; column is 1-based within text
/// plus col_offset.
inline Perm parse_cycles(std::string_view text, std::size_t degree, std::size_t line = 1,
                         std::size_t col_offset = 0) {
  Perm g = Perm::identity(degree);
  std::vector<bool> used(degree, false);
  std::size_t i = 0;
  auto fail = [&](std::size_t pos, const std::string& msg) -> void {
    throw ParseError(line, col_offset + pos + 1, msg);
  };
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_space();
  if (i == text.size()) fail(i, "empty generator");
  while (true) {
    skip_space();
    if (i == text.size()) break;
    if (text[i] != '(') fail(i, std::string("expected '(' but found '") + text[i] + "'");
    ++i;
    std::vector<Point> cycle;
    while (true) {
      skip_space();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i == text.size()) fail(i, "unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail(i, std::string("unexpected character '") + text[i] + "'");
      const std::size_t start = i;
      unsigned long long v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<unsigned>(text[i] - '0');
        if (v >= degree) {
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
          fail(start, "point " + std::string(text.substr(start, i - start)) + " out of range for degree " +
                          std::to_string(degree));
        }
        ++i;
      }
      if (used[v]) fail(start, "point " + std::to_string(v) + " repeated");
      used[v] = true;
      cycle.push_back(static_cast<Point>(v));
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) g.images[cycle[k]] = cycle[(k + 1) % cycle.size()];
  }
  return g;
}

struct BlockSystem {
  std::vector<std::size_t> block_of;  // point -> block id, ids numbered by first point
  std::size_t block_count = 0;
  std::size_t block_size = 0;

  std::vector<std::vector<Point>> blocks() const {
    std::vector<std::vector<Point>> out(block_count);
    for (std::size_t i = 0; i < block_of.size(); ++i) out[block_of[i]].push_back(static_cast<Point>(i));
    return out;
  }
};

class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(std::size_t degree, std::vector<Perm> gens) : degree_(degree), gens_(std::move(gens)) {
    if (degree == 0) throw std::invalid_argument("degree must be positive");
    if (degree > kDegreeCeiling) throw std::invalid_argument("degree above ceiling");
    for (const auto& g : gens_)
      if (g.degree() != degree) throw std::invalid_argument("generator degree mismatch");
    if (gens_.empty()) gens_.push_back(Perm::identity(degree));
  }

  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }

  bool enumerated() const { return elements_.has_value(); }

  /// Dimino closure; element order depends only on the generator list.
  PermGroup& enumerate(std::size_t cap = kDefaultOrderCap) {
    if (enumerated()) return *this;
    std::vector<std::vector<Point>> words;
    for (const auto& g : gens_) words.push_back(g.images);
    const std::size_t n = degree_;
    elements_ = dimino_closure<Point>(n, Perm::identity(n).images, std::move(words),
                                      [n](const Point* a, const Point* b, Point* out) { compose_into(a, b, out, n); },
                                      cap);
    return *this;
  }

  const ElementTable<Point>& elements() const {
    if (!elements_) throw std::logic_error("group not enumerated");
    return *elements_;
  }

  std::size_t order() const { return elements().size(); }

  Perm element(std::size_t i) const {
    const Point* w = elements()[i];
    return Perm{std::vector<Point>(w, w + degree_)};
  }

  bool contains(const Perm& g) const { return g.degree() == degree_ && elements().contains(g.images.data()); }

  /// Adopts an already-closed element table (from a subgroup closure).
  static PermGroup from_table(std::size_t degree, std::vector<Perm> gens, ElementTable<Point> table) {
    PermGroup g(degree, std::move(gens));
    g.elements_ = std::move(table);
    return g;
  }

 private:
  std::size_t degree_ = 0;
  std::vector<Perm> gens_;
  std::optional<ElementTable<Point>> elements_;
};

/// Orbit partition, each orbit sorted, orbits ordered by least point.
inline std::vector<std::vector<Point>> orbits(const PermGroup& g) {
  const std::size_t n = g.degree();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Point>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<Point> orb{static_cast<Point>(s)};
    seen[s] = true;
    for (std::size_t k = 0; k < orb.size(); ++k)
      for (const auto& gen : g.generators()) {
        Point y = gen(orb[k]);
        if (!seen[y]) {
          seen[y] = true;
          orb.push_back(y);
        }
      }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

inline bool is_transitive(const PermGroup& g) { return orbits(g).size() == 1; }

namespace detail {

inline void require_transitive(const PermGroup& g, const char* what) {
  if (!is_transitive(g)) throw std::invalid_argument(std::string(what) + ": group is not transitive");
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace detail

/// Finest G-invariant partition with a and b in one block (Atkinson's merge).
inline BlockSystem minimal_blocks(const PermGroup& g, Point a, Point b) {
  detail::require_transitive(g, "minimal_blocks");
  const std::size_t n = g.degree();
  if (a >= n || b >= n) throw std::out_of_range("seed point out of range");
  detail::UnionFind uf(n);
  std::vector<std::pair<Point, Point>> queue;
  if (uf.unite(a, b)) queue.emplace_back(a, b);
  for (std::size_t k = 0; k < queue.size(); ++k) {
    auto [x, y] = queue[k];
    for (const auto& gen : g.generators()) {
      Point gx = gen(x), gy = gen(y);
      if (uf.unite(gx, gy)) queue.emplace_back(gx, gy);
    }
  }
  BlockSystem bs;
  bs.block_of.assign(n, 0);
  std::vector<std::size_t> id_of_root(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = uf.find(i);
    if (id_of_root[r] == SIZE_MAX) id_of_root[r] = bs.block_count++;
    bs.block_of[i] = id_of_root[r];
  }
  bs.block_size = n / bs.block_count;
  return bs;
}

inline bool is_valid_block_system(const PermGroup& g, const BlockSystem& bs) {
  const std::size_t n = g.degree();
  if (bs.block_of.size() != n || bs.block_count == 0 || bs.block_size * bs.block_count != n) return false;
  std::vector<std::size_t> sizes(bs.block_count, 0);
  for (auto b : bs.block_of) {
    if (b >= bs.block_count) return false;
    ++sizes[b];
  }
  for (auto s : sizes)
    if (s != bs.block_size) return false;
  for (const auto& gen : g.generators()) {
    std::vector<std::size_t> image(bs.block_count, SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t& slot = image[bs.block_of[i]];
      std::size_t target = bs.block_of[gen(static_cast<Point>(i))];
      if (slot == SIZE_MAX) slot = target;
      else if (slot != target) return false;
    }
  }
  return true;
}

inline bool is_primitive(const PermGroup& g) {
  detail::require_transitive(g, "is_primitive");
  for (Point b = 1; b < g.degree(); ++b)
    if (minimal_blocks(g, 0, b).block_count != 1) return false;
  return true;
}

/// All block systems {0, b}-generated for b != 0 that are proper and nontrivial, deduplicated.
inline std::vector<BlockSystem> nontrivial_block_systems(const PermGroup& g) {
  std::vector<BlockSystem> out;
  for (Point b = 1; b < g.degree(); ++b) {
    BlockSystem bs = minimal_blocks(g, 0, b);
    if (bs.block_count == 1) continue;
    bool dup = std::any_of(out.begin(), out.end(), [&](const BlockSystem& o) { return o.block_of == bs.block_of; });
    if (!dup) out.push_back(std::move(bs));
  }
  return out;
}

/// Induced action on blocks.
inline PermGroup block_quotient(const PermGroup& g, const BlockSystem& bs) {
  if (!is_valid_block_system(g, bs)) throw std::invalid_argument("block_quotient: invalid block system");
  std::vector<Perm> gens;
  std::vector<Point> rep(bs.block_count);
  for (std::size_t i = g.degree(); i-- > 0;) rep[bs.block_of[i]] = static_cast<Point>(i);
  for (const auto& gen : g.generators()) {
    Perm q;
    q.images.resize(bs.block_count);
    for (std::size_t b = 0; b < bs.block_count; ++b) q.images[b] = static_cast<Point>(bs.block_of[gen(rep[b])]);
    gens.push_back(std::move(q));
  }
  return PermGroup(bs.block_count, std::move(gens));
}

/// Number of elements with no fixed point.
inline std::uint64_t derangement_count(const PermGroup& g) {
  const auto& el = g.elements();
  const std::size_t n = g.degree();
  return parallel_sum(el.size(), [&](std::size_t lo, std::size_t hi) {
    std::uint64_t c = 0;
    for (std::size_t i = lo; i < hi; ++i) c += is_derangement(el[i], n);
    return c;
  });
}

inline ExactRatio delta(const PermGroup& g) {
  detail::require_transitive(g, "delta");
  return ExactRatio::from_u64(derangement_count(g), g.order());
}

/// Histogram: result[k] = number of elements with exactly k fixed points.
inline std::vector<std::uint64_t> fixed_point_histogram(const PermGroup& g) {
  const auto& el = g.elements();
  const std::size_t n = g.degree();
  std::vector<std::uint64_t> hist(n + 1, 0);
  for (std::size_t i = 0; i < el.size(); ++i) ++hist[fixed_point_count(el[i], n)];
  return hist;
}

inline bool is_frobenius(const PermGroup& g) {
  detail::require_transitive(g, "is_frobenius");
  auto hist = fixed_point_histogram(g);
  // The identity contributes the single entry at index n.
  const std::size_t n = g.degree();
  if (n < 2) return false;
  std::uint64_t two_or_more = 0;
  for (std::size_t k = 2; k < n; ++k) two_or_more += hist[k];
  if (hist[n] != 1) two_or_more += hist[n] - 1;
  return hist[1] > 0 && two_or_more == 0;
}

/// True iff every nontrivial element fixes no point of domain.
inline bool is_semiregular(const PermGroup& g, const std::vector<Point>& domain) {
  const auto& el = g.elements();
  const std::size_t n = g.degree();
  for (std::size_t i = 0; i < el.size(); ++i) {
    const Point* w = el[i];
    if (fixed_point_count(w, n) == n) continue;
    for (Point x : domain)
      if (w[x] == x) return false;
  }
  return true;
}

inline bool is_semiregular(const PermGroup& g) {
  std::vector<Point> all(g.degree());
  std::iota(all.begin(), all.end(), Point{0});
  return is_semiregular(g, all);
}

/// Closure of the subset selected by pred, grown in element order.
template <class Pred>
PermGroup subgroup_generated_by(const PermGroup& g, Pred pred, std::size_t cap = kDefaultOrderCap) {
  const std::size_t n = g.degree();
  auto compose = [n](const Point* a, const Point* b, Point* out) { compose_into(a, b, out, n); };
  IncrementalClosure<Point, decltype(compose)> closure(n, Perm::identity(n).images, compose, cap);
  const auto& el = g.elements();
  for (std::size_t i = 0; i < el.size(); ++i)
    if (pred(el[i]) && !closure.contains(el[i])) closure.add_generator(el[i]);
  std::vector<Perm> gens;
  for (const auto& w : closure.generators()) gens.push_back(Perm{w});
  return PermGroup::from_table(n, std::move(gens), closure.release());
}

/// D(G) and |G : D(G)|.
inline std::pair<PermGroup, std::uint64_t> derangement_subgroup(const PermGroup& g,
                                                                std::size_t cap = kDefaultOrderCap) {
  const std::size_t n = g.degree();
  PermGroup d = subgroup_generated_by(g, [n](const Point* w) { return is_derangement(w, n); }, cap);
  return {std::move(d), g.order() / d.order()};
}

}  // namespace derange
