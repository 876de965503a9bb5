#pragma once

// A permutation group stored as G = K * T, where K is the stabilizer of point 0
// (enumerated explicitly) and T holds one inverse transversal element per point
// of the orbit of 0. Every element is visited exactly once as k*t_b, which is
// how large transitive groups such as affine groups on thousands of points are
// scanned without materializing |G| * n words.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "derange/element_table.hpp"
#include "derange/parallel.hpp"
#include "derange/perm.hpp"

namespace derange {

class SplitPermGroup {
 public:
  explicit SplitPermGroup(std::size_t degree, std::vector<Perm> gens = {}, std::size_t cap = kDefaultOrderCap)
      : degree_(degree), cap_(cap), gens_(std::move(gens)) {
    if (degree == 0 || degree > kDegreeCeiling) throw std::invalid_argument("SplitPermGroup: bad degree");
    for (const auto& g : gens_)
      if (g.degree() != degree) throw std::invalid_argument("SplitPermGroup: generator degree mismatch");
    rebuild();
  }

  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }
  std::uint64_t order() const { return std::uint64_t{orbit_.size()} * stab_->size(); }
  std::size_t orbit_size() const { return orbit_.size(); }
  std::size_t stabilizer_order() const { return stab_->size(); }
  bool transitive() const { return orbit_.size() == degree_; }

  bool contains(const Perm& x) const { return contains(x.images.data()); }

  bool contains(const Point* x) const {
    const Point b = x[0];
    const std::size_t slot = slot_of_[b];
    if (slot == kNone) return false;
    const Point* tinv = tinv_row(slot);
    thread_local std::vector<Point> k;
    k.resize(degree_);
    for (std::size_t i = 0; i < degree_; ++i) k[i] = tinv[x[i]];
    return stab_->contains(k.data());
  }

  /// Adjoins g and rebuilds; returns true iff the group grew.
  bool add_generator(const Perm& g) {
    if (contains(g)) return false;
    gens_.push_back(g);
    rebuild();
    return true;
  }

  /// Calls fn(const Point* element) for every element, ordered by orbit point then stabilizer index.
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::vector<Point> t(degree_), x(degree_);
    for (std::size_t s = 0; s < orbit_.size(); ++s) {
      invert_row(tinv_row(s), t.data());
      for (std::size_t k = 0; k < stab_->size(); ++k) {
        compose_into((*stab_)[k], t.data(), x.data(), degree_);
        fn(x.data());
      }
    }
  }

  /// Number of elements with no fixed point. k*t_b fixes i iff k(i) = t_b^{-1}(i).
  std::uint64_t derangement_count() const {
    return parallel_sum(orbit_.size(), [&](std::size_t lo, std::size_t hi) {
      std::uint64_t c = 0;
      for (std::size_t s = lo; s < hi; ++s) {
        const Point* tinv = tinv_row(s);
        for (std::size_t k = 0; k < stab_->size(); ++k) {
          const Point* kk = (*stab_)[k];
          bool fixes = false;
          for (std::size_t i = 0; i < degree_ && !fixes; ++i) fixes = (kk[i] == tinv[i]);
          c += !fixes;
        }
      }
      return c;
    });
  }

  /// result[j] = number of elements with exactly j fixed points.
  std::vector<std::uint64_t> fixed_point_histogram() const {
    std::vector<std::uint64_t> hist(degree_ + 1, 0);
    for (std::size_t s = 0; s < orbit_.size(); ++s) {
      const Point* tinv = tinv_row(s);
      for (std::size_t k = 0; k < stab_->size(); ++k) {
        const Point* kk = (*stab_)[k];
        std::size_t c = 0;
        for (std::size_t i = 0; i < degree_; ++i) c += (kk[i] == tinv[i]);
        ++hist[c];
      }
    }
    return hist;
  }

 private:
  static constexpr std::size_t kNone = SIZE_MAX;

  const Point* tinv_row(std::size_t slot) const { return tinv_.data() + slot * degree_; }

  void invert_row(const Point* a, Point* out) const {
    for (std::size_t i = 0; i < degree_; ++i) out[a[i]] = static_cast<Point>(i);
  }

  void rebuild() {
    const std::size_t n = degree_;
    orbit_.assign(1, 0);
    slot_of_.assign(n, kNone);
    slot_of_[0] = 0;
    tinv_ = Perm::identity(n).images;
    std::vector<Perm> ginv;
    for (const auto& g : gens_) ginv.push_back(inverse(g));
    // Orbit of 0 with inverse transversals: t_c = t_b * g, so t_c^{-1}(i) = t_b^{-1}(g^{-1}(i)).
    for (std::size_t s = 0; s < orbit_.size(); ++s) {
      const Point b = orbit_[s];
      for (std::size_t k = 0; k < gens_.size(); ++k) {
        const Point c = gens_[k](b);
        if (slot_of_[c] != kNone) continue;
        slot_of_[c] = orbit_.size();
        orbit_.push_back(c);
        const std::size_t base = tinv_.size();
        tinv_.resize(base + n);
        const Point* tb = tinv_.data() + s * n;
        for (std::size_t i = 0; i < n; ++i) tinv_[base + i] = tb[ginv[k](static_cast<Point>(i))];
      }
    }
    // Stabilizer of 0 from Schreier generators t_b * g * t_{g(b)}^{-1}.
    auto compose = [n](const Point* a, const Point* b, Point* out) { compose_into(a, b, out, n); };
    IncrementalClosure<Point, decltype(compose)> stab(n, Perm::identity(n).images, compose, cap_);
    std::vector<Point> tb(n), sg(n);
    for (std::size_t s = 0; s < orbit_.size(); ++s) {
      invert_row(tinv_row(s), tb.data());
      for (const auto& g : gens_) {
        const Point* tc = tinv_row(slot_of_[g(orbit_[s])]);
        for (std::size_t i = 0; i < n; ++i) sg[i] = tc[g(tb[i])];
        if (!stab.contains(sg.data())) {
          stab.add_generator(sg.data());
          if (std::uint64_t{stab.size()} * orbit_.size() > cap_)
            throw CapExceeded(stab.size() * orbit_.size(), cap_);
        }
      }
    }
    stab_ = std::make_shared<ElementTable<Point>>(stab.release());
  }

  std::size_t degree_;
  std::size_t cap_;
  std::vector<Perm> gens_;
  std::vector<Point> orbit_;
  std::vector<std::size_t> slot_of_;
  std::vector<Point> tinv_;
  std::shared_ptr<ElementTable<Point>> stab_;
};

/// |G : D(G)| for a group in split form, growing D one derangement at a time.
inline std::uint64_t derangement_subgroup_index(const SplitPermGroup& g, std::size_t cap = kDefaultOrderCap) {
  const std::size_t n = g.degree();
  SplitPermGroup d(n, {}, cap);
  g.for_each([&](const Point* x) {
    if (is_derangement(x, n) && !d.contains(x)) d.add_generator(Perm{std::vector<Point>(x, x + n)});
  });
  return g.order() / d.order();
}

}  // namespace derange
