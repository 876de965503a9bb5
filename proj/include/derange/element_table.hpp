#pragma once

// Flat storage for group elements encoded as fixed-length word arrays, with an
// open-addressing hash index, plus BFS and coset-wise (Dimino) closure.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <optional>
#include <utility>
#include <vector>

#include "derange/errors.hpp"

namespace derange {

inline constexpr std::size_t kDefaultOrderCap = 20'000'000;

template <class Word>
class ElementTable {
 public:
  explicit ElementTable(std::size_t stride = 1) : stride_(stride) { slots_.assign(64, 0); }

  std::size_t stride() const { return stride_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  const Word* operator[](std::size_t i) const { return data_.data() + i * stride_; }
  std::vector<Word> copy(std::size_t i) const { return {(*this)[i], (*this)[i] + stride_}; }

  void reserve(std::size_t n) {
    data_.reserve(n * stride_);
    std::size_t want = 64;
    while (want < 2 * n) want *= 2;
    if (want > slots_.size()) rehash(want);
  }

  std::optional<std::size_t> find(const Word* w) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash(w) & mask;; s = (s + 1) & mask) {
      const std::uint32_t v = slots_[s];
      if (v == 0) return std::nullopt;
      if (equal((*this)[v - 1], w)) return v - 1;
    }
  }

  bool contains(const Word* w) const { return find(w).has_value(); }

  /// Inserts w unless present; returns (index, inserted). w must not point into this table.
  std::pair<std::size_t, bool> insert(const Word* w) {
    if (2 * (count_ + 1) > slots_.size()) rehash(slots_.size() * 2);
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = hash(w) & mask;
    for (;; s = (s + 1) & mask) {
      const std::uint32_t v = slots_[s];
      if (v == 0) break;
      if (equal((*this)[v - 1], w)) return {v - 1, false};
    }
    data_.insert(data_.end(), w, w + stride_);
    slots_[s] = static_cast<std::uint32_t>(++count_);
    return {count_ - 1, true};
  }

 private:
  std::uint64_t hash(const Word* w) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = 0; i < stride_; ++i) {
      h ^= static_cast<std::uint64_t>(w[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
  }

  bool equal(const Word* a, const Word* b) const { return std::memcmp(a, b, stride_ * sizeof(Word)) == 0; }

  void rehash(std::size_t new_size) {
    std::vector<std::uint32_t> fresh(new_size, 0);
    const std::size_t mask = new_size - 1;
    for (std::size_t i = 0; i < count_; ++i) {
      std::size_t s = hash((*this)[i]) & mask;
      while (fresh[s] != 0) s = (s + 1) & mask;
      fresh[s] = static_cast<std::uint32_t>(i + 1);
    }
    slots_ = std::move(fresh);
  }

  std::size_t stride_;
  std::size_t count_ = 0;
  std::vector<Word> data_;
  std::vector<std::uint32_t> slots_;
};

/// Breadth-first closure of the generators. Generators are sorted first so the
/// element order depends only on the generating set.
/// Compose(a, b, out) writes the product "a then b" into out.
template <class Word, class Compose>
ElementTable<Word> bfs_closure(std::size_t stride, const std::vector<Word>& identity,
                               std::vector<std::vector<Word>> gens, Compose&& compose,
                               std::size_t cap = kDefaultOrderCap) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  ElementTable<Word> table(stride);
  table.insert(identity.data());
  std::vector<Word> scratch(stride);
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (const auto& g : gens) {
      compose(table[i], g.data(), scratch.data());
      if (table.insert(scratch.data()).second && table.size() > cap) throw CapExceeded(table.size(), cap);
    }
  }
  return table;
}

/// Subgroup grown one generator at a time, stored as a union of right cosets
/// of the previous subgroup (Dimino's method).
template <class Word, class Compose>
class IncrementalClosure {
 public:
  IncrementalClosure(std::size_t stride, const std::vector<Word>& identity, Compose compose,
                     std::size_t cap = kDefaultOrderCap)
      : table_(stride), compose_(std::move(compose)), cap_(cap), scratch_(stride), scratch2_(stride) {
    table_.insert(identity.data());
  }

  const ElementTable<Word>& table() const { return table_; }
  ElementTable<Word> release() { return std::move(table_); }
  std::size_t size() const { return table_.size(); }
  bool contains(const Word* w) const { return table_.contains(w); }
  const std::vector<std::vector<Word>>& generators() const { return gens_; }

  /// Adjoins g; returns true iff the subgroup grew.
  bool add_generator(const Word* g) {
    if (table_.contains(g)) return false;
    const std::size_t stride = table_.stride();
    gens_.emplace_back(g, g + stride);
    const std::size_t old_size = table_.size();
    // Coset representatives of the old subgroup H inside the new one.
    std::vector<std::vector<Word>> reps{table_.copy(0)};
    auto add_coset = [&](const std::vector<Word>& x) {
      for (std::size_t h = 0; h < old_size; ++h) {
        compose_(table_[h], x.data(), scratch2_.data());
        table_.insert(scratch2_.data());
      }
      if (table_.size() > cap_) throw CapExceeded(table_.size(), cap_);
      reps.push_back(x);
    };
    add_coset(std::vector<Word>(g, g + stride));
    for (std::size_t r = 1; r < reps.size(); ++r) {
      for (std::size_t k = 0; k < gens_.size(); ++k) {
        compose_(reps[r].data(), gens_[k].data(), scratch_.data());
        if (!table_.contains(scratch_.data())) add_coset(scratch_);
      }
    }
    return true;
  }

 private:
  ElementTable<Word> table_;
  Compose compose_;
  std::size_t cap_;
  std::vector<Word> scratch_;
  std::vector<Word> scratch2_;
  std::vector<std::vector<Word>> gens_;
};

/// Closure of gens by successive Dimino extensions. Cheaper than bfs_closure when
/// there are many generators, since each element is produced about once.
template <class Word, class Compose>
ElementTable<Word> dimino_closure(std::size_t stride, const std::vector<Word>& identity,
                                  std::vector<std::vector<Word>> gens, Compose compose,
                                  std::size_t cap = kDefaultOrderCap) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  IncrementalClosure<Word, Compose> closure(stride, identity, std::move(compose), cap);
  for (const auto& g : gens) closure.add_generator(g.data());
  return closure.release();
}

}  // namespace derange
