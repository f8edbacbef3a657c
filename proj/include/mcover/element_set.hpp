#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mcover {

using Index = std::size_t;

// Dense bitset over a ground set {0, ..., universe-1}.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe);
  ElementSet(std::size_t universe, std::initializer_list<Index> members);

  static ElementSet from_indices(std::size_t universe, std::span<const Index> members);
  // Low 64 elements taken from `mask`; universe must be <= 64.
  static ElementSet from_mask(std::size_t universe, std::uint64_t mask);
  static ElementSet full(std::size_t universe);

  std::size_t universe() const { return universe_; }
  bool contains(Index e) const {
    return (words_[e >> 6] >> (e & 63)) & 1ULL;
  }
  void insert(Index e);
  void erase(Index e);
  void clear();
  // Overwrites the low word; universe must be <= 64 and `mask` must fit in it.
  void assign_mask(std::uint64_t mask) {
    if (!words_.empty()) words_[0] = mask;
  }

  std::size_t size() const;
  bool empty() const;

  void unite(const ElementSet& other);
  void intersect(const ElementSet& other);
  void subtract(const ElementSet& other);
  bool is_subset_of(const ElementSet& other) const;

  // Low 64 bits; only meaningful when universe <= 64.
  std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

  std::vector<Index> indices() const;
  std::span<const std::uint64_t> words() const { return words_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        fn(static_cast<Index>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  void check_index(Index e) const;

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

ElementSet set_union(const ElementSet& a, const ElementSet& b);

// Lexicographic order on sorted index lists; the tie-break used by the brute-force oracles.
bool lex_less(const ElementSet& a, const ElementSet& b);

}  // namespace mcover
