#include "mcover/element_set.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace mcover {

ElementSet::ElementSet(std::size_t universe)
    : universe_(universe), words_((universe + 63) / 64, 0) {}

ElementSet::ElementSet(std::size_t universe, std::initializer_list<Index> members)
    : ElementSet(universe) {
  for (Index e : members) insert(e);
}

ElementSet ElementSet::from_indices(std::size_t universe, std::span<const Index> members) {
  ElementSet s(universe);
  for (Index e : members) s.insert(e);
  return s;
}

ElementSet ElementSet::from_mask(std::size_t universe, std::uint64_t mask) {
  if (universe > 64) throw std::invalid_argument("from_mask: universe exceeds 64");
  ElementSet s(universe);
  if (universe == 0) return s;
  const std::uint64_t keep = universe == 64 ? ~0ULL : ((1ULL << universe) - 1);
  s.words_[0] = mask & keep;
  return s;
}

ElementSet ElementSet::full(std::size_t universe) {
  ElementSet s(universe);
  for (std::size_t w = 0; w < s.words_.size(); ++w) s.words_[w] = ~0ULL;
  if (universe % 64 != 0) s.words_.back() = (1ULL << (universe % 64)) - 1;
  return s;
}

void ElementSet::check_index(Index e) const {
  if (e >= universe_) {
    throw std::out_of_range("element " + std::to_string(e) + " outside ground set of size " +
                            std::to_string(universe_));
  }
}

void ElementSet::insert(Index e) {
  check_index(e);
  words_[e >> 6] |= 1ULL << (e & 63);
}

void ElementSet::erase(Index e) {
  check_index(e);
  words_[e >> 6] &= ~(1ULL << (e & 63));
}

void ElementSet::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t ElementSet::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool ElementSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

void ElementSet::unite(const ElementSet& other) {
  if (other.universe_ != universe_) throw std::invalid_argument("unite: universe mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
}

void ElementSet::intersect(const ElementSet& other) {
  if (other.universe_ != universe_) throw std::invalid_argument("intersect: universe mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
}

void ElementSet::subtract(const ElementSet& other) {
  if (other.universe_ != universe_) throw std::invalid_argument("subtract: universe mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
}

bool ElementSet::is_subset_of(const ElementSet& other) const {
  if (other.universe_ != universe_) return false;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

std::vector<Index> ElementSet::indices() const {
  std::vector<Index> out;
  out.reserve(size());
  for_each([&](Index e) { out.push_back(e); });
  return out;
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  ElementSet out = a;
  out.unite(b);
  return out;
}

bool lex_less(const ElementSet& a, const ElementSet& b) {
  const auto ia = a.indices();
  const auto ib = b.indices();
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

}  // namespace mcover
