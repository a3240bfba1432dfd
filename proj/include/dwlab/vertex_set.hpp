#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace dwlab {

using VertexId = int;

/// Upper bound on the number of vertices of a graph handled by the library.
inline constexpr int kMaxVertices = 256;

/// Fixed-width bitset over vertex ids.
///
/// Every game position, bag and territory is a VertexSet, so the type is kept
/// trivially copyable and hashable.
class VertexSet {
 public:
  static constexpr int kWords = kMaxVertices / 64;

  constexpr VertexSet() = default;
  VertexSet(std::initializer_list<VertexId> ids) {
    for (VertexId v : ids) insert(v);
  }

  static VertexSet range(int n) {
    VertexSet s;
    for (int w = 0; w < kWords && n > 0; ++w, n -= 64)
      s.words_[w] = n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    return s;
  }
  static VertexSet from(const std::vector<VertexId>& ids) {
    VertexSet s;
    for (VertexId v : ids) s.insert(v);
    return s;
  }

  void insert(VertexId v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void erase(VertexId v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool contains(VertexId v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }

  int size() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const { return !empty(); }

  /// Smallest member, or -1 when empty.
  VertexId first() const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return -1;
  }

  bool subset_of(const VertexSet& o) const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  bool intersects(const VertexSet& o) const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }

  VertexSet& operator|=(const VertexSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  VertexSet& operator-=(const VertexSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] &= ~o.words_[w];
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

  template <typename F>
  void for_each(F&& f) const {
    for (int w = 0; w < kWords; ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(static_cast<VertexId>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<VertexId> to_vector() const {
    std::vector<VertexId> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](VertexId v) { out.push_back(v); });
    return out;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }

  const std::array<std::uint64_t, kWords>& words() const { return words_; }

 private:
  std::array<std::uint64_t, kWords> words_{};
};

/// Lexicographic order on the sorted member lists ({0,5} < {1} < {1,2}).
inline bool lex_less(const VertexSet& a, const VertexSet& b) {
  auto va = a.to_vector();
  auto vb = b.to_vector();
  return va < vb;
}

struct VertexSetHash {
  std::size_t operator()(const VertexSet& s) const { return s.hash(); }
};

}  // namespace dwlab
