#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace haltlab {

// A finite binary string. Stored as '0'/'1' characters; the empty string is a
// first-class value. BinStr deliberately has no operator< — plain
// lexicographic and length-lexicographic order are different things here and
// call sites must say which one they mean (lex_rank / llex_index / LlexLess).
struct BinStr {
  std::string s;

  BinStr() = default;
  explicit BinStr(std::string raw) : s(std::move(raw)) {
    for (char c : s)
      if (c != '0' && c != '1') throw std::invalid_argument("BinStr: not a bit");
  }

  std::size_t size() const { return s.size(); }
  bool empty() const { return s.empty(); }
  int bit(std::size_t i) const { return s[i] - '0'; }
  void push_bit(int b) { s.push_back(b ? '1' : '0'); }

  bool operator==(const BinStr& o) const { return s == o.s; }
  bool operator!=(const BinStr& o) const { return s != o.s; }
};

struct BinStrHash {
  std::size_t operator()(const BinStr& b) const { return std::hash<std::string>{}(b.s); }
};

namespace codec {

// Length-lexicographic bijection between N and binary strings:
// 0 <-> "", 1 <-> "0", 2 <-> "1", 3 <-> "00", ...
// index 2^(n+1)-2 is the all-ones string of length n, and
// |string_of(i)| == floor(log2(i+1)).
inline BinStr index_to_string(std::uint64_t i) {
  std::uint64_t v = i + 1;
  int n = 0;
  while ((v >> (n + 1)) != 0) ++n;  // n = floor(log2(i+1))
  BinStr out;
  for (int k = n - 1; k >= 0; --k) out.push_bit((v >> k) & 1);
  return out;
}

inline std::uint64_t string_to_index(const BinStr& b) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < b.size(); ++i) v = (v << 1) | std::uint64_t(b.bit(i));
  return v - 1;
}

// Rank of b among the 2^|b| strings of its own length, in plain lex order.
inline std::uint64_t lex_rank(const BinStr& b) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < b.size(); ++i) r = (r << 1) | std::uint64_t(b.bit(i));
  return r;
}

inline BinStr nth_of_length(std::uint64_t rank, int len) {
  BinStr out;
  for (int k = len - 1; k >= 0; --k) out.push_bit((rank >> k) & 1);
  return out;
}

// Self-delimiting frame: every payload bit doubled, then the stop mark "01".
// encode("") == "01", encode("1") == "1101", encode("10") == "110001".
// The frame for p costs 2|p| + 2 bits, so |encode(p) + x| == |x| + 2|p| + 2.
inline BinStr encode_selfdelim(const BinStr& p) {
  BinStr out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    int b = p.bit(i);
    out.push_bit(b);
    out.push_bit(b);
  }
  out.push_bit(0);
  out.push_bit(1);
  return out;
}

struct Frame {
  BinStr payload;
  BinStr rest;
};

// Reads one frame off the front of q. Returns nothing when no well-formed
// frame is present (odd-length prefix, or the string ends before "01").
inline std::optional<Frame> decode_selfdelim(const BinStr& q) {
  Frame f;
  std::size_t i = 0;
  for (;;) {
    if (i + 2 > q.size()) return std::nullopt;  // ran out before the stop mark
    int a = q.bit(i), b = q.bit(i + 1);
    i += 2;
    if (a == b) {
      f.payload.push_bit(a);
    } else if (a == 0 && b == 1) {
      f.rest = BinStr(q.s.substr(i));
      return f;
    } else {
      return std::nullopt;  // "10" is not a valid pair
    }
  }
}

}  // namespace codec

// Comparator for length-lexicographic order (the canonical program order).
struct LlexLess {
  bool operator()(const BinStr& a, const BinStr& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.s < b.s;
  }
};

}  // namespace haltlab
