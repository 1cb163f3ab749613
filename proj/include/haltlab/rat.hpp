#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace haltlab {

// Exact rational arithmetic. Everything statistical in this project is a
// ratio of counts, so there is no floating point anywhere.
using Rat = boost::rational<long long>;

inline Rat rat(long long num, long long den) { return Rat(num, den); }

// num / 2^pow
inline Rat dyadic(long long num, int pow) {
  if (pow < 0 || pow > 62) throw std::invalid_argument("dyadic: pow out of range");
  return Rat(num, 1LL << pow);
}

// Smallest integer >= r.
inline long long ceil_of(const Rat& r) {
  long long q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

// Largest integer <= r.
inline long long floor_of(const Rat& r) {
  long long q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

inline std::string to_string(const Rat& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Parses "num/den" (den optional, defaults to 1). Used by the CLI.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(std::stoll(s), 1);
  long long num = std::stoll(s.substr(0, slash));
  long long den = std::stoll(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("parse_rat: zero denominator");
  return Rat(num, den);
}

}  // namespace haltlab
