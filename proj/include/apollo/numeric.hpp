#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace apollo {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Exact square root when the argument is a perfect square, empty otherwise.
std::optional<Int> exact_sqrt(const Int& n);
std::optional<Rat> exact_sqrt(const Rat& r);

// Largest integer <= r and strict predicate helpers for cutoff comparisons.
Int floor_rat(const Rat& r);

// True iff the integer k satisfies k < r, decided exactly.
bool int_less_than(const Int& k, const Rat& r);

double to_double(const Rat& r);

// "p/q" when the denominator is not 1, plain integer string otherwise.
std::string rat_to_string(const Rat& r);

// Accepts "p/q", plain integers, and decimal literals such as "1.5" or "2e3".
Rat parse_rational(const std::string& text);

}  // namespace apollo
