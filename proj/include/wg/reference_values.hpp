#pragma once

// Published reference values, kept apart from anything computed so that
// comparisons are explicit. Indexed by b - 12 for b in 12..35.

#include <array>

#include "wg/errors.hpp"

namespace wg::reference {

inline constexpr int kVersion = 1;

/// Upper bounds C(b) < value, b = 12..35.
inline constexpr std::array<double, 24> kCBound = {
    0.681372, 0.430703, 0.408611, 0.649606, 0.496677, 0.386493, 0.621141, 0.651975,
    0.382485, 0.631281, 0.599447, 0.426621, 0.394069, 0.644773, 0.603438, 0.510736,
    0.615415, 0.502098, 0.660826, 0.403155, 0.656868, 0.635545, 0.669316, 0.547965};

/// Almost-prime orders r(b), b = 12..35.
inline constexpr std::array<unsigned, 24> kAlmostPrimeOrder = {
    6, 7, 7, 7, 8, 8, 8, 8, 9, 9, 9, 10, 10, 10, 11, 11, 11, 12, 12, 13, 13, 14, 15, 17};

/// Orders r(4, b) from the earlier formula, b = 12..35.
inline constexpr std::array<unsigned, 24> kLuMuOrder = {
    24, 27, 30, 34, 38, 42, 48, 53, 60, 67, 75, 84,
    96, 109, 124, 144, 168, 198, 240, 297, 384, 528, 816, 1680};

inline std::size_t index_of(unsigned b) {
  if (b < 12 || b > 35) throw domain_error("reference tables cover b = 12..35");
  return b - 12;
}

inline double c_bound(unsigned b) { return kCBound[index_of(b)]; }
inline unsigned almost_prime_order(unsigned b) { return kAlmostPrimeOrder[index_of(b)]; }
inline unsigned lumu_order(unsigned b) { return kLuMuOrder[index_of(b)]; }

}  // namespace wg::reference
