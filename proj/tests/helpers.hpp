#pragma once

#include <string>
#include <vector>

#include "fillinglab/cusped.hpp"
#include "fillinglab/fixture.hpp"
#include "oracles.hpp"

namespace testing_support {

// FIX1 group element as an oracle word (x = factor 0, y = factor 1).
inline oracle::Word to_word(const fillinglab::GroupElement& g) {
  oracle::Word w;
  for (const auto& s : g.syllables()) w.syl.emplace_back(s.factor == 0 ? 'x' : 'y', s.value.at(0));
  return w;
}

inline oracle::CuspedXY::Vertex to_oracle(const fillinglab::CuspedVertex& v) { return {to_word(v.g), v.depth}; }

inline std::vector<double> to_double(const std::vector<std::int32_t>& t) { return {t.begin(), t.end()}; }

}  // namespace testing_support
