#pragma once

#include "digitlens/digit_system.hpp"

namespace testsys {

inline digitlens::DigitSystem cantor(int l = 0) { return digitlens::DigitSystem::one_dim(3, {0, 2}, l); }

inline digitlens::DigitSystem carpet(int l = 0) {
  std::vector<digitlens::DigitTuple> d;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != 1 || j != 1) d.push_back({i, j});
  return digitlens::DigitSystem(3, 2, d, l);
}

// {0..m-1}^n in base p.
inline digitlens::DigitSystem box(int p, int m, int n) {
  return digitlens::DigitSystem::rectangle(p, std::vector<std::pair<int, int>>(static_cast<std::size_t>(n), {0, m - 1}));
}

inline digitlens::DigitSystem prefix(int p, int m) {
  std::vector<int> d;
  for (int i = 0; i < m; ++i) d.push_back(i);
  return digitlens::DigitSystem::one_dim(p, d);
}

}  // namespace testsys
