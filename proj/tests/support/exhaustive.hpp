#pragma once

// Unpruned counting: classify every admissible depth-k cell.

#include "digitlens/counting.hpp"

#include "oracles.hpp"

namespace oracle {

struct Tally {
  std::uint64_t inside = 0, straddle = 0;
};

inline Tally exhaustive_count(const std::vector<int>& bases, const std::vector<Digits>& levels,
                              const digitlens::ManifoldSpec& m, double delta, int depth,
                              const std::vector<digitlens::kernels::IndexWindow>& window = {}) {
  Tally t;
  for (const auto& c : all_cells(bases, levels, depth)) {
    bool in_window = true;
    for (std::size_t a = 0; a < window.size(); ++a) {
      in_window = in_window && c.idx[a] >= window[a].lo && c.idx[a] < window[a].hi;
    }
    if (!in_window) continue;
    switch (digitlens::cell_vs_neighborhood(m, delta, box_of(c, bases))) {
      case digitlens::Relation::inside: ++t.inside; break;
      case digitlens::Relation::straddle: ++t.straddle; break;
      case digitlens::Relation::outside: break;
    }
  }
  return t;
}

inline Digits full_digits(const std::vector<int>& bases) {
  Digits out{{}};
  for (int p : bases) {
    Digits next;
    for (const auto& d : out) {
      for (int i = 0; i < p; ++i) {
        auto e = d;
        e.push_back(i);
        next.push_back(e);
      }
    }
    out = std::move(next);
  }
  return out;
}

// Per-level digit sets of a single-base system with free prefix l.
inline std::vector<Digits> levels_of(const digitlens::DigitSystem& s) {
  std::vector<Digits> lv;
  const std::vector<int> bases(static_cast<std::size_t>(s.dim()), s.base());
  for (int j = 0; j < s.free_prefix(); ++j) lv.push_back(full_digits(bases));
  lv.push_back(s.digits());
  return lv;
}

// Product of one-dimensional digit sets (no free prefix).
inline Digits product_digits(const std::vector<digitlens::DigitSystem>& f) {
  Digits out{{}};
  for (const auto& s : f) {
    Digits next;
    for (const auto& d : out) {
      for (const auto& e : s.digits()) {
        auto x = d;
        x.push_back(e[0]);
        next.push_back(x);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace oracle
