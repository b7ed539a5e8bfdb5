#pragma once

#include "projektor/rng.hpp"
#include "projektor/subspace.hpp"

namespace projektor {

inline Vec random_gaussian(int n, CounterRng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

inline Vec random_unit(int n, CounterRng& rng) {
  Vec v = random_gaussian(n, rng);
  while (v.norm() == 0.0) v = random_gaussian(n, rng);
  return v / v.norm();
}

inline Subspace random_subspace(int n, int d, CounterRng& rng) {
  Mat cols(n, d);
  for (int j = 0; j < d; ++j) cols.col(j) = random_gaussian(n, rng);
  return make_subspace(cols);
}

}  // namespace projektor
