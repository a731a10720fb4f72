#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "multigiant/degree_model.hpp"

namespace fixtures {

using multigiant::DegreeSpec;
using multigiant::DegreeVector;
using multigiant::Mass;
using multigiant::Rational;
using multigiant::SpecAtom;

inline Mass q(long a, long b) { return Mass::exact(Rational(a, b)); }

// p_1^{(0,1)} = 1/4, p_1^{(0,3)} = 1/4, p_2^{(2,0)} = 1/2; gamma = sqrt(1.5), eta = 23/27.
inline DegreeSpec bipartite() {
  return DegreeSpec(2, {{0, {0, 1}, q(1, 4)}, {0, {0, 3}, q(1, 4)}, {1, {2, 0}, q(1, 2)}});
}

// Same support, mu_1221 = 1 and mu_2112 = 0.6; gamma = sqrt(0.6).
inline DegreeSpec subcritical() {
  return DegreeSpec(2, {{0, {0, 1}, q(7, 13)}, {0, {0, 3}, q(1, 13)}, {1, {2, 0}, q(5, 13)}});
}

// Two copies of the bipartite spec on parts {1,2} and {3,4}.
inline DegreeSpec disjoint_bipartite() {
  return DegreeSpec(4, {{0, {0, 1, 0, 0}, q(1, 8)},
                        {0, {0, 3, 0, 0}, q(1, 8)},
                        {1, {2, 0, 0, 0}, q(1, 4)},
                        {2, {0, 0, 0, 1}, q(1, 8)},
                        {2, {0, 0, 0, 3}, q(1, 8)},
                        {3, {0, 0, 2, 0}, q(1, 4)}});
}

// Single part, degrees 1 and 3 with equal mass.
inline DegreeSpec unipartite() { return DegreeSpec(1, {{0, {1}, q(1, 2)}, {0, {3}, q(1, 2)}}); }

// Three parts with within-part edges and isolated vertices.
inline DegreeSpec tripartite() {
  return DegreeSpec(3, {{0, {2, 1, 0}, q(1, 6)},
                        {0, {0, 0, 0}, q(1, 12)},
                        {0, {1, 0, 1}, q(1, 12)},
                        {1, {1, 1, 1}, q(1, 6)},
                        {1, {0, 2, 0}, q(1, 12)},
                        {1, {0, 0, 0}, q(1, 6)},
                        {2, {0, 1, 2}, q(1, 12)},
                        {2, {1, 1, 0}, q(1, 12)},
                        {2, {0, 0, 0}, q(1, 12)}});
}

// Random valid two-part spec with part-1 degrees (0,j) and part-2 degrees
// (k,0), exact masses, lambda balanced by construction.
inline DegreeSpec random_bipartite(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> support(1, 3), degree(1, 5), weight(1, 9);
  auto draw = [&](std::vector<int>& ds, std::vector<long>& ws) {
    const int k = support(rng);
    while (static_cast<int>(ds.size()) < k) {
      const int d = degree(rng);
      if (std::find(ds.begin(), ds.end(), d) != ds.end()) continue;
      ds.push_back(d);
      ws.push_back(weight(rng));
    }
  };
  std::vector<int> dj, dk;
  std::vector<long> wj, wk;
  draw(dj, wj);
  draw(dk, wk);
  // Raw masses a_j (part 1) and b_k (part 2); scale part 2 by s so that
  // sum j a_j = s sum k b_k, then normalise both together.
  Rational mean1 = 0, mean2 = 0, w1 = 0, w2 = 0;
  for (std::size_t t = 0; t < dj.size(); ++t) {
    mean1 += Rational(wj[t]) * dj[t];
    w1 += wj[t];
  }
  for (std::size_t t = 0; t < dk.size(); ++t) {
    mean2 += Rational(wk[t]) * dk[t];
    w2 += wk[t];
  }
  const Rational s = mean1 / mean2;
  const Rational total = w1 + s * w2;
  std::vector<SpecAtom> atoms;
  for (std::size_t t = 0; t < dj.size(); ++t) atoms.push_back({0, {0, dj[t]}, Mass::exact(Rational(wj[t]) / total)});
  for (std::size_t t = 0; t < dk.size(); ++t) atoms.push_back({1, {dk[t], 0}, Mass::exact(s * wk[t] / total)});
  return DegreeSpec(2, std::move(atoms));
}

} // namespace fixtures
