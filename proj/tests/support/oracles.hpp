#pragma once

// Independent reference implementations used only by the tests. These are
// textbook algorithms (Freudenthal recursion, Racah-Speiser straightening,
// brute-force reflection-group closure) kept deliberately separate from the
// library code they cross-check; they include nothing beyond the root-system
// layer.

#include <map>
#include <vector>

#include "qflag/rootdata.hpp"

namespace oracle {

using qflag::Mat;
using qflag::Rat;
using qflag::RootSystemPtr;
using qflag::Weight;

struct WeightLess {
  bool operator()(const Weight& a, const Weight& b) const { return qflag::weight_lex_less(a, b); }
};
using WeightMap = std::map<Weight, long, WeightLess>;

// Dominant representative of the orbit of mu under the reflection group,
// found by straightening with simple reflections.
Weight dominant_representative(const Weight& mu);

// Full weight diagram of the irreducible module with highest weight lambda:
// every weight with its multiplicity, by Freudenthal's recursion.
WeightMap freudenthal_multiplicities(const RootSystemPtr& rs, const Weight& lambda);

long dimension_by_multiplicities(const RootSystemPtr& rs, const Weight& lambda);

// Decomposition of V(lambda) (x) V(mu) into irreducibles: map from dominant
// highest weight to multiplicity (Racah-Speiser signed straightening over the
// weight diagram of V(mu)).
WeightMap tensor_decomposition(const RootSystemPtr& rs, const Weight& lambda, const Weight& mu);

// Brute-force closure of the simple-reflection action on fundamental
// coordinates. mats[0] is the identity; lengths are Cayley-graph distances
// (= Coxeter lengths); words are geodesic words with 1-based letters.
struct BruteWeyl {
  std::vector<Mat<long>> mats;
  std::vector<int> lengths;
  std::vector<std::vector<int>> words;
};
BruteWeyl brute_weyl(const RootSystemPtr& rs, size_t cap = 60000);

Weight apply_matrix(const Mat<long>& m, const Weight& w);

// Index of m in the closure list, or -1.
int find_matrix(const BruteWeyl& bw, const Mat<long>& m);

// Minimal-length representatives of the cosets w W_S, chosen by comparing
// lengths within each coset (S: 1-based node indices).
std::vector<int> brute_min_coset_reps(const RootSystemPtr& rs, const BruteWeyl& bw,
                                      const std::vector<int>& S);

}  // namespace oracle
