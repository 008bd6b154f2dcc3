#pragma once

#include <utility>
#include <vector>

#include "qflag/rootdata.hpp"

namespace qflag {

// An element of the Weyl group, carried as a reduced word together with its
// action matrix on fundamental weight coordinates. Equality is always decided
// by the action matrix (braid relations make word identity unreliable).
struct WeylWord {
  RootSystemPtr rs;
  std::vector<int> letters;  // 1-based simple reflection indices, reduced
  Mat<long> action;          // weight coords are mapped by action * coords

  int length() const { return (int)letters.size(); }
  bool is_identity() const { return letters.empty(); }
};

bool weyl_equal(const WeylWord& a, const WeylWord& b);

WeylWord identity_word(const RootSystemPtr& rs);

// Normal form of an arbitrary word in the generators. If the input is already
// reduced it is kept verbatim (downstream constructions depend on the chosen
// reduced expression); otherwise the lexicographically least reduced word for
// the same element is produced.
WeylWord reduce(const RootSystemPtr& rs, const std::vector<int>& letters);

// Lexicographically least reduced word with the given action matrix.
WeylWord word_from_action(const RootSystemPtr& rs, const Mat<long>& m);

Weight act(const WeylWord& w, const Weight& mu);

WeylWord compose(const WeylWord& a, const WeylWord& b);  // group product a*b
WeylWord inverse_word(const WeylWord& w);

// Number of positive roots sent negative by the action matrix.
int inversion_count(const RootSystemPtr& rs, const Mat<long>& m);

// Breadth-first enumeration of the full group; words come out reduced and
// lexicographically least, ordered by (length, word). Throws std::runtime_error
// if the group exceeds `cap` elements.
std::vector<WeylWord> enumerate_weyl(const RootSystemPtr& rs, size_t cap = 51840);

WeylWord longest_element(const RootSystemPtr& rs);

struct ParabolicData {
  std::vector<int> S;  // 1-based node indices, sorted
  long W_S_order = 0;
  std::vector<WeylWord> minimal_reps;  // minimal-length coset representatives of W/W_S
};

// Representatives characterized by w(alpha_j) > 0 for all j in S. S must be a
// proper subset of the nodes (S = all nodes is rejected, S = {} allowed).
ParabolicData minimal_coset_reps(const RootSystemPtr& rs, const std::vector<int>& S,
                                 size_t cap = 51840);

// Unique factorization w = (u, v) with u a minimal coset representative for S
// and v in the subgroup W_S; lengths add.
std::pair<WeylWord, WeylWord> parabolic_decompose(const WeylWord& w, const std::vector<int>& S);

// For a reduced word w = s_{i_1} ... s_{i_l}: the sequence
// gamma_k = s_{i_l} s_{i_{l-1}} ... s_{i_{k+1}} (alpha_{i_k}), k = 1..l.
// As a set this is R+ intersected with w^{-1} R-.
std::vector<Weight> gamma_sequence(const WeylWord& w);

// The unique dominant weight in the W-orbit of mu (reflect at a negative
// pairing until none remains; terminates because the height rises).
Weight dominant_representative(const Weight& mu);

std::string weyl_word_str(const WeylWord& w);  // e.g. "s1 s2" or "e"

}  // namespace qflag
