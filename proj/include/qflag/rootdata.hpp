#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qflag/linalg.hpp"
#include "qflag/rational.hpp"

namespace qflag {

struct RootSystem;
using RootSystemPtr = std::shared_ptr<const RootSystem>;

// A weight, stored as exact-rational coordinates in the fundamental-weight
// basis; integral coordinates <=> member of the weight lattice P.
struct Weight {
  RootSystemPtr rs;
  std::vector<Rat> c;

  Weight() = default;
  Weight(RootSystemPtr r, std::vector<Rat> coords) : rs(std::move(r)), c(std::move(coords)) {}

  bool is_zero() const {
    for (const auto& x : c)
      if (x != 0) return false;
    return true;
  }
};

Weight operator+(const Weight& a, const Weight& b);
Weight operator-(const Weight& a, const Weight& b);
Weight operator-(const Weight& a);
Weight operator*(const Rat& s, const Weight& a);
bool operator==(const Weight& a, const Weight& b);
bool operator!=(const Weight& a, const Weight& b);
// Deterministic total order (lexicographic on coordinates); used for map keys
// and canonical output ordering, NOT the dominance order.
bool weight_lex_less(const Weight& a, const Weight& b);

struct RootSystem : std::enable_shared_from_this<RootSystem> {
  char type_letter = '?';
  int rank = 0;
  Mat<long> cartan;                  // a_ij = (alpha_j, alpha_i^vee)
  std::vector<long> d;               // d_i = (alpha_i,alpha_i)/2, in {1,2,3}
  Mat<Rat> inv_cartan;               // exact inverse of the Cartan matrix
  Mat<Rat> fund_inner;               // (pi_i, pi_j) = d_j (A^{-1})_{ij}
  std::vector<Weight> simple_roots;      // fundamental-basis coords (columns of cartan)
  std::vector<Weight> fundamental_weights;
  std::vector<Weight> positive_roots;    // closed under the root-string rule
  Weight rho;                            // = sum of fundamental weights

  RootSystemPtr ptr() const { return shared_from_this(); }
};

// Standard Cartan data, Bourbaki numbering. Valid (letter, rank): A l>=1,
// B l>=2, C l>=2, D l>=3, E 6/7/8, F 4, G 2. Throws std::invalid_argument
// otherwise.
RootSystemPtr build_root_system(char type_letter, int rank);

Weight make_weight(const RootSystemPtr& rs, std::vector<Rat> coords);
Weight make_weight_int(const RootSystemPtr& rs, const std::vector<long>& coords);
Weight zero_weight(const RootSystemPtr& rs);

// The invariant symmetric bilinear form, normalized so short roots have
// squared length 2. Throws on mismatched root systems.
Rat inner(const Weight& mu, const Weight& nu);

// (mu, alpha^vee) = 2 (mu, alpha) / (alpha, alpha).
Rat pair_coroot(const Weight& mu, const Weight& alpha);

// nu - mu is a nonnegative integer combination of simple roots.
bool dominance_leq(const Weight& mu, const Weight& nu);

bool in_weight_lattice(const Weight& mu);   // all (mu, alpha_i^vee) integers
bool is_dominant(const Weight& mu);         // all pairings >= 0 (and integral)
bool is_regular_dominant(const Weight& mu); // all pairings > 0

// Coordinates of mu in the simple-root basis (exact rationals).
std::vector<Rat> simple_root_coords(const Weight& mu);
// Sum of simple-root coordinates; integer for elements of the root lattice.
Rat height(const Weight& mu);

// Weyl dimension formula prod (lambda+rho, alpha) / (rho, alpha); exact, and
// checked to be a positive integer.
long weyl_dimension(const RootSystemPtr& rs, const Weight& lambda);
// Same formula over the sub-root-system R_S (S = node indices, 1-based).
long weyl_dimension_levi(const RootSystemPtr& rs, const std::vector<int>& S, const Weight& mu);

// Positive roots of the parabolic subsystem R_S^+ (supported on S).
std::vector<Weight> positive_roots_levi(const RootSystemPtr& rs, const std::vector<int>& S);

// epsilon-coordinate realizations for the classical types (A: l+1 coords,
// B/C/D: l coords), matching the usual orthonormal realization; the B-family
// form is scaled so that short roots keep squared length 2.
std::vector<Rat> eps_from_weight(const Weight& mu);
Weight weight_from_eps(const RootSystemPtr& rs, const std::vector<Rat>& eps);

// Structured-text serialization (key=value lines) for CLI output and caching.
std::string root_system_to_text(const RootSystem& rs);

std::string weight_str(const Weight& mu);  // comma-separated fundamental coords

}  // namespace qflag
