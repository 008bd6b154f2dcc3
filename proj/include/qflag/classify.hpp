#pragma once

#include <string>
#include <vector>

#include "qflag/flagalg.hpp"
#include "qflag/fockrep.hpp"

namespace qflag {

// Machine-checked verdicts for the structural properties of the truncated
// representations pi_sigma: kernel membership patterns, the dimension of the
// top eigenspace of the extreme diagonal operator, inequivalence of distinct
// cells, factorization under restriction to the invariant subalgebra, vacuum
// moment patterns, and the diagonal commutation ladder.
//
// Tolerances: claims about truncation-exact diagonal entries are held to
// 1e-12; claims about assembled operator products to 1e-9; windowed norms
// that must vanish to 1e-10, with nonvanishing certified above 1e-6. All
// residuals are measured inside the safe window only.

struct Verdict {
  std::string claim;       // machine id of the property checked
  std::string parameters;  // key=value summary of the inputs
  bool pass = false;
  double worst_residual = 0.0;  // largest deviation measured
  double tolerance = 0.0;       // bound the residuals were held to
  int window = 0;               // smallest safe window the measurements used
  std::string detail;           // per-item evidence lines
};

// One "verdict ..." record line followed by indented detail lines.
std::string verdict_text(const Verdict& v);

// Largest |entry| over matrix positions whose row and column multi-indices
// lie inside the safe window (the truncation-exact block).
double window_max_abs(const TruncatedOperator& op);

// Kernel membership: pi_sigma(C_{v;hw}) vanishes on the safe window exactly
// when v is orthogonal to the raising-operator closure of the extreme vector
// of weight sigma(lambda), and the extreme coefficient itself acts
// nontrivially. lambda must be dominant.
Verdict check_vanishing(const WeylWord& sigma, const Weight& lambda, const QScalar& q, int N,
                        long dim_cap = 2000);

// The eigenvalue-1 eigenspace of the extreme diagonal operator is spanned by
// the vacuum alone. Requires sigma minimal in its coset (no kept-node letters
// on the right) and lambda strictly dominant on the deleted nodes; violations
// throw std::invalid_argument.
Verdict check_h1(const FlagContext& ctx, const WeylWord& sigma, const Weight& lambda,
                 const QScalar& q, int N);

// Distinct cells are inequivalent: searches weights strictly dominant on the
// deleted nodes (coefficients 1..search_bound) for one whose extreme
// coefficient square is killed by one representation while the other keeps
// the unit diagonal entry at the vacuum.
Verdict check_inequivalence(const FlagContext& ctx, const WeylWord& sigma,
                            const WeylWord& sigma_prime, const QScalar& q, int N,
                            long search_bound = 3, long dim_cap = 2000);

// With sigma = u v split across the kept nodes, every invariant generator a
// satisfies (pi_sigma (x) tau_t)(a) = pi_u(a) (x) identity on the window.
Verdict check_restriction_factorization(const FlagContext& ctx, const WeylWord& sigma,
                                        const TorusPoint& t, const QScalar& q, int N,
                                        long dim_cap = 2000);

// Vacuum moments: the (0,0) entry of pi_sigma(star(C_{v;hw}) C_{w;hw}) is 1
// when v and w both sit at the extreme weight sigma(lambda) and 0 otherwise.
// Requires sigma minimal in its coset, lambda admissible for the context,
// and N >= 3 so the vacuum entry is truncation-exact.
Verdict check_gns_pattern(const FlagContext& ctx, const WeylWord& sigma, const Weight& lambda,
                          const QScalar& q, int N, long dim_cap = 2000);

// Commutation ladder: for the extreme diagonal operator L of V(lambda) and
// every pair v, w of basis vectors of V(Lambda),
//   L pi(phi) = q^{2 (sigma(lambda), mu_w - mu_v)} pi(phi) L,
// where phi = star(C_{v;hw}) C_{w;hw}. Both weights must be admissible for
// the context (lambda additionally strictly dominant on the deleted nodes).
Verdict check_ladder(const FlagContext& ctx, const WeylWord& sigma, const Weight& lambda,
                     const Weight& Lambda, const QScalar& q, int N, long dim_cap = 2000);

// check_inequivalence over every unordered pair of minimal coset
// representatives of the context; passes only when all pairs separate.
Verdict check_all_inequivalent(const FlagContext& ctx, const QScalar& q, int N,
                               long search_bound = 3, long dim_cap = 2000);

}  // namespace qflag
