#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qflag/linalg.hpp"
#include "qflag/qscalar.hpp"
#include "qflag/rootdata.hpp"

namespace qflag {

// A finite-dimensional module over the quantized enveloping algebra, carried
// as weight-labeled basis vectors with generator matrices and the invariant
// Hermitian (contravariant) form. Matrices act on coordinate columns; entry
// (a,b) is the coefficient of basis vector a in the image of basis vector b.
//
// Conventions (matching the defining relations used throughout):
//   K_i acts on a weight-mu vector by q^{(mu, alpha_i)};
//   [E_i, F_j] = delta_ij (K_i - K_i^{-1}) / (q_i - q_i^{-1}),  q_i = q^{d_i};
//   star structure: K_i^* = K_i, E_i^* = q_i^{-1} F_i K_i, F_i^* = q_i K_i^{-1} E_i;
//   the form satisfies <X u, v> = <u, X^* v> and is positive definite.
template <Backend B>
struct UqModuleT {
  using S = typename ScalarOf<B>::real;

  RootSystemPtr rs;
  QScalar q;
  Weight highest_weight;        // declared top weight (sum of factors for tensors)
  std::vector<Weight> weights;  // weight of each basis vector
  std::vector<Mat<S>> E, F;     // one matrix per simple root
  Mat<S> gram;                  // contravariant form
  bool orthonormal = false;
  std::string name;

  // provenance links so that duals and tensor factors round-trip exactly
  std::shared_ptr<const UqModuleT> dual_of;
  std::shared_ptr<const UqModuleT> tensor_left, tensor_right;

  int dim() const { return (int)weights.size(); }
  // integer exponent (mu_j, alpha_i) of the K_i eigenvalue on basis vector j
  long k_exponent(int j, int i) const { return rat_long(inner(weights[j], rs->simple_roots[i])); }
  Mat<S> k_matrix(int i, int sign = 1) const;  // diag(q^{±(mu_j, alpha_i)})
};

template <Backend B>
Mat<typename ScalarOf<B>::real> UqModuleT<B>::k_matrix(int i, int sign) const {
  Mat<S> m(dim(), dim());
  S qv = q_of<S>(q);
  for (int j = 0; j < dim(); ++j) m(j, j) = spow(qv, sign * k_exponent(j, i));
  return m;
}

template <Backend B>
using ModulePtr = std::shared_ptr<const UqModuleT<B>>;

using ExactModule = UqModuleT<Backend::exact>;
using FloatModule = UqModuleT<Backend::floating>;

// Irreducible module with the given dominant highest weight. Basis vector 0 is
// the highest-weight vector; basis is ordered by descending weight (height
// level, then lex) with lexicographic F-words inside a weight space. The float
// backend orthonormalizes the basis so that generator adjoints realize the
// star structure. Throws std::invalid_argument for non-dominant weights and
// std::length_error when the Weyl dimension exceeds dim_cap.
template <Backend B>
ModulePtr<B> build_irreducible(const RootSystemPtr& rs, const Weight& lambda, const QScalar& q,
                               long dim_cap = 2000);

// Contragredient module on the antipode-transposed action. Basis is
// index-parallel to M with negated weights; the basis vectors realize
// q^{(mu - lambda, rho)} (e_mu)^* so that all stored exponents stay integral.
// Applying it twice returns M itself.
template <Backend B>
ModulePtr<B> dual_module(const ModulePtr<B>& m);

// Tensor product on the coproduct
//   Delta(E_i) = E_i (x) 1 + K_i (x) E_i,   Delta(F_i) = F_i (x) K_i^{-1} + 1 (x) F_i,
// with gram = gram(M) (x) gram(N). Basis index (a,b) -> a*dim(N)+b.
template <Backend B>
ModulePtr<B> tensor(const ModulePtr<B>& m, const ModulePtr<B>& n, long dim_cap = 2000);

// Multiset of dominant highest weights: multiplicity of lambda is the
// dimension of { v in M_lambda : E_i v = 0 for all i }.
template <Backend B>
std::vector<std::pair<Weight, long>> decompose_highest_weights(const ModulePtr<B>& m);

// Highest weights for the standard Levi subalgebra of S (full torus retained,
// raising operators only for i in S): for each weight mu the multiplicity of
// { v in M_mu : E_i v = 0 for i in S }. S = {} lists all weights.
template <Backend B>
std::vector<std::pair<Weight, long>> branch_to_levi(const ModulePtr<B>& m,
                                                    const std::vector<int>& S);

// Formal character: weight -> dimension of the weight space.
template <Backend B>
std::vector<std::pair<Weight, long>> character(const ModulePtr<B>& m);

// Structured-text serialization and a small on-disk cache for irreducibles,
// keyed by (type, rank, highest weight, q, backend).
template <Backend B>
std::string module_to_text(const ModulePtr<B>& m);
template <Backend B>
ModulePtr<B> module_from_text(const RootSystemPtr& rs, const std::string& text);
template <Backend B>
ModulePtr<B> build_irreducible_cached(const RootSystemPtr& rs, const Weight& lambda,
                                      const QScalar& q, long dim_cap,
                                      const std::string& cache_dir);

}  // namespace qflag
