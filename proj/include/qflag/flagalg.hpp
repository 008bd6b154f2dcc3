#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qflag/coeffalg.hpp"
#include "qflag/weyl.hpp"

namespace qflag {

// Function algebras on quantized partial flag manifolds. A context deletes
// the nodes outside S from the Dynkin diagram: invariance is demanded under
// the torus and the sl2 triples at the kept nodes, and the surviving
// coefficient algebra is generated by zero-weight products of one-column
// coefficients C_{v;hw} over highest weights supported on the deleted nodes.

struct FlagContext {
  RootSystemPtr rs;
  std::vector<int> S;        // kept (Levi) nodes, 1-based, sorted, proper subset
  std::vector<int> deleted;  // complement of S, sorted
  ParabolicData parabolic;   // minimal coset representatives for W/W_S

  // mu pairs to zero with alpha_i^vee for every kept node i (and is integral)
  bool in_lattice(const Weight& mu) const;
  // in_lattice and dominant on the deleted nodes
  bool in_dominant(const Weight& mu) const;
  // in_lattice and strictly positive on every deleted node
  bool in_regular(const Weight& mu) const;
};

// Validates S (1-based nodes, duplicates rejected, must omit at least one
// node; empty S = full flag manifold) and precomputes the coset data.
FlagContext make_flag_context(const RootSystemPtr& rs, const std::vector<int>& S);

// Fundamental weights of the deleted nodes: the default generator weights.
std::vector<Weight> generator_weights(const FlagContext& ctx);

// The column space {C_{v;hw}} of V(lambda) over its full weight basis, ket
// pinned at the highest-weight vector. Each element is killed by the left
// action of every raising generator, and of the lowering generators at kept
// nodes; the left torus scales it by the ket weight. Requires
// ctx.in_dominant(lambda).
template <Backend B>
std::vector<AlgebraElementT<B>> b_lambda_basis(const FlagContext& ctx, const Weight& lambda,
                                               const QScalar& q, long dim_cap = 2000);

// Zero-weight quadratic products star(C_{v;hw}) * C_{w;hw} over all pairs
// with equal bra weights, for each lambda in the list (defaults to
// generator_weights via the overload). These generate the invariant
// subalgebra attached to the context.
template <Backend B>
std::vector<AlgebraElementT<B>> a_s_generators(const FlagContext& ctx,
                                               const std::vector<Weight>& lambdas,
                                               const QScalar& q, long dim_cap = 2000);
template <Backend B>
std::vector<AlgebraElementT<B>> a_s_generators(const FlagContext& ctx, const QScalar& q,
                                               long dim_cap = 2000);

// Left invariance under the kept-node subalgebra: X.phi = counit(X) phi for
// the generating set {K_i^{+-1} all i; E_j, F_j for j in S}. Multiplicativity
// of the condition over products makes the generating set sufficient.
// Indeterminate answers from the span machinery are propagated.
template <Backend B>
Ternary is_invariant(const AlgebraElementT<B>& phi, const FlagContext& ctx,
                     const EqualsOptions& opt = {});

// Maximal parabolic contexts whose invariant pair is multiplicity free. The
// three families: Hermitian symmetric nodes, the odd orthogonal / unitary
// pair (type B, last node), and the symplectic / unitary-symplectic pair
// (type C, first node).
enum class GelfandFamily { hermitian_symmetric, odd_orthogonal_unitary, symplectic_unitary };
const char* gelfand_family_str(GelfandFamily f);

struct GelfandCase {
  char type_letter = 'A';
  int rank = 1;
  int node = 1;
  GelfandFamily family = GelfandFamily::hermitian_symmetric;
};

// All nodes of the given simple type whose single-node deletion yields a
// multiplicity-free pair: type A every node; B nodes {1, rank}; C nodes
// {1, rank}; D nodes {1, rank-1, rank}; E6 {1, 6}; E7 {7}; E8, F4, G2 none.
std::vector<GelfandCase> gelfand_nodes(char type_letter, int rank);

// Multiplicity of the trivial type in the restriction to the kept-node
// subalgebra: counts Levi-highest vectors of weight zero.
template <Backend B>
long trivial_branch_multiplicity(const ModulePtr<B>& m, const std::vector<int>& S);

// Search W (breadth-first, shortest first) for w whose orbit representative
// [varpi - w varpi] equals target, where varpi is the fundamental weight of
// the single deleted node. Returns the first witness, or nullopt when the
// group is exhausted. Requires #deleted == 1 and a dominant target.
std::optional<WeylWord> prv_witness(const FlagContext& ctx, const Weight& target,
                                    size_t cap = 51840);

// Scan dominant weights with coefficients <= coeff_bound and keep those whose
// restriction contains the trivial type; return the minimal generators under
// addition (weights not expressible as a sum of two nonzero spherical
// weights). Scan order: lexicographic coefficient tuples. Throws
// std::length_error when a scanned module exceeds dim_cap.
template <Backend B>
std::vector<Weight> spherical_weights(const FlagContext& ctx, const QScalar& q,
                                      long coeff_bound = 2, long dim_cap = 2000);

// Evidence that the zero-weight quadratic products generate the whole
// invariant subalgebra for a single deleted node: the fundamental spherical
// weights must all occur in dual(V(varpi)) (x) V(varpi), and on the monoid
// window {sum n_i mu_i : sum n_i <= degree_bound} the plain direct sum of one
// module per weight must carry exactly the invariant dimension that branching
// predicts (multiplicity one on the window).
struct FactorizationReport {
  Weight varpi;
  std::vector<Weight> fundamental_sphericals;
  std::vector<std::pair<Weight, long>> tensor_components;  // dual (x) module decomposition
  bool sphericals_found_in_tensor = false;  // every fundamental spherical occurs (mult >= 1)
  std::vector<long> spherical_tensor_multiplicities;  // per fundamental spherical, in order
  bool tensor_multiplicity_free = false;    // observed, reported as data
  bool tensor_components_spherical = false; // every component restricts with a trivial type
  int degree_bound = 2;
  long monoid_weight_count = 0;
  long direct_sum_dimension = 0;         // sum of dim V(mu) over the monoid window
  long invariant_predicted_dimension = 0;  // sum of trivial multiplicity * dim V(mu)
  bool window_match = false;             // the two dimensions agree
};

// Pass fundamental_sphericals explicitly to skip the scan (useful when the
// scan window would exceed the module cap); empty means scan via
// spherical_weights with the default bound.
template <Backend B>
FactorizationReport factorization_evidence(const FlagContext& ctx, const QScalar& q,
                                           int degree_bound = 2, long dim_cap = 2000,
                                           std::vector<Weight> fundamental_sphericals = {});

// key=value record lines for reports.
std::string flag_context_str(const FlagContext& ctx);
std::string factorization_report_text(const FactorizationReport& r);

}  // namespace qflag
