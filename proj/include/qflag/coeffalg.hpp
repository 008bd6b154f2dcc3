#pragma once

#include <string>
#include <vector>

#include "qflag/uqmod.hpp"

namespace qflag {

// The quantized function algebra spanned by matrix coefficients of the
// modules built in uqmod. An element is a finite sum of terms
// c * C^M_{a;b}, where C^M_{a;b}(X) = <e_a, X e_b> pairs the contravariant
// form against the module action; products live on tensor modules via the
// coproduct, so no re-expansion into irreducible coefficients ever happens.

template <Backend B>
struct MatrixCoeffT {
  ModulePtr<B> module;
  int bra = 0, ket = 0;
};

template <Backend B>
struct TermT {
  typename ScalarOf<B>::cplx coeff;
  MatrixCoeffT<B> mc;
};

template <Backend B>
struct AlgebraElementT {
  RootSystemPtr rs;
  QScalar q;
  std::vector<TermT<B>> terms;  // canonical: sorted by (module name, bra, ket), no zeros
};

using ExactElement = AlgebraElementT<Backend::exact>;
using FloatElement = AlgebraElementT<Backend::floating>;

// A monomial F_{f_1}...F_{f_m} K^alpha E_{e_1}...E_{e_l} in the triangular
// decomposition; words hold 1-based node indices read left to right,
// k_exponents holds one integer per node.
struct PBWMonomial {
  std::vector<int> f_word;
  std::vector<long> k_exponents;
  std::vector<int> e_word;
};

// Simple-root generators of the quantized enveloping algebra, for the left
// and right actions on the function algebra. Nodes are 1-based.
enum class GenKind { raise_op, lower_op, torus, torus_inv };
struct UqGen {
  GenKind kind;
  int node;
};

enum class Ternary { yes, no, unknown };
std::string ternary_str(Ternary t);

// ---- construction ----
template <Backend B>
AlgebraElementT<B> zero_element(const RootSystemPtr& rs, const QScalar& q);
template <Backend B>
AlgebraElementT<B> unit_element(const RootSystemPtr& rs, const QScalar& q);
template <Backend B>
AlgebraElementT<B> coeff_element(const ModulePtr<B>& m, int bra, int ket);

// ---- linear structure ----
template <Backend B>
AlgebraElementT<B> add(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y);
template <Backend B>
AlgebraElementT<B> sub(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y);
template <Backend B>
AlgebraElementT<B> scalar_mul(const typename ScalarOf<B>::cplx& c, const AlgebraElementT<B>& x);

// Product via C^M_{v;w} C^N_{v';w'} = C^{M(x)N}_{v(x)v'; w(x)w'}.
template <Backend B>
AlgebraElementT<B> multiply(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y,
                            long dim_cap = 20000);

// Conjugate-linear involution phi*(X) = conj(phi(S(X)*)). On a coefficient of
// an irreducible (or dual) module:
//   star(c C^M_{a;b}) = conj(c) q^{(mu_a-mu_b,rho)} sum_{c,d} G(c,a) G(d,b) C^{M*}_{c;d}
// (a single term when the basis is orthonormal); on tensor-module
// coefficients it recurses factorwise through the anti-homomorphism property
// (phi psi)* = psi* phi*.
template <Backend B>
AlgebraElementT<B> star(const AlgebraElementT<B>& x);

// Evaluation pairing against a PBW monomial.
template <Backend B>
typename ScalarOf<B>::cplx evaluate(const AlgebraElementT<B>& x, const PBWMonomial& mono);

// Value of the element on the maximal torus point t = (t_1..t_r):
// C^M_{a;b} -> t^{mu_b} <e_a, e_b>, with t^{mu} = prod t_j^{(mu, alpha_j^v)}.
template <Backend B>
typename ScalarOf<B>::cplx torus_value(const AlgebraElementT<B>& x,
                                       const std::vector<typename ScalarOf<B>::cplx>& t);

// Left action (X.phi)(Y) = phi(YX) acts on the ket; right action
// (phi.X)(Y) = phi(XY) acts on the bra through the star structure
// (the form-adjoint of pi(X) is pi(X*) in every basis carrying the
// contravariant form).
template <Backend B>
AlgebraElementT<B> left_act(const UqGen& g, const AlgebraElementT<B>& x);
template <Backend B>
AlgebraElementT<B> right_act(const AlgebraElementT<B>& x, const UqGen& g);

// ---- decision procedures ----
// Equality and span membership of elements as functionals on the quantized
// enveloping algebra. The test functionals F_u P_chi E_w (spanning raising /
// lowering words against weight-class torus projectors) provably span the
// image of the algebra on the involved modules via the triangular
// decomposition, so answers are definitive whenever the flattened operator
// dimension sum stays within flat_cap; above the cap the result degrades to
// Ternary::unknown (never a wrong yes/no).
struct EqualsOptions {
  long flat_cap = 6000;   // cap on sum of dim(M)^2 over involved modules
  double tol = 1e-9;      // float backend tolerances for zero/rank tests
};

template <Backend B>
Ternary is_zero_functional(const AlgebraElementT<B>& x, const EqualsOptions& opt = {});
template <Backend B>
Ternary equals(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y,
               const EqualsOptions& opt = {});
template <Backend B>
Ternary in_span(const AlgebraElementT<B>& x, const std::vector<AlgebraElementT<B>>& gens,
                const EqualsOptions& opt = {});
template <Backend B>
Ternary spans_equal(const std::vector<AlgebraElementT<B>>& xs,
                    const std::vector<AlgebraElementT<B>>& ys, const EqualsOptions& opt = {});

// ---- structural commutation checks ----
// For v = basis index in V(lambda) of weight mu and w = basis index in
// V(Lambda) of weight nu, with A = C_{v;hw}, Bc = C_{w;hw}:
//   plain:    defect = A Bc - q^{(lambda,Lambda)-(mu,nu)} Bc A,
//             span set {C_{v'}C_{w'}} over mu' > mu, nu' < nu, mu'+nu' = mu+nu;
//   reversed: defect = A Bc - q^{(mu,nu)-(lambda,Lambda)} Bc A,
//             span set {C_{w'}C_{v'}} over nu' > nu, mu' < mu, mu'+nu' = mu+nu;
//   starred:  defect = A* Bc - q^{(mu,nu)-(lambda,Lambda)} Bc A*,
//             span set {C_{v'}* C_{w'}} over mu' < mu, nu' < nu, mu-mu' = nu-nu'.
// (all orderings strict-dominance on weights)
enum class CommutationVariant { plain, reversed, starred };

template <Backend B>
struct CommutationResultT {
  AlgebraElementT<B> defect;
  std::vector<AlgebraElementT<B>> span_set;
  Ternary in_span;
};

template <Backend B>
CommutationResultT<B> commutation_defect(const ModulePtr<B>& v_lambda,
                                         const ModulePtr<B>& v_Lambda, int v, int w,
                                         CommutationVariant variant,
                                         const EqualsOptions& opt = {});

// The plain-variant span set equals its opposite-order counterpart
// (products taken in the other order over the same index pairs).
template <Backend B>
Ternary commutation_span_symmetric(const ModulePtr<B>& v_lambda, const ModulePtr<B>& v_Lambda,
                                   int v, int w, CommutationVariant variant,
                                   const EqualsOptions& opt = {});

// Sum rule behind the antipode axiom: with G the contravariant Gram of m,
//   sum_{s,t} G^{-1}(t,s) (C_{e_s;e_a})* C_{e_t;e_b} = G(a,b) * 1,
// which is the orthonormal-basis unitarity relation whenever G = I.
template <Backend B>
Ternary unitarity_check(const ModulePtr<B>& m, int a, int b, const EqualsOptions& opt = {});

// Deterministic rendering, e.g. "(1/2)*C{V(1,0)}[2;0] + (0+1i)*C{...}[0;1]".
template <Backend B>
std::string element_to_text(const AlgebraElementT<B>& x);

}  // namespace qflag
