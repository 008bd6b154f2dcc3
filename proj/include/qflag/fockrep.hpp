#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qflag/coeffalg.hpp"
#include "qflag/weyl.hpp"

namespace qflag {

// Irreducible *-representations of the quantized function algebra on
// truncated Fock space. The rank-1 building block acts on l2(Z+) by
//   pi(t11) e_j = sqrt(1-q^{2j}) e_{j-1}      (e_0 -> 0)
//   pi(t12) e_j = -q^{j+1} e_j
//   pi(t21) e_j = q^j e_j
//   pi(t22) e_j = sqrt(1-q^{2(j+1)}) e_{j+1}
// and a Weyl word s_{i_1}..s_{i_l} picks the tensor product of the node
// representations, assembled through the coproduct. Everything here is
// float-backend only: the modules feeding the coefficients must be
// orthonormalized, which only the floating build provides.

// Dense operator on the l-fold tensor power of the N-truncated Fock space.
// Multi-index (j_1..j_l) flattens with j_1 slowest. Entries whose row and
// column multi-indices are all < safe_window agree with the untruncated
// operator; the window shrinks by one for every level-shifting generator
// (t11/t22) folded into the product, composing as w(AB) = w(A)+w(B)-N.
struct TruncatedOperator {
  int factor_count = 1;
  int trunc = 2;       // N, per-factor truncation
  int safe_window = 2; // indices below this are truncation-exact
  Mat<std::complex<double>> mat;

  int dim() const { return mat.rows; }
};

TruncatedOperator op_identity(int factor_count, int N);
TruncatedOperator op_add(const TruncatedOperator& x, const TruncatedOperator& y);
TruncatedOperator op_sub(const TruncatedOperator& x, const TruncatedOperator& y);
TruncatedOperator op_scale(const std::complex<double>& c, const TruncatedOperator& x);
TruncatedOperator op_multiply(const TruncatedOperator& x, const TruncatedOperator& y);
TruncatedOperator op_adjoint(const TruncatedOperator& x);
// Kronecker product; factor counts add, the window is the smaller of the two
// (an entry is exact when every digit on both sides is).
TruncatedOperator op_tensor(const TruncatedOperator& x, const TruncatedOperator& y);

// Largest |x(i,j) - y(i,j)| over multi-indices inside both safe windows.
// Shapes must match; the comparison is the only sound one after truncation.
double window_residual(const TruncatedOperator& x, const TruncatedOperator& y);

// Row-major split of a flat index into (j_1..j_l), j_1 slowest.
std::vector<int> split_index(long flat, int factor_count, int N);
long join_index(const std::vector<int>& parts, int N);

// ---- rank-1 block ----

enum class Su2Gen { t11, t12, t21, t22 };

// Product of generator images, multiplied left to right, at deformation
// parameter q_param in (0,1). safe_window = N - (#t11 + #t22 letters).
TruncatedOperator pi_su2(const std::vector<Su2Gen>& word, int N, double q_param);

// One ordered monomial t11^n11 t22^n22 t12^n12 t21^n21 (n11*n22 = 0) with a
// scalar in front; a functional on the rank-1 algebra is a sum of these.
struct Su2Monomial {
  int n11 = 0, n22 = 0, n12 = 0, n21 = 0;
  std::complex<double> coeff{0.0, 0.0};

  int level_shift() const { return n11 + n22; }
  std::vector<Su2Gen> word() const;
};

struct Su2Expansion {
  std::vector<Su2Monomial> terms;  // empty: the zero functional
};

std::string su2_expansion_str(const Su2Expansion& e);

// Representation of an expansion: sum of coeff * pi_su2(word).
TruncatedOperator pi_of_expansion(const Su2Expansion& e, int N, double q_param);

// Restriction of the functional to the rank-1 subalgebra at the given node
// (1-based), expanded over the ordered monomials above at parameter q^{d_i}.
// The admitted bidegrees are forced by the node weights of bra and ket, the
// total degree is capped by the longest node string in each module, and the
// coefficients are solved from evaluations against all rank-1 PBW monomials
// in that window. Throws std::runtime_error if the system is rank-deficient
// or inconsistent at the cap (never silently truncated).
Su2Expansion project_su2(const FloatElement& phi, int node);

// ---- torus characters ----

struct TorusPoint {
  std::vector<std::complex<double>> t;  // one unit-modulus entry per node
};

// Validates |t_i| = 1 (tolerance 1e-9).
TorusPoint make_torus_point(const std::vector<std::complex<double>>& t);
// exp(2 pi i num/den) coordinates for reproducible sampling.
TorusPoint root_of_unity_point(const std::vector<std::pair<long, long>>& fractions);

// One-dimensional *-representation: C_{a;b} -> delta_{ab} t^{mu_b} with
// t^{mu} = prod_i t_i^{(mu, alpha_i^vee)}; multiplicative, tau_t(1) = 1.
std::complex<double> tau_t(const FloatElement& phi, const TorusPoint& t);

// (id (x) tau_t) applied to the coproduct: scales each term C_{a;b} by
// t^{mu_b}, so that pi_sigma(torus_twist(phi, t)) realizes the joint
// representation (pi_sigma (x) tau_t)(phi).
FloatElement torus_twist(const FloatElement& phi, const TorusPoint& t);

// ---- tensor assembly ----

// pi_sigma = pi_{i_1} (x) ... (x) pi_{i_l} on the coproduct: the operator is
// the path sum over intermediate basis labels of the per-node images of the
// leg coefficients, each leg expanded by project_su2 and realized by pi_su2.
// sigma must be reduced; the empty word gives the 1x1 counit representation.
// Dense storage caps the matrix at 10^6 entries (std::length_error above).
TruncatedOperator pi_sigma(const WeylWord& sigma, const FloatElement& phi, int N);

// Exponent list e_k = (lambda, gamma_k^vee) over gamma_sequence(sigma): the
// power of t21 carried by leg k in the factorized form of the extreme
// coefficient. The operator below is diagonal with eigenvalue
// prod_k q_{i_k}^{2 e_k j_k} at multi-index (j_1..j_l), where q_{i_k} is the
// node parameter q^{d_{i_k}} of the k-th letter (so the plain-q exponent of
// leg k is 2 (lambda, gamma_k) j_k).
std::vector<long> l_diagonal_exponents(const WeylWord& sigma, const Weight& lambda);

// Flat indices whose grade sum_k j_k gamma_k stays coordinatewise <= cap in
// simple-root coordinates. Each grade class is a joint eigenspace of the
// diagonal operators below (the eigenvalue of L at a fundamental weight is
// q^{2 (pi_i, sum_k j_k gamma_k)}), so the unitary equivalence between two
// reduced words of the same element matches the classes exactly; spectra
// compared on complete classes are word-independent, unlike spectra of the
// raw box truncation. cap must stay below the safe window for the compressed
// entries to be exact.
std::vector<long> grade_window_indices(const WeylWord& sigma, int N, long cap);

// L = pi_sigma(C*C) for the extreme coefficient C = C_{sigma.lambda; lambda}
// of V(lambda): positive diagonal, diagonal entries truncation-exact at all
// indices, eigenvalues given by l_diagonal_exponents.
TruncatedOperator L_operator(const WeylWord& sigma, const Weight& lambda, const QScalar& q,
                             int N, long dim_cap = 2000);

// Eigenvalue-1 eigenspace of L on the truncation: dimension and the flat
// basis indices (L is verified diagonal first). Index 0 is e_0^{(x) l}.
struct H1Data {
  int dimension = 0;
  std::vector<long> indices;
};
H1Data h1_eigenspace(const WeylWord& sigma, const Weight& lambda, const QScalar& q, int N,
                     double tol = 1e-9);

}  // namespace qflag
