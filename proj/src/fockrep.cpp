#include "qflag/fockrep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "qflag/numeig.hpp"

namespace qflag {

namespace {

using Cplx = std::complex<double>;
using CMat = Mat<Cplx>;

constexpr long kMaxDenseEntries = 1000000;  // dense operator storage cap

void require_same_shape(const TruncatedOperator& x, const TruncatedOperator& y,
                        const char* who) {
  if (x.factor_count != y.factor_count || x.trunc != y.trunc || x.dim() != y.dim())
    throw std::invalid_argument(std::string(who) + ": operator shapes do not match");
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows * b.rows, a.cols * b.cols);
  for (int ia = 0; ia < a.rows; ++ia)
    for (int ja = 0; ja < a.cols; ++ja) {
      Cplx v = a(ia, ja);
      if (v == Cplx(0.0)) continue;
      for (int ib = 0; ib < b.rows; ++ib)
        for (int jb = 0; jb < b.cols; ++jb)
          out(ia * b.rows + ib, ja * b.cols + jb) = v * b(ib, jb);
    }
  return out;
}

bool digits_below(long flat, int factor_count, int N, int bound) {
  for (int k = 0; k < factor_count; ++k) {
    if (flat % N >= bound) return false;
    flat /= N;
  }
  return true;
}

std::string fmt_cplx(const Cplx& c) {
  char buf[96];
  if (c.imag() == 0.0)
    std::snprintf(buf, sizeof buf, "%.12g", c.real());
  else
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", c.real(), c.imag());
  return buf;
}

// ---- rank-1 side of the expansion solve -------------------------------------

// A1 toolkit pinned at one deformation value q^{d_i}; the four generator
// coefficients live on the fundamental module with e_0 the highest vector.
struct Su2Side {
  RootSystemPtr rs;
  QScalar q;
  ModulePtr<Backend::floating> v1;
};

const Su2Side& su2_side(const Rat& qi) {
  static std::map<std::string, Su2Side> cache;
  std::string key = rat_str(qi);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Su2Side side;
  side.rs = build_root_system('A', 1);
  side.q = make_q(Backend::floating, qi);
  side.v1 = build_irreducible<Backend::floating>(side.rs, Weight(side.rs, {Rat(1)}),
                                                 side.q);
  return cache.emplace(key, std::move(side)).first->second;
}

// The ordered product t11^n11 t22^n22 t12^n12 t21^n21 as a rank-1 element.
FloatElement monomial_element(const Su2Side& side, const Su2Monomial& mono) {
  FloatElement out;
  bool started = false;
  auto append = [&](int bra, int ket, int count) {
    for (int r = 0; r < count; ++r) {
      FloatElement g = coeff_element(side.v1, bra, ket);
      out = started ? multiply(out, g) : g;
      started = true;
    }
  };
  append(0, 0, mono.n11);
  append(1, 1, mono.n22);
  append(0, 1, mono.n12);
  append(1, 0, mono.n21);
  if (!started) out = unit_element<Backend::floating>(side.rs, side.q);
  return out;
}

// Monomials of bidegree (m, n) up to total degree cap: the n11/n22 block is
// pinned by m+n, the t12/t21 powers by m-n up to the free ladder c.
std::vector<Su2Monomial> bidegree_family(long m, long n, long cap) {
  std::vector<Su2Monomial> fam;
  if (((m + n) % 2 + 2) % 2 != 0) return fam;  // odd split: no such monomials
  long s = (m + n) / 2, delta = (m - n) / 2;
  long n11 = std::max(s, 0L), n22 = std::max(-s, 0L);
  for (long c = std::max(0L, -delta);; ++c) {
    long b = c + delta;
    long degree = n11 + n22 + b + c;
    if (degree > cap) break;
    Su2Monomial mono;
    mono.n11 = (int)n11;
    mono.n22 = (int)n22;
    mono.n12 = (int)b;
    mono.n21 = (int)c;
    fam.push_back(mono);
  }
  return fam;
}

// Expansion of one coefficient functional restricted to the node subalgebra,
// solved from evaluations against the PBW window f,g <= h, |k| <= h where h
// is the longest node string in the module. Cached per (module, node, pair).
struct ExpandEntry {
  ModulePtr<Backend::floating> keepalive;
  Su2Expansion expansion;
};

const Su2Expansion& expand_coeff(const ModulePtr<Backend::floating>& mod, int node,
                                 int bra, int ket) {
  static std::map<std::string, ExpandEntry> cache;
  std::ostringstream keys;
  keys << mod->name << "|" << mod.get() << "|" << node << "|" << bra << "|" << ket;
  std::string key = keys.str();
  auto hit = cache.find(key);
  if (hit != cache.end()) return hit->second.expansion;

  const RootSystemPtr& rs = mod->rs;
  int i0 = node - 1;
  long di = rs->d[i0];
  long m = mod->k_exponent(bra, i0) / di;
  long n = mod->k_exponent(ket, i0) / di;
  long h = 0;
  for (int s = 0; s < mod->dim(); ++s)
    h = std::max(h, mod->k_exponent(s, i0) / di);

  std::vector<Su2Monomial> family = bidegree_family(m, n, h);
  Rat qi = rat_pow(mod->q.exact_value, di);
  const Su2Side& side = su2_side(qi);

  std::vector<PBWMonomial> probes;
  for (long f = 0; f <= h; ++f)
    for (long g = 0; g <= h; ++g)
      for (long k = -h; k <= h; ++k) {
        PBWMonomial p;
        p.f_word.assign((size_t)f, 1);
        p.e_word.assign((size_t)g, 1);
        p.k_exponents.assign(1, k);
        probes.push_back(std::move(p));
      }

  int rows = (int)probes.size(), cols = (int)family.size();
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd y(rows);
  FloatElement target = coeff_element(mod, bra, ket);
  for (int r = 0; r < rows; ++r) {
    PBWMonomial ambient;
    ambient.f_word.assign(probes[r].f_word.size(), node);
    ambient.e_word.assign(probes[r].e_word.size(), node);
    ambient.k_exponents.assign((size_t)rs->rank, 0);
    ambient.k_exponents[i0] = probes[r].k_exponents[0];
    y(r) = evaluate(target, ambient);
    for (int c = 0; c < cols; ++c)
      A(r, c) = evaluate(monomial_element(side, family[c]), probes[r]);
  }

  // row-normalize so that rank and residual thresholds are scale-free (the
  // probe values range over large positive and negative q powers)
  for (int r = 0; r < rows; ++r) {
    double scale = std::abs(y(r));
    for (int c = 0; c < cols; ++c) scale = std::max(scale, std::abs(A(r, c)));
    if (scale > 0) {
      y(r) /= scale;
      for (int c = 0; c < cols; ++c) A(r, c) /= scale;
    }
  }

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(cols);
  if (cols > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    if (qr.rank() < cols)
      throw std::runtime_error("project_su2: expansion indeterminate at node " +
                               std::to_string(node) + " for " + mod->name +
                               " (monomial family rank-deficient at degree cap " +
                               std::to_string(h) + ")");
    x = qr.solve(y);
  }
  double residual = (cols > 0 ? (A * x - y).cwiseAbs().maxCoeff()
                              : (rows > 0 ? y.cwiseAbs().maxCoeff() : 0.0));
  if (residual > 1e-7)
    throw std::runtime_error("project_su2: expansion inconsistent at node " +
                             std::to_string(node) + " for " + mod->name +
                             " (residual " + std::to_string(residual) + ")");

  Su2Expansion out;
  double top = 0.0;
  for (int c = 0; c < cols; ++c) top = std::max(top, std::abs(x(c)));
  if (top > 1e-10) {
    for (int c = 0; c < cols; ++c) {
      if (std::abs(x(c)) < 1e-12 * top) continue;
      Su2Monomial mono = family[c];
      mono.coeff = x(c);
      out.terms.push_back(mono);
    }
  }
  ExpandEntry entry{mod, std::move(out)};
  return cache.emplace(key, std::move(entry)).first->second.expansion;
}

double node_q_value(const QScalar& q, long di) {
  return rat_dbl(rat_pow(q.exact_value, di));
}

void require_node(const RootSystemPtr& rs, int node, const char* who) {
  if (!rs) throw std::invalid_argument(std::string(who) + ": missing root system");
  if (node < 1 || node > rs->rank)
    throw std::invalid_argument(std::string(who) + ": node out of range");
}

}  // namespace

// ---- operator helpers --------------------------------------------------------

TruncatedOperator op_identity(int factor_count, int N) {
  if (N < 2) throw std::invalid_argument("op_identity: truncation must keep two levels");
  if (factor_count < 0) throw std::invalid_argument("op_identity: negative factor count");
  long dim = 1;
  for (int k = 0; k < factor_count; ++k) {
    dim *= N;
    if (dim * dim > kMaxDenseEntries)
      throw std::length_error("op_identity: dense operator would exceed 10^6 entries");
  }
  TruncatedOperator out;
  out.factor_count = factor_count;
  out.trunc = N;
  out.safe_window = N;
  out.mat = CMat::identity((int)dim);
  return out;
}

TruncatedOperator op_add(const TruncatedOperator& x, const TruncatedOperator& y) {
  require_same_shape(x, y, "op_add");
  TruncatedOperator out = x;
  out.mat = x.mat + y.mat;
  out.safe_window = std::min(x.safe_window, y.safe_window);
  return out;
}

TruncatedOperator op_sub(const TruncatedOperator& x, const TruncatedOperator& y) {
  require_same_shape(x, y, "op_sub");
  TruncatedOperator out = x;
  out.mat = x.mat - y.mat;
  out.safe_window = std::min(x.safe_window, y.safe_window);
  return out;
}

TruncatedOperator op_scale(const std::complex<double>& c, const TruncatedOperator& x) {
  TruncatedOperator out = x;
  for (auto& v : out.mat.a) v *= c;
  return out;
}

TruncatedOperator op_multiply(const TruncatedOperator& x, const TruncatedOperator& y) {
  require_same_shape(x, y, "op_multiply");
  TruncatedOperator out = x;
  out.mat = x.mat * y.mat;
  // accumulated level shifts add: (N - wx) + (N - wy) of them in the product
  out.safe_window = std::max(0, x.safe_window + y.safe_window - x.trunc);
  return out;
}

TruncatedOperator op_adjoint(const TruncatedOperator& x) {
  TruncatedOperator out = x;
  out.mat = CMat(x.mat.rows, x.mat.cols);
  for (int i = 0; i < x.mat.rows; ++i)
    for (int j = 0; j < x.mat.cols; ++j) out.mat(j, i) = std::conj(x.mat(i, j));
  return out;
}

TruncatedOperator op_tensor(const TruncatedOperator& x, const TruncatedOperator& y) {
  if (x.trunc != y.trunc) throw std::invalid_argument("op_tensor: truncation levels differ");
  if (x.factor_count == 0) return op_scale(x.mat(0, 0), y);
  if (y.factor_count == 0) return op_scale(y.mat(0, 0), x);
  long entries = (long)x.dim() * y.dim();
  if (entries * entries > kMaxDenseEntries)
    throw std::length_error("op_tensor: dense matrix would exceed the entry cap");
  TruncatedOperator out;
  out.factor_count = x.factor_count + y.factor_count;
  out.trunc = x.trunc;
  out.safe_window = std::min(x.safe_window, y.safe_window);
  out.mat = kron(x.mat, y.mat);
  return out;
}

double window_residual(const TruncatedOperator& x, const TruncatedOperator& y) {
  require_same_shape(x, y, "window_residual");
  int w = std::min(x.safe_window, y.safe_window);
  if (x.factor_count > 0 && w <= 0)
    throw std::invalid_argument("window_residual: no common safe window");
  double worst = 0.0;
  for (long i = 0; i < x.dim(); ++i) {
    if (!digits_below(i, x.factor_count, x.trunc, w)) continue;
    for (long j = 0; j < x.dim(); ++j) {
      if (!digits_below(j, x.factor_count, x.trunc, w)) continue;
      worst = std::max(worst, std::abs(x.mat((int)i, (int)j) - y.mat((int)i, (int)j)));
    }
  }
  return worst;
}

std::vector<int> split_index(long flat, int factor_count, int N) {
  std::vector<int> parts((size_t)factor_count, 0);
  for (int k = factor_count - 1; k >= 0; --k) {
    parts[k] = (int)(flat % N);
    flat /= N;
  }
  return parts;
}

long join_index(const std::vector<int>& parts, int N) {
  long flat = 0;
  for (int p : parts) flat = flat * N + p;
  return flat;
}

// ---- rank-1 block --------------------------------------------------------------

TruncatedOperator pi_su2(const std::vector<Su2Gen>& word, int N, double q_param) {
  if (N < 2) throw std::invalid_argument("pi_su2: truncation must keep two levels");
  if (!(q_param > 0.0 && q_param < 1.0))
    throw std::invalid_argument("pi_su2: q must lie in (0,1)");
  auto gen = [&](Su2Gen g) {
    CMat m(N, N);
    switch (g) {
      case Su2Gen::t11:
        for (int j = 1; j < N; ++j) m(j - 1, j) = std::sqrt(1.0 - std::pow(q_param, 2 * j));
        break;
      case Su2Gen::t22:
        for (int j = 0; j + 1 < N; ++j)
          m(j + 1, j) = std::sqrt(1.0 - std::pow(q_param, 2 * (j + 1)));
        break;
      case Su2Gen::t12:
        for (int j = 0; j < N; ++j) m(j, j) = -std::pow(q_param, j + 1);
        break;
      case Su2Gen::t21:
        for (int j = 0; j < N; ++j) m(j, j) = std::pow(q_param, j);
        break;
    }
    return m;
  };
  TruncatedOperator out;
  out.factor_count = 1;
  out.trunc = N;
  out.mat = CMat::identity(N);
  int shifts = 0;
  for (Su2Gen g : word) {
    out.mat = out.mat * gen(g);
    if (g == Su2Gen::t11 || g == Su2Gen::t22) ++shifts;
  }
  out.safe_window = std::max(0, N - shifts);
  return out;
}

std::vector<Su2Gen> Su2Monomial::word() const {
  std::vector<Su2Gen> w;
  w.insert(w.end(), (size_t)n11, Su2Gen::t11);
  w.insert(w.end(), (size_t)n22, Su2Gen::t22);
  w.insert(w.end(), (size_t)n12, Su2Gen::t12);
  w.insert(w.end(), (size_t)n21, Su2Gen::t21);
  return w;
}

std::string su2_expansion_str(const Su2Expansion& e) {
  if (e.terms.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < e.terms.size(); ++i) {
    const Su2Monomial& t = e.terms[i];
    if (i) out += " + ";
    out += "(" + fmt_cplx(t.coeff) + ")";
    auto pw = [&](const char* sym, int n) {
      if (n == 0) return;
      out += std::string("*") + sym;
      if (n > 1) out += "^" + std::to_string(n);
    };
    pw("t11", t.n11);
    pw("t22", t.n22);
    pw("t12", t.n12);
    pw("t21", t.n21);
  }
  return out;
}

TruncatedOperator pi_of_expansion(const Su2Expansion& e, int N, double q_param) {
  TruncatedOperator out;
  out.factor_count = 1;
  out.trunc = N;
  out.safe_window = N;
  out.mat = CMat(N, N);
  for (const Su2Monomial& t : e.terms) {
    TruncatedOperator piece = pi_su2(t.word(), N, q_param);
    out.safe_window = std::min(out.safe_window, piece.safe_window);
    for (size_t i = 0; i < out.mat.a.size(); ++i) out.mat.a[i] += t.coeff * piece.mat.a[i];
  }
  return out;
}

Su2Expansion project_su2(const FloatElement& phi, int node) {
  require_node(phi.rs, node, "project_su2");
  std::map<std::tuple<int, int, int, int>, Cplx> acc;
  for (const auto& term : phi.terms) {
    const Su2Expansion& e = expand_coeff(term.mc.module, node, term.mc.bra, term.mc.ket);
    for (const Su2Monomial& mono : e.terms)
      acc[{mono.n11, mono.n22, mono.n12, mono.n21}] += term.coeff * mono.coeff;
  }
  double top = 0.0;
  for (const auto& [key, c] : acc) top = std::max(top, std::abs(c));
  Su2Expansion out;
  if (top <= 1e-10) return out;
  for (const auto& [key, c] : acc) {
    if (std::abs(c) < 1e-12 * top) continue;
    Su2Monomial mono;
    std::tie(mono.n11, mono.n22, mono.n12, mono.n21) = key;
    mono.coeff = c;
    out.terms.push_back(mono);
  }
  return out;
}

// ---- torus characters ----------------------------------------------------------

TorusPoint make_torus_point(const std::vector<std::complex<double>>& t) {
  for (const auto& v : t)
    if (std::abs(std::abs(v) - 1.0) > 1e-9)
      throw std::invalid_argument("make_torus_point: entries must have modulus 1");
  return TorusPoint{t};
}

TorusPoint root_of_unity_point(const std::vector<std::pair<long, long>>& fractions) {
  std::vector<Cplx> t;
  for (const auto& [num, den] : fractions) {
    if (den == 0) throw std::invalid_argument("root_of_unity_point: zero denominator");
    t.push_back(std::polar(1.0, 2.0 * M_PI * (double)num / (double)den));
  }
  return TorusPoint{t};
}

std::complex<double> tau_t(const FloatElement& phi, const TorusPoint& t) {
  for (const auto& v : t.t)
    if (std::abs(std::abs(v) - 1.0) > 1e-9)
      throw std::invalid_argument("tau_t: torus point entries must have modulus 1");
  return torus_value(phi, t.t);
}

FloatElement torus_twist(const FloatElement& phi, const TorusPoint& t) {
  if (!phi.rs) throw std::invalid_argument("torus_twist: missing root system");
  if ((int)t.t.size() != phi.rs->rank)
    throw std::invalid_argument("torus_twist: torus point length does not match the rank");
  for (const auto& v : t.t)
    if (std::abs(std::abs(v) - 1.0) > 1e-9)
      throw std::invalid_argument("torus_twist: torus point entries must have modulus 1");
  FloatElement out = phi;
  for (auto& term : out.terms) {
    const Weight& mu = term.mc.module->weights[(size_t)term.mc.ket];
    Cplx f(1.0, 0.0);
    for (int i = 0; i < phi.rs->rank; ++i) {
      long e = rat_long(pair_coroot(mu, phi.rs->simple_roots[(size_t)i]));
      Cplx base = e >= 0 ? t.t[(size_t)i] : Cplx(1.0, 0.0) / t.t[(size_t)i];
      for (long n = 0; n < std::labs(e); ++n) f *= base;
    }
    term.coeff *= f;
  }
  return out;
}

// ---- tensor assembly -----------------------------------------------------------

TruncatedOperator pi_sigma(const WeylWord& sigma, const FloatElement& phi, int N) {
  if (N < 2) throw std::invalid_argument("pi_sigma: truncation must keep two levels");
  if (!sigma.rs || !phi.rs)
    throw std::invalid_argument("pi_sigma: missing root system");
  if (!(sigma.rs == phi.rs) &&
      !(sigma.rs->cartan == phi.rs->cartan && sigma.rs->d == phi.rs->d))
    throw std::invalid_argument("pi_sigma: Weyl word and element live on different systems");
  if (inversion_count(sigma.rs, sigma.action) != (int)sigma.letters.size())
    throw std::invalid_argument("pi_sigma: word is not reduced");

  int l = (int)sigma.letters.size();
  if (l == 0) {
    TruncatedOperator out;
    out.factor_count = 0;
    out.trunc = N;
    out.safe_window = N;
    out.mat = CMat(1, 1);
    out.mat(0, 0) = evaluate(phi, PBWMonomial{});
    return out;
  }

  long dim = 1;
  for (int k = 0; k < l; ++k) {
    dim *= N;
    if (dim * dim > kMaxDenseEntries)
      throw std::length_error("pi_sigma: dense operator would exceed 10^6 entries (" +
                              std::to_string(l) + " factors at truncation " +
                              std::to_string(N) + "); lower N or the word length");
  }

  TruncatedOperator out;
  out.factor_count = l;
  out.trunc = N;
  out.safe_window = N;
  out.mat = CMat((int)dim, (int)dim);

  struct Partial {
    CMat m;
    int win;
  };

  for (const auto& term : phi.terms) {
    const auto& mod = term.mc.module;
    int dm = mod->dim();
    std::map<int, Partial> cur;
    CMat one(1, 1);
    one(0, 0) = Cplx(1.0);
    cur.emplace(term.mc.bra, Partial{one, N});
    for (int k = 0; k < l && !cur.empty(); ++k) {
      int node = sigma.letters[k];
      double qi = node_q_value(phi.q, phi.rs->d[node - 1]);
      std::map<int, Partial> next;
      for (const auto& [u, part] : cur) {
        for (int v = 0; v < dm; ++v) {
          const Su2Expansion& e = expand_coeff(mod, node, u, v);
          if (e.terms.empty()) continue;
          TruncatedOperator leg = pi_of_expansion(e, N, qi);
          CMat grown = kron(part.m, leg.mat);
          int win = std::min(part.win, leg.safe_window);
          auto it = next.find(v);
          if (it == next.end()) {
            next.emplace(v, Partial{std::move(grown), win});
          } else {
            it->second.m = it->second.m + grown;
            it->second.win = std::min(it->second.win, win);
          }
        }
      }
      cur = std::move(next);
    }
    auto it = cur.find(term.mc.ket);
    if (it == cur.end()) continue;  // every path died: zero contribution
    out.safe_window = std::min(out.safe_window, it->second.win);
    for (size_t i = 0; i < out.mat.a.size(); ++i)
      out.mat.a[i] += term.coeff * it->second.m.a[i];
  }
  return out;
}

std::vector<long> l_diagonal_exponents(const WeylWord& sigma, const Weight& lambda) {
  if (!sigma.rs || !lambda.rs)
    throw std::invalid_argument("l_diagonal_exponents: missing root system");
  std::vector<long> out;
  for (const Weight& gamma : gamma_sequence(sigma))
    out.push_back(rat_long(Rat(2) * inner(lambda, gamma) / inner(gamma, gamma)));
  return out;
}

std::vector<long> grade_window_indices(const WeylWord& sigma, int N, long cap) {
  if (N < 2)
    throw std::invalid_argument("grade_window_indices: truncation must keep two levels");
  const RootSystemPtr& rs = sigma.rs;
  int l = (int)sigma.letters.size();
  // simple-root coordinates of each gamma_k: (gamma_k, pi_i) / d_i
  std::vector<std::vector<long>> expo((size_t)rs->rank, std::vector<long>((size_t)l, 0));
  std::vector<Weight> gammas = gamma_sequence(sigma);
  for (int i = 0; i < rs->rank; ++i)
    for (int k = 0; k < l; ++k)
      expo[(size_t)i][(size_t)k] =
          rat_long(inner(gammas[(size_t)k], rs->fundamental_weights[(size_t)i]) / Rat(rs->d[(size_t)i]));
  long dim = 1;
  for (int k = 0; k < l; ++k) dim *= N;
  std::vector<long> out;
  for (long flat = 0; flat < dim; ++flat) {
    std::vector<int> parts = split_index(flat, l, N);
    bool ok = true;
    for (int i = 0; i < rs->rank && ok; ++i) {
      long g = 0;
      for (int k = 0; k < l; ++k) g += expo[(size_t)i][(size_t)k] * parts[(size_t)k];
      if (g > cap) ok = false;
    }
    if (ok) out.push_back(flat);
  }
  return out;
}

TruncatedOperator L_operator(const WeylWord& sigma, const Weight& lambda, const QScalar& q,
                             int N, long dim_cap) {
  QScalar qf = make_q(Backend::floating, q.exact_value);
  auto mod = build_irreducible<Backend::floating>(sigma.rs, lambda, qf, dim_cap);
  Weight target = act(sigma, lambda);
  int idx = -1;
  for (int j = 0; j < mod->dim(); ++j)
    if (mod->weights[j] == target) {
      if (idx >= 0) throw std::logic_error("L_operator: extreme weight space not a line");
      idx = j;
    }
  if (idx < 0) throw std::logic_error("L_operator: extreme weight missing from module");
  FloatElement a = coeff_element(mod, idx, 0);
  TruncatedOperator A = pi_sigma(sigma, a, N);
  return op_multiply(op_adjoint(A), A);
}

H1Data h1_eigenspace(const WeylWord& sigma, const Weight& lambda, const QScalar& q, int N,
                     double tol) {
  TruncatedOperator L = L_operator(sigma, lambda, q, N);
  double top = 0.0, off = 0.0;
  for (int i = 0; i < L.dim(); ++i)
    for (int j = 0; j < L.dim(); ++j) {
      double v = std::abs(L.mat(i, j));
      if (i == j)
        top = std::max(top, v);
      else
        off = std::max(off, v);
    }
  if (off > tol * (1.0 + top))
    throw std::runtime_error("h1_eigenspace: operator is not diagonal on the truncation");
  H1Data out;
  for (int j = 0; j < L.dim(); ++j)
    if (std::abs(L.mat(j, j) - Cplx(1.0)) < tol) out.indices.push_back(j);
  out.dimension = (int)out.indices.size();
  return out;
}

}  // namespace qflag
