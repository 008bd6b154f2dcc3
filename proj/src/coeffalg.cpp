#include "qflag/coeffalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qflag {

namespace {

template <Backend B>
using CS = typename ScalarOf<B>::cplx;
template <Backend B>
using RS = typename ScalarOf<B>::real;

inline CRat cconj(const CRat& z) { return conj(z); }
inline std::complex<double> cconj(const std::complex<double>& z) { return std::conj(z); }

inline bool scalar_is_zero(const CRat& z) { return z.is_zero(); }
inline bool scalar_is_zero(const std::complex<double>& z) { return std::abs(z) < 1e-13; }

// integer powers of a complex scalar (negative exponents via division)
template <typename C>
C cpow_long(const C& z, long e) {
  C out(1);
  C base = z;
  long n = e >= 0 ? e : -e;
  for (long k = 0; k < n; ++k) out = out * base;
  if (e < 0) out = C(1) / out;
  return out;
}

std::string rat_coeff_str(const CRat& z) {
  if (z.im == 0) return rat_str(z.re);
  std::string s = rat_str(z.re);
  std::string im = rat_str(z.im);
  if (!im.empty() && im[0] == '-')
    s += im + "i";
  else
    s += "+" + im + "i";
  return s;
}

std::string dbl_coeff_str(const std::complex<double>& z) {
  char buf[80];
  if (z.imag() == 0) {
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
    return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

template <Backend B>
std::string coeff_str(const CS<B>& z) {
  if constexpr (B == Backend::exact)
    return rat_coeff_str(z);
  else
    return dbl_coeff_str(z);
}

template <Backend B>
void require_compatible(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y) {
  if (x.rs->type_letter != y.rs->type_letter || x.rs->rank != y.rs->rank)
    throw std::invalid_argument("elements belong to different root systems");
  if (x.q.backend != y.q.backend || x.q.exact_value != y.q.exact_value)
    throw std::invalid_argument("elements use different deformation parameters");
}

// sort by (module name, bra, ket), merge coefficients, drop zeros
template <Backend B>
void canonicalize(AlgebraElementT<B>& x) {
  auto key_less = [](const TermT<B>& a, const TermT<B>& b) {
    if (a.mc.module->name != b.mc.module->name) return a.mc.module->name < b.mc.module->name;
    if (a.mc.bra != b.mc.bra) return a.mc.bra < b.mc.bra;
    return a.mc.ket < b.mc.ket;
  };
  std::sort(x.terms.begin(), x.terms.end(), key_less);
  std::vector<TermT<B>> out;
  for (auto& t : x.terms) {
    if (!out.empty() && !key_less(out.back(), t) && !key_less(t, out.back()))
      out.back().coeff = out.back().coeff + t.coeff;
    else
      out.push_back(t);
  }
  x.terms.clear();
  for (auto& t : out)
    if (!scalar_is_zero(t.coeff)) x.terms.push_back(std::move(t));
}

template <typename S>
std::vector<S> mat_apply(const Mat<S>& m, const std::vector<S>& v) {
  std::vector<S> out(m.rows, S(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (!(m(i, j) == S(0))) out[i] = out[i] + m(i, j) * v[j];
  return out;
}

// ---------------------------------------------------------------------------
// functional testers: spanning sets of raising/lowering operator words and
// weight-class torus projectors over the modules a set of elements touches
// ---------------------------------------------------------------------------

// incremental row echelon / Gram-Schmidt for rank queries over flat vectors
template <Backend B>
struct SpanTracker {
  double tol;
  std::vector<std::vector<CS<B>>> rows;  // exact: reduced rows; float: orthonormal rows
  std::vector<size_t> pivots;            // exact only

  explicit SpanTracker(double t) : tol(t) {}

  int rank() const { return (int)rows.size(); }

  // returns true (and absorbs v) if v extends the span
  bool add(std::vector<CS<B>> v) {
    if constexpr (B == Backend::exact) {
      for (size_t r = 0; r < rows.size(); ++r) {
        const auto& p = v[pivots[r]];
        if (!p.is_zero()) {
          CS<B> f = p / rows[r][pivots[r]];
          for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * rows[r][j];
        }
      }
      size_t piv = v.size();
      for (size_t j = 0; j < v.size(); ++j)
        if (!v[j].is_zero()) {
          piv = j;
          break;
        }
      if (piv == v.size()) return false;
      rows.push_back(std::move(v));
      pivots.push_back(piv);
      return true;
    } else {
      double n0 = 0;
      for (auto& z : v) n0 += std::norm(z);
      n0 = std::sqrt(n0);
      for (int pass = 0; pass < 2; ++pass)
        for (auto& row : rows) {
          std::complex<double> proj = 0;
          for (size_t j = 0; j < v.size(); ++j) proj += std::conj(row[j]) * v[j];
          for (size_t j = 0; j < v.size(); ++j) v[j] -= proj * row[j];
        }
      double n = 0;
      for (auto& z : v) n += std::norm(z);
      n = std::sqrt(n);
      if (n <= tol * std::max(1.0, n0)) return false;
      for (auto& z : v) z /= n;
      rows.push_back(std::move(v));
      return true;
    }
  }
};

template <Backend B>
struct Tester {
  std::vector<ModulePtr<B>> mods;  // deduped, ordered by name
  bool complete = true;
  // operator word families; entry k holds one matrix per module
  std::vector<std::vector<Mat<RS<B>>>> eops, fops;
  std::vector<Weight> classes;         // distinct weights across all modules
  std::vector<std::vector<int>> cls;   // cls[m][s] = class of basis vector s of module m
  double tol = 1e-9;

  long flat_dim() const {
    long d = 0;
    for (auto& m : mods) d += (long)m->dim() * m->dim();
    return d;
  }
};

template <Backend B>
std::vector<RS<B>> flatten_ops(const std::vector<Mat<RS<B>>>& ops) {
  std::vector<RS<B>> out;
  for (const auto& m : ops)
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j) out.push_back(m(i, j));
  return out;
}

// grow span{word operators} by left multiplication with the generators;
// pruning words whose operator tuple is already in the span is lossless
// because dependence is preserved under further left multiplication.
template <Backend B>
std::vector<std::vector<Mat<RS<B>>>> close_word_family(
    const std::vector<ModulePtr<B>>& mods, const std::vector<const std::vector<Mat<RS<B>>>*>& gens,
    double tol, long max_len) {
  using S = RS<B>;
  int r = gens.empty() ? 0 : (int)gens.size();
  std::vector<std::vector<Mat<S>>> ops;
  std::vector<long> len;
  // real-valued rank tracking reuses the complex tracker with zero imaginary parts
  SpanTracker<B> span(tol);
  std::vector<Mat<S>> id;
  for (auto& m : mods) id.push_back(Mat<S>::identity(m->dim()));
  {
    auto flat = flatten_ops<B>(id);
    std::vector<CS<B>> cflat(flat.begin(), flat.end());
    span.add(std::move(cflat));
  }
  ops.push_back(std::move(id));
  len.push_back(0);
  for (size_t head = 0; head < ops.size(); ++head) {
    if (len[head] >= max_len) continue;
    for (int i = 0; i < r; ++i) {
      std::vector<Mat<S>> cand;
      cand.reserve(mods.size());
      bool nonzero = false;
      for (size_t m = 0; m < mods.size(); ++m) {
        Mat<S> p = (*gens[i])[m] * ops[head][m];
        for (int a = 0; a < p.rows && !nonzero; ++a)
          for (int b = 0; b < p.cols && !nonzero; ++b)
            if (!(p(a, b) == S(0))) nonzero = true;
        cand.push_back(std::move(p));
      }
      if (!nonzero) continue;
      auto flat = flatten_ops<B>(cand);
      std::vector<CS<B>> cflat(flat.begin(), flat.end());
      if (span.add(std::move(cflat))) {
        ops.push_back(std::move(cand));
        len.push_back(len[head] + 1);
      }
    }
  }
  return ops;
}

template <Backend B>
Tester<B> build_tester(const std::vector<const AlgebraElementT<B>*>& elems,
                       const EqualsOptions& opt) {
  using S = RS<B>;
  Tester<B> t;
  t.tol = opt.tol;
  for (auto* e : elems)
    for (auto& term : e->terms) {
      bool seen = false;
      for (auto& m : t.mods)
        if (m.get() == term.mc.module.get()) {
          seen = true;
          break;
        }
      if (!seen) t.mods.push_back(term.mc.module);
    }
  std::sort(t.mods.begin(), t.mods.end(),
            [](const ModulePtr<B>& a, const ModulePtr<B>& b) { return a->name < b->name; });

  // weight classes across all modules
  for (auto& m : t.mods)
    for (auto& w : m->weights) t.classes.push_back(w);
  std::sort(t.classes.begin(), t.classes.end(), weight_lex_less);
  t.classes.erase(std::unique(t.classes.begin(), t.classes.end(),
                              [](const Weight& a, const Weight& b) { return a == b; }),
                  t.classes.end());
  for (auto& m : t.mods) {
    std::vector<int> c(m->dim());
    for (int s = 0; s < m->dim(); ++s) {
      auto it = std::lower_bound(t.classes.begin(), t.classes.end(), m->weights[s],
                                 weight_lex_less);
      c[s] = (int)(it - t.classes.begin());
    }
    t.cls.push_back(std::move(c));
  }

  if (t.mods.empty()) return t;
  int r = t.mods.front()->rs->rank;

  // word length never needs to exceed the deepest weight diagram
  long depth = 0;
  for (auto& m : t.mods) {
    Rat hi, lo;
    bool first = true;
    for (auto& w : m->weights) {
      Rat h = height(w);
      if (first || h > hi) hi = h;
      if (first || h < lo) lo = h;
      first = false;
    }
    depth = std::max(depth, rat_long(hi - lo));
  }

  long max_len = depth;
  if (t.flat_dim() > opt.flat_cap) {
    t.complete = false;
    max_len = std::min<long>(depth, 2);  // shallow best-effort probe
  }

  std::vector<std::vector<Mat<S>>> egen(r), fgen(r);
  for (int i = 0; i < r; ++i)
    for (auto& m : t.mods) {
      egen[i].push_back(m->E[i]);
      fgen[i].push_back(m->F[i]);
    }
  std::vector<const std::vector<Mat<S>>*> eptr, fptr;
  for (int i = 0; i < r; ++i) {
    eptr.push_back(&egen[i]);
    fptr.push_back(&fgen[i]);
  }
  t.eops = close_word_family<B>(t.mods, eptr, opt.tol, max_len);
  t.fops = close_word_family<B>(t.mods, fptr, opt.tol, max_len);
  return t;
}

// evaluation vector of one element over all (f, class, e) test functionals
template <Backend B>
std::vector<CS<B>> evaluation_vector(const Tester<B>& t, const AlgebraElementT<B>& x) {
  using S = RS<B>;
  size_t nf = t.fops.size(), ne = t.eops.size(), nc = t.classes.size();
  std::vector<CS<B>> out(nf * nc * ne, CS<B>(0));
  for (auto& term : x.terms) {
    size_t mi = 0;
    while (t.mods[mi].get() != term.mc.module.get()) ++mi;
    const auto& m = *term.mc.module;
    int dim = m.dim();
    // bra rows through the lowering words:  g^T F_u
    std::vector<S> gr(dim);
    for (int s = 0; s < dim; ++s) gr[s] = m.gram(term.mc.bra, s);
    std::vector<std::vector<S>> rows(nf);
    for (size_t f = 0; f < nf; ++f) {
      const Mat<S>& op = t.fops[f][mi];
      std::vector<S> row(dim, S(0));
      for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
          if (!(op(i, j) == S(0))) row[j] = row[j] + gr[i] * op(i, j);
      rows[f] = std::move(row);
    }
    // ket columns through the raising words:  E_w e_ket
    std::vector<std::vector<S>> cols(ne);
    for (size_t e = 0; e < ne; ++e) {
      const Mat<S>& op = t.eops[e][mi];
      std::vector<S> col(dim);
      for (int i = 0; i < dim; ++i) col[i] = op(i, term.mc.ket);
      cols[e] = std::move(col);
    }
    for (size_t f = 0; f < nf; ++f)
      for (size_t e = 0; e < ne; ++e) {
        std::vector<S> per_class(nc, S(0));
        for (int s = 0; s < dim; ++s) {
          S v = rows[f][s] * cols[e][s];
          if (!(v == S(0))) per_class[t.cls[mi][s]] = per_class[t.cls[mi][s]] + v;
        }
        for (size_t c = 0; c < nc; ++c)
          if (!(per_class[c] == S(0)))
            out[(f * nc + c) * ne + e] = out[(f * nc + c) * ne + e] + term.coeff * CS<B>(per_class[c]);
      }
  }
  return out;
}

template <Backend B>
bool vector_is_zero(const std::vector<CS<B>>& v, double tol) {
  if constexpr (B == Backend::exact) {
    for (auto& z : v)
      if (!z.is_zero()) return false;
    return true;
  } else {
    for (auto& z : v)
      if (std::abs(z) > tol) return false;
    return true;
  }
}

// process-wide tester cache keyed by the involved module set and options
template <Backend B>
std::map<std::string, std::shared_ptr<Tester<B>>>& tester_cache() {
  static std::map<std::string, std::shared_ptr<Tester<B>>> cache;
  return cache;
}

template <Backend B>
std::shared_ptr<Tester<B>> tester_for(const std::vector<const AlgebraElementT<B>*>& elems,
                                      const EqualsOptions& opt) {
  std::vector<const UqModuleT<B>*> mods;
  for (auto* e : elems)
    for (auto& term : e->terms) mods.push_back(term.mc.module.get());
  std::sort(mods.begin(), mods.end());
  mods.erase(std::unique(mods.begin(), mods.end()), mods.end());
  std::ostringstream key;
  key << opt.flat_cap << "|" << opt.tol;
  for (auto* m : mods) key << "|" << (const void*)m;
  auto& cache = tester_cache<B>();
  auto it = cache.find(key.str());
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<Tester<B>>(build_tester<B>(elems, opt));
  cache[key.str()] = t;
  return t;
}

}  // namespace

std::string ternary_str(Ternary t) {
  switch (t) {
    case Ternary::yes: return "yes";
    case Ternary::no: return "no";
    default: return "unknown";
  }
}

// ---------------------------------------------------------------------------
// construction and linear structure
// ---------------------------------------------------------------------------

template <Backend B>
AlgebraElementT<B> zero_element(const RootSystemPtr& rs, const QScalar& q) {
  AlgebraElementT<B> x;
  x.rs = rs;
  x.q = q;
  return x;
}

template <Backend B>
AlgebraElementT<B> unit_element(const RootSystemPtr& rs, const QScalar& q) {
  Weight zero(rs, std::vector<Rat>(rs->rank, Rat(0)));
  auto triv = build_irreducible<B>(rs, zero, q);
  return coeff_element<B>(triv, 0, 0);
}

template <Backend B>
AlgebraElementT<B> coeff_element(const ModulePtr<B>& m, int bra, int ket) {
  if (bra < 0 || bra >= m->dim() || ket < 0 || ket >= m->dim())
    throw std::invalid_argument("matrix coefficient index out of range");
  AlgebraElementT<B> x;
  x.rs = m->rs;
  x.q = m->q;
  x.terms.push_back({CS<B>(1), {m, bra, ket}});
  return x;
}

template <Backend B>
AlgebraElementT<B> add(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y) {
  require_compatible(x, y);
  AlgebraElementT<B> out = x;
  out.terms.insert(out.terms.end(), y.terms.begin(), y.terms.end());
  canonicalize(out);
  return out;
}

template <Backend B>
AlgebraElementT<B> sub(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y) {
  return add(x, scalar_mul<B>(CS<B>(-1), y));
}

template <Backend B>
AlgebraElementT<B> scalar_mul(const typename ScalarOf<B>::cplx& c, const AlgebraElementT<B>& x) {
  AlgebraElementT<B> out = x;
  for (auto& t : out.terms) t.coeff = c * t.coeff;
  canonicalize(out);
  return out;
}

template <Backend B>
AlgebraElementT<B> multiply(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y,
                            long dim_cap) {
  require_compatible(x, y);
  AlgebraElementT<B> out = zero_element<B>(x.rs, x.q);
  for (auto& s : x.terms)
    for (auto& t : y.terms) {
      auto prod = tensor(s.mc.module, t.mc.module, dim_cap);
      int dn = t.mc.module->dim();
      TermT<B> term;
      term.coeff = s.coeff * t.coeff;
      term.mc = {prod, s.mc.bra * dn + t.mc.bra, s.mc.ket * dn + t.mc.ket};
      out.terms.push_back(std::move(term));
    }
  canonicalize(out);
  return out;
}

template <Backend B>
AlgebraElementT<B> star(const AlgebraElementT<B>& x) {
  using S = RS<B>;
  AlgebraElementT<B> out = zero_element<B>(x.rs, x.q);
  for (auto& t : x.terms) {
    const auto& m = t.mc.module;
    if (m->tensor_left) {
      // (phi psi)* = psi* phi*, applied to the two tensor legs
      int dn = m->tensor_right->dim();
      auto left = coeff_element<B>(m->tensor_left, t.mc.bra / dn, t.mc.ket / dn);
      auto right = coeff_element<B>(m->tensor_right, t.mc.bra % dn, t.mc.ket % dn);
      auto piece = multiply(star(right), star(left));
      out = add(out, scalar_mul<B>(cconj(t.coeff), piece));
      continue;
    }
    auto dual = dual_module(m);
    long e = rat_long(inner(m->weights[t.mc.bra] - m->weights[t.mc.ket], m->rs->rho));
    S qv = q_of<S>(m->q);
    CS<B> pref = cconj(t.coeff) * CS<B>(spow(qv, e));
    // Gram weights collapse to the single term C^{M*}_{a;b} when the basis
    // is orthonormal; in general the form-dual vectors enter.
    for (int c = 0; c < m->dim(); ++c) {
      if (m->gram(c, t.mc.bra) == S(0)) continue;
      for (int d = 0; d < m->dim(); ++d) {
        if (m->gram(d, t.mc.ket) == S(0)) continue;
        TermT<B> term;
        term.coeff = pref * CS<B>(m->gram(c, t.mc.bra) * m->gram(d, t.mc.ket));
        term.mc = {dual, c, d};
        out.terms.push_back(std::move(term));
      }
    }
  }
  canonicalize(out);
  return out;
}

template <Backend B>
typename ScalarOf<B>::cplx evaluate(const AlgebraElementT<B>& x, const PBWMonomial& mono) {
  using S = RS<B>;
  int r = x.rs->rank;
  if (!mono.k_exponents.empty() && (int)mono.k_exponents.size() != r)
    throw std::invalid_argument("torus exponent vector has wrong length");
  for (int i : mono.f_word)
    if (i < 1 || i > r) throw std::invalid_argument("lowering index out of range");
  for (int i : mono.e_word)
    if (i < 1 || i > r) throw std::invalid_argument("raising index out of range");
  CS<B> total(0);
  for (auto& t : x.terms) {
    const auto& m = *t.mc.module;
    S qv = q_of<S>(m.q);
    std::vector<S> col(m.dim(), S(0));
    col[t.mc.ket] = S(1);
    for (auto it = mono.e_word.rbegin(); it != mono.e_word.rend(); ++it)
      col = mat_apply(m.E[*it - 1], col);
    if (!mono.k_exponents.empty())
      for (int s = 0; s < m.dim(); ++s) {
        if (col[s] == S(0)) continue;
        long e = 0;
        for (int i = 0; i < r; ++i) e += mono.k_exponents[i] * m.k_exponent(s, i);
        col[s] = col[s] * spow(qv, e);
      }
    for (auto it = mono.f_word.rbegin(); it != mono.f_word.rend(); ++it)
      col = mat_apply(m.F[*it - 1], col);
    S val(0);
    for (int s = 0; s < m.dim(); ++s)
      if (!(col[s] == S(0))) val = val + m.gram(t.mc.bra, s) * col[s];
    total = total + t.coeff * CS<B>(val);
  }
  return total;
}

template <Backend B>
typename ScalarOf<B>::cplx torus_value(const AlgebraElementT<B>& x,
                                       const std::vector<typename ScalarOf<B>::cplx>& t) {
  if ((int)t.size() != x.rs->rank) throw std::invalid_argument("torus point has wrong length");
  CS<B> total(0);
  for (auto& term : x.terms) {
    const auto& m = *term.mc.module;
    if (m.gram(term.mc.bra, term.mc.ket) == RS<B>(0)) continue;
    CS<B> ch(1);
    const Weight& mu = m.weights[term.mc.ket];
    for (int j = 0; j < x.rs->rank; ++j) ch = ch * cpow_long(t[j], rat_long(mu.c[j]));
    total = total + term.coeff * CS<B>(m.gram(term.mc.bra, term.mc.ket)) * ch;
  }
  return total;
}

// ---------------------------------------------------------------------------
// bimodule actions
// ---------------------------------------------------------------------------

template <Backend B>
AlgebraElementT<B> left_act(const UqGen& g, const AlgebraElementT<B>& x) {
  using S = RS<B>;
  if (g.node < 1 || g.node > x.rs->rank) throw std::invalid_argument("generator node out of range");
  int i = g.node - 1;
  AlgebraElementT<B> out = zero_element<B>(x.rs, x.q);
  for (auto& t : x.terms) {
    const auto& m = *t.mc.module;
    S qv = q_of<S>(m.q);
    switch (g.kind) {
      case GenKind::torus:
      case GenKind::torus_inv: {
        long sgn = g.kind == GenKind::torus ? 1 : -1;
        TermT<B> nt = t;
        nt.coeff = t.coeff * CS<B>(spow(qv, sgn * m.k_exponent(t.mc.ket, i)));
        out.terms.push_back(std::move(nt));
        break;
      }
      case GenKind::raise_op:
      case GenKind::lower_op: {
        const Mat<S>& act = g.kind == GenKind::raise_op ? m.E[i] : m.F[i];
        for (int c = 0; c < m.dim(); ++c)
          if (!(act(c, t.mc.ket) == S(0))) {
            TermT<B> nt;
            nt.coeff = t.coeff * CS<B>(act(c, t.mc.ket));
            nt.mc = {t.mc.module, t.mc.bra, c};
            out.terms.push_back(std::move(nt));
          }
        break;
      }
    }
  }
  canonicalize(out);
  return out;
}

template <Backend B>
AlgebraElementT<B> right_act(const AlgebraElementT<B>& x, const UqGen& g) {
  using S = RS<B>;
  if (g.node < 1 || g.node > x.rs->rank) throw std::invalid_argument("generator node out of range");
  int i = g.node - 1;
  AlgebraElementT<B> out = zero_element<B>(x.rs, x.q);
  for (auto& t : x.terms) {
    const auto& m = *t.mc.module;
    S qv = q_of<S>(m.q);
    long di = m.rs->d[i];
    switch (g.kind) {
      case GenKind::torus:
      case GenKind::torus_inv: {
        long sgn = g.kind == GenKind::torus ? 1 : -1;
        TermT<B> nt = t;
        nt.coeff = t.coeff * CS<B>(spow(qv, sgn * m.k_exponent(t.mc.bra, i)));
        out.terms.push_back(std::move(nt));
        break;
      }
      case GenKind::raise_op: {
        // pi(E_i^*) = q_i^{-1} F_i K_i
        for (int c = 0; c < m.dim(); ++c)
          if (!(m.F[i](c, t.mc.bra) == S(0))) {
            TermT<B> nt;
            nt.coeff =
                t.coeff * CS<B>(spow(qv, m.k_exponent(t.mc.bra, i) - di) * m.F[i](c, t.mc.bra));
            nt.mc = {t.mc.module, c, t.mc.ket};
            out.terms.push_back(std::move(nt));
          }
        break;
      }
      case GenKind::lower_op: {
        // pi(F_i^*) = q_i K_i^{-1} E_i
        for (int c = 0; c < m.dim(); ++c)
          if (!(m.E[i](c, t.mc.bra) == S(0))) {
            TermT<B> nt;
            nt.coeff = t.coeff * CS<B>(spow(qv, di - m.k_exponent(c, i)) * m.E[i](c, t.mc.bra));
            nt.mc = {t.mc.module, c, t.mc.ket};
            out.terms.push_back(std::move(nt));
          }
        break;
      }
    }
  }
  canonicalize(out);
  return out;
}

// ---------------------------------------------------------------------------
// decision procedures
// ---------------------------------------------------------------------------

template <Backend B>
Ternary is_zero_functional(const AlgebraElementT<B>& x, const EqualsOptions& opt) {
  if (x.terms.empty()) return Ternary::yes;
  auto t = tester_for<B>({&x}, opt);
  auto v = evaluation_vector(*t, x);
  if (!vector_is_zero<B>(v, opt.tol)) return Ternary::no;
  return t->complete ? Ternary::yes : Ternary::unknown;
}

template <Backend B>
Ternary equals(const AlgebraElementT<B>& x, const AlgebraElementT<B>& y,
               const EqualsOptions& opt) {
  return is_zero_functional(sub(x, y), opt);
}

template <Backend B>
Ternary in_span(const AlgebraElementT<B>& x, const std::vector<AlgebraElementT<B>>& gens,
                const EqualsOptions& opt) {
  if (gens.empty()) return is_zero_functional(x, opt);
  std::vector<const AlgebraElementT<B>*> all = {&x};
  for (auto& g : gens) all.push_back(&g);
  auto t = tester_for<B>(all, opt);
  SpanTracker<B> span(opt.tol);
  for (auto& g : gens) span.add(evaluation_vector(*t, g));
  bool grew = span.add(evaluation_vector(*t, x));
  if (grew) return t->complete ? Ternary::no : Ternary::unknown;
  return t->complete ? Ternary::yes : Ternary::unknown;
}

template <Backend B>
Ternary spans_equal(const std::vector<AlgebraElementT<B>>& xs,
                    const std::vector<AlgebraElementT<B>>& ys, const EqualsOptions& opt) {
  std::vector<const AlgebraElementT<B>*> all;
  for (auto& g : xs) all.push_back(&g);
  for (auto& g : ys) all.push_back(&g);
  if (all.empty()) return Ternary::yes;
  auto t = tester_for<B>(all, opt);
  SpanTracker<B> sx(opt.tol), sy(opt.tol), sxy(opt.tol);
  for (auto& g : xs) {
    auto v = evaluation_vector(*t, g);
    sx.add(v);
    sxy.add(std::move(v));
  }
  for (auto& g : ys) {
    auto v = evaluation_vector(*t, g);
    sy.add(v);
    sxy.add(std::move(v));
  }
  bool eq = sx.rank() == sxy.rank() && sy.rank() == sxy.rank();
  if (!eq) return t->complete ? Ternary::no : Ternary::unknown;
  return t->complete ? Ternary::yes : Ternary::unknown;
}

// ---------------------------------------------------------------------------
// structural commutation checks
// ---------------------------------------------------------------------------

namespace {

bool strictly_below(const Weight& a, const Weight& b) {  // a < b in dominance order
  return !(a == b) && dominance_leq(a, b);
}

}  // namespace

template <Backend B>
CommutationResultT<B> commutation_defect(const ModulePtr<B>& v_lambda,
                                         const ModulePtr<B>& v_Lambda, int v, int w,
                                         CommutationVariant variant, const EqualsOptions& opt) {
  using S = RS<B>;
  if (v < 0 || v >= v_lambda->dim() || w < 0 || w >= v_Lambda->dim())
    throw std::invalid_argument("weight vector index out of range");
  const Weight lambda = v_lambda->highest_weight;
  const Weight Lambda = v_Lambda->highest_weight;
  const Weight mu = v_lambda->weights[v];
  const Weight nu = v_Lambda->weights[w];
  S qv = q_of<S>(v_lambda->q);

  auto A = coeff_element<B>(v_lambda, v, 0);
  auto Bc = coeff_element<B>(v_Lambda, w, 0);

  CommutationResultT<B> res;
  long expo = 0;
  switch (variant) {
    case CommutationVariant::plain:
      expo = rat_long(inner(lambda, Lambda) - inner(mu, nu));
      res.defect = sub(multiply(A, Bc), scalar_mul<B>(CS<B>(spow(qv, expo)), multiply(Bc, A)));
      for (int vp = 0; vp < v_lambda->dim(); ++vp)
        for (int wp = 0; wp < v_Lambda->dim(); ++wp) {
          const Weight &mup = v_lambda->weights[vp], &nup = v_Lambda->weights[wp];
          if (strictly_below(mu, mup) && strictly_below(nup, nu) && mup + nup == mu + nu)
            res.span_set.push_back(
                multiply(coeff_element<B>(v_lambda, vp, 0), coeff_element<B>(v_Lambda, wp, 0)));
        }
      break;
    case CommutationVariant::reversed:
      expo = rat_long(inner(mu, nu) - inner(lambda, Lambda));
      res.defect = sub(multiply(A, Bc), scalar_mul<B>(CS<B>(spow(qv, expo)), multiply(Bc, A)));
      for (int vp = 0; vp < v_lambda->dim(); ++vp)
        for (int wp = 0; wp < v_Lambda->dim(); ++wp) {
          const Weight &mup = v_lambda->weights[vp], &nup = v_Lambda->weights[wp];
          if (strictly_below(nu, nup) && strictly_below(mup, mu) && mup + nup == mu + nu)
            res.span_set.push_back(
                multiply(coeff_element<B>(v_Lambda, wp, 0), coeff_element<B>(v_lambda, vp, 0)));
        }
      break;
    case CommutationVariant::starred:
      expo = rat_long(inner(mu, nu) - inner(lambda, Lambda));
      res.defect = sub(multiply(star(A), Bc),
                       scalar_mul<B>(CS<B>(spow(qv, expo)), multiply(Bc, star(A))));
      for (int vp = 0; vp < v_lambda->dim(); ++vp)
        for (int wp = 0; wp < v_Lambda->dim(); ++wp) {
          const Weight &mup = v_lambda->weights[vp], &nup = v_Lambda->weights[wp];
          if (strictly_below(mup, mu) && strictly_below(nup, nu) && mu - mup == nu - nup)
            res.span_set.push_back(multiply(star(coeff_element<B>(v_lambda, vp, 0)),
                                            coeff_element<B>(v_Lambda, wp, 0)));
        }
      break;
  }
  res.in_span = in_span(res.defect, res.span_set, opt);
  return res;
}

template <Backend B>
Ternary commutation_span_symmetric(const ModulePtr<B>& v_lambda, const ModulePtr<B>& v_Lambda,
                                   int v, int w, CommutationVariant variant,
                                   const EqualsOptions& opt) {
  if (v < 0 || v >= v_lambda->dim() || w < 0 || w >= v_Lambda->dim())
    throw std::invalid_argument("weight vector index out of range");
  const Weight mu = v_lambda->weights[v];
  const Weight nu = v_Lambda->weights[w];
  std::vector<AlgebraElementT<B>> fwd, rev;
  for (int vp = 0; vp < v_lambda->dim(); ++vp)
    for (int wp = 0; wp < v_Lambda->dim(); ++wp) {
      const Weight &mup = v_lambda->weights[vp], &nup = v_Lambda->weights[wp];
      bool in_set = false;
      switch (variant) {
        case CommutationVariant::plain:
          in_set = strictly_below(mu, mup) && strictly_below(nup, nu) && mup + nup == mu + nu;
          break;
        case CommutationVariant::reversed:
          in_set = strictly_below(nu, nup) && strictly_below(mup, mu) && mup + nup == mu + nu;
          break;
        case CommutationVariant::starred:
          in_set = strictly_below(mup, mu) && strictly_below(nup, nu) && mu - mup == nu - nup;
          break;
      }
      if (!in_set) continue;
      auto cv = coeff_element<B>(v_lambda, vp, 0);
      auto cw = coeff_element<B>(v_Lambda, wp, 0);
      if (variant == CommutationVariant::starred) {
        fwd.push_back(multiply(star(cv), cw));
        rev.push_back(multiply(cw, star(cv)));
      } else {
        fwd.push_back(multiply(cv, cw));
        rev.push_back(multiply(cw, cv));
      }
    }
  return spans_equal(fwd, rev, opt);
}

template <Backend B>
Ternary unitarity_check(const ModulePtr<B>& m, int a, int b, const EqualsOptions& opt) {
  using S = RS<B>;
  if (a < 0 || a >= m->dim() || b < 0 || b >= m->dim())
    throw std::invalid_argument("basis index out of range");
  auto dual = dual_module(m);         // hold the dual alive: gram is borrowed
  const Mat<S>& ginv = dual->gram;    // blockwise inverse of the Gram
  AlgebraElementT<B> lhs = zero_element<B>(m->rs, m->q);
  for (int s = 0; s < m->dim(); ++s)
    for (int t = 0; t < m->dim(); ++t) {
      if (ginv(t, s) == S(0)) continue;
      auto prod = multiply(star(coeff_element<B>(m, s, a)), coeff_element<B>(m, t, b));
      lhs = add(lhs, scalar_mul<B>(CS<B>(ginv(t, s)), prod));
    }
  auto rhs = scalar_mul<B>(CS<B>(m->gram(a, b)), unit_element<B>(m->rs, m->q));
  return equals(lhs, rhs, opt);
}

template <Backend B>
std::string element_to_text(const AlgebraElementT<B>& x) {
  if (x.terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto& t : x.terms) {
    if (!first) out << " + ";
    first = false;
    out << "(" << coeff_str<B>(t.coeff) << ")*C{" << t.mc.module->name << "}[" << t.mc.bra << ";"
        << t.mc.ket << "]";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

#define QFLAG_INSTANTIATE(B)                                                                      \
  template AlgebraElementT<B> zero_element<B>(const RootSystemPtr&, const QScalar&);              \
  template AlgebraElementT<B> unit_element<B>(const RootSystemPtr&, const QScalar&);              \
  template AlgebraElementT<B> coeff_element<B>(const ModulePtr<B>&, int, int);                    \
  template AlgebraElementT<B> add<B>(const AlgebraElementT<B>&, const AlgebraElementT<B>&);       \
  template AlgebraElementT<B> sub<B>(const AlgebraElementT<B>&, const AlgebraElementT<B>&);       \
  template AlgebraElementT<B> scalar_mul<B>(const typename ScalarOf<B>::cplx&,                    \
                                            const AlgebraElementT<B>&);                          \
  template AlgebraElementT<B> multiply<B>(const AlgebraElementT<B>&, const AlgebraElementT<B>&,   \
                                          long);                                                 \
  template AlgebraElementT<B> star<B>(const AlgebraElementT<B>&);                                 \
  template typename ScalarOf<B>::cplx evaluate<B>(const AlgebraElementT<B>&, const PBWMonomial&); \
  template typename ScalarOf<B>::cplx torus_value<B>(                                            \
      const AlgebraElementT<B>&, const std::vector<typename ScalarOf<B>::cplx>&);                 \
  template AlgebraElementT<B> left_act<B>(const UqGen&, const AlgebraElementT<B>&);               \
  template AlgebraElementT<B> right_act<B>(const AlgebraElementT<B>&, const UqGen&);              \
  template Ternary is_zero_functional<B>(const AlgebraElementT<B>&, const EqualsOptions&);        \
  template Ternary equals<B>(const AlgebraElementT<B>&, const AlgebraElementT<B>&,                \
                             const EqualsOptions&);                                              \
  template Ternary in_span<B>(const AlgebraElementT<B>&, const std::vector<AlgebraElementT<B>>&,  \
                              const EqualsOptions&);                                             \
  template Ternary spans_equal<B>(const std::vector<AlgebraElementT<B>>&,                         \
                                  const std::vector<AlgebraElementT<B>>&, const EqualsOptions&);  \
  template CommutationResultT<B> commutation_defect<B>(const ModulePtr<B>&, const ModulePtr<B>&,  \
                                                       int, int, CommutationVariant,             \
                                                       const EqualsOptions&);                    \
  template Ternary commutation_span_symmetric<B>(const ModulePtr<B>&, const ModulePtr<B>&, int,   \
                                                 int, CommutationVariant, const EqualsOptions&);  \
  template Ternary unitarity_check<B>(const ModulePtr<B>&, int, int, const EqualsOptions&);       \
  template std::string element_to_text<B>(const AlgebraElementT<B>&);

QFLAG_INSTANTIATE(Backend::exact)
QFLAG_INSTANTIATE(Backend::floating)

#undef QFLAG_INSTANTIATE

}  // namespace qflag
