#include "qflag/uqmod.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qflag/numeig.hpp"

namespace qflag {

namespace {

// process-wide memo tables so that repeated constructions hand back the same
// object; downstream algebra code keys spanning sets by module identity
template <Backend B>
std::map<std::string, std::weak_ptr<const UqModuleT<B>>>& build_memo() {
  static std::map<std::string, std::weak_ptr<const UqModuleT<B>>> memo;
  return memo;
}
template <Backend B>
std::map<const void*, std::weak_ptr<const UqModuleT<B>>>& dual_memo() {
  static std::map<const void*, std::weak_ptr<const UqModuleT<B>>> memo;
  return memo;
}
template <Backend B>
std::map<std::pair<const void*, const void*>, std::weak_ptr<const UqModuleT<B>>>& tensor_memo() {
  static std::map<std::pair<const void*, const void*>, std::weak_ptr<const UqModuleT<B>>> memo;
  return memo;
}

std::string weight_key(const Weight& w) { return weight_str(w); }

long ipair(const Weight& mu, const Weight& alpha) {
  Rat v = inner(mu, alpha);
  if (!rat_is_int(v)) throw std::logic_error("non-integral pairing exponent");
  return rat_long(v);
}

// ---- exact construction of V(lambda) ----------------------------------------

struct ExactBuild {
  std::vector<Weight> weights;
  std::vector<Mat<Rat>> E, F;
  Mat<Rat> gram;
};

ExactBuild build_exact(const RootSystemPtr& rs, const Weight& lambda, const Rat& q) {
  const int r = rs->rank;
  const long dim = weyl_dimension(rs, lambda);
  ExactBuild out;
  out.weights.reserve(dim);
  out.E.assign(r, Mat<Rat>((int)dim, (int)dim));
  out.F.assign(r, Mat<Rat>((int)dim, (int)dim));
  out.gram = Mat<Rat>((int)dim, (int)dim);

  std::vector<std::vector<int>> words;  // F-word of each accepted vector
  out.weights.push_back(lambda);
  words.push_back({});
  out.gram(0, 0) = 1;

  struct Cand {
    Weight wt;
    std::vector<int> word;  // gen prepended to parent's word (0-based letters)
    int parent = -1, gen = -1;
    std::vector<std::vector<Rat>> evec;  // evec[j] = E_j applied, in basis coords
  };

  std::vector<int> level = {0};
  while (!level.empty()) {
    // generate candidates F_i . (level basis)
    std::vector<Cand> cands;
    for (int p : level) {
      for (int i = 0; i < r; ++i) {
        Cand c;
        c.wt = out.weights[p] - rs->simple_roots[i];
        c.word = words[p];
        c.word.insert(c.word.begin(), i);
        c.parent = p;
        c.gen = i;
        c.evec.assign(r, std::vector<Rat>((size_t)dim, Rat(0)));
        for (int j = 0; j < r; ++j) {
          // E_j (F_i x) = F_i (E_j x) + delta_ij [(, alpha_j^vee)] x
          for (int m = 0; m < (int)out.weights.size(); ++m) {
            const Rat& e = out.E[j](m, p);
            if (e == 0) continue;
            for (int t = 0; t < (int)out.weights.size(); ++t) {
              const Rat& f = out.F[i](t, m);
              if (f != 0) c.evec[j][t] += f * e;
            }
          }
          if (j == i) {
            long mm = rat_long(pair_coroot(out.weights[p], rs->simple_roots[j]));
            Rat coef = q_integer(q, mm, rs->d[j]);
            if (coef != 0) c.evec[j][p] += coef;
          }
        }
        cands.push_back(std::move(c));
      }
    }

    // group by weight (lex-descending groups, lex-ascending words inside)
    std::map<std::string, std::vector<int>> groups;
    for (int c = 0; c < (int)cands.size(); ++c) groups[weight_key(cands[c].wt)].push_back(c);
    std::vector<std::pair<Weight, std::vector<int>>> ordered;
    for (auto& [k, idxs] : groups) {
      std::sort(idxs.begin(), idxs.end(),
                [&](int a, int b) { return cands[a].word < cands[b].word; });
      ordered.emplace_back(cands[idxs[0]].wt, idxs);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return weight_lex_less(b.first, a.first); });

    std::vector<int> next;
    for (auto& [wt, idxs] : ordered) {
      const int nc = (int)idxs.size();
      // pairwise form values: <F_i x, c'> = q^{-d_i - (wt, alpha_i)} <x, E_i c'>
      Mat<Rat> P(nc, nc);
      for (int u = 0; u < nc; ++u) {
        const Cand& cu = cands[idxs[u]];
        long expo = -rs->d[cu.gen] - ipair(wt, rs->simple_roots[cu.gen]);
        Rat scale = rat_pow(q, expo);
        for (int v = 0; v < nc; ++v) {
          const Cand& cv = cands[idxs[v]];
          Rat s(0);
          const auto& ev = cv.evec[cu.gen];
          for (int m = 0; m < (int)out.weights.size(); ++m) {
            if (ev[m] == 0) continue;
            const Rat& g = out.gram(cu.parent, m);
            if (g != 0) s += g * ev[m];
          }
          P(u, v) = scale * s;
        }
      }
      for (int u = 0; u < nc; ++u)
        for (int v = u + 1; v < nc; ++v)
          if (P(u, v) != P(v, u)) throw std::logic_error("contravariant form asymmetry");

      std::vector<int> sel;  // positions in idxs accepted as basis vectors
      std::vector<int> selglob;
      for (int u = 0; u < nc; ++u) {
        // does u enlarge the span? test rank of the form on sel + {u}
        Mat<Rat> sub((int)sel.size() + 1, (int)sel.size() + 1);
        for (int a = 0; a <= (int)sel.size(); ++a)
          for (int b = 0; b <= (int)sel.size(); ++b) {
            int ia = a < (int)sel.size() ? sel[a] : u;
            int ib = b < (int)sel.size() ? sel[b] : u;
            sub(a, b) = P(ia, ib);
          }
        const Cand& cu = cands[idxs[u]];
        if (rank(sub) == (int)sel.size() + 1) {
          int n = (int)out.weights.size();
          if (n >= dim) throw std::logic_error("basis exceeds Weyl dimension");
          out.weights.push_back(cu.wt);
          words.push_back(cu.word);
          for (int j = 0; j < r; ++j)
            for (int m = 0; m < n; ++m)
              if (cu.evec[j][m] != 0) out.E[j](m, n) = cu.evec[j][m];
          sel.push_back(u);
          selglob.push_back(n);
          out.F[cu.gen](n, cu.parent) = 1;
          next.push_back(n);
        } else {
          // dependent: express through the accepted vectors of this weight
          Mat<Rat> gsel((int)sel.size(), (int)sel.size());
          std::vector<Rat> rhs(sel.size());
          for (int a = 0; a < (int)sel.size(); ++a) {
            for (int b = 0; b < (int)sel.size(); ++b) gsel(a, b) = P(sel[a], sel[b]);
            rhs[a] = P(sel[a], u);
          }
          std::vector<Rat> coef(sel.size(), Rat(0));
          if (!sel.empty()) {
            auto sol = solve(gsel, rhs);
            if (!sol) throw std::logic_error("dependent vector failed to resolve");
            coef = *sol;
          }
          for (int k = 0; k < (int)sel.size(); ++k)
            if (coef[k] != 0) out.F[cu.gen](selglob[k], cu.parent) = coef[k];
        }
      }
      // gram entries among the accepted vectors of this group
      for (int a = 0; a < (int)sel.size(); ++a)
        for (int b = 0; b < (int)sel.size(); ++b)
          out.gram(selglob[a], selglob[b]) = P(sel[a], sel[b]);
    }
    level = std::move(next);
  }
  if ((long)out.weights.size() != dim)
    throw std::logic_error("constructed dimension disagrees with the Weyl formula");
  return out;
}

std::string module_key(const RootSystemPtr& rs, const Weight& lambda, const QScalar& q) {
  std::ostringstream o;
  o << rs->type_letter << rs->rank << "|" << weight_str(lambda) << "|" << rat_str(q.exact_value)
    << "|" << backend_name(q.backend);
  return o.str();
}

// index groups by weight, in first-appearance order
std::vector<std::pair<Weight, std::vector<int>>> weight_blocks(const std::vector<Weight>& ws) {
  std::vector<std::pair<Weight, std::vector<int>>> blocks;
  std::map<std::string, int> pos;
  for (int j = 0; j < (int)ws.size(); ++j) {
    auto key = weight_key(ws[j]);
    auto it = pos.find(key);
    if (it == pos.end()) {
      pos[key] = (int)blocks.size();
      blocks.push_back({ws[j], {j}});
    } else {
      blocks[it->second].second.push_back(j);
    }
  }
  return blocks;
}

void orthonormalize(UqModuleT<Backend::floating>& m) {
  const int n = m.dim();
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, n), Ui = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [wt, idx] : weight_blocks(m.weights)) {
    const int b = (int)idx.size();
    Eigen::MatrixXd g(b, b);
    for (int a = 0; a < b; ++a)
      for (int c = 0; c < b; ++c) g(a, c) = m.gram(idx[a], idx[c]);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
      throw std::logic_error("contravariant form is not positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd ub = L.transpose();
    Eigen::MatrixXd uib =
        ub.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(b, b));
    for (int a = 0; a < b; ++a)
      for (int c = 0; c < b; ++c) {
        U(idx[a], idx[c]) = ub(a, c);
        Ui(idx[a], idx[c]) = uib(a, c);
      }
  }
  for (auto* mats : {&m.E, &m.F})
    for (auto& A : *mats) {
      Eigen::MatrixXd prod = U * to_eigen(A) * Ui;
      A = from_eigen(prod);
    }
  m.gram = Mat<double>::identity(n);
  m.orthonormal = true;
}

Mat<double> to_double_mat(const Mat<Rat>& m) {
  Mat<double> out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = rat_dbl(m(i, j));
  return out;
}

// kernel dimension of the stacked action of the listed generators (0-based)
// restricted to the given column set
template <Backend B>
long joint_kernel_dim(const UqModuleT<B>& m, const std::vector<int>& gens,
                      const std::vector<int>& cols) {
  using S = typename ScalarOf<B>::real;
  const int b = (int)cols.size();
  if (gens.empty()) return b;
  Mat<S> A((int)gens.size() * m.dim(), b);
  for (int g = 0; g < (int)gens.size(); ++g)
    for (int row = 0; row < m.dim(); ++row)
      for (int c = 0; c < b; ++c) A(g * m.dim() + row, c) = m.E[gens[g]](row, cols[c]);
  if constexpr (B == Backend::exact) {
    return b - rank(A);
  } else {
    Eigen::MatrixXd Ae(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < A.cols; ++j) Ae(i, j) = A(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ae);
    const auto& sv = svd.singularValues();
    double tol = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    long rk = 0;
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) > tol) ++rk;
    return b - rk;
  }
}

std::string value_str(const Rat& v) { return rat_str(v); }
std::string value_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
Rat value_parse(const std::string& s, Rat*) { return rat_parse(s); }
double value_parse(const std::string& s, double*) { return std::stod(s); }

}  // namespace

template <Backend B>
ModulePtr<B> build_irreducible(const RootSystemPtr& rs, const Weight& lambda, const QScalar& q,
                               long dim_cap) {
  if (q.backend != B) throw std::invalid_argument("q backend does not match module backend");
  if (lambda.rs.get() != rs.get())
    throw std::invalid_argument("weight belongs to a different root system");
  if (!is_dominant(lambda))
    throw std::invalid_argument("highest weight must be dominant and integral");
  long dim = weyl_dimension(rs, lambda);
  if (dim > dim_cap) throw std::length_error("module dimension exceeds the configured cap");

  auto key = module_key(rs, lambda, q);
  auto& memo = build_memo<B>();
  if (auto it = memo.find(key); it != memo.end())
    if (auto sp = it->second.lock()) return sp;

  ExactBuild eb = build_exact(rs, lambda, q.exact_value);
  auto mod = std::make_shared<UqModuleT<B>>();
  mod->rs = rs;
  mod->q = q;
  mod->highest_weight = lambda;
  mod->weights = std::move(eb.weights);
  mod->name = "V(" + weight_str(lambda) + ")";
  if constexpr (B == Backend::exact) {
    mod->E = std::move(eb.E);
    mod->F = std::move(eb.F);
    mod->gram = std::move(eb.gram);
    mod->orthonormal = false;
  } else {
    for (const auto& a : eb.E) mod->E.push_back(to_double_mat(a));
    for (const auto& a : eb.F) mod->F.push_back(to_double_mat(a));
    mod->gram = to_double_mat(eb.gram);
    orthonormalize(*mod);
  }
  memo[key] = mod;
  return mod;
}

template <Backend B>
ModulePtr<B> dual_module(const ModulePtr<B>& m) {
  using S = typename ScalarOf<B>::real;
  if (m->dual_of) return m->dual_of;
  auto& memo = dual_memo<B>();
  if (auto it = memo.find(m.get()); it != memo.end())
    if (auto sp = it->second.lock()) return sp;

  const auto& rs = m->rs;
  const int n = m->dim();
  auto out = std::make_shared<UqModuleT<B>>();
  out->rs = rs;
  out->q = m->q;
  out->weights.reserve(n);
  for (const auto& w : m->weights) out->weights.push_back(-w);
  S qv = q_of<S>(m->q);
  out->E.assign(rs->rank, Mat<S>(n, n));
  out->F.assign(rs->rank, Mat<S>(n, n));
  for (int i = 0; i < rs->rank; ++i) {
    for (int bq = 0; bq < n; ++bq)
      for (int a = 0; a < n; ++a) {
        const S& e = m->E[i](bq, a);
        if (!(e == S(0)))
          out->E[i](a, bq) = -spow(qv, rs->d[i] - ipair(m->weights[bq], rs->simple_roots[i])) * e;
        const S& f = m->F[i](bq, a);
        if (!(f == S(0)))
          out->F[i](a, bq) = -spow(qv, -rs->d[i] + ipair(m->weights[a], rs->simple_roots[i])) * f;
      }
  }
  // dual form is the blockwise inverse of the original form
  if (m->orthonormal) {
    out->gram = Mat<S>::identity(n);
  } else {
    out->gram = Mat<S>(n, n);
    for (const auto& [wt, idx] : weight_blocks(m->weights)) {
      const int b = (int)idx.size();
      if constexpr (B == Backend::exact) {
        Mat<Rat> sub(b, b);
        for (int x = 0; x < b; ++x)
          for (int y = 0; y < b; ++y) sub(x, y) = m->gram(idx[x], idx[y]);
        Mat<Rat> inv = inverse(sub);
        for (int x = 0; x < b; ++x)
          for (int y = 0; y < b; ++y) out->gram(idx[x], idx[y]) = inv(x, y);
      } else {
        Eigen::MatrixXd sub(b, b);
        for (int x = 0; x < b; ++x)
          for (int y = 0; y < b; ++y) sub(x, y) = m->gram(idx[x], idx[y]);
        Eigen::MatrixXd inv = sub.inverse();
        for (int x = 0; x < b; ++x)
          for (int y = 0; y < b; ++y) out->gram(idx[x], idx[y]) = inv(x, y);
      }
    }
  }
  out->orthonormal = m->orthonormal;
  // top weight of the dual = minus the lowest weight
  int low = 0;
  for (int j = 1; j < n; ++j) {
    Rat hj = height(m->weights[j]), hl = height(m->weights[low]);
    if (hj < hl || (hj == hl && weight_lex_less(m->weights[j], m->weights[low]))) low = j;
  }
  out->highest_weight = -m->weights[low];
  out->name = m->name + "*";
  out->dual_of = m;
  memo[m.get()] = out;
  return out;
}

template <Backend B>
ModulePtr<B> tensor(const ModulePtr<B>& m, const ModulePtr<B>& n, long dim_cap) {
  using S = typename ScalarOf<B>::real;
  if (m->rs.get() != n->rs.get()) throw std::invalid_argument("tensor factors over different root systems");
  if (m->q.backend != n->q.backend || !(m->q.exact_value == n->q.exact_value))
    throw std::invalid_argument("tensor factors with different q");
  const long dm = m->dim(), dn = n->dim();
  if (dm * dn > dim_cap) throw std::length_error("tensor dimension exceeds the configured cap");

  auto& memo = tensor_memo<B>();
  auto key = std::make_pair((const void*)m.get(), (const void*)n.get());
  if (auto it = memo.find(key); it != memo.end())
    if (auto sp = it->second.lock()) return sp;

  const auto& rs = m->rs;
  auto out = std::make_shared<UqModuleT<B>>();
  out->rs = rs;
  out->q = m->q;
  out->highest_weight = m->highest_weight + n->highest_weight;
  out->weights.reserve(dm * dn);
  for (int a = 0; a < dm; ++a)
    for (int b = 0; b < dn; ++b) out->weights.push_back(m->weights[a] + n->weights[b]);

  S qv = q_of<S>(m->q);
  const int D = (int)(dm * dn);
  out->E.assign(rs->rank, Mat<S>(D, D));
  out->F.assign(rs->rank, Mat<S>(D, D));
  for (int i = 0; i < rs->rank; ++i) {
    // E_i (x) 1  and  F_i (x) K_i^{-1}
    for (int a = 0; a < dm; ++a)
      for (int a2 = 0; a2 < dm; ++a2) {
        const S& e = m->E[i](a, a2);
        const S& f = m->F[i](a, a2);
        if (e == S(0) && f == S(0)) continue;
        for (int b = 0; b < dn; ++b) {
          if (!(e == S(0))) out->E[i](a * dn + b, a2 * dn + b) += e;
          if (!(f == S(0)))
            out->F[i](a * dn + b, a2 * dn + b) +=
                f * spow(qv, -ipair(n->weights[b], rs->simple_roots[i]));
        }
      }
    // K_i (x) E_i  and  1 (x) F_i
    for (int b = 0; b < dn; ++b)
      for (int b2 = 0; b2 < dn; ++b2) {
        const S& e = n->E[i](b, b2);
        const S& f = n->F[i](b, b2);
        if (e == S(0) && f == S(0)) continue;
        for (int a = 0; a < dm; ++a) {
          if (!(e == S(0)))
            out->E[i](a * dn + b, a * dn + b2) +=
                spow(qv, ipair(m->weights[a], rs->simple_roots[i])) * e;
          if (!(f == S(0))) out->F[i](a * dn + b, a * dn + b2) += f;
        }
      }
  }
  out->gram = kron(m->gram, n->gram);
  out->orthonormal = m->orthonormal && n->orthonormal;
  out->name = "(" + m->name + ")x(" + n->name + ")";
  out->tensor_left = m;
  out->tensor_right = n;
  memo[key] = out;
  return out;
}

template <Backend B>
std::vector<std::pair<Weight, long>> decompose_highest_weights(const ModulePtr<B>& m) {
  std::vector<int> gens(m->rs->rank);
  for (int i = 0; i < m->rs->rank; ++i) gens[i] = i;
  std::vector<std::pair<Weight, long>> out;
  for (const auto& [wt, idx] : weight_blocks(m->weights)) {
    if (!is_dominant(wt)) continue;
    long k = joint_kernel_dim(*m, gens, idx);
    if (k > 0) out.push_back({wt, k});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return weight_lex_less(b.first, a.first); });
  return out;
}

template <Backend B>
std::vector<std::pair<Weight, long>> branch_to_levi(const ModulePtr<B>& m,
                                                    const std::vector<int>& S) {
  std::vector<int> gens;
  for (int s : S) {
    if (s < 1 || s > m->rs->rank) throw std::invalid_argument("node index out of range");
    gens.push_back(s - 1);
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  if ((int)gens.size() == m->rs->rank)
    throw std::invalid_argument("S must be a proper subset of the simple roots");
  std::vector<std::pair<Weight, long>> out;
  for (const auto& [wt, idx] : weight_blocks(m->weights)) {
    long k = joint_kernel_dim(*m, gens, idx);
    if (k > 0) out.push_back({wt, k});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return weight_lex_less(b.first, a.first); });
  return out;
}

template <Backend B>
std::vector<std::pair<Weight, long>> character(const ModulePtr<B>& m) {
  std::vector<std::pair<Weight, long>> out;
  for (const auto& [wt, idx] : weight_blocks(m->weights)) out.push_back({wt, (long)idx.size()});
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return weight_lex_less(b.first, a.first); });
  return out;
}

template <Backend B>
std::string module_to_text(const ModulePtr<B>& m) {
  using S = typename ScalarOf<B>::real;
  std::ostringstream o;
  o << "object=module\n";
  o << "backend=" << backend_name(B) << "\n";
  o << "type=" << m->rs->type_letter << "\n";
  o << "rank=" << m->rs->rank << "\n";
  o << "q=" << rat_str(m->q.exact_value) << "\n";
  o << "highest_weight=" << weight_str(m->highest_weight) << "\n";
  o << "dim=" << m->dim() << "\n";
  o << "orthonormal=" << (m->orthonormal ? 1 : 0) << "\n";
  o << "name=" << m->name << "\n";
  for (int j = 0; j < m->dim(); ++j) o << "weight=" << j << ":" << weight_str(m->weights[j]) << "\n";
  auto dump = [&](const char* tag, const auto& mats) {
    for (int i = 0; i < (int)mats.size(); ++i)
      for (int a = 0; a < mats[i].rows; ++a)
        for (int b = 0; b < mats[i].cols; ++b)
          if (!(mats[i](a, b) == S(0)))
            o << tag << "=" << i + 1 << " " << a << " " << b << " " << value_str(mats[i](a, b))
              << "\n";
  };
  dump("E", m->E);
  dump("F", m->F);
  for (int a = 0; a < m->dim(); ++a)
    for (int b = 0; b < m->dim(); ++b)
      if (!(m->gram(a, b) == S(0)))
        o << "G=" << a << " " << b << " " << value_str(m->gram(a, b)) << "\n";
  o << "end=module\n";
  return o.str();
}

template <Backend B>
ModulePtr<B> module_from_text(const RootSystemPtr& rs, const std::string& text) {
  using S = typename ScalarOf<B>::real;
  auto mod = std::make_shared<UqModuleT<B>>();
  mod->rs = rs;
  std::istringstream in(text);
  std::string line;
  int dim = -1;
  auto need_dim = [&]() {
    if (dim < 0) throw std::invalid_argument("module text: dim must precede matrix data");
  };
  auto parse_weight = [&](const std::string& s) {
    std::vector<Rat> c;
    std::istringstream ws(s);
    std::string tok;
    while (std::getline(ws, tok, ',')) c.push_back(rat_parse(tok));
    return make_weight(rs, std::move(c));
  };
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string k = line.substr(0, eq), v = line.substr(eq + 1);
    if (k == "backend") {
      if (v != backend_name(B)) throw std::invalid_argument("module text backend mismatch");
    } else if (k == "type") {
      if (v.size() != 1 || v[0] != rs->type_letter)
        throw std::invalid_argument("module text type mismatch");
    } else if (k == "rank") {
      if (std::stoi(v) != rs->rank) throw std::invalid_argument("module text rank mismatch");
    } else if (k == "q") {
      mod->q = make_q(B, rat_parse(v));
    } else if (k == "highest_weight") {
      mod->highest_weight = parse_weight(v);
    } else if (k == "dim") {
      dim = std::stoi(v);
      mod->weights.assign(dim, zero_weight(rs));
      mod->E.assign(rs->rank, Mat<S>(dim, dim));
      mod->F.assign(rs->rank, Mat<S>(dim, dim));
      mod->gram = Mat<S>(dim, dim);
    } else if (k == "orthonormal") {
      mod->orthonormal = (v == "1");
    } else if (k == "name") {
      mod->name = v;
    } else if (k == "weight") {
      need_dim();
      auto colon = v.find(':');
      int j = std::stoi(v.substr(0, colon));
      mod->weights.at(j) = parse_weight(v.substr(colon + 1));
    } else if (k == "E" || k == "F" || k == "G") {
      need_dim();
      std::istringstream es(v);
      if (k == "G") {
        int a, b;
        std::string val;
        es >> a >> b >> val;
        mod->gram(a, b) = value_parse(val, (S*)nullptr);
      } else {
        int i, a, b;
        std::string val;
        es >> i >> a >> b >> val;
        (k == "E" ? mod->E : mod->F).at(i - 1)(a, b) = value_parse(val, (S*)nullptr);
      }
    }
  }
  if (dim < 0) throw std::invalid_argument("module text missing dim");
  return mod;
}

template <Backend B>
ModulePtr<B> build_irreducible_cached(const RootSystemPtr& rs, const Weight& lambda,
                                      const QScalar& q, long dim_cap,
                                      const std::string& cache_dir) {
  if (cache_dir.empty()) return build_irreducible<B>(rs, lambda, q, dim_cap);
  {
    auto& memo = build_memo<B>();
    auto it = memo.find(module_key(rs, lambda, q));
    if (it != memo.end())
      if (auto hit = it->second.lock()) return hit;
  }
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  std::string hw = weight_str(lambda);
  for (auto& ch : hw)
    if (ch == ',' || ch == '/') ch = '_';
  std::string qs = rat_str(q.exact_value);
  for (auto& ch : qs)
    if (ch == '/') ch = '_';
  std::string path = cache_dir + "/mod_" + rs->type_letter + std::to_string(rs->rank) + "_hw" +
                     hw + "_q" + qs + "_" + backend_name(B) + ".txt";
  {
    std::ifstream f(path);
    if (f) {
      std::ostringstream buf;
      buf << f.rdbuf();
      auto mod = module_from_text<B>(rs, buf.str());
      build_memo<B>()[module_key(rs, lambda, q)] = mod;
      return mod;
    }
  }
  auto mod = build_irreducible<B>(rs, lambda, q, dim_cap);
  std::ofstream f(path);
  if (f) f << module_to_text<B>(mod);
  return mod;
}

template ModulePtr<Backend::exact> build_irreducible<Backend::exact>(const RootSystemPtr&,
                                                                     const Weight&, const QScalar&,
                                                                     long);
template ModulePtr<Backend::floating> build_irreducible<Backend::floating>(const RootSystemPtr&,
                                                                           const Weight&,
                                                                           const QScalar&, long);
template ModulePtr<Backend::exact> dual_module<Backend::exact>(const ModulePtr<Backend::exact>&);
template ModulePtr<Backend::floating> dual_module<Backend::floating>(
    const ModulePtr<Backend::floating>&);
template ModulePtr<Backend::exact> tensor<Backend::exact>(const ModulePtr<Backend::exact>&,
                                                          const ModulePtr<Backend::exact>&, long);
template ModulePtr<Backend::floating> tensor<Backend::floating>(
    const ModulePtr<Backend::floating>&, const ModulePtr<Backend::floating>&, long);
template std::vector<std::pair<Weight, long>> decompose_highest_weights<Backend::exact>(
    const ModulePtr<Backend::exact>&);
template std::vector<std::pair<Weight, long>> decompose_highest_weights<Backend::floating>(
    const ModulePtr<Backend::floating>&);
template std::vector<std::pair<Weight, long>> branch_to_levi<Backend::exact>(
    const ModulePtr<Backend::exact>&, const std::vector<int>&);
template std::vector<std::pair<Weight, long>> branch_to_levi<Backend::floating>(
    const ModulePtr<Backend::floating>&, const std::vector<int>&);
template std::vector<std::pair<Weight, long>> character<Backend::exact>(
    const ModulePtr<Backend::exact>&);
template std::vector<std::pair<Weight, long>> character<Backend::floating>(
    const ModulePtr<Backend::floating>&);
template std::string module_to_text<Backend::exact>(const ModulePtr<Backend::exact>&);
template std::string module_to_text<Backend::floating>(const ModulePtr<Backend::floating>&);
template ModulePtr<Backend::exact> module_from_text<Backend::exact>(const RootSystemPtr&,
                                                                    const std::string&);
template ModulePtr<Backend::floating> module_from_text<Backend::floating>(const RootSystemPtr&,
                                                                          const std::string&);
template ModulePtr<Backend::exact> build_irreducible_cached<Backend::exact>(const RootSystemPtr&,
                                                                            const Weight&,
                                                                            const QScalar&, long,
                                                                            const std::string&);
template ModulePtr<Backend::floating> build_irreducible_cached<Backend::floating>(
    const RootSystemPtr&, const Weight&, const QScalar&, long, const std::string&);

}  // namespace qflag
