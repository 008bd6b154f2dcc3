#include "qflag/rootdata.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qflag {

namespace {

void check_same(const Weight& a, const Weight& b) {
  if (a.rs.get() != b.rs.get()) throw std::invalid_argument("weights over different root systems");
}

// Cartan matrix with a_ij = (alpha_j, alpha_i^vee) and the symmetrizers d_i,
// Bourbaki numbering throughout.
void fill_cartan(char t, int l, Mat<long>& a, std::vector<long>& d) {
  a = Mat<long>(l, l);
  d.assign(l, 1);
  for (int i = 0; i < l; ++i) a(i, i) = 2;
  auto chain_edge = [&](int i, int j) { a(i, j) = -1; a(j, i) = -1; };
  switch (t) {
    case 'A':
      for (int i = 0; i + 1 < l; ++i) chain_edge(i, i + 1);
      break;
    case 'B':  // nodes 1..l-1 long (d=2), node l short
      for (int i = 0; i + 1 < l; ++i) chain_edge(i, i + 1);
      a(l - 1, l - 2) = -2;  // a_{l,l-1} = (alpha_{l-1}, alpha_l^vee)
      for (int i = 0; i + 1 < l; ++i) d[i] = 2;
      break;
    case 'C':  // nodes 1..l-1 short, node l long (d=2)
      for (int i = 0; i + 1 < l; ++i) chain_edge(i, i + 1);
      a(l - 2, l - 1) = -2;  // a_{l-1,l} = (alpha_l, alpha_{l-1}^vee)
      d[l - 1] = 2;
      break;
    case 'D':
      for (int i = 0; i + 2 < l; ++i) chain_edge(i, i + 1);
      chain_edge(l - 3, l - 1);
      break;
    case 'E':
      // chain 1-3-4-5-6(-7)(-8), node 2 attached to node 4
      chain_edge(0, 2);
      for (int i = 2; i + 1 < l; ++i) chain_edge(i, i + 1);
      chain_edge(1, 3);
      break;
    case 'F':  // 1,2 long; 3,4 short
      chain_edge(0, 1);
      chain_edge(1, 2);
      chain_edge(2, 3);
      a(2, 1) = -2;  // a_{32} = (alpha_2, alpha_3^vee)
      d[0] = d[1] = 2;
      break;
    case 'G':  // 1 short, 2 long (d=3)
      a(0, 1) = -3;
      a(1, 0) = -1;
      d[1] = 3;
      break;
    default:
      throw std::invalid_argument("unknown type letter");
  }
}

bool valid_type(char t, int l) {
  switch (t) {
    case 'A': return l >= 1;
    case 'B': return l >= 2;
    case 'C': return l >= 2;
    case 'D': return l >= 3;
    case 'E': return l >= 6 && l <= 8;
    case 'F': return l == 4;
    case 'G': return l == 2;
    default: return false;
  }
}

}  // namespace

Weight operator+(const Weight& a, const Weight& b) {
  check_same(a, b);
  Weight w = a;
  for (size_t i = 0; i < w.c.size(); ++i) w.c[i] += b.c[i];
  return w;
}

Weight operator-(const Weight& a, const Weight& b) {
  check_same(a, b);
  Weight w = a;
  for (size_t i = 0; i < w.c.size(); ++i) w.c[i] -= b.c[i];
  return w;
}

Weight operator-(const Weight& a) {
  Weight w = a;
  for (auto& x : w.c) x = -x;
  return w;
}

Weight operator*(const Rat& s, const Weight& a) {
  Weight w = a;
  for (auto& x : w.c) x *= s;
  return w;
}

bool operator==(const Weight& a, const Weight& b) {
  return a.rs.get() == b.rs.get() && a.c == b.c;
}
bool operator!=(const Weight& a, const Weight& b) { return !(a == b); }

bool weight_lex_less(const Weight& a, const Weight& b) {
  for (size_t i = 0; i < a.c.size() && i < b.c.size(); ++i) {
    int s = cmp(a.c[i], b.c[i]);
    if (s != 0) return s < 0;
  }
  return a.c.size() < b.c.size();
}

RootSystemPtr build_root_system(char type_letter, int rank) {
  if (!valid_type(type_letter, rank))
    throw std::invalid_argument(std::string("invalid simple type: ") + type_letter +
                                std::to_string(rank));
  // interned: the same (type, rank) always hands back the same instance, so
  // pointer identity of weights stays coherent with the module memo tables
  static std::map<std::pair<char, int>, RootSystemPtr> interned;
  if (auto it = interned.find({type_letter, rank}); it != interned.end()) return it->second;
  auto rs = std::make_shared<RootSystem>();
  rs->type_letter = type_letter;
  rs->rank = rank;
  fill_cartan(type_letter, rank, rs->cartan, rs->d);

  Mat<Rat> a(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = Rat(rs->cartan(i, j));
  rs->inv_cartan = inverse(a);

  rs->fund_inner = Mat<Rat>(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) rs->fund_inner(i, j) = rs->inv_cartan(j, i) * rs->d[j];

  RootSystemPtr p = rs;
  for (int j = 0; j < rank; ++j) {
    std::vector<Rat> alpha(rank), omega(rank, Rat(0));
    for (int i = 0; i < rank; ++i) alpha[i] = Rat(rs->cartan(i, j));
    omega[j] = 1;
    rs->simple_roots.emplace_back(p, alpha);
    rs->fundamental_weights.emplace_back(p, omega);
  }
  rs->rho = make_weight_int(p, std::vector<long>(rank, 1));

  // Positive roots by the root-string rule, processed by height. Roots are
  // tracked in simple-root coordinates for membership tests.
  std::map<std::vector<long>, bool> seen;
  std::vector<std::vector<long>> level;
  for (int i = 0; i < rank; ++i) {
    std::vector<long> e(rank, 0);
    e[i] = 1;
    seen[e] = true;
    level.push_back(e);
  }
  auto to_weight = [&](const std::vector<long>& rc) {
    Weight w = zero_weight(p);
    for (int i = 0; i < rank; ++i)
      if (rc[i]) w = w + Rat(rc[i]) * rs->simple_roots[i];
    return w;
  };
  std::vector<std::vector<long>> all = level;
  while (!level.empty()) {
    std::vector<std::vector<long>> next;
    for (const auto& rc : level) {
      Weight beta = to_weight(rc);
      for (int i = 0; i < rank; ++i) {
        // p = depth of the alpha_i-string below beta
        long pdepth = 0;
        std::vector<long> down = rc;
        for (;;) {
          down[i] -= 1;
          bool zero = std::all_of(down.begin(), down.end(), [](long x) { return x == 0; });
          if (zero || !seen.count(down)) break;
          ++pdepth;
        }
        long pairing = rat_long(pair_coroot(beta, rs->simple_roots[i]));
        if (pdepth - pairing > 0) {
          std::vector<long> up = rc;
          up[i] += 1;
          if (!seen.count(up)) {
            seen[up] = true;
            next.push_back(up);
          }
        }
      }
    }
    for (const auto& rc : next) all.push_back(rc);
    level = std::move(next);
  }
  std::sort(all.begin(), all.end());
  for (const auto& rc : all) rs->positive_roots.push_back(to_weight(rc));

  // rho = (1/2) sum of positive roots must equal sum of fundamental weights
  Weight half = zero_weight(p);
  for (const auto& r : rs->positive_roots) half = half + r;
  half = Rat(1, 2) * half;
  if (!(half == rs->rho)) throw std::logic_error("rho consistency failure in root enumeration");
  interned[{type_letter, rank}] = p;
  return p;
}

Weight make_weight(const RootSystemPtr& rs, std::vector<Rat> coords) {
  if ((int)coords.size() != rs->rank) throw std::invalid_argument("weight coordinate count");
  return Weight(rs, std::move(coords));
}

Weight make_weight_int(const RootSystemPtr& rs, const std::vector<long>& coords) {
  std::vector<Rat> c(coords.size());
  for (size_t i = 0; i < coords.size(); ++i) c[i] = Rat(coords[i]);
  return make_weight(rs, std::move(c));
}

Weight zero_weight(const RootSystemPtr& rs) {
  return Weight(rs, std::vector<Rat>(rs->rank, Rat(0)));
}

Rat inner(const Weight& mu, const Weight& nu) {
  check_same(mu, nu);
  const auto& g = mu.rs->fund_inner;
  Rat s(0);
  for (int i = 0; i < g.rows; ++i) {
    if (mu.c[i] == 0) continue;
    for (int j = 0; j < g.cols; ++j)
      if (nu.c[j] != 0) s += mu.c[i] * g(i, j) * nu.c[j];
  }
  return s;
}

Rat pair_coroot(const Weight& mu, const Weight& alpha) {
  Rat n = inner(alpha, alpha);
  if (n == 0) throw std::invalid_argument("coroot of zero vector");
  return 2 * inner(mu, alpha) / n;
}

std::vector<Rat> simple_root_coords(const Weight& mu) {
  const auto& inv = mu.rs->inv_cartan;
  std::vector<Rat> out(mu.c.size(), Rat(0));
  for (int i = 0; i < inv.rows; ++i)
    for (int j = 0; j < inv.cols; ++j) out[i] += inv(i, j) * mu.c[j];
  return out;
}

Rat height(const Weight& mu) {
  Rat h(0);
  for (const auto& x : simple_root_coords(mu)) h += x;
  return h;
}

bool dominance_leq(const Weight& mu, const Weight& nu) {
  check_same(mu, nu);
  for (const auto& x : simple_root_coords(nu - mu)) {
    if (!rat_is_int(x) || x < 0) return false;
  }
  return true;
}

bool in_weight_lattice(const Weight& mu) {
  for (const auto& x : mu.c)
    if (!rat_is_int(x)) return false;
  return true;
}

bool is_dominant(const Weight& mu) {
  if (!in_weight_lattice(mu)) return false;
  for (const auto& x : mu.c)
    if (x < 0) return false;
  return true;
}

bool is_regular_dominant(const Weight& mu) {
  if (!in_weight_lattice(mu)) return false;
  for (const auto& x : mu.c)
    if (x <= 0) return false;
  return true;
}

long weyl_dimension(const RootSystemPtr& rs, const Weight& lambda) {
  Weight lr = lambda + rs->rho;
  Rat dim(1);
  for (const auto& alpha : rs->positive_roots) dim *= inner(lr, alpha) / inner(rs->rho, alpha);
  if (!rat_is_int(dim) || dim <= 0) throw std::logic_error("Weyl dimension not a positive integer");
  return rat_long(dim);
}

std::vector<Weight> positive_roots_levi(const RootSystemPtr& rs, const std::vector<int>& S) {
  std::vector<bool> in_s(rs->rank, false);
  for (int s : S) {
    if (s < 1 || s > rs->rank) throw std::invalid_argument("node index out of range");
    in_s[s - 1] = true;
  }
  std::vector<Weight> out;
  for (const auto& alpha : rs->positive_roots) {
    auto rc = simple_root_coords(alpha);
    bool ok = true;
    for (int i = 0; i < rs->rank; ++i)
      if (rc[i] != 0 && !in_s[i]) ok = false;
    if (ok) out.push_back(alpha);
  }
  return out;
}

long weyl_dimension_levi(const RootSystemPtr& rs, const std::vector<int>& S, const Weight& mu) {
  auto rsp = positive_roots_levi(rs, S);
  Weight rho_s = zero_weight(rs);
  for (const auto& a : rsp) rho_s = rho_s + a;
  rho_s = Rat(1, 2) * rho_s;
  Rat dim(1);
  Weight mr = mu + rho_s;
  for (const auto& a : rsp) dim *= inner(mr, a) / inner(rho_s, a);
  if (!rat_is_int(dim) || dim <= 0) throw std::logic_error("Levi dimension not a positive integer");
  return rat_long(dim);
}

std::vector<Rat> eps_from_weight(const Weight& mu) {
  const auto& rs = *mu.rs;
  int l = rs.rank;
  const auto& m = mu.c;
  std::vector<Rat> e;
  switch (rs.type_letter) {
    case 'A': {
      // trace-free section: e_i - e_{i+1} = m_i, sum e = 0
      e.assign(l + 1, Rat(0));
      for (int i = l - 1; i >= 0; --i) e[i] = e[i + 1] + m[i];
      Rat avg(0);
      for (const auto& x : e) avg += x;
      avg /= (l + 1);
      for (auto& x : e) x -= avg;
      break;
    }
    case 'B': {
      e.assign(l, Rat(0));
      e[l - 1] = m[l - 1] / 2;
      for (int i = l - 2; i >= 0; --i) e[i] = e[i + 1] + m[i];
      break;
    }
    case 'C': {
      e.assign(l, Rat(0));
      e[l - 1] = m[l - 1];
      for (int i = l - 2; i >= 0; --i) e[i] = e[i + 1] + m[i];
      break;
    }
    case 'D': {
      e.assign(l, Rat(0));
      e[l - 1] = (m[l - 1] - m[l - 2]) / 2;
      e[l - 2] = (m[l - 1] + m[l - 2]) / 2;
      for (int i = l - 3; i >= 0; --i) e[i] = e[i + 1] + m[i];
      break;
    }
    default:
      throw std::invalid_argument("epsilon realization only for classical types");
  }
  return e;
}

Weight weight_from_eps(const RootSystemPtr& rs, const std::vector<Rat>& eps) {
  int l = rs->rank;
  std::vector<Rat> m(l, Rat(0));
  switch (rs->type_letter) {
    case 'A':
      if ((int)eps.size() != l + 1) throw std::invalid_argument("A-type needs rank+1 coords");
      for (int i = 0; i < l; ++i) m[i] = eps[i] - eps[i + 1];
      break;
    case 'B':
      if ((int)eps.size() != l) throw std::invalid_argument("need rank coords");
      for (int i = 0; i + 1 < l; ++i) m[i] = eps[i] - eps[i + 1];
      m[l - 1] = 2 * eps[l - 1];
      break;
    case 'C':
      if ((int)eps.size() != l) throw std::invalid_argument("need rank coords");
      for (int i = 0; i + 1 < l; ++i) m[i] = eps[i] - eps[i + 1];
      m[l - 1] = eps[l - 1];
      break;
    case 'D':
      if ((int)eps.size() != l) throw std::invalid_argument("need rank coords");
      for (int i = 0; i + 1 < l; ++i) m[i] = eps[i] - eps[i + 1];
      m[l - 1] = eps[l - 2] + eps[l - 1];
      break;
    default:
      throw std::invalid_argument("epsilon realization only for classical types");
  }
  return make_weight(rs, std::move(m));
}

std::string weight_str(const Weight& mu) {
  std::string s;
  for (size_t i = 0; i < mu.c.size(); ++i) {
    if (i) s += ",";
    s += rat_str(mu.c[i]);
  }
  return s;
}

std::string root_system_to_text(const RootSystem& rs) {
  std::ostringstream out;
  out << "object=root_system\n";
  out << "type=" << rs.type_letter << "\n";
  out << "rank=" << rs.rank << "\n";
  out << "cartan=";
  for (int i = 0; i < rs.rank; ++i) {
    if (i) out << ";";
    for (int j = 0; j < rs.rank; ++j) {
      if (j) out << ",";
      out << rs.cartan(i, j);
    }
  }
  out << "\n";
  out << "d=";
  for (int i = 0; i < rs.rank; ++i) {
    if (i) out << ",";
    out << rs.d[i];
  }
  out << "\n";
  out << "positive_root_count=" << rs.positive_roots.size() << "\n";
  for (const auto& r : rs.positive_roots) out << "positive_root=" << weight_str(r) << "\n";
  out << "rho=" << weight_str(rs.rho) << "\n";
  return out.str();
}

}  // namespace qflag
