#include "qflag/flagalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qflag {

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s.empty() ? "-" : s;
}

// deterministic text key for weight-equality grouping
std::string wkey(const Weight& mu) { return weight_str(mu); }

Ternary merge(Ternary a, Ternary b) {
  if (a == Ternary::no || b == Ternary::no) return Ternary::no;
  if (a == Ternary::unknown || b == Ternary::unknown) return Ternary::unknown;
  return Ternary::yes;
}

}  // namespace

bool FlagContext::in_lattice(const Weight& mu) const {
  if (!in_weight_lattice(mu)) return false;
  for (int i : S)
    if (pair_coroot(mu, rs->simple_roots[(size_t)(i - 1)]) != 0) return false;
  return true;
}

bool FlagContext::in_dominant(const Weight& mu) const {
  return in_lattice(mu) && is_dominant(mu);
}

bool FlagContext::in_regular(const Weight& mu) const {
  if (!in_lattice(mu)) return false;
  for (int i : deleted)
    if (!(pair_coroot(mu, rs->simple_roots[(size_t)(i - 1)]) > 0)) return false;
  return true;
}

FlagContext make_flag_context(const RootSystemPtr& rs, const std::vector<int>& S) {
  if (!rs) throw std::invalid_argument("make_flag_context: missing root system");
  std::vector<int> s = S;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw std::invalid_argument("make_flag_context: duplicate node");
  for (int i : s)
    if (i < 1 || i > rs->rank) throw std::invalid_argument("make_flag_context: node out of range");
  if ((int)s.size() >= rs->rank)
    throw std::invalid_argument("make_flag_context: at least one node must be deleted");
  FlagContext ctx;
  ctx.rs = rs;
  ctx.S = s;
  for (int i = 1; i <= rs->rank; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) ctx.deleted.push_back(i);
  ctx.parabolic = minimal_coset_reps(rs, s);
  return ctx;
}

std::vector<Weight> generator_weights(const FlagContext& ctx) {
  std::vector<Weight> out;
  for (int i : ctx.deleted) out.push_back(ctx.rs->fundamental_weights[(size_t)(i - 1)]);
  return out;
}

template <Backend B>
std::vector<AlgebraElementT<B>> b_lambda_basis(const FlagContext& ctx, const Weight& lambda,
                                               const QScalar& q, long dim_cap) {
  if (!ctx.in_dominant(lambda))
    throw std::invalid_argument(
        "b_lambda_basis: weight must be dominant and pair to zero on the kept nodes");
  auto mod = build_irreducible<B>(ctx.rs, lambda, q, dim_cap);
  if (!(mod->weights[0] == lambda))
    throw std::logic_error("b_lambda_basis: basis vector 0 is not the highest-weight vector");
  std::vector<AlgebraElementT<B>> out;
  out.reserve((size_t)mod->dim());
  for (int v = 0; v < mod->dim(); ++v) out.push_back(coeff_element(mod, v, 0));
  return out;
}

template <Backend B>
std::vector<AlgebraElementT<B>> a_s_generators(const FlagContext& ctx,
                                               const std::vector<Weight>& lambdas,
                                               const QScalar& q, long dim_cap) {
  std::vector<AlgebraElementT<B>> out;
  for (const Weight& lambda : lambdas) {
    if (!ctx.in_dominant(lambda))
      throw std::invalid_argument(
          "a_s_generators: weight must be dominant and pair to zero on the kept nodes");
    auto mod = build_irreducible<B>(ctx.rs, lambda, q, dim_cap);
    // group basis indices by weight; only equal-weight pairs give elements
    // carried to themselves by the left torus
    std::vector<std::pair<std::string, std::vector<int>>> blocks;
    std::map<std::string, size_t> pos;
    for (int v = 0; v < mod->dim(); ++v) {
      auto key = wkey(mod->weights[(size_t)v]);
      auto it = pos.find(key);
      if (it == pos.end()) {
        pos[key] = blocks.size();
        blocks.push_back({key, {v}});
      } else {
        blocks[it->second].second.push_back(v);
      }
    }
    for (const auto& blk : blocks)
      for (int v : blk.second)
        for (int w : blk.second)
          out.push_back(multiply(star(coeff_element(mod, v, 0)), coeff_element(mod, w, 0)));
  }
  return out;
}

template <Backend B>
std::vector<AlgebraElementT<B>> a_s_generators(const FlagContext& ctx, const QScalar& q,
                                               long dim_cap) {
  return a_s_generators<B>(ctx, generator_weights(ctx), q, dim_cap);
}

template <Backend B>
Ternary is_invariant(const AlgebraElementT<B>& phi, const FlagContext& ctx,
                     const EqualsOptions& opt) {
  Ternary verdict = Ternary::yes;
  for (int i = 1; i <= ctx.rs->rank; ++i) {
    verdict = merge(verdict, equals(left_act(UqGen{GenKind::torus, i}, phi), phi, opt));
    if (verdict == Ternary::no) return Ternary::no;
    verdict = merge(verdict, equals(left_act(UqGen{GenKind::torus_inv, i}, phi), phi, opt));
    if (verdict == Ternary::no) return Ternary::no;
  }
  for (int j : ctx.S) {
    verdict = merge(verdict, is_zero_functional(left_act(UqGen{GenKind::raise_op, j}, phi), opt));
    if (verdict == Ternary::no) return Ternary::no;
    verdict = merge(verdict, is_zero_functional(left_act(UqGen{GenKind::lower_op, j}, phi), opt));
    if (verdict == Ternary::no) return Ternary::no;
  }
  return verdict;
}

const char* gelfand_family_str(GelfandFamily f) {
  switch (f) {
    case GelfandFamily::hermitian_symmetric: return "hermitian-symmetric";
    case GelfandFamily::odd_orthogonal_unitary: return "odd-orthogonal/unitary";
    case GelfandFamily::symplectic_unitary: return "symplectic/unitary-symplectic";
  }
  return "?";
}

std::vector<GelfandCase> gelfand_nodes(char type_letter, int rank) {
  build_root_system(type_letter, rank);  // validates the simple type
  std::vector<GelfandCase> out;
  auto add = [&](int node, GelfandFamily fam) {
    out.push_back(GelfandCase{type_letter, rank, node, fam});
  };
  switch (type_letter) {
    case 'A':
      for (int i = 1; i <= rank; ++i) add(i, GelfandFamily::hermitian_symmetric);
      break;
    case 'B':
      add(1, GelfandFamily::hermitian_symmetric);
      add(rank, GelfandFamily::odd_orthogonal_unitary);
      break;
    case 'C':
      add(1, GelfandFamily::symplectic_unitary);
      add(rank, GelfandFamily::hermitian_symmetric);
      break;
    case 'D':
      add(1, GelfandFamily::hermitian_symmetric);
      add(rank - 1, GelfandFamily::hermitian_symmetric);
      add(rank, GelfandFamily::hermitian_symmetric);
      break;
    case 'E':
      if (rank == 6) {
        add(1, GelfandFamily::hermitian_symmetric);
        add(6, GelfandFamily::hermitian_symmetric);
      } else if (rank == 7) {
        add(7, GelfandFamily::hermitian_symmetric);
      }
      break;
    default:
      break;  // E8, F4, G2: none
  }
  std::sort(out.begin(), out.end(),
            [](const GelfandCase& a, const GelfandCase& b) { return a.node < b.node; });
  return out;
}

template <Backend B>
long trivial_branch_multiplicity(const ModulePtr<B>& m, const std::vector<int>& S) {
  Weight zero = zero_weight(m->rs);
  for (const auto& [mu, mult] : branch_to_levi(m, S))
    if (mu == zero) return mult;
  return 0;
}

std::optional<WeylWord> prv_witness(const FlagContext& ctx, const Weight& target, size_t cap) {
  if (ctx.deleted.size() != 1)
    throw std::invalid_argument("prv_witness: exactly one node must be deleted");
  if (!target.rs || target.rs.get() != ctx.rs.get())
    throw std::invalid_argument("prv_witness: target over a different root system");
  if (!is_dominant(target)) throw std::invalid_argument("prv_witness: target must be dominant");
  const Weight& varpi = ctx.rs->fundamental_weights[(size_t)(ctx.deleted[0] - 1)];
  for (const WeylWord& w : enumerate_weyl(ctx.rs, cap))
    if (dominant_representative(varpi - act(w, varpi)) == target) return w;
  return std::nullopt;
}

template <Backend B>
std::vector<Weight> spherical_weights(const FlagContext& ctx, const QScalar& q, long coeff_bound,
                                      long dim_cap) {
  if (coeff_bound < 1) throw std::invalid_argument("spherical_weights: coefficient bound < 1");
  const int r = ctx.rs->rank;
  std::vector<long> c((size_t)r, 0);
  std::vector<Weight> spherical;
  std::set<std::string> spherical_keys;
  for (;;) {
    // next coefficient tuple, lexicographic odometer
    int pos = r - 1;
    while (pos >= 0 && c[(size_t)pos] == coeff_bound) c[(size_t)pos--] = 0;
    if (pos < 0) break;
    ++c[(size_t)pos];
    Weight lambda = make_weight_int(ctx.rs, c);
    if (weyl_dimension(ctx.rs, lambda) > dim_cap)
      throw std::length_error("spherical_weights: scanned module exceeds the dimension cap");
    auto mod = build_irreducible<B>(ctx.rs, lambda, q, dim_cap);
    if (trivial_branch_multiplicity(mod, ctx.S) >= 1) {
      spherical.push_back(lambda);
      spherical_keys.insert(wkey(lambda));
    }
  }
  std::vector<Weight> minimal;
  for (const Weight& lambda : spherical) {
    bool decomposable = false;
    for (const Weight& mu : spherical) {
      if (decomposable) break;
      Weight rest = lambda - mu;
      if (wkey(rest) == wkey(zero_weight(ctx.rs)) || wkey(mu) == wkey(lambda)) continue;
      if (is_dominant(rest) && spherical_keys.count(wkey(rest))) decomposable = true;
    }
    if (!decomposable) minimal.push_back(lambda);
  }
  return minimal;
}

template <Backend B>
FactorizationReport factorization_evidence(const FlagContext& ctx, const QScalar& q,
                                           int degree_bound, long dim_cap,
                                           std::vector<Weight> fundamental_sphericals) {
  if (ctx.deleted.size() != 1)
    throw std::invalid_argument("factorization_evidence: exactly one node must be deleted");
  if (degree_bound < 1)
    throw std::invalid_argument("factorization_evidence: degree bound < 1");
  FactorizationReport rep;
  rep.degree_bound = degree_bound;
  rep.varpi = ctx.rs->fundamental_weights[(size_t)(ctx.deleted[0] - 1)];
  rep.fundamental_sphericals = fundamental_sphericals.empty()
                                   ? spherical_weights<B>(ctx, q, 2, dim_cap)
                                   : std::move(fundamental_sphericals);

  auto mod = build_irreducible<B>(ctx.rs, rep.varpi, q, dim_cap);
  auto dual = dual_module(mod);
  auto prod = tensor(dual, mod, dim_cap);
  rep.tensor_components = decompose_highest_weights(prod);

  rep.sphericals_found_in_tensor = true;
  for (const Weight& mu : rep.fundamental_sphericals) {
    long mult = 0;
    for (const auto& [nu, m] : rep.tensor_components)
      if (nu == mu) mult = m;
    rep.spherical_tensor_multiplicities.push_back(mult);
    if (mult < 1) rep.sphericals_found_in_tensor = false;
  }

  rep.tensor_multiplicity_free = true;
  for (const auto& [nu, m] : rep.tensor_components)
    if (m != 1) rep.tensor_multiplicity_free = false;

  rep.tensor_components_spherical = true;
  Weight zero = zero_weight(ctx.rs);
  for (const auto& [nu, m] : rep.tensor_components) {
    if (nu == zero) continue;
    auto comp = build_irreducible<B>(ctx.rs, nu, q, dim_cap);
    if (trivial_branch_multiplicity(comp, ctx.S) < 1) rep.tensor_components_spherical = false;
  }

  // monoid window: distinct weights sum n_i mu_i with sum n_i <= degree_bound
  std::map<std::string, Weight> window;
  std::vector<std::pair<Weight, int>> frontier = {{zero, 0}};
  window[wkey(zero)] = zero;
  for (size_t head = 0; head < frontier.size(); ++head) {
    auto [mu, deg] = frontier[head];
    if (deg == degree_bound) continue;
    for (const Weight& gen : rep.fundamental_sphericals) {
      Weight next = mu + gen;
      auto key = wkey(next);
      if (!window.count(key)) {
        window[key] = next;
        frontier.push_back({next, deg + 1});
      }
    }
  }
  rep.monoid_weight_count = (long)window.size();
  for (const auto& [key, mu] : window) {
    long dim = weyl_dimension(ctx.rs, mu);
    if (dim > dim_cap)
      throw std::length_error("factorization_evidence: window module exceeds the dimension cap");
    auto m = build_irreducible<B>(ctx.rs, mu, q, dim_cap);
    rep.direct_sum_dimension += dim;
    rep.invariant_predicted_dimension += trivial_branch_multiplicity(m, ctx.S) * dim;
  }
  rep.window_match = rep.direct_sum_dimension == rep.invariant_predicted_dimension;
  return rep;
}

std::string flag_context_str(const FlagContext& ctx) {
  std::ostringstream o;
  o << "type=" << ctx.rs->type_letter << " rank=" << ctx.rs->rank << " kept=" << join_ints(ctx.S)
    << " deleted=" << join_ints(ctx.deleted);
  return o.str();
}

std::string factorization_report_text(const FactorizationReport& r) {
  std::ostringstream o;
  o << "generator=" << weight_str(r.varpi) << "\n";
  o << "fundamental_sphericals=";
  for (size_t i = 0; i < r.fundamental_sphericals.size(); ++i)
    o << (i ? ";" : "") << weight_str(r.fundamental_sphericals[i]);
  o << "\n";
  o << "tensor_components=";
  for (size_t i = 0; i < r.tensor_components.size(); ++i)
    o << (i ? ";" : "") << weight_str(r.tensor_components[i].first) << "x"
      << r.tensor_components[i].second;
  o << "\n";
  o << "sphericals_found_in_tensor=" << (r.sphericals_found_in_tensor ? "yes" : "no") << "\n";
  o << "tensor_multiplicity_free=" << (r.tensor_multiplicity_free ? "yes" : "no") << "\n";
  o << "tensor_components_spherical=" << (r.tensor_components_spherical ? "yes" : "no") << "\n";
  o << "degree_bound=" << r.degree_bound << "\n";
  o << "monoid_weight_count=" << r.monoid_weight_count << "\n";
  o << "direct_sum_dimension=" << r.direct_sum_dimension << "\n";
  o << "invariant_predicted_dimension=" << r.invariant_predicted_dimension << "\n";
  o << "window_match=" << (r.window_match ? "yes" : "no") << "\n";
  return o.str();
}

#define QFLAG_INSTANTIATE(B)                                                                     \
  template std::vector<AlgebraElementT<B>> b_lambda_basis<B>(const FlagContext&, const Weight&,  \
                                                             const QScalar&, long);             \
  template std::vector<AlgebraElementT<B>> a_s_generators<B>(                                    \
      const FlagContext&, const std::vector<Weight>&, const QScalar&, long);                     \
  template std::vector<AlgebraElementT<B>> a_s_generators<B>(const FlagContext&, const QScalar&, \
                                                             long);                             \
  template Ternary is_invariant<B>(const AlgebraElementT<B>&, const FlagContext&,                \
                                   const EqualsOptions&);                                        \
  template long trivial_branch_multiplicity<B>(const ModulePtr<B>&, const std::vector<int>&);    \
  template std::vector<Weight> spherical_weights<B>(const FlagContext&, const QScalar&, long,    \
                                                    long);                                       \
  template FactorizationReport factorization_evidence<B>(const FlagContext&, const QScalar&,     \
                                                         int, long, std::vector<Weight>);

QFLAG_INSTANTIATE(Backend::exact)
QFLAG_INSTANTIATE(Backend::floating)

#undef QFLAG_INSTANTIATE

}  // namespace qflag
