#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "qflag/fockrep.hpp"
#include "qflag/numeig.hpp"

using namespace qflag;
using Cplx = std::complex<double>;

namespace {

QScalar qf(long num, long den) { return make_q(Backend::floating, Rat(num, den)); }

Weight wt(const RootSystemPtr& rs, std::vector<long> coords) {
  std::vector<Rat> c;
  for (long v : coords) c.emplace_back(v);
  return Weight(rs, c);
}

double max_abs(const TruncatedOperator& op) {
  double m = 0.0;
  for (const auto& v : op.mat.a) m = std::max(m, std::abs(v));
  return m;
}

TruncatedOperator op_zero_like(const TruncatedOperator& op) {
  TruncatedOperator z = op;
  z.mat = Mat<Cplx>(op.mat.rows, op.mat.cols);
  z.safe_window = op.trunc;
  return z;
}

// basis indices reachable from `start` by raising operators (the cyclic
// subspace of the upper triangular half on the chosen vector)
std::vector<int> raising_closure(const ModulePtr<Backend::floating>& m, int start) {
  std::vector<char> seen((size_t)m->dim(), 0);
  std::vector<int> queue{start};
  seen[(size_t)start] = 1;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    for (int i = 0; i < m->rs->rank; ++i)
      for (int r = 0; r < m->dim(); ++r)
        if (!seen[(size_t)r] && std::abs(m->E[(size_t)i](r, v)) > 1e-12) {
          seen[(size_t)r] = 1;
          queue.push_back(r);
        }
  }
  std::vector<int> out;
  for (int r = 0; r < m->dim(); ++r)
    if (seen[(size_t)r]) out.push_back(r);
  return out;
}

std::vector<double> compressed_spectrum(const TruncatedOperator& op,
                                        const std::vector<long>& idx) {
  Eigen::MatrixXcd sub((long)idx.size(), (long)idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) sub((long)i, (long)j) = op.mat((int)idx[i], (int)idx[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (sub + sub.adjoint()));
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + (long)idx.size());
  std::sort(v.begin(), v.end());
  return v;
}

// reference operator for an extreme coefficient: the tensor product of plain
// t21 powers at the per-node parameters, with the exponent ladder of sigma
TruncatedOperator extreme_reference(const WeylWord& sigma, const Weight& lambda,
                                    const QScalar& q, int N) {
  std::vector<long> expo = l_diagonal_exponents(sigma, lambda);
  TruncatedOperator out;
  out.factor_count = 0;
  out.trunc = N;
  out.safe_window = N;
  out.mat = Mat<Cplx>::identity(1);
  for (size_t k = 0; k < sigma.letters.size(); ++k) {
    double qi = rat_dbl(rat_pow(q.exact_value, sigma.rs->d[(size_t)sigma.letters[k] - 1]));
    std::vector<Su2Gen> word((size_t)expo[k], Su2Gen::t21);
    TruncatedOperator leg = pi_su2(word, N, qi);
    Mat<Cplx> grown(out.mat.rows * N, out.mat.cols * N);
    for (int ia = 0; ia < out.mat.rows; ++ia)
      for (int ja = 0; ja < out.mat.cols; ++ja) {
        Cplx v = out.mat(ia, ja);
        if (v == Cplx(0.0)) continue;
        for (int ib = 0; ib < N; ++ib)
          for (int jb = 0; jb < N; ++jb) grown(ia * N + ib, ja * N + jb) = v * leg.mat(ib, jb);
      }
    out.mat = grown;
    out.factor_count += 1;
    out.safe_window = std::min(out.safe_window, leg.safe_window);
  }
  return out;
}

}  // namespace

TEST_CASE("rank-1 generator action and defining relations") {
  double q = 0.5;

  SUBCASE("generator matrices") {
    TruncatedOperator t21 = pi_su2({Su2Gen::t21}, 4, q);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(t21.mat(j, j) - std::pow(q, j)) < 1e-15);
    CHECK(t21.safe_window == 4);

    TruncatedOperator t12 = pi_su2({Su2Gen::t12}, 3, q);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(t12.mat(j, j) + std::pow(q, j + 1)) < 1e-15);
    CHECK(t12.safe_window == 3);

    TruncatedOperator prod = pi_su2({Su2Gen::t11, Su2Gen::t22}, 4, q);
    CHECK(std::abs(prod.mat(0, 0) - (1.0 - q * q)) < 1e-15);
    CHECK(prod.safe_window == 2);

    TruncatedOperator t11 = pi_su2({Su2Gen::t11}, 5, q);
    for (int j = 1; j < 5; ++j)
      CHECK(std::abs(t11.mat(j - 1, j) - std::sqrt(1.0 - std::pow(q, 2 * j))) < 1e-15);
    for (int j = 0; j < 5; ++j) CHECK(std::abs(t11.mat(j, 0)) == 0.0);
    CHECK(t11.safe_window == 4);
  }

  SUBCASE("defining relations on the safe window") {
    for (double qv : {0.3, 0.5, 0.7}) {
      int N = 6;
      auto g = [&](Su2Gen a) { return pi_su2({a}, N, qv); };
      auto rel2 = [&](Su2Gen a, Su2Gen b, double factor) {
        TruncatedOperator lhs = op_multiply(g(a), g(b));
        TruncatedOperator rhs = op_scale(factor, op_multiply(g(b), g(a)));
        return window_residual(lhs, rhs);
      };
      CHECK(rel2(Su2Gen::t11, Su2Gen::t12, qv) < 1e-12);
      CHECK(rel2(Su2Gen::t11, Su2Gen::t21, qv) < 1e-12);
      CHECK(rel2(Su2Gen::t12, Su2Gen::t22, qv) < 1e-12);
      CHECK(rel2(Su2Gen::t21, Su2Gen::t22, qv) < 1e-12);
      CHECK(rel2(Su2Gen::t12, Su2Gen::t21, 1.0) < 1e-12);
      TruncatedOperator det =
          op_sub(op_multiply(g(Su2Gen::t11), g(Su2Gen::t22)),
                 op_scale(qv, op_multiply(g(Su2Gen::t12), g(Su2Gen::t21))));
      CHECK(window_residual(det, op_identity(1, N)) < 1e-12);
    }
  }

  SUBCASE("adjoints realize the star structure") {
    int N = 6;
    CHECK(window_residual(op_adjoint(pi_su2({Su2Gen::t11}, N, q)), pi_su2({Su2Gen::t22}, N, q)) <
          1e-15);
    CHECK(window_residual(op_adjoint(pi_su2({Su2Gen::t12}, N, q)),
                          op_scale(-q, pi_su2({Su2Gen::t21}, N, q))) < 1e-15);
  }
}

TEST_CASE("operator window bookkeeping and index helpers") {
  double q = 0.5;

  SUBCASE("window composition matches letter counting") {
    int N = 6;
    TruncatedOperator a = pi_su2({Su2Gen::t22, Su2Gen::t11}, N, q);
    CHECK(a.safe_window == N - 2);
    TruncatedOperator b = pi_su2({Su2Gen::t21, Su2Gen::t12}, N, q);
    CHECK(b.safe_window == N);
    TruncatedOperator ab = op_multiply(a, b);
    CHECK(ab.safe_window == N - 2);
    // split product agrees with the one-shot word on the window
    TruncatedOperator whole = pi_su2({Su2Gen::t22, Su2Gen::t11, Su2Gen::t21, Su2Gen::t12}, N, q);
    CHECK(whole.safe_window == N - 2);
    CHECK(window_residual(ab, whole) < 1e-15);
    CHECK(op_add(a, b).safe_window == N - 2);
  }

  SUBCASE("flat index split and join") {
    std::vector<int> parts = split_index(1 * 16 + 1 * 4 + 2, 3, 4);
    CHECK(parts == std::vector<int>{1, 1, 2});
    CHECK(join_index(parts, 4) == 22);
    for (long f = 0; f < 27; ++f) CHECK(join_index(split_index(f, 3, 3), 3) == f);
  }

  SUBCASE("window residual needs a common window") {
    TruncatedOperator a = pi_su2({Su2Gen::t11}, 2, q);
    TruncatedOperator b = op_multiply(a, a);  // window 0
    CHECK(b.safe_window == 0);
    CHECK_THROWS_AS((void)window_residual(b, b), std::invalid_argument);
  }
}

TEST_CASE("expansion of coefficients into rank-1 monomials") {
  auto rs1 = build_root_system('A', 1);
  QScalar q = qf(1, 2);
  auto v1 = build_irreducible<Backend::floating>(rs1, wt(rs1, {1}), q);

  SUBCASE("rank-1 generators expand to themselves") {
    struct Row {
      int bra, ket, n11, n22, n12, n21;
    };
    for (const Row& r : {Row{0, 0, 1, 0, 0, 0}, Row{0, 1, 0, 0, 1, 0}, Row{1, 0, 0, 0, 0, 1},
                         Row{1, 1, 0, 1, 0, 0}}) {
      Su2Expansion e = project_su2(coeff_element(v1, r.bra, r.ket), 1);
      REQUIRE(e.terms.size() == 1);
      CHECK(e.terms[0].n11 == r.n11);
      CHECK(e.terms[0].n22 == r.n22);
      CHECK(e.terms[0].n12 == r.n12);
      CHECK(e.terms[0].n21 == r.n21);
      CHECK(std::abs(e.terms[0].coeff - Cplx(1.0)) < 1e-12);
    }
  }

  SUBCASE("highest coefficient of the square module is a square") {
    auto v2 = build_irreducible<Backend::floating>(rs1, wt(rs1, {2}), q);
    Su2Expansion e = project_su2(coeff_element(v2, 0, 0), 1);
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms[0].n11 == 2);
    CHECK(e.terms[0].n12 == 0);
    CHECK(std::abs(e.terms[0].coeff - Cplx(1.0)) < 1e-12);
  }

  SUBCASE("nodes acting trivially on a vector give constants") {
    auto rs2 = build_root_system('A', 2);
    auto m = build_irreducible<Backend::floating>(rs2, wt(rs2, {1, 0}), q);
    Su2Expansion e2 = project_su2(coeff_element(m, 0, 0), 2);
    REQUIRE(e2.terms.size() == 1);
    CHECK(e2.terms[0].level_shift() == 0);
    CHECK(e2.terms[0].n12 == 0);
    CHECK(e2.terms[0].n21 == 0);
    CHECK(std::abs(e2.terms[0].coeff - Cplx(1.0)) < 1e-12);

    Su2Expansion e1 = project_su2(coeff_element(m, 0, 0), 1);
    REQUIRE(e1.terms.size() == 1);
    CHECK(e1.terms[0].n11 == 1);
    CHECK(e1.terms[0].n22 == 0);
    CHECK(e1.terms[0].n12 == 0);
    CHECK(e1.terms[0].n21 == 0);
  }

  SUBCASE("split-parity mismatch forces the zero functional") {
    auto rs2 = build_root_system('A', 2);
    auto m = build_irreducible<Backend::floating>(rs2, wt(rs2, {1, 0}), q);
    // node weights at node 1 are (1, -1, 0): bra 0 against ket 2 mixes the
    // doublet with the singlet, which pairs to zero
    CHECK(project_su2(coeff_element(m, 0, 2), 1).terms.empty());
    CHECK(project_su2(coeff_element(m, 2, 0), 1).terms.empty());
  }

  SUBCASE("expansions reproduce evaluations beyond the solve window") {
    struct Case {
      char type;
      int rank;
      std::vector<long> hw;
      Rat qv;
    };
    std::vector<Case> cases = {{'A', 2, {1, 1}, Rat(1, 2)},   // adjoint, doubled weight space
                               {'B', 2, {0, 1}, Rat(2, 5)},   // short-node module
                               {'B', 2, {1, 0}, Rat(1, 2)}};  // long-node module
    for (const Case& cs : cases) {
      auto rs = build_root_system(cs.type, cs.rank);
      QScalar qq = make_q(Backend::floating, cs.qv);
      auto m = build_irreducible<Backend::floating>(rs, wt(rs, cs.hw), qq);
      for (int node = 1; node <= cs.rank; ++node) {
        long di = rs->d[(size_t)node - 1];
        QScalar qi = make_q(Backend::floating, rat_pow(cs.qv, di));
        auto side = build_irreducible<Backend::floating>(rs1, wt(rs1, {1}), qi);
        long h = 0;
        for (int s = 0; s < m->dim(); ++s) h = std::max(h, m->k_exponent(s, node - 1) / di);
        double worst = 0.0;
        for (int a = 0; a < m->dim(); ++a)
          for (int b = 0; b < m->dim(); ++b) {
            Su2Expansion e = project_su2(coeff_element(m, a, b), node);
            for (long f = 0; f <= h + 1; ++f)
              for (long g = 0; g <= h + 1; ++g)
                for (long k = -h - 1; k <= h + 1; ++k) {
                  PBWMonomial ambient;
                  ambient.f_word.assign((size_t)f, node);
                  ambient.e_word.assign((size_t)g, node);
                  ambient.k_exponents.assign((size_t)cs.rank, 0);
                  ambient.k_exponents[(size_t)node - 1] = k;
                  Cplx rhs = evaluate(coeff_element(m, a, b), ambient);
                  PBWMonomial probe;
                  probe.f_word.assign((size_t)f, 1);
                  probe.e_word.assign((size_t)g, 1);
                  probe.k_exponents = {k};
                  Cplx lhs = 0.0;
                  for (const Su2Monomial& mono : e.terms) {
                    FloatElement elem;
                    bool started = false;
                    auto append = [&](int bra, int ket, int count) {
                      for (int r = 0; r < count; ++r) {
                        FloatElement gph = coeff_element(side, bra, ket);
                        elem = started ? multiply(elem, gph) : gph;
                        started = true;
                      }
                    };
                    append(0, 0, mono.n11);
                    append(1, 1, mono.n22);
                    append(0, 1, mono.n12);
                    append(1, 0, mono.n21);
                    if (!started) elem = unit_element<Backend::floating>(rs1, qi);
                    lhs += mono.coeff * evaluate(elem, probe);
                  }
                  worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                }
          }
        CHECK(worst < 1e-9);
      }
    }
  }

  SUBCASE("expansion is linear in the functional") {
    auto rs2 = build_root_system('A', 2);
    auto m = build_irreducible<Backend::floating>(rs2, wt(rs2, {1, 0}), q);
    FloatElement combo = add(scalar_mul(Cplx(2.0, 1.0), coeff_element(m, 0, 0)),
                             scalar_mul(Cplx(0.0, -3.0), coeff_element(m, 1, 0)));
    Su2Expansion e = project_su2(combo, 1);
    Su2Expansion ea = project_su2(coeff_element(m, 0, 0), 1);
    Su2Expansion eb = project_su2(coeff_element(m, 1, 0), 1);
    REQUIRE(e.terms.size() == ea.terms.size() + eb.terms.size());
    for (const Su2Monomial& mono : e.terms) {
      Cplx want = 0.0;
      for (const Su2Monomial& t : ea.terms)
        if (t.n11 == mono.n11 && t.n22 == mono.n22 && t.n12 == mono.n12 && t.n21 == mono.n21)
          want += Cplx(2.0, 1.0) * t.coeff;
      for (const Su2Monomial& t : eb.terms)
        if (t.n11 == mono.n11 && t.n22 == mono.n22 && t.n12 == mono.n12 && t.n21 == mono.n21)
          want += Cplx(0.0, -3.0) * t.coeff;
      CHECK(std::abs(mono.coeff - want) < 1e-12);
    }
  }
}

TEST_CASE("torus characters") {
  auto rs = build_root_system('A', 2);
  QScalar q = qf(1, 2);
  auto m = build_irreducible<Backend::floating>(rs, wt(rs, {1, 0}), q);

  SUBCASE("point validation") {
    CHECK_THROWS_AS((void)make_torus_point({Cplx(0.5, 0.0), Cplx(1.0, 0.0)}),
                    std::invalid_argument);
    CHECK_NOTHROW((void)make_torus_point({Cplx(0.0, 1.0), Cplx(-1.0, 0.0)}));
    TorusPoint tp = root_of_unity_point({{1, 4}, {1, 2}});
    CHECK(std::abs(tp.t[0] - Cplx(0.0, 1.0)) < 1e-12);
    CHECK(std::abs(tp.t[1] - Cplx(-1.0, 0.0)) < 1e-12);
    CHECK_THROWS_AS((void)root_of_unity_point({{1, 0}}), std::invalid_argument);
  }

  SUBCASE("diagonal coefficients pick up their weight character") {
    TorusPoint tp = root_of_unity_point({{1, 8}, {1, 3}});
    // weights of the vector module: w1, w1-a1, w1-a1-a2 with node pairings
    // (1,0), (-1,1), (0,-1)
    CHECK(std::abs(tau_t(coeff_element(m, 0, 0), tp) - tp.t[0]) < 1e-12);
    CHECK(std::abs(tau_t(coeff_element(m, 1, 1), tp) - tp.t[1] / tp.t[0]) < 1e-12);
    CHECK(std::abs(tau_t(coeff_element(m, 2, 2), tp) - 1.0 / tp.t[1]) < 1e-12);
    TorusPoint ones = make_torus_point({Cplx(1.0, 0.0), Cplx(1.0, 0.0)});
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(tau_t(coeff_element(m, j, j), ones) - Cplx(1.0)) < 1e-12);
  }

  SUBCASE("off-diagonal coefficients vanish") {
    TorusPoint tp = root_of_unity_point({{2, 7}, {3, 5}});
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) CHECK(std::abs(tau_t(coeff_element(m, a, b), tp)) < 1e-12);
  }

  SUBCASE("multiplicative unital star character") {
    TorusPoint tp = root_of_unity_point({{1, 5}, {3, 8}});
    CHECK(std::abs(tau_t(unit_element<Backend::floating>(rs, q), tp) - Cplx(1.0)) < 1e-12);
    for (int a : {0, 1, 2})
      for (int b : {0, 2}) {
        FloatElement x = coeff_element(m, a, a);
        FloatElement y = coeff_element(m, b, b);
        CHECK(std::abs(tau_t(multiply(x, y), tp) - tau_t(x, tp) * tau_t(y, tp)) < 1e-12);
        CHECK(std::abs(tau_t(star(x), tp) - std::conj(tau_t(x, tp))) < 1e-12);
      }
  }
}

TEST_CASE("empty word gives the counit representation") {
  auto rs = build_root_system('A', 2);
  QScalar q = qf(1, 2);
  auto m = build_irreducible<Backend::floating>(rs, wt(rs, {1, 0}), q);
  WeylWord e = identity_word(rs);
  int N = 5;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      TruncatedOperator op = pi_sigma(e, coeff_element(m, a, b), N);
      CHECK(op.factor_count == 0);
      CHECK(op.dim() == 1);
      CHECK(op.safe_window == N);
      CHECK(std::abs(op.mat(0, 0) - (a == b ? Cplx(1.0) : Cplx(0.0))) < 1e-12);
    }
  TruncatedOperator unit = pi_sigma(e, unit_element<Backend::floating>(rs, q), N);
  CHECK(std::abs(unit.mat(0, 0) - Cplx(1.0)) < 1e-12);
}

TEST_CASE("tensor assembly is a homomorphism and respects the star structure") {
  QScalar q = qf(1, 2);
  int N = 8;
  std::mt19937 rng(20260815);

  auto rs1 = build_root_system('A', 1);
  auto v1 = build_irreducible<Backend::floating>(rs1, wt(rs1, {1}), q);
  WeylWord s1 = reduce(rs1, {1});

  auto rs2 = build_root_system('A', 2);
  auto m2 = build_irreducible<Backend::floating>(rs2, wt(rs2, {1, 0}), q);
  WeylWord s12 = reduce(rs2, {1, 2});
  WeylWord s121 = reduce(rs2, {1, 2, 1});

  double worst_mult = 0.0, worst_star = 0.0;
  auto run_pair = [&](const WeylWord& sigma, const ModulePtr<Backend::floating>& mod) {
    std::uniform_int_distribution<int> pick(0, mod->dim() - 1);
    FloatElement x = coeff_element(mod, pick(rng), pick(rng));
    FloatElement y = coeff_element(mod, pick(rng), pick(rng));
    TruncatedOperator px = pi_sigma(sigma, x, N);
    TruncatedOperator py = pi_sigma(sigma, y, N);
    TruncatedOperator pxy = pi_sigma(sigma, multiply(x, y), N);
    worst_mult = std::max(worst_mult, window_residual(pxy, op_multiply(px, py)));
    TruncatedOperator ps = pi_sigma(sigma, star(x), N);
    worst_star = std::max(worst_star, window_residual(ps, op_adjoint(px)));
  };
  for (int r = 0; r < 6; ++r) run_pair(s1, v1);
  for (int r = 0; r < 10; ++r) run_pair(s12, m2);
  for (int r = 0; r < 4; ++r) run_pair(s121, m2);
  CHECK(worst_mult < 1e-9);
  CHECK(worst_star < 1e-9);

  SUBCASE("unit maps to the identity") {
    TruncatedOperator one = pi_sigma(s12, unit_element<Backend::floating>(rs2, q), N);
    CHECK(window_residual(one, op_identity(2, N)) < 1e-12);
  }

  SUBCASE("two-term elements assemble linearly") {
    FloatElement x = coeff_element(m2, 0, 1);
    FloatElement y = coeff_element(m2, 2, 1);
    FloatElement combo = add(scalar_mul(Cplx(0.5, -2.0), x), scalar_mul(Cplx(0.0, 1.0), y));
    TruncatedOperator direct = pi_sigma(s12, combo, N);
    TruncatedOperator assembled =
        op_add(op_scale(Cplx(0.5, -2.0), pi_sigma(s12, x, N)),
               op_scale(Cplx(0.0, 1.0), pi_sigma(s12, y, N)));
    CHECK(window_residual(direct, assembled) < 1e-12);
  }
}

TEST_CASE("extreme coefficients act as weighted shift products up to phase") {
  QScalar q = qf(2, 5);
  int N = 6;
  struct Case {
    char type;
    int rank;
    std::vector<int> word;
    std::vector<long> hw;
  };
  for (const Case& cs : {Case{'A', 1, {1}, {1}},
                         Case{'A', 2, {1, 2}, {1, 0}},
                         Case{'A', 2, {1, 2}, {0, 1}},
                         Case{'A', 2, {1, 2, 1}, {1, 1}},
                         Case{'B', 2, {2, 1}, {1, 0}}}) {
    auto rs = build_root_system(cs.type, cs.rank);
    WeylWord sigma = reduce(rs, cs.word);
    Weight lambda = wt(rs, cs.hw);
    auto mod = build_irreducible<Backend::floating>(rs, lambda, q);
    Weight target = act(sigma, lambda);
    int idx = -1;
    for (int j = 0; j < mod->dim(); ++j)
      if (mod->weights[j] == target) idx = j;
    REQUIRE(idx >= 0);
    TruncatedOperator got = pi_sigma(sigma, coeff_element(mod, idx, 0), N);
    TruncatedOperator ref = extreme_reference(sigma, lambda, q, N);
    int w = std::min(got.safe_window, ref.safe_window);
    REQUIRE(w > 0);
    double worst = 0.0;
    for (long i = 0; i < got.dim(); ++i)
      for (long j = 0; j < got.dim(); ++j) {
        bool inside = true;
        for (int d : split_index(i, got.factor_count, N)) inside = inside && d < w;
        for (int d : split_index(j, got.factor_count, N)) inside = inside && d < w;
        if (!inside) continue;
        worst = std::max(worst,
                         std::abs(std::abs(got.mat((int)i, (int)j)) - std::abs(ref.mat((int)i, (int)j))));
      }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("kernel pattern of extreme-column coefficients") {
  QScalar q = qf(1, 2);
  int N = 5;
  struct Case {
    char type;
    int rank;
    std::vector<int> word;
    std::vector<long> hw;
  };
  for (const Case& cs : {Case{'A', 2, {1}, {1, 0}},
                         Case{'A', 2, {2}, {1, 1}},
                         Case{'A', 2, {1, 2}, {1, 1}},
                         Case{'B', 2, {2}, {0, 1}}}) {
    auto rs = build_root_system(cs.type, cs.rank);
    WeylWord sigma = reduce(rs, cs.word);
    Weight lambda = wt(rs, cs.hw);
    auto mod = build_irreducible<Backend::floating>(rs, lambda, q);
    Weight target = act(sigma, lambda);
    int extreme = -1;
    for (int j = 0; j < mod->dim(); ++j)
      if (mod->weights[j] == target) extreme = j;
    REQUIRE(extreme >= 0);
    std::vector<int> alive = raising_closure(mod, extreme);
    for (int v = 0; v < mod->dim(); ++v) {
      TruncatedOperator op = pi_sigma(sigma, coeff_element(mod, v, 0), N);
      bool reachable = std::find(alive.begin(), alive.end(), v) != alive.end();
      if (reachable)
        CHECK(max_abs(op) > 1e-6);
      else
        CHECK(max_abs(op) < 1e-10);
    }
    TruncatedOperator at_extreme = pi_sigma(sigma, coeff_element(mod, extreme, 0), N);
    CHECK(max_abs(at_extreme) > 1e-6);
  }
}

TEST_CASE("diagonal spectral operators") {
  SUBCASE("rank-1 ladder") {
    auto rs = build_root_system('A', 1);
    QScalar q = qf(1, 2);
    TruncatedOperator L = L_operator(reduce(rs, {1}), wt(rs, {1}), q, 4);
    CHECK(L.safe_window == 4);
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(L.mat(j, j) - std::pow(0.5, 2 * j)) < 1e-12);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) CHECK(std::abs(L.mat(i, j)) < 1e-14);
  }

  SUBCASE("eigenvalue ladder matches the exponent sequence at every index") {
    struct Case {
      char type;
      int rank;
      std::vector<int> word;
      std::vector<long> hw;
      int N;
    };
    for (const Case& cs : {Case{'A', 2, {1, 2}, {1, 0}, 5},
                           Case{'A', 2, {1, 2, 1}, {1, 1}, 4},
                           Case{'A', 2, {2, 1}, {0, 1}, 5},
                           Case{'B', 2, {1, 2}, {1, 0}, 4},
                           Case{'B', 2, {2, 1, 2}, {0, 1}, 3}}) {
      auto rs = build_root_system(cs.type, cs.rank);
      WeylWord sigma = reduce(rs, cs.word);
      Weight lambda = wt(rs, cs.hw);
      QScalar q = qf(1, 2);
      TruncatedOperator L = L_operator(sigma, lambda, q, cs.N);
      std::vector<long> expo = l_diagonal_exponents(sigma, lambda);
      REQUIRE((int)expo.size() == sigma.length());
      for (long f = 0; f < L.dim(); ++f) {
        std::vector<int> parts = split_index(f, L.factor_count, cs.N);
        double want = 1.0;
        for (size_t k = 0; k < parts.size(); ++k) {
          // base is the node parameter q_{i_k} = q^{d_{i_k}} of the k-th letter
          double qnode = std::pow(0.5, (double)rs->d[(size_t)(sigma.letters[k] - 1)]);
          want *= std::pow(qnode, 2.0 * (double)expo[k] * parts[(size_t)k]);
        }
        CHECK(std::abs(L.mat((int)f, (int)f) - want) < 1e-11);
        CHECK(L.mat((int)f, (int)f).real() > 0.0);
      }
      double off = 0.0;
      for (long i = 0; i < L.dim(); ++i)
        for (long j = 0; j < L.dim(); ++j)
          if (i != j) off = std::max(off, std::abs(L.mat((int)i, (int)j)));
      CHECK(off < 1e-12);
      CHECK(std::abs(L.mat(0, 0) - Cplx(1.0)) < 1e-12);  // top eigenvalue always present
      CHECK(L.safe_window == cs.N);                      // nothing level-shifting survives
    }
  }
}

TEST_CASE("level-one eigenspaces") {
  QScalar q = qf(1, 2);

  SUBCASE("identity word keeps the whole one-dimensional space") {
    auto rs = build_root_system('A', 2);
    H1Data h = h1_eigenspace(identity_word(rs), wt(rs, {0, 1}), q, 6);
    CHECK(h.dimension == 1);
    CHECK(h.indices == std::vector<long>{0});
  }

  SUBCASE("minimal representatives with regular spherical weights pin the vacuum") {
    struct Case {
      char type;
      int rank;
      std::vector<int> S;
      std::vector<long> hw;
      int N;
    };
    for (const Case& cs : {Case{'A', 2, {1}, {0, 1}, 6}, Case{'B', 2, {1}, {0, 1}, 4}}) {
      auto rs = build_root_system(cs.type, cs.rank);
      ParabolicData pd = minimal_coset_reps(rs, cs.S);
      for (const WeylWord& sigma : pd.minimal_reps) {
        if (sigma.length() > 3) continue;
        H1Data h = h1_eigenspace(sigma, wt(rs, cs.hw), q, cs.N);
        CHECK(h.dimension == 1);
        REQUIRE(h.dimension >= 1);
        CHECK(h.indices[0] == 0);
      }
    }
  }

  SUBCASE("full flag with a regular weight") {
    auto rs = build_root_system('A', 2);
    H1Data h = h1_eigenspace(reduce(rs, {1, 2, 1}), wt(rs, {1, 1}), q, 5);
    CHECK(h.dimension == 1);
    CHECK(h.indices == std::vector<long>{0});
  }

  SUBCASE("weights not regular for the coset block grow whole axes") {
    // the second exponent vanishes, so the trailing truncation axis is free
    auto rs = build_root_system('A', 2);
    int N = 6;
    H1Data h = h1_eigenspace(reduce(rs, {1, 2}), wt(rs, {1, 0}), q, N);
    CHECK(h.dimension == N);
    for (int j = 0; j < N; ++j) CHECK(h.indices[(size_t)j] == j);
  }
}

TEST_CASE("reduced-word independence") {
  auto rs = build_root_system('A', 2);
  QScalar q = qf(1, 2);
  WeylWord w1 = reduce(rs, {1, 2, 1});
  WeylWord w2 = reduce(rs, {2, 1, 2});
  REQUIRE(weyl_equal(w1, w2));
  REQUIRE(w1.length() == 3);
  REQUIRE(w2.length() == 3);

  SUBCASE("diagonal operator spectra coincide as multisets") {
    for (std::vector<long> hw : {std::vector<long>{1, 0}, {0, 1}, {1, 1}}) {
      TruncatedOperator L1 = L_operator(w1, wt(rs, hw), q, 4);
      TruncatedOperator L2 = L_operator(w2, wt(rs, hw), q, 4);
      std::vector<double> d1, d2;
      for (int j = 0; j < L1.dim(); ++j) {
        d1.push_back(L1.mat(j, j).real());
        d2.push_back(L2.mat(j, j).real());
      }
      std::sort(d1.begin(), d1.end());
      std::sort(d2.begin(), d2.end());
      double worst = 0.0;
      for (size_t i = 0; i < d1.size(); ++i) worst = std::max(worst, std::abs(d1[i] - d2[i]));
      CHECK(worst < 1e-10);
    }
  }

  SUBCASE("spectra of a*a agree on complete grade classes") {
    int N = 8;
    long cap = 4;
    std::vector<long> idx1 = grade_window_indices(w1, N, cap);
    std::vector<long> idx2 = grade_window_indices(w2, N, cap);
    REQUIRE(idx1.size() == idx2.size());
    REQUIRE(idx1.size() > 20);
    auto m = build_irreducible<Backend::floating>(rs, wt(rs, {1, 0}), q);
    int pairs[5][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 2}, {2, 2}};
    double worst = 0.0;
    for (auto& pr : pairs) {
      FloatElement a = coeff_element(m, pr[0], pr[1]);
      FloatElement asa = multiply(star(a), a);
      TruncatedOperator p1 = pi_sigma(w1, asa, N);
      TruncatedOperator p2 = pi_sigma(w2, asa, N);
      REQUIRE(cap < std::min(p1.safe_window, p2.safe_window));
      std::vector<double> s1 = compressed_spectrum(p1, idx1);
      std::vector<double> s2 = compressed_spectrum(p2, idx2);
      for (size_t i = 0; i < s1.size(); ++i) worst = std::max(worst, std::abs(s1[i] - s2[i]));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("input validation") {
  auto rs = build_root_system('A', 2);
  QScalar q = qf(1, 2);
  auto m = build_irreducible<Backend::floating>(rs, wt(rs, {1, 0}), q);

  CHECK_THROWS_AS((void)pi_su2({Su2Gen::t11}, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)pi_su2({Su2Gen::t11}, 4, 1.5), std::invalid_argument);
  CHECK_THROWS_AS((void)pi_su2({Su2Gen::t11}, 4, 0.0), std::invalid_argument);

  CHECK_THROWS_AS((void)project_su2(coeff_element(m, 0, 0), 3), std::invalid_argument);
  CHECK_THROWS_AS((void)project_su2(coeff_element(m, 0, 0), 0), std::invalid_argument);

  // hand-built word that squares a letter: not reduced, action is trivial
  WeylWord bogus = identity_word(rs);
  bogus.letters = {1, 1};
  CHECK_THROWS_AS((void)pi_sigma(bogus, coeff_element(m, 0, 0), 4), std::invalid_argument);

  // 11^3 = 1331 rows would need more than 10^6 dense entries
  CHECK_THROWS_AS((void)pi_sigma(reduce(rs, {1, 2, 1}), coeff_element(m, 0, 0), 11),
                  std::length_error);

  CHECK_THROWS_AS((void)tau_t(coeff_element(m, 0, 0), TorusPoint{{Cplx(2.0, 0.0), Cplx(1.0, 0.0)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)tau_t(coeff_element(m, 0, 0), root_of_unity_point({{1, 2}})),
                  std::invalid_argument);

  auto rs1 = build_root_system('A', 1);
  CHECK_THROWS_AS((void)pi_sigma(reduce(rs1, {1}), coeff_element(m, 0, 0), 4),
                  std::invalid_argument);
}

TEST_CASE("operator tensor product: block structure and bookkeeping") {
  double q = 0.5;
  int N = 4;
  TruncatedOperator a = pi_su2({Su2Gen::t11}, N, q);
  TruncatedOperator b = pi_su2({Su2Gen::t21}, N, q);

  TruncatedOperator t = op_tensor(a, b);
  CHECK(t.factor_count == 2);
  CHECK(t.trunc == N);
  CHECK(t.safe_window == std::min(a.safe_window, b.safe_window));
  REQUIRE(t.dim() == a.dim() * b.dim());
  for (int i1 = 0; i1 < N; ++i1)
    for (int i2 = 0; i2 < N; ++i2)
      for (int j1 = 0; j1 < N; ++j1)
        for (int j2 = 0; j2 < N; ++j2) {
          Cplx got = t.mat(join_index({i1, i2}, N), join_index({j1, j2}, N));
          Cplx want = a.mat(i1, j1) * b.mat(i2, j2);
          CHECK(std::abs(got - want) < 1e-14);
        }

  // identity blocks compose to the bigger identity
  TruncatedOperator id3 = op_tensor(op_identity(1, N), op_identity(2, N));
  CHECK(window_residual(id3, op_identity(3, N)) == 0.0);

  // mixed product rule: (a (x) b)(c (x) d) = ac (x) bd entrywise
  TruncatedOperator c = pi_su2({Su2Gen::t12}, N, q);
  TruncatedOperator d = pi_su2({Su2Gen::t22}, N, q);
  TruncatedOperator lhs = op_multiply(op_tensor(a, b), op_tensor(c, d));
  TruncatedOperator rhs = op_tensor(op_multiply(a, c), op_multiply(b, d));
  double worst = 0.0;
  for (size_t k = 0; k < lhs.mat.a.size(); ++k)
    worst = std::max(worst, std::abs(lhs.mat.a[k] - rhs.mat.a[k]));
  CHECK(worst < 1e-13);

  // adjoint distributes over the blocks
  TruncatedOperator adj = op_adjoint(op_tensor(a, b));
  TruncatedOperator adj2 = op_tensor(op_adjoint(a), op_adjoint(b));
  worst = 0.0;
  for (size_t k = 0; k < adj.mat.a.size(); ++k)
    worst = std::max(worst, std::abs(adj.mat.a[k] - adj2.mat.a[k]));
  CHECK(worst == 0.0);

  // zero-factor sides act as scalars
  auto rs = build_root_system('A', 1);
  WeylWord e = identity_word(rs);
  auto m = build_irreducible<Backend::floating>(rs, wt(rs, {1}), qf(1, 2));
  TruncatedOperator scalar = pi_sigma(e, coeff_element(m, 0, 0), N);  // counit value
  REQUIRE(scalar.factor_count == 0);
  TruncatedOperator scaled = op_tensor(scalar, b);
  CHECK(scaled.factor_count == b.factor_count);
  CHECK(window_residual(scaled, op_scale(scalar.mat(0, 0), b)) == 0.0);
  TruncatedOperator scaled_r = op_tensor(b, scalar);
  CHECK(window_residual(scaled_r, op_scale(scalar.mat(0, 0), b)) == 0.0);

  // shape and size guards
  CHECK_THROWS_AS((void)op_tensor(pi_su2({Su2Gen::t11}, 4, q), pi_su2({Su2Gen::t11}, 5, q)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)op_tensor(op_identity(2, 11), op_identity(1, 11)), std::length_error);
}

TEST_CASE("torus twist: character scaling of the ket weight") {
  auto rs = build_root_system('A', 1);
  QScalar q = qf(1, 2);
  auto m = build_irreducible<Backend::floating>(rs, wt(rs, {1}), q);
  TorusPoint t = root_of_unity_point({{1, 3}});
  Cplx t1 = t.t[0];

  // single coefficients scale by t^{(mu_ket, alpha^vee)}
  CHECK(equals(torus_twist(coeff_element(m, 0, 0), t), scalar_mul(t1, coeff_element(m, 0, 0))) ==
        Ternary::yes);
  CHECK(equals(torus_twist(coeff_element(m, 1, 0), t), scalar_mul(t1, coeff_element(m, 1, 0))) ==
        Ternary::yes);
  // negative pairing inverts the coordinate
  CHECK(equals(torus_twist(coeff_element(m, 1, 1), t),
               scalar_mul(Cplx(1.0, 0.0) / t1, coeff_element(m, 1, 1))) == Ternary::yes);

  // the trivial point fixes everything; conjugate coordinates undo the twist
  TorusPoint one = make_torus_point({Cplx(1.0, 0.0)});
  TorusPoint tbar = make_torus_point({std::conj(t1)});
  FloatElement x = multiply(coeff_element(m, 0, 0), coeff_element(m, 1, 0));
  CHECK(equals(torus_twist(x, one), x) == Ternary::yes);
  CHECK(equals(torus_twist(torus_twist(x, t), tbar), x) == Ternary::yes);

  // algebra homomorphism: twist of a product is the product of twists
  FloatElement y = coeff_element(m, 1, 1);
  CHECK(equals(torus_twist(multiply(x, y), t), multiply(torus_twist(x, t), torus_twist(y, t))) ==
        Ternary::yes);
  CHECK(equals(torus_twist(unit_element<Backend::floating>(rs, q), t),
               unit_element<Backend::floating>(rs, q)) == Ternary::yes);

  // composing one-dimensional characters multiplies their coordinates
  TorusPoint s = root_of_unity_point({{1, 5}});
  TorusPoint ts = make_torus_point({t.t[0] * s.t[0]});
  CHECK(std::abs(tau_t(torus_twist(x, t), s) - tau_t(x, ts)) < 1e-12);

  // coordinate count and modulus are validated
  CHECK_THROWS_AS((void)torus_twist(x, root_of_unity_point({{1, 3}, {1, 5}})),
                  std::invalid_argument);
  TorusPoint bad;
  bad.t = {Cplx(2.0, 0.0)};
  CHECK_THROWS_AS((void)torus_twist(x, bad), std::invalid_argument);
}
