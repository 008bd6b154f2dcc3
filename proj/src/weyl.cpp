#include "qflag/weyl.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qflag {

namespace {

// matrix of s_i on fundamental coordinates: identity except column i,
// where (s_i)_{ji} = delta_ji - cartan(j,i)
Mat<long> reflection_matrix(const RootSystemPtr& rs, int i) {
  Mat<long> m = Mat<long>::identity(rs->rank);
  for (int j = 0; j < rs->rank; ++j) m(j, i) -= rs->cartan(j, i);
  return m;
}

void check_letters(const RootSystemPtr& rs, const std::vector<int>& letters) {
  for (int i : letters)
    if (i < 1 || i > rs->rank) throw std::invalid_argument("reflection index out of range");
}

Weight apply_mat(const Mat<long>& m, const Weight& w) {
  Weight out = w;
  for (int j = 0; j < m.rows; ++j) {
    Rat s(0);
    for (int k = 0; k < m.cols; ++k)
      if (w.c[k] != 0) s += Rat(m(j, k)) * w.c[k];
    out.c[j] = s;
  }
  return out;
}

// sign of a root given by its fundamental coordinates under m
bool image_is_positive(const RootSystemPtr& rs, const Mat<long>& m, const Weight& root) {
  Weight img = apply_mat(m, root);
  Rat h = height(img);
  if (h == 0) throw std::logic_error("root image has zero height");
  return h > 0;
}

void normalize_s(const RootSystemPtr& rs, std::vector<int>& S) {
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  for (int s : S)
    if (s < 1 || s > rs->rank) throw std::invalid_argument("node index out of range");
}

}  // namespace

bool weyl_equal(const WeylWord& a, const WeylWord& b) {
  return a.rs.get() == b.rs.get() && a.action == b.action;
}

WeylWord identity_word(const RootSystemPtr& rs) {
  return WeylWord{rs, {}, Mat<long>::identity(rs->rank)};
}

int inversion_count(const RootSystemPtr& rs, const Mat<long>& m) {
  int n = 0;
  for (const auto& r : rs->positive_roots)
    if (!image_is_positive(rs, m, r)) ++n;
  return n;
}

WeylWord word_from_action(const RootSystemPtr& rs, const Mat<long>& m) {
  // peel the least left descent: i is a left descent of w iff w^{-1} alpha_i < 0
  WeylWord out{rs, {}, m};
  Mat<long> id = Mat<long>::identity(rs->rank);
  Mat<long> inv = id;  // will hold w^{-1} for the remaining part
  {
    // invert by peeling from the given matrix directly: accumulate letters
    // with the left-descent rule on n = w^{-1}, maintained incrementally.
    // First compute w^{-1} by solving; entries are integers.
    Mat<Rat> a(rs->rank, rs->rank);
    for (int i = 0; i < rs->rank; ++i)
      for (int j = 0; j < rs->rank; ++j) a(i, j) = Rat(m(i, j));
    Mat<Rat> ainv = inverse(a);
    for (int i = 0; i < rs->rank; ++i)
      for (int j = 0; j < rs->rank; ++j) {
        if (!rat_is_int(ainv(i, j))) throw std::logic_error("non-integral group matrix inverse");
        inv(i, j) = rat_long(ainv(i, j));
      }
  }
  std::vector<int> letters;
  while (!(inv == id)) {
    int pick = -1;
    for (int i = 0; i < rs->rank && pick < 0; ++i)
      if (!image_is_positive(rs, inv, rs->simple_roots[i])) pick = i;
    if (pick < 0) throw std::logic_error("no descent found for non-identity matrix");
    letters.push_back(pick + 1);
    inv = inv * reflection_matrix(rs, pick);
  }
  out.letters = std::move(letters);
  return out;
}

WeylWord reduce(const RootSystemPtr& rs, const std::vector<int>& letters) {
  check_letters(rs, letters);
  Mat<long> m = Mat<long>::identity(rs->rank);
  for (int i : letters) m = m * reflection_matrix(rs, i - 1);
  if (inversion_count(rs, m) == (int)letters.size()) return WeylWord{rs, letters, m};
  return word_from_action(rs, m);
}

Weight act(const WeylWord& w, const Weight& mu) {
  if (w.rs.get() != mu.rs.get()) throw std::invalid_argument("weight over different root system");
  return apply_mat(w.action, mu);
}

WeylWord compose(const WeylWord& a, const WeylWord& b) {
  if (a.rs.get() != b.rs.get()) throw std::invalid_argument("words over different root systems");
  auto letters = a.letters;
  letters.insert(letters.end(), b.letters.begin(), b.letters.end());
  return reduce(a.rs, letters);
}

WeylWord inverse_word(const WeylWord& w) {
  auto letters = w.letters;
  std::reverse(letters.begin(), letters.end());
  return reduce(w.rs, letters);
}

std::vector<WeylWord> enumerate_weyl(const RootSystemPtr& rs, size_t cap) {
  std::vector<WeylWord> out;
  std::map<std::vector<long>, int> seen;
  out.push_back(identity_word(rs));
  seen[out[0].action.a] = 0;
  size_t head = 0;
  while (head < out.size()) {
    // copy: out may reallocate while we append
    WeylWord cur = out[head];
    for (int i = 1; i <= rs->rank; ++i) {
      Mat<long> nx = cur.action * reflection_matrix(rs, i - 1);
      if (seen.count(nx.a)) continue;
      if (out.size() >= cap) throw std::runtime_error("Weyl group exceeds enumeration cap");
      auto letters = cur.letters;
      letters.push_back(i);
      seen[nx.a] = (int)out.size();
      out.push_back(WeylWord{rs, std::move(letters), std::move(nx)});
    }
    ++head;
  }
  return out;
}

WeylWord longest_element(const RootSystemPtr& rs) {
  WeylWord w = identity_word(rs);
  for (;;) {
    int pick = -1;
    for (int i = 0; i < rs->rank && pick < 0; ++i)
      if (image_is_positive(rs, w.action, rs->simple_roots[i])) pick = i;
    if (pick < 0) return w;
    w.letters.push_back(pick + 1);
    w.action = w.action * reflection_matrix(rs, pick);
  }
}

ParabolicData minimal_coset_reps(const RootSystemPtr& rs, const std::vector<int>& S_in,
                                 size_t cap) {
  std::vector<int> S = S_in;
  normalize_s(rs, S);
  if ((int)S.size() == rs->rank)
    throw std::invalid_argument("S must be a proper subset of the simple roots");

  ParabolicData pd;
  pd.S = S;

  // order of the subgroup generated by the S reflections
  {
    std::map<std::vector<long>, int> seen;
    std::vector<Mat<long>> q = {Mat<long>::identity(rs->rank)};
    seen[q[0].a] = 0;
    size_t head = 0;
    while (head < q.size()) {
      for (int s : S) {
        Mat<long> nx = q[head] * reflection_matrix(rs, s - 1);
        if (!seen.count(nx.a)) {
          seen[nx.a] = (int)q.size();
          q.push_back(nx);
        }
      }
      ++head;
    }
    pd.W_S_order = (long)q.size();
  }

  for (const auto& w : enumerate_weyl(rs, cap)) {
    bool rep = true;
    for (int s : S)
      if (!image_is_positive(rs, w.action, rs->simple_roots[s - 1])) rep = false;
    if (rep) pd.minimal_reps.push_back(w);
  }
  return pd;
}

std::pair<WeylWord, WeylWord> parabolic_decompose(const WeylWord& w, const std::vector<int>& S_in) {
  auto rs = w.rs;
  std::vector<int> S = S_in;
  normalize_s(rs, S);
  Mat<long> m = w.action;
  std::vector<int> vletters;
  for (;;) {
    // right descent j of the remaining part u: u(alpha_j) < 0
    int pick = -1;
    for (int s : S)
      if (!image_is_positive(rs, m, rs->simple_roots[s - 1])) {
        pick = s;
        break;
      }
    if (pick < 0) break;
    vletters.insert(vletters.begin(), pick);
    m = m * reflection_matrix(rs, pick - 1);
  }
  WeylWord u = word_from_action(rs, m);
  WeylWord v = reduce(rs, vletters);
  if (u.length() + v.length() != inversion_count(rs, w.action))
    throw std::logic_error("parabolic factor lengths do not add");
  return {u, v};
}

std::vector<Weight> gamma_sequence(const WeylWord& w) {
  auto rs = w.rs;
  int l = w.length();
  std::vector<Weight> gamma((size_t)l, zero_weight(rs));
  Mat<long> m = Mat<long>::identity(rs->rank);
  for (int k = l - 1; k >= 0; --k) {
    gamma[k] = apply_mat(m, rs->simple_roots[w.letters[k] - 1]);
    m = m * reflection_matrix(rs, w.letters[k] - 1);
  }
  return gamma;
}

Weight dominant_representative(const Weight& mu) {
  const RootSystemPtr& rs = mu.rs;
  Weight out = mu;
  for (;;) {
    int neg = -1;
    for (int i = 0; i < rs->rank && neg < 0; ++i)
      if (pair_coroot(out, rs->simple_roots[(size_t)i]) < 0) neg = i;
    if (neg < 0) return out;
    out = out - pair_coroot(out, rs->simple_roots[(size_t)neg]) * rs->simple_roots[(size_t)neg];
  }
}

std::string weyl_word_str(const WeylWord& w) {
  if (w.letters.empty()) return "e";
  std::string s;
  for (size_t k = 0; k < w.letters.size(); ++k) {
    if (k) s += " ";
    s += "s" + std::to_string(w.letters[k]);
  }
  return s;
}

}  // namespace qflag
