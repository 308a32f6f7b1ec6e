#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "catcoh/complex.hpp"
#include "catcoh/fincat.hpp"

namespace catcoh {

/// The category of factorizations of a base category: objects are base morphisms,
/// a morphism alpha -> beta is a pair (nu, psi) with psi . alpha . nu = beta.
struct FactorizationCategory {
  FiniteCategory base;
  FiniteCategory cat;                             // objects index Mor(base)
  std::vector<std::array<int, 3>> mor_label;      // (alpha, nu, psi), alpha the source object
  std::map<std::array<int, 3>, int> mor_index;

  [[nodiscard]] int index_of(int alpha, int nu, int psi) const { return mor_index.at({alpha, nu, psi}); }
};

inline FactorizationCategory build_factorization_category(const FiniteCategory& c) {
  FactorizationCategory fc;
  fc.base = c;
  const int m = c.morphisms();
  std::vector<std::pair<int, int>> mors;
  std::vector<int> ident(m, -1);
  for (int alpha = 0; alpha < m; ++alpha) {
    for (int nu : c.mors_into(c.src(alpha)))
      for (int psi : c.mors_from(c.tgt(alpha))) {
        int beta = c.compose(psi, c.compose(alpha, nu));
        int idx = static_cast<int>(mors.size());
        fc.mor_label.push_back({alpha, nu, psi});
        fc.mor_index[{alpha, nu, psi}] = idx;
        mors.emplace_back(alpha, beta);
        if (nu == c.identity(c.src(alpha)) && psi == c.identity(c.tgt(alpha))) ident[alpha] = idx;
      }
  }
  fc.cat = FiniteCategory(m, mors, ident, [&](int g, int f) {
    auto [a1, nu1, psi1] = fc.mor_label[f];
    auto [a2, nu2, psi2] = fc.mor_label[g];
    (void)a2;
    return fc.mor_index.at({a1, c.compose(nu1, nu2), c.compose(psi2, psi1)});
  });
  throw_if_invalid(validate_category(fc.cat), "build_factorization_category");
  return fc;
}

/// Coefficients for cohomology of the base category: a free module of finite rank
/// for every morphism, with post-composition actions psi_* : D(alpha) -> D(psi.alpha)
/// and pre-composition actions nu^* : D(alpha) -> D(alpha.nu). The induced assignment
/// (nu, psi) |-> nu^* psi_* is a functor on the factorization category.
class NaturalSystem {
 public:
  NaturalSystem() = default;
  NaturalSystem(FiniteCategory base, Ring ring, std::vector<std::size_t> ranks)
      : base_(std::move(base)), ring_(ring), rank_(std::move(ranks)) {
    const std::size_t m = base_.morphisms();
    post_.assign(m * m, Mat());
    pre_.assign(m * m, Mat());
  }

  [[nodiscard]] const FiniteCategory& base() const { return base_; }
  [[nodiscard]] const Ring& ring() const { return ring_; }
  [[nodiscard]] std::size_t rank(int alpha) const { return rank_[alpha]; }
  [[nodiscard]] const std::vector<std::size_t>& ranks() const { return rank_; }

  void set_post(int psi, int alpha, Mat m) { post_[key(psi, alpha)] = std::move(m); }
  void set_pre(int nu, int alpha, Mat m) { pre_[key(nu, alpha)] = std::move(m); }

  /// psi_* : D(alpha) -> D(psi . alpha); requires src(psi) == tgt(alpha).
  [[nodiscard]] const Mat& post(int psi, int alpha) const { return post_[key(psi, alpha)]; }
  /// nu^* : D(alpha) -> D(alpha . nu); requires tgt(nu) == src(alpha).
  [[nodiscard]] const Mat& pre(int nu, int alpha) const { return pre_[key(nu, alpha)]; }

  /// Action of the factorization-category morphism (nu, psi) : alpha -> psi.alpha.nu.
  [[nodiscard]] Mat action(int nu, int psi, int alpha) const {
    return pre(nu, base_.compose(psi, alpha)) * post(psi, alpha);
  }

  /// All ranks equal and all actions identities (over the ring).
  [[nodiscard]] bool is_constant() const {
    const int m = base_.morphisms();
    for (int a = 0; a < m; ++a)
      if (rank_[a] != rank_[0]) return false;
    Mat id = Mat::identity(rank_.empty() ? 0 : rank_[0]);
    for (int a = 0; a < m; ++a) {
      for (int psi : base_.mors_from(base_.tgt(a)))
        if (!mat_eq(post(psi, a), id, ring_)) return false;
      for (int nu : base_.mors_into(base_.src(a)))
        if (!mat_eq(pre(nu, a), id, ring_)) return false;
    }
    return true;
  }

 private:
  [[nodiscard]] std::size_t key(int f, int alpha) const {
    return static_cast<std::size_t>(f) * base_.morphisms() + alpha;
  }

  FiniteCategory base_;
  Ring ring_;
  std::vector<std::size_t> rank_;
  std::vector<Mat> post_, pre_;
};

inline ValidationReport validate_natural_system(const NaturalSystem& d) {
  ValidationReport rep;
  const FiniteCategory& c = d.base();
  const int m = c.morphisms();
  if (static_cast<int>(d.ranks().size()) != m) {
    rep.fail("rank table has wrong size");
    return rep;
  }
  for (int a = 0; a < m; ++a) {
    for (int psi : c.mors_from(c.tgt(a))) {
      const Mat& p = d.post(psi, a);
      if (p.rows() != d.rank(c.compose(psi, a)) || p.cols() != d.rank(a)) {
        rep.fail("post(" + std::to_string(psi) + "," + std::to_string(a) + ") has wrong shape");
        return rep;
      }
    }
    for (int nu : c.mors_into(c.src(a))) {
      const Mat& p = d.pre(nu, a);
      if (p.rows() != d.rank(c.compose(a, nu)) || p.cols() != d.rank(a)) {
        rep.fail("pre(" + std::to_string(nu) + "," + std::to_string(a) + ") has wrong shape");
        return rep;
      }
    }
  }
  const Ring& ring = d.ring();
  for (int a = 0; a < m; ++a) {
    Mat id = Mat::identity(d.rank(a));
    if (!mat_eq(d.post(c.identity(c.tgt(a)), a), id, ring))
      rep.fail("post(id, " + std::to_string(a) + ") is not the identity");
    if (!mat_eq(d.pre(c.identity(c.src(a)), a), id, ring))
      rep.fail("pre(id, " + std::to_string(a) + ") is not the identity");
  }
  for (int a = 0; a < m; ++a) {
    // (psi' psi)_* = psi'_* psi_*
    for (int psi : c.mors_from(c.tgt(a)))
      for (int psi2 : c.mors_from(c.tgt(psi))) {
        Mat lhs = d.post(c.compose(psi2, psi), a);
        Mat rhs = d.post(psi2, c.compose(psi, a)) * d.post(psi, a);
        if (!mat_eq(lhs, rhs, ring))
          rep.fail("post functoriality fails at (" + std::to_string(psi2) + "," + std::to_string(psi) + "," +
                   std::to_string(a) + ")");
      }
    // (nu nu')^* = nu'^* nu^*
    for (int nu : c.mors_into(c.src(a)))
      for (int nu2 : c.mors_into(c.src(nu))) {
        Mat lhs = d.pre(c.compose(nu, nu2), a);
        Mat rhs = d.pre(nu2, c.compose(a, nu)) * d.pre(nu, a);
        if (!mat_eq(lhs, rhs, ring))
          rep.fail("pre functoriality fails at (" + std::to_string(nu) + "," + std::to_string(nu2) + "," +
                   std::to_string(a) + ")");
      }
    // psi_* nu^* = nu^* psi_*
    for (int psi : c.mors_from(c.tgt(a)))
      for (int nu : c.mors_into(c.src(a))) {
        Mat lhs = d.post(psi, c.compose(a, nu)) * d.pre(nu, a);
        Mat rhs = d.pre(nu, c.compose(psi, a)) * d.post(psi, a);
        if (!mat_eq(lhs, rhs, ring))
          rep.fail("post/pre commutation fails at (" + std::to_string(psi) + "," + std::to_string(nu) + "," +
                   std::to_string(a) + ")");
      }
  }
  return rep;
}

inline NaturalSystem natsys_constant(const FiniteCategory& c, const Ring& ring, std::size_t rank) {
  NaturalSystem d(c, ring, std::vector<std::size_t>(c.morphisms(), rank));
  Mat id = Mat::identity(rank);
  for (int a = 0; a < c.morphisms(); ++a) {
    for (int psi : c.mors_from(c.tgt(a))) d.set_post(psi, a, id);
    for (int nu : c.mors_into(c.src(a))) d.set_pre(nu, a, id);
  }
  return d;
}

/// Covariant functor data M: ranks per object, matrices[f] : M(src f) -> M(tgt f).
/// Induced system: D(alpha: x -> y) = M(y), psi_* = M(psi), nu^* = identity.
inline NaturalSystem natsys_from_covariant(const FiniteCategory& c, const Ring& ring,
                                           const std::vector<std::size_t>& obj_ranks,
                                           const std::vector<Mat>& mats) {
  ValidationReport rep;
  rep.check(static_cast<int>(obj_ranks.size()) == c.objects(), "object rank table has wrong size");
  rep.check(static_cast<int>(mats.size()) == c.morphisms(), "matrix table has wrong size");
  if (rep.ok()) {
    for (int f = 0; f < c.morphisms(); ++f)
      rep.check(mats[f].rows() == obj_ranks[c.tgt(f)] && mats[f].cols() == obj_ranks[c.src(f)],
                "matrix " + std::to_string(f) + " has wrong shape");
  }
  if (rep.ok()) {
    for (int x = 0; x < c.objects(); ++x)
      rep.check(mat_eq(mats[c.identity(x)], Mat::identity(obj_ranks[x]), ring),
                "identity not preserved at object " + std::to_string(x));
    for (int f = 0; f < c.morphisms(); ++f)
      for (int g : c.mors_from(c.tgt(f)))
        rep.check(mat_eq(mats[c.compose(g, f)], mats[g] * mats[f], ring),
                  "composition not preserved at (" + std::to_string(g) + "," + std::to_string(f) + ")");
  }
  if (!rep.ok()) throw NotAFunctor("natsys_from_covariant: " + rep.summary());

  std::vector<std::size_t> ranks(c.morphisms());
  for (int a = 0; a < c.morphisms(); ++a) ranks[a] = obj_ranks[c.tgt(a)];
  NaturalSystem d(c, ring, ranks);
  for (int a = 0; a < c.morphisms(); ++a) {
    for (int psi : c.mors_from(c.tgt(a))) d.set_post(psi, a, mats[psi]);
    for (int nu : c.mors_into(c.src(a))) d.set_pre(nu, a, Mat::identity(ranks[a]));
  }
  return d;
}

/// Contravariant functor data M: matrices[f] : M(tgt f) -> M(src f).
/// Induced system: D(alpha: x -> y) = M(x), psi_* = identity, nu^* = M(nu).
inline NaturalSystem natsys_from_contravariant(const FiniteCategory& c, const Ring& ring,
                                               const std::vector<std::size_t>& obj_ranks,
                                               const std::vector<Mat>& mats) {
  ValidationReport rep;
  rep.check(static_cast<int>(obj_ranks.size()) == c.objects(), "object rank table has wrong size");
  rep.check(static_cast<int>(mats.size()) == c.morphisms(), "matrix table has wrong size");
  if (rep.ok()) {
    for (int f = 0; f < c.morphisms(); ++f)
      rep.check(mats[f].rows() == obj_ranks[c.src(f)] && mats[f].cols() == obj_ranks[c.tgt(f)],
                "matrix " + std::to_string(f) + " has wrong shape");
  }
  if (rep.ok()) {
    for (int x = 0; x < c.objects(); ++x)
      rep.check(mat_eq(mats[c.identity(x)], Mat::identity(obj_ranks[x]), ring),
                "identity not preserved at object " + std::to_string(x));
    for (int f = 0; f < c.morphisms(); ++f)
      for (int g : c.mors_from(c.tgt(f)))
        rep.check(mat_eq(mats[c.compose(g, f)], mats[f] * mats[g], ring),
                  "composition not preserved at (" + std::to_string(g) + "," + std::to_string(f) + ")");
  }
  if (!rep.ok()) throw NotAFunctor("natsys_from_contravariant: " + rep.summary());

  std::vector<std::size_t> ranks(c.morphisms());
  for (int a = 0; a < c.morphisms(); ++a) ranks[a] = obj_ranks[c.src(a)];
  NaturalSystem d(c, ring, ranks);
  for (int a = 0; a < c.morphisms(); ++a) {
    for (int psi : c.mors_from(c.tgt(a))) d.set_post(psi, a, Mat::identity(ranks[a]));
    for (int nu : c.mors_into(c.src(a))) d.set_pre(nu, a, mats[nu]);
  }
  return d;
}

/// Bifunctor data M(x, y): left[nu][y] : M(tgt nu, y) -> M(src nu, y) acts on the
/// contravariant slot, right[psi][x] : M(x, src psi) -> M(x, tgt psi) on the covariant slot.
/// Induced system: D(alpha: x -> y) = M(x, y), psi_* = right[psi][x], nu^* = left[nu][y].
inline NaturalSystem natsys_from_bifunctor(const FiniteCategory& c, const Ring& ring,
                                           const std::vector<std::vector<std::size_t>>& pair_ranks,
                                           const std::vector<std::vector<Mat>>& left,
                                           const std::vector<std::vector<Mat>>& right) {
  const int n = c.objects(), m = c.morphisms();
  ValidationReport rep;
  rep.check(static_cast<int>(pair_ranks.size()) == n, "pair rank table has wrong size");
  rep.check(static_cast<int>(left.size()) == m && static_cast<int>(right.size()) == m,
            "action tables have wrong size");
  if (rep.ok())
    for (int x = 0; x < n; ++x) rep.check(static_cast<int>(pair_ranks[x].size()) == n, "pair rank row size");
  if (rep.ok()) {
    for (int f = 0; f < m; ++f) {
      rep.check(static_cast<int>(left[f].size()) == n && static_cast<int>(right[f].size()) == n,
                "action row size");
      if (!rep.ok()) break;
      for (int y = 0; y < n; ++y)
        rep.check(left[f][y].rows() == pair_ranks[c.src(f)][y] && left[f][y].cols() == pair_ranks[c.tgt(f)][y],
                  "left action shape at (" + std::to_string(f) + "," + std::to_string(y) + ")");
      for (int x = 0; x < n; ++x)
        rep.check(
            right[f][x].rows() == pair_ranks[x][c.tgt(f)] && right[f][x].cols() == pair_ranks[x][c.src(f)],
            "right action shape at (" + std::to_string(f) + "," + std::to_string(x) + ")");
    }
  }
  if (rep.ok()) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        rep.check(mat_eq(left[c.identity(x)][y], Mat::identity(pair_ranks[x][y]), ring), "left identity");
        rep.check(mat_eq(right[c.identity(y)][x], Mat::identity(pair_ranks[x][y]), ring), "right identity");
      }
    for (int f = 0; f < m; ++f)
      for (int g : c.mors_from(c.tgt(f))) {
        int gf = c.compose(g, f);
        for (int y = 0; y < n; ++y)
          rep.check(mat_eq(left[gf][y], left[f][y] * left[g][y], ring), "left slot not functorial");
        for (int x = 0; x < n; ++x)
          rep.check(mat_eq(right[gf][x], right[g][x] * right[f][x], ring), "right slot not functorial");
      }
    for (int f = 0; f < m; ++f)
      for (int g = 0; g < m; ++g)
        rep.check(mat_eq(left[f][c.tgt(g)] * right[g][c.tgt(f)], right[g][c.src(f)] * left[f][c.src(g)], ring),
                  "slots do not commute at (" + std::to_string(f) + "," + std::to_string(g) + ")");
  }
  if (!rep.ok()) throw NotAFunctor("natsys_from_bifunctor: " + rep.summary());

  std::vector<std::size_t> ranks(m);
  for (int a = 0; a < m; ++a) ranks[a] = pair_ranks[c.src(a)][c.tgt(a)];
  NaturalSystem d(c, ring, ranks);
  for (int a = 0; a < m; ++a) {
    for (int psi : c.mors_from(c.tgt(a))) d.set_post(psi, a, right[psi][c.src(a)]);
    for (int nu : c.mors_into(c.src(a))) d.set_pre(nu, a, left[nu][c.tgt(a)]);
  }
  return d;
}

/// Pull a natural system back along a functor.
inline NaturalSystem natsys_pullback(const CatFunctor& fn, const NaturalSystem& d) {
  throw_if_invalid(validate_functor(fn), "natsys_pullback: functor");
  if (!(fn.tgt == d.base())) throw Error("natsys_pullback: system lives on a different category");
  const FiniteCategory& a = fn.src;
  std::vector<std::size_t> ranks(a.morphisms());
  for (int f = 0; f < a.morphisms(); ++f) ranks[f] = d.rank(fn.mor(f));
  NaturalSystem out(a, d.ring(), ranks);
  for (int f = 0; f < a.morphisms(); ++f) {
    for (int psi : a.mors_from(a.tgt(f))) out.set_post(psi, f, d.post(fn.mor(psi), fn.mor(f)));
    for (int nu : a.mors_into(a.src(f))) out.set_pre(nu, f, d.pre(fn.mor(nu), fn.mor(f)));
  }
  throw_if_invalid(validate_natural_system(out), "natsys_pullback: result");
  return out;
}

/// Contravariant set-valued functor: size per object, map[f] : T(tgt f) -> T(src f).
struct SetPresheaf {
  std::vector<int> size;                  // per object
  std::vector<std::vector<int>> map;      // per morphism
};

inline ValidationReport validate_set_presheaf(const FiniteCategory& c, const SetPresheaf& t) {
  ValidationReport rep;
  rep.check(static_cast<int>(t.size.size()) == c.objects(), "size table has wrong length");
  rep.check(static_cast<int>(t.map.size()) == c.morphisms(), "map table has wrong length");
  if (!rep.ok()) return rep;
  for (int f = 0; f < c.morphisms(); ++f) {
    if (static_cast<int>(t.map[f].size()) != t.size[c.tgt(f)]) {
      rep.fail("map " + std::to_string(f) + " has wrong domain size");
      return rep;
    }
    for (int v : t.map[f])
      if (v < 0 || v >= t.size[c.src(f)]) {
        rep.fail("map " + std::to_string(f) + " has out-of-range value");
        return rep;
      }
  }
  for (int x = 0; x < c.objects(); ++x)
    for (int e = 0; e < t.size[x]; ++e)
      rep.check(t.map[c.identity(x)][e] == e, "identity map not the identity at object " + std::to_string(x));
  for (int f = 0; f < c.morphisms(); ++f)
    for (int g : c.mors_from(c.tgt(f)))
      for (int e = 0; e < t.size[c.tgt(g)]; ++e)
        rep.check(t.map[c.compose(g, f)][e] == t.map[f][t.map[g][e]],
                  "contravariant functoriality fails at (" + std::to_string(g) + "," + std::to_string(f) + ")");
  return rep;
}

namespace detail {
/// Elements of S_{a,T,m}(alpha: c -> d) = { (eta: a -> c, r in T(d)) : eta^* alpha^* r = m }.
inline std::vector<std::pair<int, int>> fiber_pairs(const FiniteCategory& c, const SetPresheaf& t, int a, int m,
                                                    int alpha) {
  std::vector<std::pair<int, int>> out;
  for (int eta : c.hom(a, c.src(alpha)))
    for (int r = 0; r < t.size[c.tgt(alpha)]; ++r)
      if (t.map[eta][t.map[alpha][r]] == m) out.emplace_back(eta, r);
  return out;
}
}  // namespace detail

/// The natural system alpha |-> Maps(S_{a,T,m}(alpha), A) with A free of rank a_rank.
/// The index sets transform contravariantly, so the module actions are precompositions.
inline NaturalSystem natsys_lemma44(const FiniteCategory& c, const SetPresheaf& t, int a, int m,
                                    std::size_t a_rank, const Ring& ring) {
  throw_if_invalid(validate_set_presheaf(c, t), "natsys_lemma44: presheaf");
  if (a < 0 || a >= c.objects() || m < 0 || m >= t.size[a])
    throw ElementNotInT("natsys_lemma44: element not in T(a)");

  const int nm = c.morphisms();
  std::vector<std::vector<std::pair<int, int>>> s(nm);
  std::vector<std::map<std::pair<int, int>, int>> pos(nm);
  std::vector<std::size_t> ranks(nm);
  for (int alpha = 0; alpha < nm; ++alpha) {
    s[alpha] = detail::fiber_pairs(c, t, a, m, alpha);
    for (int i = 0; i < static_cast<int>(s[alpha].size()); ++i) pos[alpha][s[alpha][i]] = i;
    ranks[alpha] = s[alpha].size() * a_rank;
  }
  NaturalSystem d(c, ring, ranks);
  // Index map S(beta) -> S(alpha) for the factorization morphism (nu, psi): alpha -> beta:
  // (eta', r') |-> (nu . eta', psi^* r'). The module map is f |-> f . (index map).
  auto action_matrix = [&](int alpha, int beta, auto&& index_map) {
    Mat mt(s[beta].size() * a_rank, s[alpha].size() * a_rank);
    for (int i = 0; i < static_cast<int>(s[beta].size()); ++i) {
      int j = pos[alpha].at(index_map(s[beta][i]));
      for (std::size_t k = 0; k < a_rank; ++k) mt(i * a_rank + k, j * a_rank + k) = 1;
    }
    return mt;
  };
  for (int alpha = 0; alpha < nm; ++alpha) {
    for (int psi : c.mors_from(c.tgt(alpha))) {
      int beta = c.compose(psi, alpha);
      d.set_post(psi, alpha, action_matrix(alpha, beta, [&](std::pair<int, int> e) {
                   return std::pair<int, int>{e.first, t.map[psi][e.second]};
                 }));
    }
    for (int nu : c.mors_into(c.src(alpha))) {
      int beta = c.compose(alpha, nu);
      d.set_pre(nu, alpha, action_matrix(alpha, beta, [&](std::pair<int, int> e) {
                  return std::pair<int, int>{c.compose(nu, e.first), e.second};
                }));
    }
  }
  throw_if_invalid(validate_natural_system(d), "natsys_lemma44: result");
  return d;
}

/// The comparison category: objects (eta: a -> d, r in T(d)) with eta^* r = m,
/// morphisms (eta, r) -> (eta', r') are beta with beta.eta = eta' and beta^* r' = r.
/// Always has initial object (id_a, m).
struct ATmCategory {
  FiniteCategory cat;
  std::vector<std::pair<int, int>> object_label;  // (eta, r)
  std::vector<std::array<int, 2>> mor_label;      // (source object, beta); target stored in the category
  int initial = -1;
};

inline ATmCategory build_category_aTm(const FiniteCategory& c, const SetPresheaf& t, int a, int m) {
  throw_if_invalid(validate_set_presheaf(c, t), "build_category_aTm: presheaf");
  if (a < 0 || a >= c.objects() || m < 0 || m >= t.size[a])
    throw ElementNotInT("build_category_aTm: element not in T(a)");
  ATmCategory out;
  std::map<std::pair<int, int>, int> obj_index;
  for (int eta = 0; eta < c.morphisms(); ++eta) {
    if (c.src(eta) != a) continue;
    for (int r = 0; r < t.size[c.tgt(eta)]; ++r)
      if (t.map[eta][r] == m) {
        obj_index[{eta, r}] = static_cast<int>(out.object_label.size());
        out.object_label.emplace_back(eta, r);
      }
  }
  std::vector<std::pair<int, int>> mors;
  std::vector<int> ident(out.object_label.size(), -1);
  // A morphism is (source object, beta, target object); several targets can share beta.
  std::map<std::array<int, 3>, int> mor_index;
  for (int o = 0; o < static_cast<int>(out.object_label.size()); ++o) {
    auto [eta, r] = out.object_label[o];
    for (int beta : c.mors_from(c.tgt(eta))) {
      int eta2 = c.compose(beta, eta);
      // need beta^*(r') = r, i.e. r' with T(beta)(r') = r
      for (int r2 = 0; r2 < t.size[c.tgt(beta)]; ++r2) {
        if (t.map[beta][r2] != r) continue;
        auto it = obj_index.find({eta2, r2});
        if (it == obj_index.end()) continue;
        int idx = static_cast<int>(mors.size());
        mor_index[{o, beta, it->second}] = idx;
        out.mor_label.push_back({o, beta});
        mors.emplace_back(o, it->second);
        if (beta == c.identity(c.tgt(eta)) && it->second == o) ident[o] = idx;
      }
    }
  }
  out.cat = FiniteCategory(static_cast<int>(out.object_label.size()), mors, ident, [&](int g, int f) {
    auto [of, bf] = out.mor_label[f];
    auto [og, bg] = out.mor_label[g];
    (void)og;
    int tgt_obj = mors[g].second;
    return mor_index.at({of, c.compose(bg, bf), tgt_obj});
  });
  throw_if_invalid(validate_category(out.cat), "build_category_aTm");
  out.initial = obj_index.at({c.identity(a), m});
  return out;
}

}  // namespace catcoh
