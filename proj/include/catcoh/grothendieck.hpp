#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "catcoh/bw.hpp"

namespace catcoh {

/// A strict diagram of categories over a base: a fiber category per object and a
/// functor per morphism, with on_mor(id) = id and on_mor(a.b) = on_mor(a) . on_mor(b).
struct Diagram {
  FiniteCategory base;
  std::vector<FiniteCategory> fiber;   // per object of base
  std::vector<CatFunctor> on_mor;      // per morphism of base
};

inline ValidationReport validate_diagram(const Diagram& dg) {
  ValidationReport rep;
  rep.merge(validate_category(dg.base), "base");
  rep.check(static_cast<int>(dg.fiber.size()) == dg.base.objects(), "fiber count mismatch");
  rep.check(static_cast<int>(dg.on_mor.size()) == dg.base.morphisms(), "functor count mismatch");
  if (!rep.ok()) return rep;
  for (int x = 0; x < dg.base.objects(); ++x)
    rep.merge(validate_category(dg.fiber[x]), "fiber " + std::to_string(x));
  for (int a = 0; a < dg.base.morphisms(); ++a) {
    rep.merge(validate_functor(dg.on_mor[a]), "functor " + std::to_string(a));
    rep.check(dg.on_mor[a].src == dg.fiber[dg.base.src(a)] && dg.on_mor[a].tgt == dg.fiber[dg.base.tgt(a)],
              "functor " + std::to_string(a) + " endpoints mismatch");
  }
  if (!rep.ok()) return rep;
  for (int x = 0; x < dg.base.objects(); ++x)
    rep.check(dg.on_mor[dg.base.identity(x)] == identity_functor(dg.fiber[x]),
              "on_mor(id) is not the identity functor at object " + std::to_string(x));
  for (int f = 0; f < dg.base.morphisms(); ++f)
    for (int g : dg.base.mors_from(dg.base.tgt(f)))
      rep.check(dg.on_mor[dg.base.compose(g, f)] == compose_functors(dg.on_mor[g], dg.on_mor[f]),
                "strict functoriality fails at (" + std::to_string(g) + "," + std::to_string(f) + ")");
  return rep;
}

/// The glued category of a diagram: objects (k, x), morphisms (alpha, x0, xi) with
/// xi : L(alpha)(x0) -> x1, composed by (alpha, xi)(alpha', xi') = (alpha.alpha', xi . L(alpha)(xi')).
struct GrothendieckCategory {
  FiniteCategory cat;
  std::vector<std::pair<int, int>> obj_label;    // (k, x)
  std::vector<std::array<int, 3>> mor_label;     // (alpha, x0, xi)
  std::map<std::pair<int, int>, int> obj_index;
  std::map<std::array<int, 3>, int> mor_index;

  [[nodiscard]] int obj(int k, int x) const { return obj_index.at({k, x}); }
  [[nodiscard]] int mor(int alpha, int x0, int xi) const { return mor_index.at({alpha, x0, xi}); }
};

inline GrothendieckCategory grothendieck_construction(const Diagram& dg) {
  throw_if_invalid(validate_diagram(dg), "grothendieck_construction: diagram");
  GrothendieckCategory g;
  const FiniteCategory& k = dg.base;
  for (int ko = 0; ko < k.objects(); ++ko)
    for (int x = 0; x < dg.fiber[ko].objects(); ++x) {
      g.obj_index[{ko, x}] = static_cast<int>(g.obj_label.size());
      g.obj_label.emplace_back(ko, x);
    }
  std::vector<std::pair<int, int>> mors;
  for (int alpha = 0; alpha < k.morphisms(); ++alpha) {
    const FiniteCategory& src_fib = dg.fiber[k.src(alpha)];
    const FiniteCategory& tgt_fib = dg.fiber[k.tgt(alpha)];
    for (int x0 = 0; x0 < src_fib.objects(); ++x0)
      for (int xi : tgt_fib.mors_from(dg.on_mor[alpha].obj(x0))) {
        g.mor_index[{alpha, x0, xi}] = static_cast<int>(g.mor_label.size());
        g.mor_label.push_back({alpha, x0, xi});
        mors.emplace_back(g.obj(k.src(alpha), x0), g.obj(k.tgt(alpha), tgt_fib.tgt(xi)));
      }
  }
  std::vector<int> ident(g.obj_label.size());
  for (int o = 0; o < static_cast<int>(g.obj_label.size()); ++o) {
    auto [ko, x] = g.obj_label[o];
    ident[o] = g.mor(k.identity(ko), x, dg.fiber[ko].identity(x));
  }
  g.cat = FiniteCategory(static_cast<int>(g.obj_label.size()), mors, ident, [&](int m2, int m1) {
    auto [a1, x1, xi1] = g.mor_label[m1];
    auto [a2, x2, xi2] = g.mor_label[m2];
    (void)x2;
    const FiniteCategory& fib = dg.fiber[k.tgt(a2)];
    return g.mor(k.compose(a2, a1), x1, fib.compose(xi2, dg.on_mor[a2].mor(xi1)));
  });
  throw_if_invalid(validate_category(g.cat), "grothendieck_construction");
  return g;
}

/// The projection (k, x) |-> k, (alpha, x0, xi) |-> alpha.
inline CatFunctor grothendieck_projection(const Diagram& dg, const GrothendieckCategory& g) {
  CatFunctor p{g.cat, dg.base, {}, {}};
  for (auto [k, x] : g.obj_label) {
    (void)x;
    p.obj_map.push_back(k);
  }
  for (auto [alpha, x0, xi] : g.mor_label) {
    (void)x0;
    (void)xi;
    p.mor_map.push_back(alpha);
  }
  return p;
}

/// The comma-expanded fiber over k: objects (alpha: l -> k, x in L(l)); a morphism
/// (alpha, x) -> (alpha', x') is (beta, xi) with alpha'.beta = alpha and xi : L(beta)(x) -> x'.
struct TildeFiber {
  int k = 0;
  FiniteCategory cat;
  std::vector<std::pair<int, int>> obj_label;   // (alpha, x)
  std::vector<std::array<int, 4>> mor_label;    // (src object, beta, alpha', xi)
  std::map<std::pair<int, int>, int> obj_index;
  std::map<std::array<int, 4>, int> mor_index;

  [[nodiscard]] int obj(int alpha, int x) const { return obj_index.at({alpha, x}); }
};

inline TildeFiber tilde_fiber(const Diagram& dg, int k) {
  if (k < 0 || k >= dg.base.objects()) throw ObjectOutOfRange("tilde_fiber: object out of range");
  TildeFiber tf;
  tf.k = k;
  const FiniteCategory& kk = dg.base;
  for (int alpha : kk.mors_into(k))
    for (int x = 0; x < dg.fiber[kk.src(alpha)].objects(); ++x) {
      tf.obj_index[{alpha, x}] = static_cast<int>(tf.obj_label.size());
      tf.obj_label.emplace_back(alpha, x);
    }
  std::vector<std::pair<int, int>> mors;
  for (int o = 0; o < static_cast<int>(tf.obj_label.size()); ++o) {
    auto [alpha, x] = tf.obj_label[o];
    int l = kk.src(alpha);
    for (int beta : kk.mors_from(l)) {
      for (int alpha2 : kk.mors_into(k)) {
        if (kk.src(alpha2) != kk.tgt(beta) || kk.compose(alpha2, beta) != alpha) continue;
        const FiniteCategory& fib = dg.fiber[kk.tgt(beta)];
        for (int xi : fib.mors_from(dg.on_mor[beta].obj(x))) {
          tf.mor_index[{o, beta, alpha2, xi}] = static_cast<int>(tf.mor_label.size());
          tf.mor_label.push_back({o, beta, alpha2, xi});
          mors.emplace_back(o, tf.obj(alpha2, fib.tgt(xi)));
        }
      }
    }
  }
  std::vector<int> ident(tf.obj_label.size());
  for (int o = 0; o < static_cast<int>(tf.obj_label.size()); ++o) {
    auto [alpha, x] = tf.obj_label[o];
    int l = kk.src(alpha);
    ident[o] = tf.mor_index.at({o, kk.identity(l), alpha, dg.fiber[l].identity(x)});
  }
  tf.cat = FiniteCategory(static_cast<int>(tf.obj_label.size()), mors, ident, [&](int m2, int m1) {
    auto [o1, b1, a1, xi1] = tf.mor_label[m1];
    auto [o2, b2, a2, xi2] = tf.mor_label[m2];
    (void)o2;
    const FiniteCategory& fib = dg.fiber[kk.tgt(b2)];
    return tf.mor_index.at({o1, kk.compose(b2, b1), a2, fib.compose(xi2, dg.on_mor[b2].mor(xi1))});
  });
  throw_if_invalid(validate_category(tf.cat), "tilde_fiber");
  return tf;
}

/// The functor between expanded fibers induced by gamma : k -> k':
/// (alpha, x) |-> (gamma.alpha, x) on objects, (beta, xi) |-> (beta, xi) on morphisms.
inline CatFunctor tilde_functor(const Diagram& dg, const TildeFiber& from, const TildeFiber& to, int gamma) {
  const FiniteCategory& kk = dg.base;
  if (kk.src(gamma) != from.k || kk.tgt(gamma) != to.k) throw Error("tilde_functor: gamma endpoints mismatch");
  CatFunctor fn{from.cat, to.cat, {}, {}};
  for (auto [alpha, x] : from.obj_label) fn.obj_map.push_back(to.obj(kk.compose(gamma, alpha), x));
  for (auto [o, beta, alpha2, xi] : from.mor_label) {
    auto [alpha, x] = from.obj_label[o];
    (void)x;
    int o2 = fn.obj_map[o];
    (void)alpha;
    fn.mor_map.push_back(to.mor_index.at({o2, beta, kk.compose(gamma, alpha2), xi}));
  }
  throw_if_invalid(validate_functor(fn), "tilde_functor");
  return fn;
}

/// The forgetful functor from the expanded fiber into the glued category:
/// (alpha: l -> k, x) |-> (l, x) and (beta, xi) |-> (beta, xi).
inline CatFunctor forgetful_ik(const Diagram& dg, const TildeFiber& tf, const GrothendieckCategory& g) {
  const FiniteCategory& kk = dg.base;
  CatFunctor fn{tf.cat, g.cat, {}, {}};
  for (auto [alpha, x] : tf.obj_label) fn.obj_map.push_back(g.obj(kk.src(alpha), x));
  for (auto [o, beta, alpha2, xi] : tf.mor_label) {
    auto [alpha, x] = tf.obj_label[o];
    (void)alpha;
    (void)alpha2;
    fn.mor_map.push_back(g.mor(beta, x, xi));
  }
  throw_if_invalid(validate_functor(fn), "forgetful_ik");
  return fn;
}

/// The fiber adjunction: l(alpha, x) = L(alpha)(x), r(y) = (id_k, y), with unit
/// eps_{(alpha,x)} = (alpha, id) : (alpha, x) -> (id_k, L(alpha)(x)).
inline Adjunction adjoint_lr(const Diagram& dg, const TildeFiber& tf) {
  const FiniteCategory& kk = dg.base;
  const int k = tf.k;
  const FiniteCategory& fib = dg.fiber[k];
  Adjunction adj;
  adj.l = CatFunctor{tf.cat, fib, {}, {}};
  for (auto [alpha, x] : tf.obj_label) adj.l.obj_map.push_back(dg.on_mor[alpha].obj(x));
  for (auto [o, beta, alpha2, xi] : tf.mor_label) {
    (void)o;
    (void)beta;
    adj.l.mor_map.push_back(dg.on_mor[alpha2].mor(xi));
  }
  adj.r = CatFunctor{fib, tf.cat, {}, {}};
  for (int y = 0; y < fib.objects(); ++y) adj.r.obj_map.push_back(tf.obj(kk.identity(k), y));
  for (int eta = 0; eta < fib.morphisms(); ++eta)
    adj.r.mor_map.push_back(
        tf.mor_index.at({tf.obj(kk.identity(k), fib.src(eta)), kk.identity(k), kk.identity(k), eta}));
  for (int o = 0; o < static_cast<int>(tf.obj_label.size()); ++o) {
    auto [alpha, x] = tf.obj_label[o];
    adj.unit.push_back(
        tf.mor_index.at({o, alpha, kk.identity(k), fib.identity(dg.on_mor[alpha].obj(x))}));
  }
  throw_if_invalid(validate_adjunction(adj), "adjoint_lr");
  return adj;
}

/// The induced system on the plain fiber: D_k(xi) = D((id_k, xi)).
inline NaturalSystem restrict_Dk(const NaturalSystem& d, const GrothendieckCategory& g, const Diagram& dg,
                                 int k) {
  if (!(d.base() == g.cat)) throw Error("restrict_Dk: system does not live on the glued category");
  const FiniteCategory& fib = dg.fiber[k];
  int idk = dg.base.identity(k);
  auto lift = [&](int xi) { return g.mor(idk, fib.src(xi), xi); };
  std::vector<std::size_t> ranks(fib.morphisms());
  for (int xi = 0; xi < fib.morphisms(); ++xi) ranks[xi] = d.rank(lift(xi));
  NaturalSystem out(fib, d.ring(), ranks);
  for (int xi = 0; xi < fib.morphisms(); ++xi) {
    for (int psi : fib.mors_from(fib.tgt(xi))) out.set_post(psi, xi, d.post(lift(psi), lift(xi)));
    for (int nu : fib.mors_into(fib.src(xi))) out.set_pre(nu, xi, d.pre(lift(nu), lift(xi)));
  }
  throw_if_invalid(validate_natural_system(out), "restrict_Dk");
  return out;
}

/// The twisted system E~ on the adjunction's source category, E~(alpha) = E(eps_{tgt} . alpha),
/// together with the comparison map E -> E~ whose component at alpha is (eps_{tgt alpha})_*.
struct TildeSystem {
  NaturalSystem system;
  std::vector<Mat> comparison;  // per morphism alpha of the base
};

inline TildeSystem tilde_system(const Adjunction& adj, const NaturalSystem& e) {
  const FiniteCategory& c = adj.l.src;
  if (!(e.base() == c)) throw Error("tilde_system: system does not live on the adjunction source");
  auto rl = [&](int f) { return adj.r.mor(adj.l.mor(f)); };
  std::vector<int> m(c.morphisms());
  for (int a = 0; a < c.morphisms(); ++a) m[a] = c.compose(adj.unit[c.tgt(a)], a);
  std::vector<std::size_t> ranks(c.morphisms());
  for (int a = 0; a < c.morphisms(); ++a) ranks[a] = e.rank(m[a]);
  TildeSystem out{NaturalSystem(c, e.ring(), ranks), {}};
  for (int a = 0; a < c.morphisms(); ++a) {
    for (int psi : c.mors_from(c.tgt(a))) {
      // unit naturality gives eps . psi . alpha = rl(psi) . eps . alpha
      if (c.compose(rl(psi), m[a]) != m[c.compose(psi, a)])
        throw Error("tilde_system: unit naturality failed to typecheck");
      out.system.set_post(psi, a, e.post(rl(psi), m[a]));
    }
    for (int nu : c.mors_into(c.src(a))) {
      if (c.compose(m[a], nu) != m[c.compose(a, nu)])
        throw Error("tilde_system: pre-action failed to typecheck");
      out.system.set_pre(nu, a, e.pre(nu, m[a]));
    }
  }
  throw_if_invalid(validate_natural_system(out.system), "tilde_system");
  for (int a = 0; a < c.morphisms(); ++a) out.comparison.push_back(e.post(adj.unit[c.tgt(a)], a));
  // the comparison is a map of natural systems: both action squares must commute
  ValidationReport nat;
  for (int a = 0; a < c.morphisms(); ++a) {
    for (int psi : c.mors_from(c.tgt(a)))
      nat.check(mat_eq(out.comparison[c.compose(psi, a)] * e.post(psi, a),
                       out.system.post(psi, a) * out.comparison[a], e.ring()),
                "comparison not natural in the post action at (" + std::to_string(psi) + "," +
                    std::to_string(a) + ")");
    for (int nu : c.mors_into(c.src(a)))
      nat.check(mat_eq(out.comparison[c.compose(a, nu)] * e.pre(nu, a),
                       out.system.pre(nu, a) * out.comparison[a], e.ring()),
                "comparison not natural in the pre action at (" + std::to_string(nu) + "," +
                    std::to_string(a) + ")");
  }
  throw_if_invalid(nat, "tilde_system: comparison map");
  return out;
}

/// The pushed system on the adjunction's target category: E-bar(beta) = E(r(beta)).
inline NaturalSystem bar_system(const Adjunction& adj, const NaturalSystem& e) {
  return natsys_pullback(adj.r, e);
}

/// Locality of a system on the glued category: every comparison action
/// (i_k(eps))_* must be invertible over the coefficient ring.
inline bool is_local(const NaturalSystem& d, const Diagram& dg, const GrothendieckCategory& g) {
  if (!(d.base() == g.cat)) throw Error("is_local: system does not live on the glued category");
  for (int k = 0; k < dg.base.objects(); ++k) {
    TildeFiber tf = tilde_fiber(dg, k);
    CatFunctor ik = forgetful_ik(dg, tf, g);
    Adjunction adj = adjoint_lr(dg, tf);
    for (int gamma = 0; gamma < tf.cat.morphisms(); ++gamma) {
      int eps = adj.unit[tf.cat.tgt(gamma)];
      const Mat& t = d.post(ik.mor(eps), ik.mor(gamma));
      if (!ring_invertible(t, d.ring())) return false;
    }
  }
  return true;
}

/// Cohomological locality: for every k the comparison map of complexes over the
/// expanded fiber must have an acyclic cone in all trusted degrees.
inline bool is_h_local(const NaturalSystem& d, const Diagram& dg, const GrothendieckCategory& g, int n_max,
                       std::size_t budget = kDefaultRankBudget) {
  if (!(d.base() == g.cat)) throw Error("is_h_local: system does not live on the glued category");
  for (int k = 0; k < dg.base.objects(); ++k) {
    TildeFiber tf = tilde_fiber(dg, k);
    CatFunctor ik = forgetful_ik(dg, tf, g);
    NaturalSystem e = natsys_pullback(ik, d);
    Adjunction adj = adjoint_lr(dg, tf);
    TildeSystem ts = tilde_system(adj, e);
    BWComplex x = bw_cochain(tf.cat, e, n_max, budget);
    BWComplex y = bw_cochain(tf.cat, ts.system, n_max, budget);
    CochainMap f = bw_map_from_system_map(x, y, ts.comparison);
    for (bool ok : cone_acyclic(f))
      if (!ok) return false;
  }
  return true;
}

/// Degreewise comparison of two cohomology tables.
struct CompareReport {
  bool pass = true;
  long trusted = -1;
  std::vector<AbInvariants> lhs, rhs;
  std::string lhs_name, rhs_name;

  void finish() {
    pass = lhs == rhs;
    trusted = static_cast<long>(lhs.size()) - 1;
  }
};

/// Compare H(target, E-bar) with H(source, E~) through an adjunction.
inline CompareReport check_prop_muro(const Adjunction& adj, const NaturalSystem& e, int n_max,
                                     std::size_t budget = kDefaultRankBudget) {
  TildeSystem ts = tilde_system(adj, e);
  NaturalSystem bar = bar_system(adj, e);
  CompareReport rep;
  rep.lhs_name = "H(target, bar)";
  rep.rhs_name = "H(source, tilde)";
  rep.lhs = bw_cohomology(adj.r.src, bar, n_max, budget);
  rep.rhs = bw_cohomology(adj.l.src, ts.system, n_max, budget);
  rep.finish();
  return rep;
}

/// Compare H(source, l^*G) with H(target, G) through an adjunction.
inline CompareReport check_lemma_adjuntos(const Adjunction& adj, const NaturalSystem& g_sys, int n_max,
                                          std::size_t budget = kDefaultRankBudget) {
  NaturalSystem pulled = natsys_pullback(adj.l, g_sys);
  CompareReport rep;
  rep.lhs_name = "H(source, l^*G)";
  rep.rhs_name = "H(target, G)";
  rep.lhs = bw_cohomology(adj.l.src, pulled, n_max, budget);
  rep.rhs = bw_cohomology(adj.l.tgt, g_sys, n_max, budget);
  rep.finish();
  return rep;
}

}  // namespace catcoh
