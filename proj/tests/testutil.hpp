#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "catcoh/grothendieck.hpp"

namespace catcoh::testutil {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}
inline bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

inline FiniteCategory terminal_category() { return build_poset_category(1, {{0, 0}}); }

inline FiniteCategory interval_category() { return build_poset_category(2, {{0, 0}, {1, 1}, {0, 1}}); }

inline FiniteCategory chain_category(int n) {
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) rel.emplace_back(i, j);
  return build_poset_category(n, rel);
}

/// Random poset on n elements, optionally forcing element 0 below everything.
inline std::vector<std::pair<int, int>> random_poset_relation(Rng& rng, int n, double density,
                                                              bool with_bottom) {
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) le[i][i] = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (chance(rng, density)) le[i][j] = true;
  if (with_bottom)
    for (int j = 1; j < n; ++j) le[0][j] = true;
  // transitive closure (indices already topologically sorted)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (le[i][k])
        for (int j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = true;
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (le[i][j]) rel.emplace_back(i, j);
  return rel;
}

inline FiniteCategory random_poset_category(Rng& rng, int max_objects, bool with_bottom,
                                            double density = 0.4) {
  int n = pick(rng, with_bottom ? 2 : 1, max_objects);
  return build_poset_category(n, random_poset_relation(rng, n, density, with_bottom));
}

inline Mat random_matrix(Rng& rng, std::size_t r, std::size_t c, int lo, int hi) {
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = pick(rng, lo, hi);
  return m;
}

/// Random monotone "coordinate survival" covariant functor on a poset:
/// each coordinate lives on a down-closed set of objects and may scale by a
/// fixed integer along each step upward. Always strictly functorial.
inline NaturalSystem random_functor_system(Rng& rng, const FiniteCategory& c, const Ring& ring, int max_rank,
                                           bool covariant) {
  int rank = pick(rng, 1, max_rank);
  std::vector<std::vector<bool>> alive(c.objects(), std::vector<bool>(rank, false));
  std::vector<std::vector<Int>> weight(c.objects(), std::vector<Int>(rank, 1));
  // coordinate i alive on a set closed downward (covariant: survival shrinks upward)
  for (int i = 0; i < rank; ++i) {
    for (int x = 0; x < c.objects(); ++x) alive[x][i] = true;
    for (int x = 0; x < c.objects(); ++x)
      if (chance(rng, 0.25)) {
        // kill coordinate i at x and everything above/below x
        for (int y = 0; y < c.objects(); ++y) {
          bool related = covariant ? !c.hom(x, y).empty() : !c.hom(y, x).empty();
          if (related) alive[y][i] = false;
        }
      }
    // multiplicative weights: g(x) | g(y) along arrows
    for (int x = 0; x < c.objects(); ++x) {
      int exp = 0;
      for (int y = 0; y < c.objects(); ++y)
        if (!c.hom(y, x).empty() && y != x) ++exp;
      weight[x][i] = Int(1) << std::min(exp, 3);
    }
  }
  std::vector<std::size_t> obj_ranks(c.objects());
  for (int x = 0; x < c.objects(); ++x) {
    std::size_t r = 0;
    for (int i = 0; i < rank; ++i)
      if (alive[x][i]) ++r;
    obj_ranks[x] = r;
  }
  auto coord_list = [&](int x) {
    std::vector<int> v;
    for (int i = 0; i < rank; ++i)
      if (alive[x][i]) v.push_back(i);
    return v;
  };
  std::vector<Mat> mats(c.morphisms());
  for (int f = 0; f < c.morphisms(); ++f) {
    int from = covariant ? c.src(f) : c.tgt(f);
    int to = covariant ? c.tgt(f) : c.src(f);
    auto fc = coord_list(from), tc = coord_list(to);
    Mat m(tc.size(), fc.size());
    for (std::size_t a = 0; a < tc.size(); ++a)
      for (std::size_t b = 0; b < fc.size(); ++b)
        if (tc[a] == fc[b]) {
          // exact integer ratio weight(to)/weight(from) or 1 if not divisible
          Int num = weight[to][tc[a]], den = weight[from][tc[a]];
          m(a, b) = (num % den == 0) ? num / den : Int(1);
        }
    mats[f] = std::move(m);
  }
  return covariant ? natsys_from_covariant(c, ring, obj_ranks, mats)
                   : natsys_from_contravariant(c, ring, obj_ranks, mats);
}

/// Representable-dual set presheaf pool: disjoint unions of Hom(-, b) and constants.
inline SetPresheaf random_presheaf(Rng& rng, const FiniteCategory& c, int max_total) {
  SetPresheaf t;
  t.size.assign(c.objects(), 0);
  t.map.assign(c.morphisms(), {});
  struct Component {
    bool representable;
    int b;  // target object for representables
  };
  std::vector<Component> comps;
  int n_comp = pick(rng, 1, max_total);
  for (int i = 0; i < n_comp; ++i)
    comps.push_back({chance(rng, 0.7), pick(rng, 0, c.objects() - 1)});
  // element of T(x): (component index, morphism x -> b) for representables, (component, 0) else
  std::vector<std::vector<std::pair<int, int>>> elems(c.objects());
  for (int x = 0; x < c.objects(); ++x)
    for (int ci = 0; ci < n_comp; ++ci) {
      if (comps[ci].representable) {
        for (int h : c.hom(x, comps[ci].b)) elems[x].emplace_back(ci, h);
      } else {
        elems[x].emplace_back(ci, 0);
      }
    }
  for (int x = 0; x < c.objects(); ++x) t.size[x] = static_cast<int>(elems[x].size());
  auto find_elem = [&](int x, std::pair<int, int> e) {
    for (int i = 0; i < static_cast<int>(elems[x].size()); ++i)
      if (elems[x][i] == e) return i;
    throw Error("random_presheaf: element lookup failed");
  };
  for (int f = 0; f < c.morphisms(); ++f) {
    int sx = c.src(f), tx = c.tgt(f);
    t.map[f].resize(elems[tx].size());
    for (int i = 0; i < static_cast<int>(elems[tx].size()); ++i) {
      auto [ci, h] = elems[tx][i];
      if (comps[ci].representable)
        t.map[f][i] = find_elem(sx, {ci, c.compose(h, f)});
      else
        t.map[f][i] = find_elem(sx, {ci, 0});
    }
  }
  throw_if_invalid(validate_set_presheaf(c, t), "random_presheaf");
  return t;
}

/// Random natural system drawn from the valid constructor pool.
inline NaturalSystem random_natural_system(Rng& rng, const FiniteCategory& c, const Ring& ring,
                                           int max_rank) {
  switch (pick(rng, 0, 3)) {
    case 0:
      return natsys_constant(c, ring, pick(rng, 0, max_rank));
    case 1:
      return random_functor_system(rng, c, ring, max_rank, true);
    case 2:
      return random_functor_system(rng, c, ring, max_rank, false);
    default: {
      // dual of a representable set functor, scaled by a free module
      SetPresheaf t = random_presheaf(rng, c, 2);
      std::vector<int> candidates;
      for (int a = 0; a < c.objects(); ++a)
        if (t.size[a] > 0) candidates.push_back(a);
      if (candidates.empty()) return natsys_constant(c, ring, 1);
      int a = candidates[pick(rng, 0, static_cast<int>(candidates.size()) - 1)];
      int m = pick(rng, 0, t.size[a] - 1);
      return natsys_lemma44(c, t, a, m, pick(rng, 1, max_rank), ring);
    }
  }
}

/// Random monotone Galois connection l -| r between random posets, built by
/// sampling a monotone r : B -> A and keeping it only when every a has a least
/// element of { b : a <= r(b) }.
inline bool try_random_galois(Rng& rng, int max_objects, Adjunction& out) {
  FiniteCategory a = random_poset_category(rng, max_objects, false, 0.45);
  FiniteCategory b = random_poset_category(rng, max_objects, false, 0.45);
  // monotone map r: B -> A (random order-respecting assignment, retried crudely)
  std::vector<int> r_obj(b.objects());
  for (int y = 0; y < b.objects(); ++y) r_obj[y] = pick(rng, 0, a.objects() - 1);
  for (int y = 0; y < b.objects(); ++y)
    for (int z = 0; z < b.objects(); ++z)
      if (!b.hom(y, z).empty() && a.hom(r_obj[y], r_obj[z]).empty()) return false;
  // left adjoint on objects: l(x) = min { y : x <= r(y) }
  std::vector<int> l_obj(a.objects(), -1);
  for (int x = 0; x < a.objects(); ++x) {
    std::vector<int> up;
    for (int y = 0; y < b.objects(); ++y)
      if (!a.hom(x, r_obj[y]).empty()) up.push_back(y);
    if (up.empty()) return false;
    for (int y : up) {
      bool least = true;
      for (int z : up)
        if (b.hom(y, z).empty()) least = false;
      if (least) {
        l_obj[x] = y;
        break;
      }
    }
    if (l_obj[x] < 0) return false;
  }
  auto poset_mor_map = [](const FiniteCategory& src, const FiniteCategory& tgt,
                          const std::vector<int>& om) {
    std::vector<int> mm(src.morphisms());
    for (int f = 0; f < src.morphisms(); ++f) {
      auto h = tgt.hom(om[src.src(f)], om[src.tgt(f)]);
      if (h.empty()) throw Error("not monotone");
      mm[f] = h[0];
    }
    return mm;
  };
  try {
    CatFunctor l{a, b, l_obj, poset_mor_map(a, b, l_obj)};
    CatFunctor r{b, a, r_obj, poset_mor_map(b, a, r_obj)};
    Adjunction adj{l, r, {}};
    for (int x = 0; x < a.objects(); ++x) {
      auto h = a.hom(x, r_obj[l_obj[x]]);
      if (h.empty()) return false;
      adj.unit.push_back(h[0]);
    }
    if (!validate_adjunction(adj).ok()) return false;
    out = adj;
    return true;
  } catch (const Error&) {
    return false;
  }
}

inline Adjunction random_galois(Rng& rng, int max_objects) {
  Adjunction adj;
  for (int attempt = 0; attempt < 1000; ++attempt)
    if (try_random_galois(rng, max_objects, adj)) return adj;
  throw Error("random_galois: no instance found");
}

/// Random monotone map between posets; falls back to a constant map.
inline CatFunctor random_monotone(Rng& rng, const FiniteCategory& src, const FiniteCategory& tgt) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<int> obj(src.objects());
    for (int x = 0; x < src.objects(); ++x) obj[x] = pick(rng, 0, tgt.objects() - 1);
    bool monotone = true;
    for (int f = 0; f < src.morphisms() && monotone; ++f)
      monotone = !tgt.hom(obj[src.src(f)], obj[src.tgt(f)]).empty();
    if (!monotone) continue;
    std::vector<int> mor(src.morphisms());
    for (int f = 0; f < src.morphisms(); ++f) mor[f] = tgt.hom(obj[src.src(f)], obj[src.tgt(f)])[0];
    CatFunctor fn{src, tgt, obj, mor};
    if (validate_functor(fn).ok()) return fn;
  }
  // constant map to the first object
  std::vector<int> obj(src.objects(), 0), mor(src.morphisms(), tgt.identity(0));
  return CatFunctor{src, tgt, obj, mor};
}

/// Order automorphisms of a small poset whose order divides n.
inline std::vector<CatFunctor> poset_automorphisms(const FiniteCategory& p, int n) {
  std::vector<CatFunctor> out;
  std::vector<int> perm(p.objects());
  for (int i = 0; i < p.objects(); ++i) perm[i] = i;
  do {
    bool monotone = true;
    for (int f = 0; f < p.morphisms() && monotone; ++f)
      monotone = !p.hom(perm[p.src(f)], perm[p.tgt(f)]).empty();
    if (!monotone) continue;
    // check order divides n
    std::vector<int> power(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) power[i] = static_cast<int>(i);
    for (int step = 0; step < n; ++step)
      for (std::size_t i = 0; i < perm.size(); ++i) power[i] = perm[power[i]];
    bool identity_power = true;
    for (std::size_t i = 0; i < perm.size(); ++i) identity_power = identity_power && power[i] == static_cast<int>(i);
    if (!identity_power) continue;
    std::vector<int> mor(p.morphisms());
    bool ok = true;
    for (int f = 0; f < p.morphisms(); ++f) {
      auto h = p.hom(perm[p.src(f)], perm[p.tgt(f)]);
      if (h.empty()) {
        ok = false;
        break;
      }
      mor[f] = h[0];
    }
    if (!ok) continue;
    CatFunctor fn{p, p, perm, mor};
    if (validate_functor(fn).ok()) out.push_back(fn);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Random strict diagram: either a chain base with freely composed monotone
/// maps, or a cyclic-group base acting on a poset by an automorphism.
inline Diagram random_diagram(Rng& rng) {
  Diagram dg;
  int flavor = pick(rng, 0, 2);
  if (flavor == 0) {
    // chain base: composites are determined, so strictness is free
    int len = pick(rng, 2, 3);
    dg.base = chain_category(len);
    for (int k = 0; k < len; ++k) dg.fiber.push_back(random_poset_category(rng, 2, false, 0.5));
    std::vector<CatFunctor> step;
    for (int k = 0; k + 1 < len; ++k) step.push_back(random_monotone(rng, dg.fiber[k], dg.fiber[k + 1]));
    dg.on_mor.resize(dg.base.morphisms());
    for (int f = 0; f < dg.base.morphisms(); ++f) {
      int x = dg.base.src(f), y = dg.base.tgt(f);
      CatFunctor fn = identity_functor(dg.fiber[x]);
      for (int k = x; k < y; ++k) fn = compose_functors(step[k], fn);
      dg.on_mor[f] = fn;
    }
  } else {
    int n = flavor == 1 ? 2 : 3;
    dg.base = build_cyclic_group_category(n);
    FiniteCategory p = random_poset_category(rng, 3, false, 0.5);
    auto autos = poset_automorphisms(p, n);
    CatFunctor sigma = autos[pick(rng, 0, static_cast<int>(autos.size()) - 1)];
    dg.fiber = {p};
    dg.on_mor.resize(n);
    CatFunctor power = identity_functor(p);
    for (int g = 0; g < n; ++g) {
      dg.on_mor[g] = power;  // generator index g acts by sigma^g
      power = compose_functors(sigma, power);
    }
  }
  throw_if_invalid(validate_diagram(dg), "random_diagram");
  return dg;
}

// ---- bundled desk instances ----

/// Base interval, fiber a 2-chain over 0 and a point over 1.
inline Diagram example_a() {
  Diagram dg;
  dg.base = interval_category();
  FiniteCategory chain = interval_category();
  FiniteCategory pt = terminal_category();
  dg.fiber = {chain, pt};
  CatFunctor to_pt{chain, pt, {0, 0}, {0, 0, 0}};
  dg.on_mor = {identity_functor(chain), to_pt, identity_functor(pt)};
  return dg;
}

/// Base the one-object group Z/2, fiber a point.
inline Diagram example_b() {
  Diagram dg;
  dg.base = build_cyclic_group_category(2);
  FiniteCategory pt = terminal_category();
  dg.fiber = {pt};
  dg.on_mor = {identity_functor(pt), identity_functor(pt)};
  return dg;
}

/// Base the one-object group Z/2 acting on a discrete pair by the swap.
inline Diagram example_c() {
  Diagram dg;
  dg.base = build_cyclic_group_category(2);
  FiniteCategory pair = build_poset_category(2, {{0, 0}, {1, 1}});
  dg.fiber = {pair};
  CatFunctor swap{pair, pair, {1, 0}, {1, 0}};
  dg.on_mor = {identity_functor(pair), swap};
  return dg;
}

/// Base interval with point fibers; carries the multiplication-by-2 system.
inline Diagram diagram_over_interval() {
  Diagram dg;
  dg.base = interval_category();
  FiniteCategory pt = terminal_category();
  dg.fiber = {pt, pt};
  dg.on_mor = {identity_functor(pt), identity_functor(pt), identity_functor(pt)};
  return dg;
}

/// The non-local system: rank one everywhere, the cross arrow acting by 2 on one side.
inline NaturalSystem doubling_system(const GrothendieckCategory& g) {
  // glued category is the interval: morphisms [id0, cross, id1]
  NaturalSystem d(g.cat, Ring::zz(), {1, 1, 1});
  Mat one = Mat::identity(1);
  Mat two(1, 1);
  two(0, 0) = 2;
  for (int a = 0; a < 3; ++a) {
    for (int psi : g.cat.mors_from(g.cat.tgt(a))) d.set_post(psi, a, one);
    for (int nu : g.cat.mors_into(g.cat.src(a))) d.set_pre(nu, a, one);
  }
  d.set_post(1, 0, two);  // cross_* : D(id0) -> D(cross)
  throw_if_invalid(validate_natural_system(d), "doubling_system");
  return d;
}

}  // namespace catcoh::testutil
