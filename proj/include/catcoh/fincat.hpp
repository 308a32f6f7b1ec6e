#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "catcoh/base.hpp"

namespace catcoh {

/// A finite category as a flat morphism table: every morphism has a global index,
/// composition is a dense partial table with -1 for non-composable pairs.
/// Instances are immutable once built; downstream caches rely on that.
class FiniteCategory {
 public:
  static constexpr int kNone = -1;

  FiniteCategory() = default;
  FiniteCategory(int n_objects, std::vector<std::pair<int, int>> mor_src_tgt, std::vector<int> identity,
                 const std::vector<std::array<int, 3>>& comp_triples)
      : n_objects_(n_objects), identity_(std::move(identity)) {
    src_.reserve(mor_src_tgt.size());
    tgt_.reserve(mor_src_tgt.size());
    for (auto [s, t] : mor_src_tgt) {
      src_.push_back(s);
      tgt_.push_back(t);
    }
    comp_.assign(src_.size() * src_.size(), kNone);
    for (const auto& [g, f, gf] : comp_triples) set_comp(g, f, gf);
    index_homs();
  }

  /// Builder variant: composition given as a callback on composable pairs.
  FiniteCategory(int n_objects, std::vector<std::pair<int, int>> mor_src_tgt, std::vector<int> identity,
                 const std::function<int(int, int)>& compose_fn)
      : n_objects_(n_objects), identity_(std::move(identity)) {
    for (auto [s, t] : mor_src_tgt) {
      src_.push_back(s);
      tgt_.push_back(t);
    }
    const int m = morphisms();
    comp_.assign(static_cast<std::size_t>(m) * m, kNone);
    for (int g = 0; g < m; ++g)
      for (int f = 0; f < m; ++f)
        if (tgt_[f] == src_[g]) set_comp(g, f, compose_fn(g, f));
    index_homs();
  }

  [[nodiscard]] int objects() const { return n_objects_; }
  [[nodiscard]] int morphisms() const { return static_cast<int>(src_.size()); }
  [[nodiscard]] int src(int f) const { return src_[f]; }
  [[nodiscard]] int tgt(int f) const { return tgt_[f]; }
  [[nodiscard]] int identity(int x) const { return identity_[x]; }
  [[nodiscard]] bool is_identity(int f) const { return identity_[src_[f]] == f; }
  [[nodiscard]] bool composable(int g, int f) const { return tgt_[f] == src_[g]; }
  [[nodiscard]] int compose(int g, int f) const { return comp_[static_cast<std::size_t>(g) * src_.size() + f]; }

  [[nodiscard]] const std::vector<int>& mors_into(int y) const { return into_[y]; }
  [[nodiscard]] const std::vector<int>& mors_from(int x) const { return from_[x]; }
  [[nodiscard]] std::vector<int> hom(int x, int y) const {
    std::vector<int> h;
    for (int f : from_[x])
      if (tgt_[f] == y) h.push_back(f);
    return h;
  }

  /// Index of an initial object (unique morphism to every object), or -1.
  [[nodiscard]] int initial_object() const {
    for (int x = 0; x < n_objects_; ++x) {
      bool ok = true;
      for (int y = 0; y < n_objects_ && ok; ++y) ok = hom(x, y).size() == 1;
      if (ok) return x;
    }
    return kNone;
  }

  bool operator==(const FiniteCategory& o) const {
    return n_objects_ == o.n_objects_ && src_ == o.src_ && tgt_ == o.tgt_ && identity_ == o.identity_ &&
           comp_ == o.comp_;
  }

 private:
  void set_comp(int g, int f, int gf) {
    if (g < 0 || f < 0 || g >= morphisms() || f >= morphisms())
      throw ObjectOutOfRange("composition entry out of range");
    comp_[static_cast<std::size_t>(g) * src_.size() + f] = gf;
  }
  void index_homs() {
    into_.assign(n_objects_, {});
    from_.assign(n_objects_, {});
    for (int f = 0; f < morphisms(); ++f) {
      if (src_[f] < 0 || src_[f] >= n_objects_ || tgt_[f] < 0 || tgt_[f] >= n_objects_)
        throw ObjectOutOfRange("morphism endpoint out of range");
      into_[tgt_[f]].push_back(f);
      from_[src_[f]].push_back(f);
    }
  }

  int n_objects_ = 0;
  std::vector<int> src_, tgt_;
  std::vector<int> identity_;
  std::vector<int> comp_;
  std::vector<std::vector<int>> into_, from_;
};

inline ValidationReport validate_category(const FiniteCategory& c) {
  ValidationReport rep;
  const int m = c.morphisms();
  if (static_cast<int>(c.objects()) < 0) rep.fail("negative object count");
  for (int x = 0; x < c.objects(); ++x) {
    int e = c.identity(x);
    if (e < 0 || e >= m) {
      rep.fail("identity of object " + std::to_string(x) + " out of range");
      continue;
    }
    if (c.src(e) != x || c.tgt(e) != x)
      rep.fail("identity of object " + std::to_string(x) + " is not an endomorphism of it");
  }
  if (!rep.ok()) return rep;
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      int gf = c.compose(g, f);
      if (!c.composable(g, f)) {
        if (gf != FiniteCategory::kNone)
          rep.fail("comp(" + std::to_string(g) + "," + std::to_string(f) + ") defined on non-composable pair");
        continue;
      }
      if (gf == FiniteCategory::kNone) {
        rep.fail("comp(" + std::to_string(g) + "," + std::to_string(f) + ") undefined on composable pair");
        continue;
      }
      if (gf < 0 || gf >= m) {
        rep.fail("comp(" + std::to_string(g) + "," + std::to_string(f) + ") out of range");
        continue;
      }
      if (c.src(gf) != c.src(f) || c.tgt(gf) != c.tgt(g))
        rep.fail("comp(" + std::to_string(g) + "," + std::to_string(f) + ") has wrong endpoints");
    }
  if (!rep.ok()) return rep;
  for (int f = 0; f < m; ++f) {
    if (c.compose(c.identity(c.tgt(f)), f) != f)
      rep.fail("left identity law fails for morphism " + std::to_string(f));
    if (c.compose(f, c.identity(c.src(f))) != f)
      rep.fail("right identity law fails for morphism " + std::to_string(f));
  }
  // associativity over composable triples h(gf) = (hg)f
  for (int f = 0; f < m; ++f)
    for (int g : c.mors_from(c.tgt(f)))
      for (int h : c.mors_from(c.tgt(g)))
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          rep.fail("associativity fails on (" + std::to_string(h) + "," + std::to_string(g) + "," +
                   std::to_string(f) + ")");
  return rep;
}

/// One morphism x -> y per related pair x <= y. Morphism order: (x, y) lexicographic.
inline FiniteCategory build_poset_category(int n, const std::vector<std::pair<int, int>>& relation) {
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (auto [x, y] : relation) {
    if (x < 0 || x >= n || y < 0 || y >= n) throw ObjectOutOfRange("relation element out of range");
    le[x][y] = true;
  }
  for (int x = 0; x < n; ++x)
    if (!le[x][x]) throw RelationNotPartialOrder("relation is not reflexive at " + std::to_string(x));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (le[x][y] && le[y][x] && x != y) throw RelationNotPartialOrder("relation is not antisymmetric");
      if (!le[x][y]) continue;
      for (int z = 0; z < n; ++z)
        if (le[y][z] && !le[x][z]) throw RelationNotPartialOrder("relation is not transitive");
    }
  std::vector<std::pair<int, int>> mors;
  std::map<std::pair<int, int>, int> index;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (le[x][y]) {
        index[{x, y}] = static_cast<int>(mors.size());
        mors.emplace_back(x, y);
      }
  std::vector<int> ident(n);
  for (int x = 0; x < n; ++x) ident[x] = index[{x, x}];
  FiniteCategory cat(
      n, mors, ident, [&](int g, int f) { return index.at({mors[f].first, mors[g].second}); });
  throw_if_invalid(validate_category(cat), "build_poset_category");
  return cat;
}

/// One-object category whose endomorphism monoid is the given multiplication table.
/// table[g][f] is the composite g after f.
inline FiniteCategory build_monoid_category(const std::vector<std::vector<int>>& table) {
  const int m = static_cast<int>(table.size());
  if (m == 0) throw NotAMonoid("empty table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != m) throw NotAMonoid("table is not square");
    for (int v : row)
      if (v < 0 || v >= m) throw NotAMonoid("table entry out of range");
  }
  int unit = -1;
  for (int e = 0; e < m; ++e) {
    bool ok = true;
    for (int f = 0; f < m && ok; ++f) ok = table[e][f] == f && table[f][e] == f;
    if (ok) {
      unit = e;
      break;
    }
  }
  if (unit < 0) throw NotAMonoid("no two-sided unit");
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        if (table[a][table[b][c]] != table[table[a][b]][c]) throw NotAMonoid("table is not associative");
  std::vector<std::pair<int, int>> mors(m, {0, 0});
  FiniteCategory cat(1, mors, {unit}, [&](int g, int f) { return table[g][f]; });
  throw_if_invalid(validate_category(cat), "build_monoid_category");
  return cat;
}

/// Convenience: the one-object category of the cyclic group Z/n.
inline FiniteCategory build_cyclic_group_category(int n) {
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  return build_monoid_category(table);
}

/// The category of morphisms out of j0: objects are sigma : j0 -> j, and a morphism
/// sigma -> sigma' is tau with tau . sigma = sigma'. Always has initial object id_{j0}.
struct UnderCategory {
  FiniteCategory cat;
  std::vector<int> object_sigma;                 // object index -> morphism of K
  std::vector<std::pair<int, int>> mor_label;    // (source object index, tau in K)
  int initial = 0;                               // object index of id_{j0}
};

inline UnderCategory under_category(const FiniteCategory& k, int j0) {
  if (j0 < 0 || j0 >= k.objects()) throw ObjectOutOfRange("under_category: object out of range");
  UnderCategory u;
  std::vector<int> obj_of_sigma(k.morphisms(), -1);
  for (int f : k.mors_from(j0)) {
    obj_of_sigma[f] = static_cast<int>(u.object_sigma.size());
    u.object_sigma.push_back(f);
  }
  std::vector<std::pair<int, int>> mors;
  std::vector<int> ident(u.object_sigma.size(), -1);
  std::map<std::pair<int, int>, int> index;
  for (int o = 0; o < static_cast<int>(u.object_sigma.size()); ++o) {
    int sigma = u.object_sigma[o];
    for (int tau : k.mors_from(k.tgt(sigma))) {
      int sigma2 = k.compose(tau, sigma);
      int idx = static_cast<int>(mors.size());
      index[{o, tau}] = idx;
      u.mor_label.emplace_back(o, tau);
      mors.emplace_back(o, obj_of_sigma[sigma2]);
      if (tau == k.identity(k.tgt(sigma))) ident[o] = idx;
    }
  }
  u.cat = FiniteCategory(static_cast<int>(u.object_sigma.size()), mors, ident, [&](int g, int f) {
    auto [of, tf] = u.mor_label[f];
    auto [og, tg] = u.mor_label[g];
    (void)og;
    return index.at({of, k.compose(tg, tf)});
  });
  throw_if_invalid(validate_category(u.cat), "under_category");
  u.initial = obj_of_sigma[k.identity(j0)];
  return u;
}

/// A functor between finite categories, stored as index maps.
struct CatFunctor {
  FiniteCategory src, tgt;
  std::vector<int> obj_map;  // per object of src
  std::vector<int> mor_map;  // per morphism of src

  [[nodiscard]] int obj(int x) const { return obj_map[x]; }
  [[nodiscard]] int mor(int f) const { return mor_map[f]; }

  bool operator==(const CatFunctor& o) const {
    return src == o.src && tgt == o.tgt && obj_map == o.obj_map && mor_map == o.mor_map;
  }
};

inline CatFunctor identity_functor(const FiniteCategory& c) {
  CatFunctor f{c, c, {}, {}};
  f.obj_map.resize(c.objects());
  f.mor_map.resize(c.morphisms());
  for (int x = 0; x < c.objects(); ++x) f.obj_map[x] = x;
  for (int m = 0; m < c.morphisms(); ++m) f.mor_map[m] = m;
  return f;
}

inline CatFunctor compose_functors(const CatFunctor& g, const CatFunctor& f) {
  // g after f
  CatFunctor h{f.src, g.tgt, {}, {}};
  h.obj_map.resize(f.src.objects());
  h.mor_map.resize(f.src.morphisms());
  for (int x = 0; x < f.src.objects(); ++x) h.obj_map[x] = g.obj_map[f.obj_map[x]];
  for (int m = 0; m < f.src.morphisms(); ++m) h.mor_map[m] = g.mor_map[f.mor_map[m]];
  return h;
}

inline ValidationReport validate_functor(const CatFunctor& fn) {
  ValidationReport rep;
  rep.check(static_cast<int>(fn.obj_map.size()) == fn.src.objects(), "object map has wrong size");
  rep.check(static_cast<int>(fn.mor_map.size()) == fn.src.morphisms(), "morphism map has wrong size");
  if (!rep.ok()) return rep;
  for (int x = 0; x < fn.src.objects(); ++x)
    if (fn.obj_map[x] < 0 || fn.obj_map[x] >= fn.tgt.objects()) {
      rep.fail("object image out of range");
      return rep;
    }
  for (int m = 0; m < fn.src.morphisms(); ++m) {
    int fm = fn.mor_map[m];
    if (fm < 0 || fm >= fn.tgt.morphisms()) {
      rep.fail("morphism image out of range");
      return rep;
    }
    if (fn.tgt.src(fm) != fn.obj_map[fn.src.src(m)] || fn.tgt.tgt(fm) != fn.obj_map[fn.src.tgt(m)])
      rep.fail("morphism " + std::to_string(m) + " image has wrong endpoints");
  }
  if (!rep.ok()) return rep;
  for (int x = 0; x < fn.src.objects(); ++x)
    if (fn.mor_map[fn.src.identity(x)] != fn.tgt.identity(fn.obj_map[x]))
      rep.fail("identity of object " + std::to_string(x) + " not preserved");
  for (int f = 0; f < fn.src.morphisms(); ++f)
    for (int g : fn.src.mors_from(fn.src.tgt(f)))
      if (fn.mor_map[fn.src.compose(g, f)] != fn.tgt.compose(fn.mor_map[g], fn.mor_map[f]))
        rep.fail("composition not preserved on (" + std::to_string(g) + "," + std::to_string(f) + ")");
  return rep;
}

/// Adjunction data l -| r with unit eps_c : c -> r(l(c)).
/// Validation checks naturality and, by enumeration, the universal property:
/// every nu : c -> r(u) factors as r(nu-hat) . eps_c for exactly one nu-hat : l(c) -> u.
struct Adjunction {
  CatFunctor l;            // C -> C'
  CatFunctor r;            // C' -> C
  std::vector<int> unit;   // per object c of C, a morphism index in C
};

inline ValidationReport validate_adjunction(const Adjunction& adj) {
  ValidationReport rep;
  const FiniteCategory& c = adj.l.src;
  const FiniteCategory& cp = adj.l.tgt;
  rep.merge(validate_functor(adj.l), "left functor");
  rep.merge(validate_functor(adj.r), "right functor");
  rep.check(adj.r.src == cp && adj.r.tgt == c, "functor endpoints do not match");
  rep.check(static_cast<int>(adj.unit.size()) == c.objects(), "unit has wrong size");
  if (!rep.ok()) return rep;
  for (int x = 0; x < c.objects(); ++x) {
    int e = adj.unit[x];
    if (e < 0 || e >= c.morphisms() || c.src(e) != x || c.tgt(e) != adj.r.obj(adj.l.obj(x))) {
      rep.fail("unit at object " + std::to_string(x) + " has wrong endpoints");
      return rep;
    }
  }
  for (int b = 0; b < c.morphisms(); ++b) {
    int lhs = c.compose(adj.r.mor(adj.l.mor(b)), adj.unit[c.src(b)]);
    int rhs = c.compose(adj.unit[c.tgt(b)], b);
    if (lhs != rhs) rep.fail("unit not natural at morphism " + std::to_string(b));
  }
  for (int x = 0; x < c.objects(); ++x)
    for (int u = 0; u < cp.objects(); ++u)
      for (int nu : c.hom(x, adj.r.obj(u))) {
        int count = 0;
        for (int nuhat : cp.hom(adj.l.obj(x), u))
          if (c.compose(adj.r.mor(nuhat), adj.unit[x]) == nu) ++count;
        if (count != 1)
          rep.fail("universal property fails at (object " + std::to_string(x) + ", object' " +
                   std::to_string(u) + ", nu " + std::to_string(nu) + "): " + std::to_string(count) +
                   " factorizations");
      }
  return rep;
}

}  // namespace catcoh
