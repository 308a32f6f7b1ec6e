#pragma once

#include <map>
#include <utility>
#include <vector>

#include "catcoh/natsys.hpp"

namespace catcoh {

constexpr std::size_t kDefaultRankBudget = 200000;

/// Composable strings of the nerve, identities included.
/// Degree 0 holds objects; degree n >= 1 holds tuples (a1, ..., an) with
/// tgt(a_{i+1}) = src(a_i), ordered lexicographically by morphism index.
struct NerveStrings {
  std::vector<std::vector<std::vector<int>>> strings;  // [degree][string] -> indices
  std::vector<std::vector<int>> composite;             // [degree][string] -> morphism of the base
  std::vector<std::map<std::vector<int>, int>> index;  // [degree] -> string lookup

  [[nodiscard]] int count(int degree) const { return static_cast<int>(strings[degree].size()); }
};

inline NerveStrings enumerate_nerve(const FiniteCategory& c, int n_max) {
  NerveStrings nerve;
  nerve.strings.resize(n_max + 1);
  nerve.composite.resize(n_max + 1);
  nerve.index.resize(n_max + 1);
  for (int x = 0; x < c.objects(); ++x) {
    nerve.index[0][{x}] = static_cast<int>(nerve.strings[0].size());
    nerve.strings[0].push_back({x});
    nerve.composite[0].push_back(c.identity(x));
  }
  if (n_max >= 1) {
    for (int a = 0; a < c.morphisms(); ++a) {
      nerve.index[1][{a}] = a;
      nerve.strings[1].push_back({a});
      nerve.composite[1].push_back(a);
    }
  }
  for (int n = 2; n <= n_max; ++n) {
    for (int i = 0; i < nerve.count(n - 1); ++i) {
      const auto& s = nerve.strings[n - 1][i];
      int last = s.back();
      for (int a : c.mors_into(c.src(last))) {
        std::vector<int> ext = s;
        ext.push_back(a);
        nerve.index[n][ext] = static_cast<int>(nerve.strings[n].size());
        nerve.composite[n].push_back(c.compose(nerve.composite[n - 1][i], a));
        nerve.strings[n].push_back(std::move(ext));
      }
    }
  }
  return nerve;
}

/// The cochain complex of a category with natural-system coefficients:
/// degree n is the direct sum over n-strings of D(a1 ... an), and the coboundary
/// combines the post action of a1, signed inner compositions, and the pre action of a_{n+1}.
struct BWComplex {
  CochainComplex cx;
  NerveStrings nerve;
  std::vector<std::vector<std::size_t>> offset;      // [degree][string]
  std::vector<std::vector<std::size_t>> block_rank;  // [degree][string]
};

inline BWComplex bw_cochain(const FiniteCategory& c, const NaturalSystem& d, int n_max,
                            std::size_t budget = kDefaultRankBudget) {
  if (n_max < 1) throw Error("bw_cochain: n_max must be >= 1");
  if (!(d.base() == c)) throw Error("bw_cochain: system lives on a different category");
  BWComplex bw;
  bw.cx.ring = d.ring();
  bw.nerve = enumerate_nerve(c, n_max);
  bw.offset.resize(n_max + 1);
  bw.block_rank.resize(n_max + 1);
  std::size_t total = 0;
  for (int n = 0; n <= n_max; ++n) {
    std::size_t off = 0;
    for (int i = 0; i < bw.nerve.count(n); ++i) {
      std::size_t r = d.rank(bw.nerve.composite[n][i]);
      bw.offset[n].push_back(off);
      bw.block_rank[n].push_back(r);
      off += r;
    }
    total += off;
    if (total > budget)
      throw RankOverflowBudget("bw_cochain: total rank exceeds budget of " + std::to_string(budget));
    bw.cx.ranks.push_back(off);
  }
  // Assemble d_n : F^n -> F^{n+1} blockwise by faces of each (n+1)-string.
  for (int n = 0; n + 1 <= n_max; ++n) {
    Mat dn(bw.cx.ranks[n + 1], bw.cx.ranks[n]);
    for (int i = 0; i < bw.nerve.count(n + 1); ++i) {
      const auto& s = bw.nerve.strings[n + 1][i];
      std::size_t row = bw.offset[n + 1][i];
      if (n == 0) {
        int a = s[0];
        // (df)(a) = a_* f(src a) - a^* f(tgt a)
        int isrc = bw.nerve.index[0].at({c.src(a)});
        int itgt = bw.nerve.index[0].at({c.tgt(a)});
        dn.add_block(row, bw.offset[0][isrc], d.post(a, c.identity(c.src(a))), +1);
        dn.add_block(row, bw.offset[0][itgt], d.pre(a, c.identity(c.tgt(a))), -1);
        continue;
      }
      // drop a1: post action of a1 on the composite of the rest
      {
        std::vector<int> face(s.begin() + 1, s.end());
        int j = bw.nerve.index[n].at(face);
        dn.add_block(row, bw.offset[n][j], d.post(s[0], bw.nerve.composite[n][j]), +1);
      }
      // compose a_t a_{t+1}: identity transport with sign (-1)^t
      for (int t = 1; t <= n; ++t) {
        std::vector<int> face;
        face.reserve(n);
        for (int u = 0; u < t - 1; ++u) face.push_back(s[u]);
        face.push_back(c.compose(s[t - 1], s[t]));
        for (int u = t + 1; u <= n; ++u) face.push_back(s[u]);
        int j = bw.nerve.index[n].at(face);
        dn.add_block(row, bw.offset[n][j], Mat::identity(bw.block_rank[n][j]), t % 2 == 0 ? +1 : -1);
      }
      // drop a_{n+1}: pre action with sign (-1)^{n+1}
      {
        std::vector<int> face(s.begin(), s.end() - 1);
        int j = bw.nerve.index[n].at(face);
        dn.add_block(row, bw.offset[n][j], d.pre(s[n], bw.nerve.composite[n][j]),
                     (n + 1) % 2 == 0 ? +1 : -1);
      }
    }
    bw.cx.d.push_back(std::move(dn));
  }
  for (std::size_t n = 0; n + 1 < bw.cx.d.size(); ++n) {
    if (!mat_is_zero(bw.cx.d[n + 1] * bw.cx.d[n], bw.cx.ring))
      throw Error("bw_cochain: d*d != 0 at degree " + std::to_string(n) + " (invalid natural system?)");
  }
  return bw;
}

inline std::vector<AbInvariants> bw_cohomology(const FiniteCategory& c, const NaturalSystem& d, int n_max,
                                               std::size_t budget = kDefaultRankBudget) {
  return cohomology_all(bw_cochain(c, d, n_max, budget).cx);
}

/// Cochain map induced by a map of natural systems t : E -> E' over the same base,
/// given per base morphism as t[alpha] : E(alpha) -> E'(alpha).
inline CochainMap bw_map_from_system_map(const BWComplex& x, const BWComplex& y, const std::vector<Mat>& t) {
  CochainMap f;
  f.source = x.cx;
  f.target = y.cx;
  int degrees = static_cast<int>(std::min(x.cx.ranks.size(), y.cx.ranks.size()));
  for (int n = 0; n < degrees; ++n) {
    Mat c(y.cx.ranks[n], x.cx.ranks[n]);
    for (int i = 0; i < x.nerve.count(n); ++i)
      c.add_block(y.offset[n][i], x.offset[n][i], t[x.nerve.composite[n][i]]);
    f.comp.push_back(std::move(c));
  }
  return f;
}

/// Cochain restriction along a functor fn : A -> B, from the complex of B with
/// coefficients E to the complex of A with coefficients fn^* E. Block (s in nerve A,
/// fn(s) in nerve B) is the identity since (fn^*E)(comp s) = E(fn(comp s)).
inline CochainMap bw_pullback_map(const CatFunctor& fn, const BWComplex& on_tgt, const BWComplex& on_src) {
  CochainMap f;
  f.source = on_tgt.cx;
  f.target = on_src.cx;
  int degrees = static_cast<int>(std::min(on_tgt.cx.ranks.size(), on_src.cx.ranks.size()));
  for (int n = 0; n < degrees; ++n) {
    Mat c(on_src.cx.ranks[n], on_tgt.cx.ranks[n]);
    for (int i = 0; i < on_src.nerve.count(n); ++i) {
      const auto& s = on_src.nerve.strings[n][i];
      std::vector<int> image;
      image.reserve(s.size());
      if (n == 0)
        image.push_back(fn.obj(s[0]));
      else
        for (int a : s) image.push_back(fn.mor(a));
      int j = on_tgt.nerve.index[n].at(image);
      c.add_block(on_src.offset[n][i], on_tgt.offset[n][j],
                  Mat::identity(on_src.block_rank[n][i]));
    }
    f.comp.push_back(std::move(c));
  }
  return f;
}

}  // namespace catcoh
