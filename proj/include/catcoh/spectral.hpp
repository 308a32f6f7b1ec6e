#pragma once

#include <array>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "catcoh/grothendieck.hpp"

namespace catcoh {

/// One summand of C^{p,q}: a base p-string, a glued-category q-string, and a
/// connector from the q-string's top object down in the base.
struct BicomplexBlock {
  int kstr = 0;
  int gstr = 0;
  int gamma = 0;
  std::size_t offset = 0;
  std::size_t rank = 0;
};

/// The double complex of a diagram with coefficients on its glued category:
/// horizontal differential reindexes base strings and absorbs the last arrow
/// into the connector; vertical differential is the coefficient coboundary of
/// the glued-category string with the connector composed along the first arrow.
struct Bicomplex {
  Ring ring;
  int n_max = 0;
  NerveStrings knerve;  // base category strings
  NerveStrings gnerve;  // glued category strings

  std::vector<std::vector<BicomplexBlock>> blocks;  // indexed by idx(p, q)
  std::vector<std::size_t> rank_pq;
  std::vector<Mat> horiz;  // (p,q) -> (p+1,q), untwisted
  std::vector<Mat> vert;   // (p,q) -> (p,q+1), untwisted

  [[nodiscard]] int idx(int p, int q) const { return p * (n_max + 1) + q; }
  [[nodiscard]] bool in_range(int p, int q) const { return p >= 0 && q >= 0 && p + q <= n_max; }
  [[nodiscard]] std::size_t rank(int p, int q) const { return in_range(p, q) ? rank_pq[idx(p, q)] : 0; }
  [[nodiscard]] const Mat& delta(int p, int q) const { return horiz[idx(p, q)]; }
  [[nodiscard]] const Mat& partial(int p, int q) const { return vert[idx(p, q)]; }
};

namespace detail {

// Source object of a base p-string (the deep end), as an object index.
inline int kstring_source(const FiniteCategory& k, const NerveStrings& nerve, int p, int i) {
  if (p == 0) return nerve.strings[0][i][0];
  return k.src(nerve.strings[p][i].back());
}

// Top object of a glued q-string (the target end).
inline int gstring_top(const FiniteCategory& g, const NerveStrings& nerve, int q, int i) {
  if (q == 0) return nerve.strings[0][i][0];
  return g.tgt(nerve.strings[q][i][0]);
}

}  // namespace detail

inline Bicomplex build_bicomplex(const Diagram& dg, const GrothendieckCategory& g, const NaturalSystem& d,
                                 int n_max, std::size_t budget = kDefaultRankBudget) {
  if (!(d.base() == g.cat)) throw Error("build_bicomplex: system does not live on the glued category");
  if (n_max < 1) throw Error("build_bicomplex: n_max must be >= 1");
  const FiniteCategory& k = dg.base;
  Bicomplex b;
  b.ring = d.ring();
  b.n_max = n_max;
  b.knerve = enumerate_nerve(k, n_max);
  b.gnerve = enumerate_nerve(g.cat, n_max);
  b.blocks.assign((n_max + 1) * (n_max + 1), {});
  b.rank_pq.assign((n_max + 1) * (n_max + 1), 0);
  b.horiz.assign((n_max + 1) * (n_max + 1), Mat());
  b.vert.assign((n_max + 1) * (n_max + 1), Mat());

  std::vector<std::map<std::array<int, 3>, int>> block_pos((n_max + 1) * (n_max + 1));
  std::size_t total = 0;
  for (int p = 0; p <= n_max; ++p)
    for (int q = 0; p + q <= n_max; ++q) {
      auto& blks = b.blocks[b.idx(p, q)];
      std::size_t off = 0;
      for (int ks = 0; ks < b.knerve.count(p); ++ks) {
        int ip = detail::kstring_source(k, b.knerve, p, ks);
        for (int gs = 0; gs < b.gnerve.count(q); ++gs) {
          int top = detail::gstring_top(g.cat, b.gnerve, q, gs);
          int j0 = g.obj_label[top].first;
          std::size_t rk = d.rank(b.gnerve.composite[q][gs]);
          for (int gamma : k.hom(j0, ip)) {
            block_pos[b.idx(p, q)][{ks, gs, gamma}] = static_cast<int>(blks.size());
            blks.push_back({ks, gs, gamma, off, rk});
            off += rk;
          }
        }
      }
      b.rank_pq[b.idx(p, q)] = off;
      total += off;
      if (total > budget)
        throw RankOverflowBudget("build_bicomplex: total rank exceeds budget of " + std::to_string(budget));
    }

  auto pos_of = [&](int p, int q, int ks, int gs, int gamma) {
    return b.blocks[b.idx(p, q)][block_pos[b.idx(p, q)].at({ks, gs, gamma})].offset;
  };

  // horizontal: iterate target blocks at (p+1, q)
  for (int p = 0; p + 1 <= n_max; ++p)
    for (int q = 0; p + 1 + q <= n_max; ++q) {
      Mat m(b.rank(p + 1, q), b.rank(p, q));
      for (const auto& blk : b.blocks[b.idx(p + 1, q)]) {
        const auto& s = b.knerve.strings[p + 1][blk.kstr];
        Mat id = Mat::identity(blk.rank);
        // drop the first arrow
        {
          int j;
          if (p == 0)
            j = b.knerve.index[0].at({k.src(s[0])});
          else
            j = b.knerve.index[p].at(std::vector<int>(s.begin() + 1, s.end()));
          m.add_block(blk.offset, pos_of(p, q, j, blk.gstr, blk.gamma), id, +1);
        }
        // inner compositions
        for (int t = 1; t <= p; ++t) {
          std::vector<int> face;
          for (int u = 0; u < t - 1; ++u) face.push_back(s[u]);
          face.push_back(k.compose(s[t - 1], s[t]));
          for (int u = t + 1; u <= p; ++u) face.push_back(s[u]);
          int j = b.knerve.index[p].at(face);
          m.add_block(blk.offset, pos_of(p, q, j, blk.gstr, blk.gamma), id, t % 2 == 0 ? +1 : -1);
        }
        // absorb the last arrow into the connector
        {
          int j;
          if (p == 0)
            j = b.knerve.index[0].at({k.tgt(s[0])});
          else
            j = b.knerve.index[p].at(std::vector<int>(s.begin(), s.end() - 1));
          int gamma2 = k.compose(s[p], blk.gamma);
          m.add_block(blk.offset, pos_of(p, q, j, blk.gstr, gamma2), id, (p + 1) % 2 == 0 ? +1 : -1);
        }
      }
      b.horiz[b.idx(p, q)] = std::move(m);
    }

  // vertical: iterate target blocks at (p, q+1)
  for (int p = 0; p <= n_max; ++p)
    for (int q = 0; p + q + 1 <= n_max; ++q) {
      Mat m(b.rank(p, q + 1), b.rank(p, q));
      for (const auto& blk : b.blocks[b.idx(p, q + 1)]) {
        const auto& s = b.gnerve.strings[q + 1][blk.gstr];
        // post action of the first arrow, connector composed along its base part
        {
          int j, comp;
          if (q == 0) {
            j = b.gnerve.index[0].at({g.cat.src(s[0])});
            comp = b.gnerve.composite[0][j];
          } else {
            std::vector<int> face(s.begin() + 1, s.end());
            j = b.gnerve.index[q].at(face);
            comp = b.gnerve.composite[q][j];
          }
          int beta1 = g.mor_label[s[0]][0];
          int gamma2 = k.compose(blk.gamma, beta1);
          m.add_block(blk.offset, pos_of(p, q, blk.kstr, j, gamma2), d.post(s[0], comp), +1);
        }
        // inner compositions
        for (int t = 1; t <= q; ++t) {
          std::vector<int> face;
          for (int u = 0; u < t - 1; ++u) face.push_back(s[u]);
          face.push_back(g.cat.compose(s[t - 1], s[t]));
          for (int u = t + 1; u <= q; ++u) face.push_back(s[u]);
          int j = b.gnerve.index[q].at(face);
          m.add_block(blk.offset, pos_of(p, q, blk.kstr, j, blk.gamma),
                      Mat::identity(b.blocks[b.idx(p, q)][block_pos[b.idx(p, q)].at(
                                                              {blk.kstr, j, blk.gamma})].rank),
                      t % 2 == 0 ? +1 : -1);
        }
        // pre action of the last arrow, connector unchanged
        {
          int j, comp;
          if (q == 0) {
            j = b.gnerve.index[0].at({g.cat.tgt(s[0])});
            comp = b.gnerve.composite[0][j];
          } else {
            std::vector<int> face(s.begin(), s.end() - 1);
            j = b.gnerve.index[q].at(face);
            comp = b.gnerve.composite[q][j];
          }
          m.add_block(blk.offset, pos_of(p, q, blk.kstr, j, blk.gamma), d.pre(s[q], comp),
                      (q + 1) % 2 == 0 ? +1 : -1);
        }
      }
      b.vert[b.idx(p, q)] = std::move(m);
    }

  // structural identities
  for (int p = 0; p <= n_max; ++p)
    for (int q = 0; p + q <= n_max; ++q) {
      if (p + q + 2 <= n_max) {
        if (!mat_is_zero(b.delta(p + 1, q) * b.delta(p, q), b.ring))
          throw Error("build_bicomplex: horizontal differential does not square to zero");
        if (!mat_is_zero(b.partial(p, q + 1) * b.partial(p, q), b.ring))
          throw Error("build_bicomplex: vertical differential does not square to zero");
        if (!mat_eq(b.partial(p + 1, q) * b.delta(p, q), b.delta(p, q + 1) * b.partial(p, q), b.ring))
          throw Error("build_bicomplex: differentials do not commute");
      }
    }
  return b;
}

/// Offsets of the (p, n-p) summands inside Tot^n, p ascending.
inline std::vector<std::size_t> tot_offsets(const Bicomplex& b, int n) {
  std::vector<std::size_t> off(n + 2, 0);
  for (int p = 0; p <= n; ++p) off[p + 1] = off[p] + b.rank(p, n - p);
  return off;
}

/// Tot^n = sum over p+q = n, with total differential delta + (-1)^p partial.
inline CochainComplex total_complex(const Bicomplex& b) {
  CochainComplex tot;
  tot.ring = b.ring;
  for (int n = 0; n <= b.n_max; ++n) {
    auto off = tot_offsets(b, n);
    tot.ranks.push_back(off[n + 1]);
  }
  for (int n = 0; n + 1 <= b.n_max; ++n) {
    auto src_off = tot_offsets(b, n);
    auto tgt_off = tot_offsets(b, n + 1);
    Mat m(tot.ranks[n + 1], tot.ranks[n]);
    for (int p = 0; p <= n; ++p) {
      int q = n - p;
      m.add_block(tgt_off[p + 1], src_off[p], b.delta(p, q), +1);
      m.add_block(tgt_off[p], src_off[p], b.partial(p, q), p % 2 == 0 ? +1 : -1);
    }
    tot.d.push_back(std::move(m));
  }
  ValidationReport rep = tot.validate();
  if (!rep.ok()) throw Error("total_complex: " + rep.summary());
  return tot;
}

struct PhiReport {
  CochainMap map;                    // cochain complex of the glued category -> Tot
  bool delta_phi_zero = true;        // first horizontal differential kills the image
  bool chain_map = true;
  std::vector<bool> cone_acyclic_by_degree;
  [[nodiscard]] bool quasi_iso() const {
    if (!chain_map || !delta_phi_zero) return false;
    for (bool ok : cone_acyclic_by_degree)
      if (!ok) return false;
    return true;
  }
};

/// The comparison map into column zero: a cochain of the glued category is sent to
/// the block family indexed by (vertex; string; connector), forgetting the connector.
inline PhiReport phi_map(const Bicomplex& b, const BWComplex& f) {
  PhiReport rep;
  CochainComplex tot = total_complex(b);
  std::vector<Mat> comps;
  for (int n = 0; n <= b.n_max; ++n) {
    Mat phi(tot.ranks[n], f.cx.ranks[n]);
    // column-zero blocks sit at offset 0 inside Tot^n
    for (const auto& blk : b.blocks[b.idx(0, n)])
      phi.add_block(blk.offset, f.offset[n][blk.gstr], Mat::identity(blk.rank));
    comps.push_back(std::move(phi));
  }
  // delta^{0,*} phi = 0
  for (int n = 0; n + 1 <= b.n_max; ++n) {
    Mat phi0(b.rank(0, n), f.cx.ranks[n]);
    for (const auto& blk : b.blocks[b.idx(0, n)])
      phi0.add_block(blk.offset, f.offset[n][blk.gstr], Mat::identity(blk.rank));
    if (!mat_is_zero(b.delta(0, n) * phi0, b.ring)) rep.delta_phi_zero = false;
  }
  rep.map = CochainMap{f.cx, std::move(tot), std::move(comps)};
  rep.chain_map = rep.map.validate().ok();
  if (rep.chain_map) rep.cone_acyclic_by_degree = cone_acyclic(rep.map);
  return rep;
}

struct RowExactnessReport {
  // exact[n][i]: vanishing of H^i of the augmented row complex
  // 0 -> F^n -> C^{0,n} -> C^{1,n} -> ... for i = 0 .. n_max - n
  std::vector<std::vector<bool>> exact;
  [[nodiscard]] bool all() const {
    for (const auto& row : exact)
      for (bool e : row)
        if (!e) return false;
    return true;
  }
};

inline RowExactnessReport row_exactness_check(const Bicomplex& b, const BWComplex& f) {
  RowExactnessReport rep;
  for (int n = 0; n + 1 <= b.n_max; ++n) {
    int pmax = b.n_max - n;
    CochainComplex row;
    row.ring = b.ring;
    row.ranks.push_back(f.cx.ranks[n]);
    for (int p = 0; p <= pmax; ++p) row.ranks.push_back(b.rank(p, n));
    Mat phi0(b.rank(0, n), f.cx.ranks[n]);
    for (const auto& blk : b.blocks[b.idx(0, n)])
      phi0.add_block(blk.offset, f.offset[n][blk.gstr], Mat::identity(blk.rank));
    row.d.push_back(std::move(phi0));
    for (int p = 0; p + 1 <= pmax; ++p) row.d.push_back(b.delta(p, n));
    ValidationReport vr = row.validate();
    if (!vr.ok()) throw Error("row_exactness_check: " + vr.summary());
    std::vector<bool> ex;
    for (long i = 0; i <= row.trusted_degree(); ++i) ex.push_back(cohomology_at(row, i).is_zero());
    rep.exact.push_back(std::move(ex));
  }
  return rep;
}

struct PageEntry {
  int p = 0, q = 0;
  std::size_t dim = 0;
  long d_rank = -1;  // rank of the outgoing differential; -1 when outside the window
  bool stable = false;
};

struct PageTable {
  int r = 1;
  std::vector<PageEntry> entries;  // p+q <= n_max-1, lexicographic in (p, q)

  [[nodiscard]] const PageEntry* find(int p, int q) const {
    for (const auto& e : entries)
      if (e.p == p && e.q == q) return &e;
    return nullptr;
  }
};

namespace detail {

/// Incremental span tracker over a prime field.
struct FpSpan {
  long p = 2;
  std::vector<std::vector<long>> rows;   // echelonized vectors
  std::vector<std::size_t> pivot;

  explicit FpSpan(long p) : p(p) {}

  bool add(std::vector<long> v) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      long c = v[pivot[r]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = ((v[j] - c * rows[r][j]) % p + p) % p;
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] != 0) {
        long inv = fp_inv(v[j], p);
        for (std::size_t u = 0; u < v.size(); ++u) v[u] = (v[u] * inv) % p;
        rows.push_back(std::move(v));
        pivot.push_back(j);
        return true;
      }
    }
    return false;
  }
  [[nodiscard]] std::size_t dim() const { return rows.size(); }
};

/// Filtration-aware page computation for the column filtration of Tot.
class PageEngine {
 public:
  PageEngine(const Bicomplex& b) : b_(b), p_(b.ring.p) {
    if (!b.ring.is_field()) throw NotAField("spectral pages require prime-field coefficients");
    tot_off_.resize(b_.n_max + 1);
    tot_rank_.resize(b_.n_max + 1);
    for (int n = 0; n <= b_.n_max; ++n) {
      tot_off_[n] = tot_offsets(b_, n);
      tot_rank_[n] = tot_off_[n][n + 1];
    }
    tot_d_.resize(b_.n_max);
    for (int n = 0; n + 1 <= b_.n_max; ++n) {
      Mat m(tot_rank_[n + 1], tot_rank_[n]);
      for (int p = 0; p <= n; ++p) {
        int q = n - p;
        m.add_block(tot_off_[n + 1][p + 1], tot_off_[n][p], b_.delta(p, q), +1);
        m.add_block(tot_off_[n + 1][p], tot_off_[n][p], b_.partial(p, q), p % 2 == 0 ? +1 : -1);
      }
      tot_d_[n] = fp_from(m, p_);
    }
  }

  /// dim E_r^{p,q}; requires p+q <= n_max-1.
  std::size_t page_dim(int r, int p, int q) {
    int n = p + q;
    const FpMat& num = a_set(n, p, p + r);
    FpSpan span(p_);
    add_cols(span, a_set(n, p + 1, p + r));
    if (n >= 1) add_cols(span, apply_d(n - 1, a_set(n - 1, std::max(p - r + 1, 0), p)));
    return num.cols - span.dim();
  }

  /// rank of d_r out of (p,q); requires p+q <= n_max-2.
  std::size_t d_rank(int r, int p, int q) {
    int n = p + q;
    FpMat img = apply_d(n, a_set(n, p, p + r));
    FpSpan span(p_);
    add_cols(span, a_set(n + 1, p + r + 1, p + 2 * r));
    add_cols(span, apply_d(n, a_set(n, p + 1, p + r)));
    std::size_t base = span.dim();
    add_cols(span, img);
    return span.dim() - base;
  }

  /// dim H^n(Tot) over the field; requires n <= n_max-1.
  std::size_t tot_cohomology_dim(int n) {
    std::size_t rk_out = fp_rank(tot_d_[n]);
    std::size_t rk_in = n > 0 ? fp_rank(tot_d_[n - 1]) : 0;
    return tot_rank_[n] - rk_out - rk_in;
  }

 private:
  // Basis of { x in F^level Tot^n : (Dx)_sublevel = 0 for sublevel < bound },
  // returned as vectors in full Tot^n coordinates (columns).
  const FpMat& a_set(int n, int level, int bound) {
    bound = std::min(bound, n + 2);
    level = std::max(level, 0);
    bound = std::max(bound, level);
    auto key = std::make_tuple(n, level, bound);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    FpMat result(p_, tot_rank_[n], 0);
    if (level > n) {
      return cache_.emplace(key, std::move(result)).first->second;
    }
    std::size_t var_off = tot_off_[n][level];
    std::size_t vars = tot_rank_[n] - var_off;
    // constraint rows: components level .. bound-1 of D x (valid components are 0..n+1)
    std::size_t rows = 0;
    int hi = std::min(bound - 1, n + 1);
    for (int ph = level; ph <= hi; ++ph) rows += b_.rank(ph, n + 1 - ph);
    FpMat cons(p_, rows, vars);
    if (rows > 0) {
      const FpMat& d = tot_d_[n];  // n+1 <= n_max guaranteed by callers
      std::size_t row0 = 0;
      for (int ph = level; ph <= hi; ++ph) {
        std::size_t blk = b_.rank(ph, n + 1 - ph);
        std::size_t src_row = tot_off_[n + 1][ph];
        for (std::size_t i = 0; i < blk; ++i)
          for (std::size_t j = 0; j < vars; ++j) cons(row0 + i, j) = d(src_row + i, var_off + j);
        row0 += blk;
      }
    }
    FpMat ker = fp_kernel(cons);
    result = FpMat(p_, tot_rank_[n], ker.cols);
    for (std::size_t i = 0; i < ker.rows; ++i)
      for (std::size_t j = 0; j < ker.cols; ++j) result(var_off + i, j) = ker(i, j);
    return cache_.emplace(key, std::move(result)).first->second;
  }

  FpMat apply_d(int n, const FpMat& cols) { return fp_mul(tot_d_[n], cols); }

  static void add_cols(FpSpan& span, const FpMat& m) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      std::vector<long> v(m.rows);
      for (std::size_t i = 0; i < m.rows; ++i) v[i] = m(i, j);
      span.add(std::move(v));
    }
  }

  const Bicomplex& b_;
  long p_;
  std::vector<std::vector<std::size_t>> tot_off_;
  std::vector<std::size_t> tot_rank_;
  std::vector<FpMat> tot_d_;
  std::map<std::tuple<int, int, int>, FpMat> cache_;
};

}  // namespace detail

/// Pages E_1 .. E_r_max of the column filtration, over a prime field.
/// Entries are reported for p+q <= n_max-1 and flagged stable once every later
/// differential is forced to vanish (source below the first column, target below
/// the first row).
inline std::vector<PageTable> spectral_pages(const Bicomplex& b, int r_max) {
  detail::PageEngine engine(b);
  std::vector<PageTable> pages;
  for (int r = 1; r <= r_max; ++r) {
    PageTable table;
    table.r = r;
    for (int p = 0; p + 1 <= b.n_max; ++p)
      for (int q = 0; p + q + 1 <= b.n_max; ++q) {
        PageEntry e;
        e.p = p;
        e.q = q;
        e.dim = engine.page_dim(r, p, q);
        if (p + q + 2 <= b.n_max) e.d_rank = static_cast<long>(engine.d_rank(r, p, q));
        e.stable = r >= std::max(p + 1, q + 2);
        table.entries.push_back(e);
      }
    pages.push_back(std::move(table));
  }
  return pages;
}

/// E_infinity dimension at (p,q): the page where both legs are structurally zero.
inline std::size_t e_infinity_dim(const Bicomplex& b, int p, int q) {
  detail::PageEngine engine(b);
  return engine.page_dim(std::max(p + 1, q + 2), p, q);
}

/// Abutment dimensions dim H^n(Tot) for n <= n_max-1 over the field.
inline std::vector<std::size_t> tot_cohomology_dims(const Bicomplex& b) {
  detail::PageEngine engine(b);
  std::vector<std::size_t> out;
  for (int n = 0; n + 1 <= b.n_max; ++n) out.push_back(engine.tot_cohomology_dim(n));
  return out;
}

// ---------------------------------------------------------------------------
// E_2 identification through the expanded fibers
// ---------------------------------------------------------------------------

namespace detail {

struct HBasisFp {
  FpMat gens;  // image generators followed by chosen representatives
  FpMat reps;  // representative cycles, one column per cohomology class
  std::size_t im_cols = 0;
};

/// Image generators of d^{q-1} plus representative kernel vectors completing them.
inline HBasisFp h_basis(const CochainComplex& cx, int q, long p) {
  FpMat dq = fp_from(cx.d[q], p);
  FpMat kern = fp_kernel(dq);
  FpMat im(p, cx.ranks[q], 0);
  if (q > 0) im = fp_from(cx.d[q - 1], p);
  HBasisFp out;
  out.im_cols = im.cols;
  FpSpan span(p);
  for (std::size_t j = 0; j < im.cols; ++j) {
    std::vector<long> v(im.rows);
    for (std::size_t i = 0; i < im.rows; ++i) v[i] = im(i, j);
    span.add(std::move(v));
  }
  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < kern.cols; ++j) {
    std::vector<long> v(kern.rows);
    for (std::size_t i = 0; i < kern.rows; ++i) v[i] = kern(i, j);
    if (span.add(std::move(v))) chosen.push_back(j);
  }
  out.reps = FpMat(p, cx.ranks[q], chosen.size());
  for (std::size_t c = 0; c < chosen.size(); ++c)
    for (std::size_t i = 0; i < kern.rows; ++i) out.reps(i, c) = kern(i, chosen[c]);
  out.gens = fp_hcat(im, out.reps);
  return out;
}

/// Matrix of the induced map on cohomology, given a chain-map component.
inline FpMat induced_on_h(const FpMat& comp, const HBasisFp& src, const HBasisFp& tgt) {
  FpMat mapped = fp_mul(comp, src.reps);
  FpMat coords = fp_solve(tgt.gens, mapped);
  FpMat out(comp.p, tgt.reps.cols, src.reps.cols);
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j) out(i, j) = coords(tgt.im_cols + i, j);
  return out;
}

inline Mat to_mat(const FpMat& m) {
  Mat out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace detail

/// Cohomology of the expanded fibers with the restricted coefficients, as a
/// contravariant functor on the base, one natural system per degree q.
struct FiberE2 {
  // dims[q][k] = dim H^q(expanded fiber over k); systems[q] = induced coefficients on the base
  std::vector<std::vector<std::size_t>> dims;
  std::vector<NaturalSystem> systems;
  // table[q] = H^p(base, systems[q]) dims for p <= n_max-1-q
  std::vector<std::vector<std::size_t>> table;

  [[nodiscard]] std::size_t e2(int p, int q) const { return table[q][p]; }
};

inline FiberE2 e2_from_tilde_fibers(const Diagram& dg, const GrothendieckCategory& g,
                                    const NaturalSystem& d, int n_max,
                                    std::size_t budget = kDefaultRankBudget) {
  if (!d.ring().is_field()) throw NotAField("e2_from_tilde_fibers requires prime-field coefficients");
  const long p = d.ring().p;
  const FiniteCategory& k = dg.base;
  std::vector<TildeFiber> tf;
  std::vector<BWComplex> cx;
  for (int ko = 0; ko < k.objects(); ++ko) {
    tf.push_back(tilde_fiber(dg, ko));
    CatFunctor ik = forgetful_ik(dg, tf.back(), g);
    cx.push_back(bw_cochain(tf.back().cat, natsys_pullback(ik, d), n_max, budget));
  }
  // chain-level restrictions along the expanded-fiber functors
  std::vector<CochainMap> pull(k.morphisms());
  for (int gamma = 0; gamma < k.morphisms(); ++gamma) {
    CatFunctor fn = tilde_functor(dg, tf[k.src(gamma)], tf[k.tgt(gamma)], gamma);
    pull[gamma] = bw_pullback_map(fn, cx[k.tgt(gamma)], cx[k.src(gamma)]);
    ValidationReport rep = pull[gamma].validate();
    if (!rep.ok()) throw Error("e2_from_tilde_fibers: restriction is not a chain map: " + rep.summary());
  }
  FiberE2 out;
  for (int q = 0; q + 1 <= n_max; ++q) {
    std::vector<detail::HBasisFp> bases;
    std::vector<std::size_t> obj_ranks;
    for (int ko = 0; ko < k.objects(); ++ko) {
      bases.push_back(detail::h_basis(cx[ko].cx, q, p));
      obj_ranks.push_back(bases.back().reps.cols);
    }
    std::vector<Mat> mats(k.morphisms());
    for (int gamma = 0; gamma < k.morphisms(); ++gamma) {
      FpMat comp = fp_from(pull[gamma].comp[q], p);
      mats[gamma] = detail::to_mat(detail::induced_on_h(comp, bases[k.tgt(gamma)], bases[k.src(gamma)]));
    }
    out.systems.push_back(natsys_from_contravariant(k, d.ring(), obj_ranks, mats));
    out.dims.push_back(obj_ranks);
    auto h = bw_cohomology(k, out.systems.back(), n_max - q, budget);
    std::vector<std::size_t> row;
    for (const auto& inv : h) row.push_back(inv.free_rank);
    out.table.push_back(std::move(row));
  }
  return out;
}

/// Compare the direct page computation with the fiberwise identification.
struct E2Report {
  bool pass = true;
  std::vector<std::array<std::size_t, 4>> mismatches;  // (p, q, page dim, fiber dim)
};

inline E2Report compare_e2(const Bicomplex& b, const FiberE2& fibers) {
  detail::PageEngine engine(b);
  E2Report rep;
  for (int q = 0; q + 1 <= b.n_max; ++q)
    for (int p = 0; p + q + 1 <= b.n_max; ++p) {
      std::size_t lhs = engine.page_dim(2, p, q);
      std::size_t rhs = fibers.e2(p, q);
      if (lhs != rhs) {
        rep.pass = false;
        rep.mismatches.push_back({static_cast<std::size_t>(p), static_cast<std::size_t>(q), lhs, rhs});
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// The localized E_2 through the plain fibers
// ---------------------------------------------------------------------------

struct Theorem2Report {
  enum class Status { Pass, Fail, HypothesisFails };
  Status status = Status::Pass;
  bool h_local = false;
  E2Report versus_tilde;                      // plain-fiber E_2 vs expanded-fiber E_2
  E2Report versus_pages;                      // plain-fiber E_2 vs direct pages
  std::vector<std::size_t> abutment_expected; // dim H^n of the glued category
  std::vector<std::size_t> abutment_pages;    // sums of stable page dims
  bool abutment_pass = true;

  [[nodiscard]] bool pass() const { return status == Status::Pass; }
};

inline Theorem2Report check_theorem2(const Diagram& dg, const GrothendieckCategory& g,
                                     const NaturalSystem& d, int n_max,
                                     std::size_t budget = kDefaultRankBudget) {
  Theorem2Report rep;
  rep.h_local = is_h_local(d, dg, g, n_max, budget);
  if (!rep.h_local) {
    rep.status = Theorem2Report::Status::HypothesisFails;
    return rep;
  }
  if (!d.ring().is_field()) throw NotAField("check_theorem2 requires prime-field coefficients");
  const long p = d.ring().p;
  const FiniteCategory& k = dg.base;

  // per-object data: expanded fiber complexes with both coefficient systems,
  // the plain fiber complexes, and the two comparison chain maps
  std::vector<TildeFiber> tf;
  std::vector<BWComplex> cx_e;      // expanded fiber, restricted coefficients
  std::vector<BWComplex> cx_tilde;  // expanded fiber, unit-twisted coefficients
  std::vector<BWComplex> cx_fiber;  // plain fiber, induced coefficients
  std::vector<CochainMap> t_cmp;    // E -> E~
  std::vector<CochainMap> u_cmp;    // E~ -> plain fiber (restriction along r)
  for (int ko = 0; ko < k.objects(); ++ko) {
    tf.push_back(tilde_fiber(dg, ko));
    CatFunctor ik = forgetful_ik(dg, tf.back(), g);
    NaturalSystem e = natsys_pullback(ik, d);
    Adjunction adj = adjoint_lr(dg, tf.back());
    TildeSystem ts = tilde_system(adj, e);
    NaturalSystem dk = restrict_Dk(d, g, dg, ko);
    // the pushed system equals the induced one on the plain fiber, matrix for matrix
    NaturalSystem bar = bar_system(adj, e);
    for (int xi = 0; xi < dg.fiber[ko].morphisms(); ++xi)
      if (bar.rank(xi) != dk.rank(xi)) throw Error("check_theorem2: fiber systems disagree");
    cx_e.push_back(bw_cochain(tf.back().cat, e, n_max, budget));
    cx_tilde.push_back(bw_cochain(tf.back().cat, ts.system, n_max, budget));
    cx_fiber.push_back(bw_cochain(dg.fiber[ko], dk, n_max, budget));
    t_cmp.push_back(bw_map_from_system_map(cx_e.back(), cx_tilde.back(), ts.comparison));
    u_cmp.push_back(bw_pullback_map(adj.r, cx_tilde.back(), cx_fiber.back()));
    for (bool ok : cone_acyclic(u_cmp.back()))
      if (!ok) {
        rep.status = Theorem2Report::Status::Fail;
        return rep;
      }
  }

  // expanded-fiber identification and chain-level restrictions, as in the direct route
  FiberE2 tilde_e2 = e2_from_tilde_fibers(dg, g, d, n_max, budget);

  std::vector<CochainMap> pull(k.morphisms());
  for (int gamma = 0; gamma < k.morphisms(); ++gamma) {
    CatFunctor fn = tilde_functor(dg, tf[k.src(gamma)], tf[k.tgt(gamma)], gamma);
    pull[gamma] = bw_pullback_map(fn, cx_e[k.tgt(gamma)], cx_e[k.src(gamma)]);
  }

  // build the plain-fiber E_2 table: transport the induced maps through the
  // isomorphisms H(expanded, E) -> H(expanded, E~) -> H(plain fiber)
  FiberE2 fiber_e2;
  for (int q = 0; q + 1 <= n_max; ++q) {
    std::vector<detail::HBasisFp> base_e, base_f;
    std::vector<FpMat> v, v_inv;  // H^q(expanded, E) -> H^q(plain fiber)
    std::vector<std::size_t> obj_ranks;
    for (int ko = 0; ko < k.objects(); ++ko) {
      base_e.push_back(detail::h_basis(cx_e[ko].cx, q, p));
      base_f.push_back(detail::h_basis(cx_fiber[ko].cx, q, p));
      FpMat through = fp_mul(fp_from(u_cmp[ko].comp[q], p), fp_from(t_cmp[ko].comp[q], p));
      FpMat vk = detail::induced_on_h(through, base_e.back(), base_f.back());
      if (vk.rows != vk.cols) throw Error("check_theorem2: fiber comparison is not square");
      v.push_back(vk);
      v_inv.push_back(vk.rows ? fp_inverse(vk) : vk);
      obj_ranks.push_back(base_f.back().reps.cols);
    }
    std::vector<Mat> mats(k.morphisms());
    for (int gamma = 0; gamma < k.morphisms(); ++gamma) {
      int src = k.src(gamma), tgt = k.tgt(gamma);
      FpMat ind = detail::induced_on_h(fp_from(pull[gamma].comp[q], p), base_e[tgt], base_e[src]);
      mats[gamma] = detail::to_mat(fp_mul(v[src], fp_mul(ind, v_inv[tgt])));
    }
    fiber_e2.systems.push_back(natsys_from_contravariant(k, d.ring(), obj_ranks, mats));
    fiber_e2.dims.push_back(obj_ranks);
    auto h = bw_cohomology(k, fiber_e2.systems.back(), n_max - q, budget);
    std::vector<std::size_t> row;
    for (const auto& inv : h) row.push_back(inv.free_rank);
    fiber_e2.table.push_back(std::move(row));
  }

  // plain-fiber E_2 vs expanded-fiber E_2
  for (int q = 0; q + 1 <= n_max; ++q)
    for (int po = 0; po + q + 1 <= n_max; ++po) {
      std::size_t lhs = fiber_e2.e2(po, q), rhs = tilde_e2.e2(po, q);
      if (lhs != rhs) {
        rep.versus_tilde.pass = false;
        rep.versus_tilde.mismatches.push_back(
            {static_cast<std::size_t>(po), static_cast<std::size_t>(q), lhs, rhs});
      }
    }

  // plain-fiber E_2 vs the direct page computation and the abutment
  Bicomplex b = build_bicomplex(dg, g, d, n_max, budget);
  rep.versus_pages = compare_e2(b, fiber_e2);
  detail::PageEngine engine(b);
  for (int n = 0; n + 1 <= b.n_max; ++n) {
    std::size_t sum = 0;
    for (int po = 0; po <= n; ++po) sum += engine.page_dim(std::max(po + 1, n - po + 2), po, n - po);
    rep.abutment_pages.push_back(sum);
    rep.abutment_expected.push_back(engine.tot_cohomology_dim(n));
  }
  rep.abutment_pass = rep.abutment_pages == rep.abutment_expected;
  // the expected abutment is the cohomology of the glued category itself,
  // certified by the quasi-isomorphism into Tot elsewhere; cross-check directly
  BWComplex f = bw_cochain(g.cat, d, n_max, budget);
  for (int n = 0; n + 1 <= b.n_max; ++n) {
    if (cohomology_at(f.cx, n).free_rank != rep.abutment_expected[static_cast<std::size_t>(n)])
      rep.abutment_pass = false;
  }
  if (!rep.versus_tilde.pass || !rep.versus_pages.pass || !rep.abutment_pass)
    rep.status = Theorem2Report::Status::Fail;
  return rep;
}

// ---------------------------------------------------------------------------
// Integer page invariants (no convergence claims)
// ---------------------------------------------------------------------------

/// E_1 and E_2 of the column filtration over the integers, as abelian-group
/// invariants for p+q <= n_max-1. Extension problems make abutment comparison
/// by invariants unsound, so nothing beyond the tables is claimed.
struct IntegerPages {
  std::vector<std::vector<AbInvariants>> e1, e2;  // [p][q]
};

inline IntegerPages spectral_pages_zz(const Bicomplex& b) {
  if (b.ring.tag != Ring::Tag::ZZ) throw Error("spectral_pages_zz expects integer coefficients");
  IntegerPages out;
  int n_max = b.n_max;
  std::vector<std::vector<Mat>> kernels(n_max + 1);  // kernel bases of the vertical differential
  for (int p = 0; p <= n_max; ++p) {
    kernels[p].resize(n_max + 1 - p);
    out.e1.emplace_back();
    for (int q = 0; p + q + 1 <= n_max; ++q) {
      kernels[p][q] = zz_kernel(b.partial(p, q));
      // invariants of ker/im at (p,q)
      Mat coords = kernels[p][q].cols() > 0 && q > 0
                       ? zz_solve(kernels[p][q], b.partial(p, q - 1))
                       : Mat(kernels[p][q].cols(), q > 0 ? b.rank(p, q - 1) : 0);
      out.e1.back().push_back(cokernel_invariants(kernels[p][q].cols(), coords));
    }
  }
  for (int p = 0; p + 1 <= n_max; ++p) {
    out.e2.emplace_back();
    for (int q = 0; p + q + 1 <= n_max; ++q) {
      const Mat& kpq = kernels[p][q];
      // numerator: classes whose horizontal image dies in E_1 at (p+1, q)
      Mat dk = b.delta(p, q) * kpq;
      Mat im_next = q > 0 ? b.partial(p + 1, q - 1) : Mat(b.rank(p + 1, q), 0);
      Mat num_gens;
      {
        Mat cat = dk.hcat(-im_next);
        Mat ker = zz_kernel(cat);
        num_gens = Mat(kpq.cols(), ker.cols());
        for (std::size_t i = 0; i < num_gens.rows(); ++i)
          for (std::size_t j = 0; j < ker.cols(); ++j) num_gens(i, j) = ker(i, j);
      }
      // denominator: horizontal images from (p-1, q) plus vertical boundaries
      Mat den;
      {
        Mat from_left(kpq.cols(), 0);
        if (p > 0 && kernels[p - 1][q].cols() > 0) {
          Mat dl = b.delta(p - 1, q) * kernels[p - 1][q];
          from_left = zz_solve(kpq, dl);
        }
        Mat bdry(kpq.cols(), 0);
        if (q > 0) bdry = zz_solve(kpq, b.partial(p, q - 1));
        den = from_left.hcat(bdry);
      }
      // basis of the numerator lattice, then the quotient invariants
      SmithResult sr = smith_normal_form(num_gens);
      Mat uinv = zz_solve(sr.u, Mat::identity(sr.u.rows()));
      Mat basis(num_gens.rows(), sr.rank);
      for (std::size_t j = 0; j < sr.rank; ++j)
        for (std::size_t i = 0; i < num_gens.rows(); ++i) basis(i, j) = uinv(i, j) * sr.s(j, j);
      Mat den_coords = basis.cols() > 0 ? zz_solve(basis, den) : Mat(0, den.cols());
      out.e2.back().push_back(cokernel_invariants(basis.cols(), den_coords));
    }
  }
  return out;
}

}  // namespace catcoh
