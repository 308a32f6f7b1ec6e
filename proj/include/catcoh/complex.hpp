#pragma once

#include <string>
#include <vector>

#include "catcoh/smith.hpp"

namespace catcoh {

/// Isomorphism class of a finitely generated abelian group:
/// free rank plus torsion coefficients d1 | d2 | ... , each >= 2.
/// Over a prime field the torsion list is empty and free_rank is the dimension.
struct AbInvariants {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;

  [[nodiscard]] bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const AbInvariants& o) const { return free_rank == o.free_rank && torsion == o.torsion; }
  bool operator!=(const AbInvariants& o) const { return !(*this == o); }

  [[nodiscard]] std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    if (free_rank == 1)
      s = "Z";
    else if (free_rank > 1)
      s = "Z^" + std::to_string(free_rank);
    for (const auto& t : torsion) {
      if (!s.empty()) s += " + ";
      s += "Z/" + t.get_str();
    }
    return s;
  }
};

/// Invariants of Z^ambient / column-span(x).
inline AbInvariants cokernel_invariants(std::size_t ambient, const Mat& x) {
  assert(x.rows() == ambient);
  AbInvariants inv;
  auto diag = smith_diagonal(x);
  std::size_t rank = 0;
  for (const auto& d : diag) {
    if (d == 0) continue;
    ++rank;
    if (d >= 2) inv.torsion.push_back(d);
  }
  inv.free_rank = ambient - rank;
  return inv;
}

/// Graded free modules with differentials d[n] : degree n -> degree n+1.
/// Stored degrees are 0..ranks.size()-1; cohomology is trusted only below the top
/// stored degree because the kernel of the top differential is unknown.
struct CochainComplex {
  Ring ring;
  std::vector<std::size_t> ranks;  // per degree
  std::vector<Mat> d;              // d[n] has shape ranks[n+1] x ranks[n]

  [[nodiscard]] long top_degree() const { return static_cast<long>(ranks.size()) - 1; }
  [[nodiscard]] long trusted_degree() const { return static_cast<long>(ranks.size()) - 2; }

  [[nodiscard]] ValidationReport validate() const {
    ValidationReport rep;
    rep.check(d.size() + 1 == ranks.size() || (ranks.size() <= 1 && d.empty()),
              "differential count does not match degree count");
    for (std::size_t n = 0; n + 1 < ranks.size() && n < d.size(); ++n) {
      if (d[n].rows() != ranks[n + 1] || d[n].cols() != ranks[n]) {
        rep.fail("d[" + std::to_string(n) + "] has shape " + std::to_string(d[n].rows()) + "x" +
                 std::to_string(d[n].cols()) + ", expected " + std::to_string(ranks[n + 1]) + "x" +
                 std::to_string(ranks[n]));
        return rep;
      }
    }
    for (std::size_t n = 0; n + 1 < d.size(); ++n)
      rep.check(mat_is_zero(d[n + 1] * d[n], ring), "d*d != 0 at degree " + std::to_string(n));
    return rep;
  }
};

/// ker(d_n) / im(d_{n-1}) as abelian-group invariants.
/// Throws DegreeBeyondTrusted above the trusted degree.
inline AbInvariants cohomology_at(const CochainComplex& cx, long n) {
  if (n < 0 || n > cx.trusted_degree())
    throw DegreeBeyondTrusted("cohomology_at: degree " + std::to_string(n) + " beyond trusted degree " +
                              std::to_string(cx.trusted_degree()));
  const Mat& dn = cx.d[static_cast<std::size_t>(n)];
  if (cx.ring.tag == Ring::Tag::Fp) {
    std::size_t rk_dn = fp_rank(dn, cx.ring.p);
    std::size_t rk_prev = n > 0 ? fp_rank(cx.d[static_cast<std::size_t>(n - 1)], cx.ring.p) : 0;
    return AbInvariants{cx.ranks[static_cast<std::size_t>(n)] - rk_dn - rk_prev, {}};
  }
  // Over Z: the kernel of d_n is a direct summand, so the torsion of H^n equals
  // the torsion of coker(d_{n-1}) and the free rank is dim ker - rank im.
  std::size_t rk_dn = rank_zz(dn);
  AbInvariants inv;
  std::size_t rk_prev = 0;
  if (n > 0) {
    auto diag = smith_diagonal(cx.d[static_cast<std::size_t>(n - 1)]);
    for (const auto& e : diag) {
      if (e == 0) continue;
      ++rk_prev;
      if (e >= 2) inv.torsion.push_back(e);
    }
  }
  inv.free_rank = cx.ranks[static_cast<std::size_t>(n)] - rk_dn - rk_prev;
  return inv;
}

inline std::vector<AbInvariants> cohomology_all(const CochainComplex& cx) {
  std::vector<AbInvariants> out;
  for (long n = 0; n <= cx.trusted_degree(); ++n) out.push_back(cohomology_at(cx, n));
  return out;
}

/// Degreewise map of cochain complexes (same coefficient ring).
struct CochainMap {
  CochainComplex source, target;
  std::vector<Mat> comp;  // comp[n] : source.ranks[n] -> target.ranks[n]

  [[nodiscard]] ValidationReport validate() const {
    ValidationReport rep;
    rep.check(source.ring == target.ring, "source and target ring differ");
    std::size_t degrees = std::min(source.ranks.size(), target.ranks.size());
    rep.check(comp.size() >= degrees, "missing components");
    if (!rep.ok()) return rep;
    for (std::size_t n = 0; n < degrees; ++n) {
      if (comp[n].rows() != target.ranks[n] || comp[n].cols() != source.ranks[n]) {
        rep.fail("component " + std::to_string(n) + " has wrong shape");
        return rep;
      }
    }
    for (std::size_t n = 0; n + 1 < degrees; ++n) {
      rep.check(mat_eq(target.d[n] * comp[n], comp[n + 1] * source.d[n], source.ring),
                "does not commute with differentials at degree " + std::to_string(n));
    }
    return rep;
  }
};

/// Mapping cone of f : X -> Y, shifted to start in degree 0: cone^n = X^n (+) Y^{n-1}
/// with D(x, y) = (-d x, f x + d y). Acyclicity in all degrees certifies that f is a
/// quasi-isomorphism, including injectivity/surjectivity at the bottom.
inline CochainComplex mapping_cone(const CochainMap& f) {
  ValidationReport rep = f.validate();
  if (!rep.ok()) throw NotAChainMap("mapping_cone: " + rep.summary());
  const CochainComplex& x = f.source;
  const CochainComplex& y = f.target;
  std::size_t degrees = std::min(x.ranks.size(), y.ranks.size());  // stored degrees 0..degrees-1
  CochainComplex cone;
  cone.ring = x.ring;
  if (degrees == 0) return cone;
  cone.ranks.push_back(x.ranks[0]);
  for (std::size_t n = 1; n < degrees; ++n) cone.ranks.push_back(x.ranks[n] + y.ranks[n - 1]);
  for (std::size_t n = 0; n + 1 < degrees; ++n) {
    Mat d(cone.ranks[n + 1], cone.ranks[n]);
    d.add_block(0, 0, x.d[n], -1);
    d.add_block(x.ranks[n + 1], 0, f.comp[n]);
    if (n >= 1) d.add_block(x.ranks[n + 1], x.ranks[n], y.d[n - 1]);
    cone.d.push_back(std::move(d));
  }
  return cone;
}

/// Whether H^n(cone f) vanishes, per degree up to the cone's trusted bound.
/// Empty result means no degree is trusted.
inline std::vector<bool> cone_acyclic(const CochainMap& f) {
  CochainComplex cone = mapping_cone(f);
  std::vector<bool> out;
  for (long n = 0; n <= cone.trusted_degree(); ++n) out.push_back(cohomology_at(cone, n).is_zero());
  return out;
}

}  // namespace catcoh
