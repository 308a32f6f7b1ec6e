#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace catcoh;
using testutil::Rng;

TEST_CASE("factorization category of small categories") {
  FactorizationCategory fpt = build_factorization_category(testutil::terminal_category());
  CHECK(fpt.cat.objects() == 1);
  CHECK(fpt.cat.morphisms() == 1);

  FiniteCategory i = testutil::interval_category();  // morphisms: id_a=0, cross=1, id_b=2
  FactorizationCategory fi = build_factorization_category(i);
  CHECK(fi.cat.objects() == 3);
  CHECK(fi.cat.hom(0, 1).size() == 1);  // id_a -> cross: only (id_a, cross)
  CHECK(fi.cat.hom(1, 0).empty());

  FactorizationCategory fz2 = build_factorization_category(build_cyclic_group_category(2));
  CHECK(fz2.cat.objects() == 2);
  CHECK(fz2.cat.hom(0, 0).size() == 2);  // psi nu = e has two solutions
}

TEST_CASE("constant systems validate") {
  for (auto ring : {Ring::zz(), Ring::fp(3)}) {
    for (std::size_t rank : {0u, 1u, 2u}) {
      NaturalSystem d = natsys_constant(testutil::interval_category(), ring, rank);
      CHECK(validate_natural_system(d).ok());
      CHECK(d.is_constant());
    }
  }
}

TEST_CASE("a corrupted action is caught") {
  FiniteCategory i = testutil::interval_category();
  NaturalSystem d = natsys_constant(i, Ring::zz(), 1);
  Mat two(1, 1);
  two(0, 0) = 2;
  d.set_post(i.identity(1), 1, two);  // id_* must be the identity
  CHECK(!validate_natural_system(d).ok());
}

TEST_CASE("functor-induced systems") {
  FiniteCategory i = testutil::interval_category();
  // covariant rank 1 with identity actions equals the constant system blockwise
  NaturalSystem cov = natsys_from_covariant(i, Ring::zz(), {1, 1},
                                            {Mat::identity(1), Mat::identity(1), Mat::identity(1)});
  CHECK(validate_natural_system(cov).ok());
  CHECK(cov.is_constant());

  // group-algebra bimodule on the one-object group Z/2
  FiniteCategory z2 = build_cyclic_group_category(2);
  Mat perm(2, 2);
  perm(0, 1) = 1;
  perm(1, 0) = 1;
  std::vector<std::vector<Mat>> left = {{Mat::identity(2)}, {perm}};
  std::vector<std::vector<Mat>> right = {{Mat::identity(2)}, {perm}};
  NaturalSystem bi = natsys_from_bifunctor(z2, Ring::zz(), {{2}}, left, right);
  CHECK(validate_natural_system(bi).ok());
  CHECK(bi.rank(0) == 2);

  // zero matrix on an identity morphism breaks identity preservation
  CHECK_THROWS_AS(
      natsys_from_covariant(i, Ring::zz(), {1, 1}, {Mat(1, 1), Mat::identity(1), Mat::identity(1)}),
      NotAFunctor);
}

TEST_CASE("the induced assignment is a functor on the factorization category") {
  Rng rng(31);
  for (int iter = 0; iter < 12; ++iter) {
    FiniteCategory c =
        iter % 3 == 2 ? build_cyclic_group_category(2) : testutil::random_poset_category(rng, 4, false);
    if (c.morphisms() > 12) continue;
    NaturalSystem d = testutil::random_natural_system(rng, c, Ring::zz(), 2);
    REQUIRE(validate_natural_system(d).ok());
    FactorizationCategory fc = build_factorization_category(c);
    for (int m1 = 0; m1 < fc.cat.morphisms(); ++m1) {
      auto [a1, nu1, psi1] = fc.mor_label[m1];
      Mat act1 = d.action(nu1, psi1, a1);
      for (int m2 : fc.cat.mors_from(fc.cat.tgt(m1))) {
        auto [a2, nu2, psi2] = fc.mor_label[m2];
        Mat act2 = d.action(nu2, psi2, a2);
        int m12 = fc.cat.compose(m2, m1);
        auto [a12, nu12, psi12] = fc.mor_label[m12];
        CHECK(mat_eq(d.action(nu12, psi12, a12), act2 * act1, d.ring()));
      }
    }
  }
}

TEST_CASE("pullback systems compose") {
  Rng rng(57);
  FiniteCategory i = testutil::interval_category();
  FiniteCategory pt = testutil::terminal_category();
  CatFunctor to_pt{i, pt, {0, 0}, {0, 0, 0}};
  CatFunctor from_pt{pt, i, {1}, {2}};

  for (int iter = 0; iter < 10; ++iter) {
    NaturalSystem d = testutil::random_natural_system(rng, i, Ring::zz(), 2);
    NaturalSystem same = natsys_pullback(identity_functor(i), d);
    CHECK(validate_natural_system(same).ok());
    for (int a = 0; a < i.morphisms(); ++a) CHECK(same.rank(a) == d.rank(a));

    // pullback along a composite equals iterated pullback, matrix for matrix
    NaturalSystem once = natsys_pullback(compose_functors(from_pt, to_pt), d);
    NaturalSystem twice = natsys_pullback(to_pt, natsys_pullback(from_pt, d));
    const FiniteCategory& base = once.base();
    for (int a = 0; a < base.morphisms(); ++a) {
      CHECK(once.rank(a) == twice.rank(a));
      for (int psi : base.mors_from(base.tgt(a))) CHECK(once.post(psi, a) == twice.post(psi, a));
      for (int nu : base.mors_into(base.src(a))) CHECK(once.pre(nu, a) == twice.pre(nu, a));
    }
  }
}

TEST_CASE("vanishing-family coefficients on the interval") {
  FiniteCategory i = testutil::interval_category();
  // T = Hom(-, b): one element over each object, maps forced
  SetPresheaf t;
  t.size = {1, 1};
  t.map = {{0}, {0}, {0}};
  REQUIRE(validate_set_presheaf(i, t).ok());
  NaturalSystem d = natsys_lemma44(i, t, 0, 0, 1, Ring::zz());
  CHECK(validate_natural_system(d).ok());
  CHECK(d.rank(i.identity(0)) == 1);  // S(id_a) = {(id_a, cross-element)}

  ATmCategory atm = build_category_aTm(i, t, 0, 0);
  CHECK(atm.cat.objects() == 2);
  CHECK(atm.cat.initial_object() == atm.initial);

  CHECK_THROWS_AS(natsys_lemma44(i, t, 0, 5, 1, Ring::zz()), ElementNotInT);
}

TEST_CASE("comparison category always has the marked initial object") {
  Rng rng(71);
  for (int iter = 0; iter < 20; ++iter) {
    FiniteCategory c =
        iter % 4 == 3 ? build_cyclic_group_category(2) : testutil::random_poset_category(rng, 5, false);
    SetPresheaf t = testutil::random_presheaf(rng, c, 3);
    std::vector<int> candidates;
    for (int a = 0; a < c.objects(); ++a)
      if (t.size[a] > 0) candidates.push_back(a);
    if (candidates.empty()) continue;
    int a = candidates[testutil::pick(rng, 0, static_cast<int>(candidates.size()) - 1)];
    int m = testutil::pick(rng, 0, t.size[a] - 1);
    ATmCategory atm = build_category_aTm(c, t, a, m);
    CHECK(atm.cat.initial_object() == atm.initial);
    bool label_ok = atm.object_label[atm.initial] == std::pair<int, int>{c.identity(a), m};
    CHECK(label_ok);
  }
}
