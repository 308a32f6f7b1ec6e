#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace catcoh;
using testutil::Rng;

TEST_CASE("glued category of pinned diagrams") {
  // terminal base: the glued category is the fiber
  Diagram triv;
  triv.base = testutil::terminal_category();
  triv.fiber = {testutil::interval_category()};
  triv.on_mor = {identity_functor(triv.fiber[0])};
  GrothendieckCategory g = grothendieck_construction(triv);
  CHECK(g.cat.objects() == 2);
  CHECK(g.cat.morphisms() == 3);

  // one-object group acting on a point
  GrothendieckCategory gb = grothendieck_construction(testutil::example_b());
  CHECK(gb.cat.objects() == 1);
  CHECK(gb.cat.morphisms() == 2);

  // swap action on a discrete pair: every hom-set a singleton
  GrothendieckCategory gc = grothendieck_construction(testutil::example_c());
  CHECK(gc.cat.objects() == 2);
  CHECK(gc.cat.morphisms() == 4);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(gc.cat.hom(x, y).size() == 1);

  // hom-set count formula on the poset diagram
  Diagram da = testutil::example_a();
  GrothendieckCategory ga = grothendieck_construction(da);
  CHECK(ga.cat.objects() == 3);
  CHECK(ga.cat.morphisms() == 6);
  for (int x0 = 0; x0 < ga.cat.objects(); ++x0)
    for (int x1 = 0; x1 < ga.cat.objects(); ++x1) {
      auto [k0, o0] = ga.obj_label[x0];
      auto [k1, o1] = ga.obj_label[x1];
      std::size_t expected = 0;
      for (int alpha : da.base.hom(k0, k1))
        expected += da.fiber[k1].hom(da.on_mor[alpha].obj(o0), o1).size();
      CHECK(ga.cat.hom(x0, x1).size() == expected);
    }
}

TEST_CASE("projection to the base is a functor and fibers embed") {
  Diagram dg = testutil::example_c();
  GrothendieckCategory g = grothendieck_construction(dg);
  CatFunctor pr = grothendieck_projection(dg, g);
  CHECK(validate_functor(pr).ok());
  for (int xi = 0; xi < dg.fiber[0].morphisms(); ++xi) {
    int m = g.mor(dg.base.identity(0), dg.fiber[0].src(xi), xi);
    CHECK(pr.mor(m) == dg.base.identity(0));
  }
}

TEST_CASE("expanded fibers of pinned diagrams") {
  Diagram triv;
  triv.base = testutil::terminal_category();
  triv.fiber = {testutil::interval_category()};
  triv.on_mor = {identity_functor(triv.fiber[0])};
  TildeFiber tf = tilde_fiber(triv, 0);
  CHECK(tf.cat.objects() == 2);
  CHECK(tf.cat.morphisms() == 3);

  TildeFiber tb = tilde_fiber(testutil::example_b(), 0);
  CHECK(tb.cat.objects() == 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(tb.cat.hom(x, y).size() == 1);

  TildeFiber tc = tilde_fiber(testutil::example_c(), 0);
  CHECK(tc.cat.objects() == 4);
}

TEST_CASE("expanded-fiber functors commute with the forgetful functors") {
  for (auto dg : {testutil::example_a(), testutil::example_b(), testutil::example_c()}) {
    GrothendieckCategory g = grothendieck_construction(dg);
    std::vector<TildeFiber> tf;
    for (int k = 0; k < dg.base.objects(); ++k) tf.push_back(tilde_fiber(dg, k));
    for (int gamma = 0; gamma < dg.base.morphisms(); ++gamma) {
      int ks = dg.base.src(gamma), kt = dg.base.tgt(gamma);
      CatFunctor lg = tilde_functor(dg, tf[ks], tf[kt], gamma);
      CHECK(validate_functor(lg).ok());
      CatFunctor ik = forgetful_ik(dg, tf[ks], g);
      CatFunctor ikp = forgetful_ik(dg, tf[kt], g);
      CHECK(compose_functors(ikp, lg) == ik);
      if (gamma == dg.base.identity(dg.base.src(gamma))) {
        bool is_id = lg == identity_functor(tf[ks].cat);
        CHECK(is_id);
      }
    }
    // strict functoriality of the expanded-fiber assignment
    for (int f = 0; f < dg.base.morphisms(); ++f)
      for (int gmor : dg.base.mors_from(dg.base.tgt(f))) {
        int ks = dg.base.src(f), km = dg.base.tgt(f), kt = dg.base.tgt(gmor);
        CatFunctor a = tilde_functor(dg, tf[ks], tf[km], f);
        CatFunctor b = tilde_functor(dg, tf[km], tf[kt], gmor);
        CatFunctor ab = tilde_functor(dg, tf[ks], tf[kt], dg.base.compose(gmor, f));
        bool equal = compose_functors(b, a) == ab;
        CHECK(equal);
      }
  }
}

TEST_CASE("fiber adjunction on the swap diagram moves objects along the action") {
  Diagram dg = testutil::example_c();
  TildeFiber tf = tilde_fiber(dg, 0);
  Adjunction adj = adjoint_lr(dg, tf);
  // (g, x0) is sent to the swapped fiber object x1
  int o = tf.obj(1, 0);
  CHECK(adj.l.obj(o) == 1);
  CHECK(adj.l.obj(tf.obj(0, 0)) == 0);
}

TEST_CASE("fiber adjunctions validate and satisfy the triangle identity") {
  for (auto dg : {testutil::example_a(), testutil::example_b(), testutil::example_c()}) {
    for (int k = 0; k < dg.base.objects(); ++k) {
      TildeFiber tf = tilde_fiber(dg, k);
      Adjunction adj = adjoint_lr(dg, tf);
      CHECK(validate_adjunction(adj).ok());
      for (int o = 0; o < tf.cat.objects(); ++o) {
        int eps = adj.unit[o];
        CHECK(adj.l.mor(eps) == dg.fiber[k].identity(adj.l.obj(o)));
      }
    }
  }
}

TEST_CASE("restricted and pushed fiber systems coincide") {
  Rng rng(42);
  for (auto dg : {testutil::example_a(), testutil::example_b(), testutil::example_c()}) {
    GrothendieckCategory g = grothendieck_construction(dg);
    for (int iter = 0; iter < 3; ++iter) {
      NaturalSystem d = testutil::random_natural_system(rng, g.cat, Ring::zz(), 2);
      for (int k = 0; k < dg.base.objects(); ++k) {
        TildeFiber tf = tilde_fiber(dg, k);
        CatFunctor ik = forgetful_ik(dg, tf, g);
        NaturalSystem e = natsys_pullback(ik, d);
        Adjunction adj = adjoint_lr(dg, tf);
        NaturalSystem bar = bar_system(adj, e);
        NaturalSystem dk = restrict_Dk(d, g, dg, k);
        const FiniteCategory& fib = dg.fiber[k];
        for (int xi = 0; xi < fib.morphisms(); ++xi) {
          CHECK(bar.rank(xi) == dk.rank(xi));
          for (int psi : fib.mors_from(fib.tgt(xi))) CHECK(bar.post(psi, xi) == dk.post(psi, xi));
          for (int nu : fib.mors_into(fib.src(xi))) CHECK(bar.pre(nu, xi) == dk.pre(nu, xi));
        }
        // pullback systems glue along the expanded-fiber functors
        for (int gamma : dg.base.mors_from(k)) {
          int kp = dg.base.tgt(gamma);
          TildeFiber tfp = tilde_fiber(dg, kp);
          CatFunctor lg = tilde_functor(dg, tf, tfp, gamma);
          NaturalSystem via = natsys_pullback(lg, natsys_pullback(forgetful_ik(dg, tfp, g), d));
          for (int m = 0; m < tf.cat.morphisms(); ++m) CHECK(via.rank(m) == e.rank(m));
          for (int m = 0; m < tf.cat.morphisms(); ++m)
            for (int psi : tf.cat.mors_from(tf.cat.tgt(m))) CHECK(via.post(psi, m) == e.post(psi, m));
        }
      }
    }
  }
}

TEST_CASE("locality of systems on glued categories") {
  Rng rng(77);
  // groupoid base: always local
  for (auto dg : {testutil::example_b(), testutil::example_c()}) {
    GrothendieckCategory g = grothendieck_construction(dg);
    NaturalSystem d = natsys_constant(g.cat, Ring::zz(), 1);
    CHECK(is_local(d, dg, g));
    CHECK(is_h_local(d, dg, g, 3));
    NaturalSystem dr = testutil::random_natural_system(rng, g.cat, Ring::zz(), 2);
    CHECK(is_local(dr, dg, g));
  }
  // contravariant-induced systems are local over any base
  Diagram da = testutil::example_a();
  GrothendieckCategory ga = grothendieck_construction(da);
  NaturalSystem m = testutil::random_functor_system(rng, ga.cat, Ring::zz(), 2, false);
  CHECK(is_local(m, da, ga));
  CHECK(is_h_local(m, da, ga, 3));  // local implies cohomologically local

  // the doubling system is neither
  Diagram di = testutil::diagram_over_interval();
  GrothendieckCategory gi = grothendieck_construction(di);
  NaturalSystem dbl = testutil::doubling_system(gi);
  CHECK(!is_local(dbl, di, gi));
  CHECK(!is_h_local(dbl, di, gi, 3));

  // local implies cohomologically local on every generated instance
  for (auto dg : {testutil::example_a(), testutil::example_b(), testutil::example_c()}) {
    GrothendieckCategory g = grothendieck_construction(dg);
    for (int iter = 0; iter < 3; ++iter) {
      NaturalSystem d = testutil::random_natural_system(rng, g.cat, Ring::zz(), 2);
      if (is_local(d, dg, g)) CHECK(is_h_local(d, dg, g, 3));
    }
  }
}

TEST_CASE("restriction to the plain fiber transfers cohomology on examples") {
  for (auto dg : {testutil::example_b(), testutil::example_c()}) {
    GrothendieckCategory g = grothendieck_construction(dg);
    for (auto ring : {Ring::zz(), Ring::fp(2)}) {
      NaturalSystem d = natsys_constant(g.cat, ring, 1);
      for (int k = 0; k < dg.base.objects(); ++k) {
        TildeFiber tf = tilde_fiber(dg, k);
        CatFunctor ik = forgetful_ik(dg, tf, g);
        Adjunction adj = adjoint_lr(dg, tf);
        TildeSystem ts = tilde_system(adj, natsys_pullback(ik, d));
        NaturalSystem dk = restrict_Dk(d, g, dg, k);
        auto lhs = bw_cohomology(dg.fiber[k], dk, 4);
        auto rhs = bw_cohomology(tf.cat, ts.system, 4);
        REQUIRE(lhs.size() == rhs.size());
        for (std::size_t n = 0; n < lhs.size(); ++n) CHECK(lhs[n] == rhs[n]);
      }
    }
  }
}
