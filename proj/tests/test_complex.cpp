#include <catch2/catch_amalgamated.hpp>

#include "cychom/complex.hpp"
#include "support.hpp"

using namespace cychom;
using testsupport::Rng;
using Q = Rational;

namespace {

// two-term complex in degrees 1,0 with a single differential entry
ChainComplex<Q> two_term(const Q& d) {
    ChainComplex<Q> c(0, 1, 0);
    c.set_module(0, 0, BasedModule{1, {}});
    c.set_module(1, 0, BasedModule{1, {}});
    Matrix<Q> m(1, 1);
    m.set(0, 0, d);
    c.set_diff(1, 0, m);
    c.validate();
    return c;
}

}  // namespace

TEST_CASE("two-term complex with zero differential") {
    ChainComplex<Q> c = two_term(Q(0));
    CHECK(homology(c, 0, 0).dim == 1);
    CHECK(homology(c, 1, 0).dim == 1);
}

TEST_CASE("two-term complex with identity differential is acyclic") {
    ChainComplex<Q> c = two_term(Q(1));
    CHECK(homology(c, 0, 0).dim == 0);
    CHECK(homology(c, 1, 0).dim == 0);
}

TEST_CASE("homology rejects degrees outside the window") {
    ChainComplex<Q> c = two_term(Q(1));
    CHECK_THROWS_MATCHES(homology(c, 5, 0), window_error,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("5")));
}

TEST_CASE("constructor rejects d∘d != 0 naming the block") {
    ChainComplex<Q> c(0, 2, 0);
    c.set_module(0, 0, BasedModule{1, {}});
    c.set_module(1, 0, BasedModule{1, {}});
    c.set_module(2, 0, BasedModule{1, {}});
    Matrix<Q> one(1, 1);
    one.set(0, 0, Q(1));
    c.set_diff(1, 0, one);
    c.set_diff(2, 0, one);
    CHECK_THROWS_MATCHES(c.validate(), invariant_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("degree 2")));
}

TEST_CASE("good truncation edge cases") {
    ChainComplex<Q> c = two_term(Q(0));
    CHECK(good_truncate(c, 0).complex.dim(0, 0) == 1);
    CHECK(good_truncate(c, 0).complex.dim(1, 0) == 1);
    CHECK(good_truncate(c, 2).complex.is_zero());

    // d = 0: cycles are everything, so truncating at 1 keeps degree 1 alone
    Truncation<Q> t = good_truncate(c, 1);
    CHECK(t.complex.dim(1, 0) == 1);
    CHECK(t.complex.dim(0, 0) == 0);
    CHECK(homology(t.complex, 1, 0).dim == 1);
}

TEST_CASE("good truncation preserves homology at and above the cut") {
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        ChainComplex<Q> c = testsupport::random_complex(rng, -2, 3, 4);
        int n = rng.uniform(-2, 3);
        Truncation<Q> t = good_truncate(c, n);
        t.inclusion.validate();
        for (int deg = c.d_min(); deg <= c.d_max(); ++deg) {
            int expected = deg >= n ? homology(c, deg, 0).dim : 0;
            CHECK(homology(t.complex, deg, 0).dim == expected);
        }
    }
}

TEST_CASE("euler characteristic splits across truncation and quotient") {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        ChainComplex<Q> c = testsupport::random_complex(rng, -2, 2, 4);
        int n = rng.uniform(-2, 2);
        Truncation<Q> t = good_truncate(c, n);
        QuotientComplex<Q> q = quotient_complex(c, full_subcomplex(c), t.slices);
        CHECK(c.euler_per_weight()[0] ==
              t.complex.euler_per_weight()[0] + q.complex.euler_per_weight()[0]);
    }
}

TEST_CASE("shift by zero and composition of shifts") {
    Rng rng(13);
    ChainComplex<Q> c = testsupport::random_complex(rng, -1, 2, 3);
    CHECK(shift(c, 0).modules() == c.modules());
    ChainComplex<Q> s2 = shift(shift(c, 1), 1);
    ChainComplex<Q> s = shift(c, 2);
    CHECK(s2.modules() == s.modules());
    CHECK(s2.stored_diffs() == s.stored_diffs());
    // odd shift flips the sign
    ChainComplex<Q> s1 = shift(c, 1);
    for (const auto& [key, d] : c.stored_diffs())
        CHECK(s1.diff(key.first + 1, key.second) == d.scaled(Q(-1)));
}

TEST_CASE("cone of the identity map is acyclic") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        ChainComplex<Q> c = testsupport::random_complex(rng, -1, 2, 3);
        ChainMap<Q> id(c, c);
        for (const auto& [key, m] : c.modules())
            id.set_block(key.first, key.second, Matrix<Q>::identity(m.dim));
        id.validate();
        ConeFiber<Q> cf = cone_and_fiber(id);
        for (int n = cf.cone.d_min(); n <= cf.cone.d_max(); ++n)
            CHECK(homology(cf.cone, n, 0).dim == 0);
    }
}

TEST_CASE("cone of the zero map is the direct sum with a shift") {
    Rng rng(43);
    ChainComplex<Q> a = testsupport::random_complex(rng, 0, 2, 3);
    ChainComplex<Q> b = testsupport::random_complex(rng, 0, 2, 3);
    ChainMap<Q> zero(a, b);
    zero.validate();
    ConeFiber<Q> cf = cone_and_fiber(zero);
    for (int n = cf.cone.d_min(); n <= cf.cone.d_max(); ++n) {
        int expect = homology(b, std::clamp(n, 0, 2), 0).dim * (n >= 0 && n <= 2 ? 1 : 0);
        int na = n - 1;
        if (na >= 0 && na <= 2) expect += homology(a, na, 0).dim;
        CHECK(homology(cf.cone, n, 0).dim == expect);
    }
}

TEST_CASE("cone on truncation inclusion has homology below the cut") {
    Rng rng(47);
    for (int trial = 0; trial < 15; ++trial) {
        ChainComplex<Q> c = testsupport::random_complex(rng, -2, 2, 4);
        int n = rng.uniform(-1, 2);
        Truncation<Q> t = good_truncate(c, n);
        ConeFiber<Q> cf = cone_and_fiber(t.inclusion);
        for (int deg = cf.cone.d_min(); deg <= cf.cone.d_max(); ++deg) {
            int expect = (deg < n && c.in_window(deg)) ? homology(c, deg, 0).dim : 0;
            CHECK(homology(cf.cone, deg, 0).dim == expect);
        }
    }
}

TEST_CASE("connecting map: trivial and hand-checked cases") {
    // A = X: quotient vanishes
    Rng rng(53);
    ChainComplex<Q> x = testsupport::random_complex(rng, 0, 2, 3);
    StrictSES<Q> all = strict_ses(x, full_subcomplex(x));
    CHECK(all.c.complex.is_zero());

    // X = (Q -> Q, d = id), A = degree-0 part: delta is an isomorphism
    ChainComplex<Q> t = two_term(Q(1));
    Subcomplex<Q> a;
    a.set(0, 0, Subspace<Q>::full(1));
    StrictSES<Q> s = strict_ses(t, a);
    CHECK(homology(s.c.complex, 1, 0).dim == 1);
    CHECK(homology(s.a.complex, 0, 0).dim == 1);
    Matrix<Q> delta = connecting_map(s, 1, 0);
    REQUIRE(delta.rows() == 1);
    REQUIRE(delta.cols() == 1);
    CHECK_FALSE(delta.get(0, 0).is_zero());
}

TEST_CASE("connecting map vanishes for split complexes") {
    // X = A ⊕ C with both summands subcomplexes
    Rng rng(59);
    for (int trial = 0; trial < 10; ++trial) {
        ChainComplex<Q> a = testsupport::random_complex(rng, 0, 2, 2);
        ChainComplex<Q> c = testsupport::random_complex(rng, 0, 2, 2);
        ChainComplex<Q> x(0, 2, 0);
        for (int n = 0; n <= 2; ++n) {
            int d = a.dim(n, 0) + c.dim(n, 0);
            if (d) x.set_module(n, 0, BasedModule{d, {}});
        }
        for (int n = 1; n <= 2; ++n) {
            Matrix<Q> d(x.dim(n - 1, 0), x.dim(n, 0));
            a.diff(n, 0).for_each([&](int i, int j, const Q& v) { d.set(i, j, v); });
            c.diff(n, 0).for_each(
                [&](int i, int j, const Q& v) { d.set(i + a.dim(n - 1, 0), j + a.dim(n, 0), v); });
            x.set_diff(n, 0, d);
        }
        x.validate();
        Subcomplex<Q> asub;
        for (int n = 0; n <= 2; ++n) {
            if (a.dim(n, 0) == 0) continue;
            Matrix<Q> cols(x.dim(n, 0), a.dim(n, 0));
            for (int i = 0; i < a.dim(n, 0); ++i) cols.set(i, i, Q(1));
            asub.set(n, 0, Subspace<Q>::span(cols));
        }
        StrictSES<Q> s = strict_ses(x, asub);
        for (int n = 1; n <= 2; ++n) CHECK(connecting_map(s, n, 0).is_zero());
    }
}

TEST_CASE("connecting map is independent of the chosen lift") {
    Rng rng(61);
    for (int trial = 0; trial < 15; ++trial) {
        ChainComplex<Q> x = testsupport::random_complex(rng, -1, 2, 4);
        Subcomplex<Q> a = testsupport::random_subcomplex(rng, x);
        validate_subcomplex(x, a);
        StrictSES<Q> s = strict_ses(x, a);
        for (int n = 0; n <= 2; ++n) {
            HomologySlice<Q> hc = homology(s.c.complex, n, 0);
            HomologySlice<Q> ha = homology(s.a.complex, n - 1, 0);
            if (hc.dim == 0 || ha.dim == 0) continue;
            Matrix<Q> d1 = connecting_map(s, n, 0, hc, ha);
            // perturb the lift by a subcomplex element: class must not move
            Subspace<Q> aslice = a.slice(n, 0, x.dim(n, 0));
            if (aslice.dim() == 0) continue;
            Vec<Q> lifted = s.c.lift(n, 0, hc.reps().column(0));
            Vec<Q> noise = aslice.basis().apply(
                Vec<Q>(static_cast<std::size_t>(aslice.dim()), Q(1)));
            for (std::size_t i = 0; i < lifted.size(); ++i) lifted[i] += noise[i];
            Vec<Q> dx = x.diff(n, 0).apply(lifted);
            Vec<Q> cls = ha.class_of(a.slice(n - 1, 0, x.dim(n - 1, 0)).coords(dx));
            for (int i = 0; i < ha.dim; ++i) CHECK(cls[i] == d1.get(i, 0));
        }
    }
}

TEST_CASE("long exact sequence of a strict subcomplex is exact") {
    Rng rng(67);
    for (int trial = 0; trial < 20; ++trial) {
        ChainComplex<Q> x = testsupport::random_complex(rng, -2, 2, 4);
        Subcomplex<Q> a = testsupport::random_subcomplex(rng, x);
        StrictSES<Q> s = strict_ses(x, a);

        // maps per degree: H(A) -> H(X) -> H(C) -> H(A)[-1]
        ChainMap<Q> incl(s.a.complex, x);
        for (const auto& [key, sp] : a.slices) incl.set_block(key.first, key.second, sp.basis());
        incl.validate();

        for (int n = x.d_min(); n <= x.d_max(); ++n) {
            HomologySlice<Q> ha = homology(s.a.complex, n, 0);
            HomologySlice<Q> hx = homology(x, n, 0);
            HomologySlice<Q> hc = homology(s.c.complex, n, 0);
            HomologySlice<Q> ha1 = n - 1 >= x.d_min() ? homology(s.a.complex, n - 1, 0)
                                                      : HomologySlice<Q>{};
            Matrix<Q> i_star = homology_induced(incl, n, 0, ha, hx);
            // projection X -> C on homology
            Matrix<Q> p_star(hc.dim, hx.dim);
            for (int j = 0; j < hx.dim; ++j) {
                Vec<Q> cls = hc.class_of(s.c.project(n, 0, hx.reps().column(j)));
                for (int i = 0; i < hc.dim; ++i)
                    if (!cls[i].is_zero()) p_star.set(i, j, cls[i]);
            }
            Matrix<Q> delta = n - 1 >= x.d_min() ? connecting_map(s, n, 0, hc, ha1)
                                                 : Matrix<Q>(0, hc.dim);

            // exactness at H_n(X): ker p* = im i*
            CHECK((p_star * i_star).is_zero());
            CHECK(kernel_basis(p_star).dim() == image_basis(i_star).dim());
            // exactness at H_n(C): ker delta = im p*
            CHECK((delta * p_star).is_zero());
            CHECK(kernel_basis(delta).dim() == image_basis(p_star).dim());
        }
    }
}

TEST_CASE("materialized subcomplex differential commutes with inclusion") {
    Rng rng(71);
    ChainComplex<Q> x = testsupport::random_complex(rng, 0, 3, 4);
    Subcomplex<Q> a = testsupport::random_subcomplex(rng, x);
    MaterializedSub<Q> m = materialize(x, a);
    m.complex.validate();
    ChainMap<Q> incl(m.complex, x);
    for (const auto& [key, sp] : a.slices) incl.set_block(key.first, key.second, sp.basis());
    incl.validate();
}

TEST_CASE("cochain complexes store cohomological data homologically") {
    CochainComplex<Q> cc = CochainComplex<Q>::from_cohomological_window(0, 2, 1);
    cc.set_module(0, 1, BasedModule{1, {}});
    cc.set_module(1, 1, BasedModule{1, {}});
    Matrix<Q> d(1, 1);
    d.set(0, 0, Q(3));
    cc.set_diff(0, 1, d);
    cc.validate();
    CHECK(cc.dim(0, 1) == 1);
    CHECK(cc.diff(0, 1).get(0, 0) == Q(3));
    CHECK(cc.homological_model().dim(0, 1) == 1);
    CHECK(cc.homological_model().dim(-1, 1) == 1);
}
