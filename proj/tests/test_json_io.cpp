#include <catch2/catch_amalgamated.hpp>

#include "cychom/chart.hpp"
#include "cychom/json_io.hpp"
#include "cychom/pool.hpp"
#include "support.hpp"

using namespace cychom;
using testsupport::Rng;
using Q = Rational;

TEST_CASE("complex serialization round-trips computation results") {
    AlgebraPresentation r = AlgebraPresentation::polynomial(1);
    HochschildComplex<Q> hh = hochschild_complex<Q>(r, 3);
    json j = complex_to_json(hh.complex);
    ChainComplex<Q> back = complex_from_json<Q>(j);
    for (int w = 0; w <= 3; ++w)
        for (int n = 0; n <= 3; ++n) {
            CHECK(back.dim(n, w) == hh.complex.dim(n, w));
            CHECK(homology(back, n, w).dim == homology(hh.complex, n, w).dim);
            CHECK(back.diff(n, w) == hh.complex.diff(n, w));
        }
    // serialization is stable
    CHECK(complex_to_json(back) == j);
}

TEST_CASE("rational entries survive the string form") {
    ChainComplex<Q> c(0, 1, 0);
    c.set_module(0, 0, BasedModule{1, {}});
    c.set_module(1, 0, BasedModule{1, {}});
    Matrix<Q> d(1, 1);
    d.set(0, 0, Q(-7, 3));
    c.set_diff(1, 0, d);
    ChainComplex<Q> back = complex_from_json<Q>(complex_to_json(c));
    CHECK(back.diff(1, 0).get(0, 0) == Q(-7, 3));
}

TEST_CASE("page dumps carry chart keys") {
    Rng rng(301);
    ChainComplex<Q> x = testsupport::random_complex(rng, 0, 2, 3);
    FilteredComplex<Q> f(x, {full_subcomplex(x), Subcomplex<Q>{}});
    auto pages = spectral_sequence(f, 2);
    json j = pages_to_json(pages);
    REQUIRE(j.is_array());
    CHECK(j.at(0).at("r") == 1);
    CHECK(j.at(0).at("entries").is_object());
}

TEST_CASE("ascii chart renders the one-point negative cyclic page") {
    ChainComplex<Q> c(0, 0, 0);
    c.set_module(0, 0, BasedModule{1, {}});
    MixedComplex<Q> m = mixed_with_zero_B(std::move(c));
    CyclicModel<Q> neg = totalize(m, CyclicVariant::negative, -6, 0);
    FilteredComplex<Q> cw = cw_filtration(neg);
    auto pages = spectral_sequence(cw, 1, 2);
    std::string chart = ascii_chart(pages.front(), 0, ChartOverlays{0, {}, {}});
    CHECK(chart.find("t=0") != std::string::npos);
    CHECK(chart.find("s=0") != std::string::npos);
    CHECK(chart.find("1B") != std::string::npos);  // overlay marks the tau^B region
    std::string svg = svg_chart(pages.front(), 0);
    CHECK(svg.find("<svg") != std::string::npos);
}

TEST_CASE("overlay predicates match the support formula") {
    // tau^B region: r even, r <= 2t - 2σ with s = 2σ
    for (int r = -4; r <= 6; r += 2)
        for (int sigma = 0; sigma <= 4; ++sigma)
            for (int t = 0; t <= 6; ++t)
                CHECK(overlay_tau_b(2 * sigma, t, r) == (r <= 2 * t - 2 * sigma));
}

TEST_CASE("worker pool preserves task order and propagates errors") {
    std::vector<int> tasks;
    for (int i = 0; i < 50; ++i) tasks.push_back(i);
    auto results = run_tasks<int, int>(tasks, [](const int& t) { return t * t; }, 4);
    for (int i = 0; i < 50; ++i) CHECK(results[static_cast<std::size_t>(i)] == i * i);
    auto boom = [&] {
        return run_tasks<int, int>(
            tasks,
            [](const int& t) {
                if (t == 13) throw std::runtime_error("boom");
                return t;
            },
            4);
    };
    CHECK_THROWS_AS(boom(), std::runtime_error);
}
