#include <catch_amalgamated.hpp>

#include <cmath>

#include "subspec/folner.hpp"
#include "subspec/lazy.hpp"
#include "subspec/spectral.hpp"

using namespace subspec;

namespace {
std::vector<std::int64_t> range(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> v;
    for (std::int64_t k = lo; k <= hi; ++k) v.push_back(k);
    return v;
}
}  // namespace

TEST_CASE("certificate_check on A_inf at index 4") {
    auto g = lazy_a_inf(Rational(4));
    auto pass = certificate_check(g, range(0, 12), 0.5);
    CHECK(pass.pass);
    CHECK(pass.boundary == std::vector<std::int64_t>{13});
    CHECK(pass.boundary_norm == Catch::Approx(27.0).margin(1e-12));
    CHECK(pass.bulk_norm == Catch::Approx(std::sqrt(2925.0)).margin(1e-9));
    CHECK(pass.ratio >= 0.499);
    CHECK(pass.ratio <= 0.4995);

    auto fail = certificate_check(g, range(0, 11), 0.5);
    CHECK_FALSE(fail.pass);
    CHECK(fail.ratio == Catch::Approx(25.0 / std::sqrt(2300.0)).margin(1e-12));
}

TEST_CASE("certificate_check on a finite graph with F = J") {
    auto graph = BipartiteGraph({"i1"}, {"0", "2"}, {1, 1});
    MarkovWeightedGraph m{graph, {1.0, 1.0}, 2.0, 0};
    auto cert = certificate_check(m, VertexSet::of({"0", "2"}), 0.01);
    CHECK(cert.pass);
    CHECK(cert.ratio == 0.0);
    CHECK(cert.boundary.empty());
}

TEST_CASE("interval_search finds the first passing ball") {
    auto g = lazy_a_inf(Rational(4));
    auto out = interval_search(g, 0.5, 10000);
    REQUIRE(out.found);
    CHECK(out.certificate->F.size() == 13);
    // Soundness: the returned certificate re-validates.
    auto again = certificate_check(g, out.certificate->F, 0.5);
    CHECK(again.pass);
    CHECK(again.ratio == Catch::Approx(out.certificate->ratio).margin(1e-12));
}

TEST_CASE("interval_search exhausts on A_inf at index 5") {
    auto g = lazy_a_inf(Rational(5));
    auto out = interval_search(g, 1.0, 1000);
    CHECK_FALSE(out.found);
    CHECK(out.best_ratio > 1.0);
    CHECK(out.frontier_size >= 900);
}

TEST_CASE("interval_search on the two-sided line at index 4") {
    auto g = lazy_a_biinf(Rational(4));  // constant weights
    auto out = interval_search(g, 0.7, 10000);
    REQUIRE(out.found);
    // Symmetric interval of 2m+1 vertices has ratio sqrt(2/(2m+1)) < 0.7
    // first at 5 vertices.
    CHECK(out.certificate->F.size() == 5);
    CHECK(out.certificate->ratio == Catch::Approx(std::sqrt(2.0 / 5.0)).margin(1e-12));
}

TEST_CASE("spectral_cut_search finds an eps = 0.1 certificate on A_inf at 4") {
    auto g = lazy_a_inf(Rational(4));
    auto out = spectral_cut_search(g, 0.1, 2000);
    REQUIRE(out.found);
    CHECK(out.frontier_size <= 2000);
    auto again = certificate_check(g, out.certificate->F, 0.1);
    CHECK(again.pass);
    CHECK(norm_bound_from_certificate(g, *out.certificate) >= 3.97);
}

TEST_CASE("spectral_cut_search exhausts above the norm") {
    for (auto li : {Rational(9, 2), Rational(5)}) {
        auto g = lazy_a_inf(li);
        auto out = spectral_cut_search(g, 0.5, 10000);
        CHECK_FALSE(out.found);
        CHECK(out.best_ratio > 0.5);
        auto out2 = interval_search(g, 0.5, 10000);
        CHECK_FALSE(out2.found);
    }
}

TEST_CASE("finite graphs always certify with F = J") {
    auto graph = BipartiteGraph({"i1", "i2"}, {"a", "b"}, {1, 1, 0, 1});
    auto mw = markov_weight(graph, "a");
    for (double eps : {1.0, 0.1, 0.001}) {
        auto out = spectral_cut_search(mw, eps);
        REQUIRE(out.found);
        CHECK(out.certificate->F.size() == graph.even_count());
        CHECK(out.certificate->ratio == 0.0);
        CHECK(norm_bound_from_certificate(mw.lambda_inv, *out.certificate) ==
              Catch::Approx(mw.lambda_inv).margin(1e-12));
    }
    MarkovWeightedGraph bad{graph, {1.0, 1.0}, 2.0, 0};
    CHECK_THROWS_AS(spectral_cut_search(bad, 0.5), std::invalid_argument);
}

TEST_CASE("norm bound from certificates") {
    auto g = lazy_a_inf(Rational(4));
    auto cert = certificate_check(g, range(0, 12), 0.5);
    double bound = norm_bound_from_certificate(g, cert);
    CHECK(bound == Catch::Approx(4.0 * std::sqrt(2925.0) / std::sqrt(2925.0 + 729.0)).margin(1e-9));
    CHECK(bound == Catch::Approx(3.578810).margin(1e-4));
    // Bound validity: never exceeds the norm of the truncation to F u dF.
    auto tr = line_truncation(0, 26, false);  // contains line vertices of F' = {0..13} (coords 0..26)
    CHECK(bound <= norm_squared(tr.graph) + 2e-10);
}

TEST_CASE("interval ratios shrink monotonically on amenable built-ins") {
    auto a = lazy_a_inf(Rational(4));
    double prev = 1e9;
    for (int m = 1; m <= 50; ++m) {
        auto c = certificate_check(a, range(0, m), 1.0);
        CHECK(c.ratio <= prev + 1e-12);
        prev = c.ratio;
    }
    auto d = lazy_d_inf(Rational(4));
    prev = 1e9;
    for (std::size_t r = 1; r <= 30; ++r) {
        auto ball = d.ball(r);
        auto c = certificate_check(d, ball, 1.0);
        CHECK(c.ratio <= prev + 1e-12);
        prev = c.ratio;
    }
}

TEST_CASE("amenable finite graphs certify for every eps via F = J") {
    for (auto graph :
         {BipartiteGraph({"i"}, {"j"}, {1}), BipartiteGraph({"i"}, {"j1", "j2"}, {1, 1}),
          BipartiteGraph({"i1", "i2"}, {"j1", "j2"}, {1, 1, 0, 1})}) {
        auto mw = markov_weight(graph, graph.even_labels()[0]);
        std::vector<std::string> all = graph.even_labels();
        for (double eps : {1e-1, 1e-3, 1e-6}) {
            auto cert = certificate_check(mw, VertexSet::of(all), eps);
            CHECK(cert.pass);
        }
    }
}
