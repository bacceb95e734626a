// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its stated runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "subspec/basic_construction.hpp"
#include "subspec/cells.hpp"
#include "subspec/espec.hpp"
#include "subspec/folner.hpp"
#include "subspec/lazy.hpp"
#include "subspec/scene_io.hpp"
#include "subspec/spectral.hpp"
#include "subspec/tlj.hpp"
#include "subspec/tower.hpp"

using namespace subspec;

namespace {

int failures = 0;

struct Check {
    std::ostringstream msg;
    bool ok = true;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            msg << (msg.str().empty() ? "" : "; ") << what;
        }
    }
};

void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < budget_seconds, "runtime " + std::to_string(secs) + "s exceeds budget");
    std::printf("criterion %2d [%s] %s (%.2fs)%s%s\n", number, c.ok ? "PASS" : "FAIL",
                title.c_str(), secs, c.msg.str().empty() ? "" : " -- ", c.msg.str().c_str());
    if (!c.ok) ++failures;
}

std::string data_path(const std::string& rel) { return std::string(SUBSPEC_DATA_DIR) + "/" + rel; }

}  // namespace

int main() {
    criterion(1, "Coxeter norms A_n, n = 2..20", 1.0, [](Check& c) {
        for (int n = 2; n <= 20; ++n) {
            double expect = 4.0 * std::pow(std::cos(M_PI / (n + 1)), 2);
            auto rep = norm_squared_report(coxeter_a(n), 1e-10);
            c.require(std::abs(rep.norm_squared - expect) <= 1e-9,
                      "A_" + std::to_string(n) + " off closed form");
            if (coxeter_a(n).even_count() <= 12)
                c.require(rep.certified, "A_" + std::to_string(n) + " missing exact cross-check");
        }
    });

    criterion(2, "E10 norm matches the printed value", 1.0, [](Check& c) {
        double e10 = norm_squared(e_series(10));
        c.require(std::abs(e10 - 4.0265) <= 5e-4, "outside the printed-value tolerance");
        c.require(std::abs(e10 - 4.026417949186958) <= 1e-9, "off the certified exact root");
    });

    criterion(3, "ADE classification and the gap after 4", 300.0, [](Check& c) {
        auto en9 = enumerate_graphs({9, 1, 64, 50000000});
        c.require(!en9.truncated, "9-vertex enumeration truncated");
        std::set<CanonicalGraph> below4;
        for (const auto& cg : en9.graphs)
            if (classify_exact(cg.to_graph()) == NormClass::Coxeter) below4.insert(cg);
        std::set<CanonicalGraph> expected;
        for (int n = 2; n <= 9; ++n) expected.insert(canonicalize(coxeter_a(n)));
        for (int n = 4; n <= 9; ++n) expected.insert(canonicalize(coxeter_d(n)));
        for (int n = 6; n <= 8; ++n) expected.insert(canonicalize(e_series(n)));
        c.require(below4 == expected, "norm < 4 set differs from the A/D/E list");

        auto en10 = enumerate_graphs({10, 1, 64, 100000000});
        c.require(!en10.truncated, "10-vertex enumeration truncated");
        double smallest_above_4 = 1e18;
        CanonicalGraph witness;
        for (const auto& cg : en10.graphs) {
            auto cls = classify_exact(cg.to_graph());
            if (cls == NormClass::Coxeter || cls == NormClass::Affine) continue;
            double n2 = norm_squared(cg.to_graph());
            if (n2 < smallest_above_4) {
                smallest_above_4 = n2;
                witness = cg;
            }
        }
        c.require(std::abs(smallest_above_4 - 4.026417949186958) <= 1e-9,
                  "smallest norm above 4 is not E10's");
        c.require(witness == canonicalize(e_series(10)), "witness is not E10");
        c.require(smallest_above_4 > 4.02, "found an entry in (4, 4.02)");
    });

    criterion(4, "TLJ closed form and positivity horizons", 1.0, [](Check& c) {
        Rational quarter(1, 4);
        for (int n = 0; n <= 30; ++n) {
            BigInt den(1);
            mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(n + 1));
            Rational expect = Rational(n + 2) / Rational(den);
            c.require(evaluate(jones_poly(n), quarter) == expect,
                      "P_" + std::to_string(n) + "(1/4) off closed form");
        }
        auto h3 = positivity_horizon(Rational(1, 3), 100);
        c.require(!h3.unbounded && h3.horizon == 3, "horizon(1/3) != 3");
        auto h2 = positivity_horizon(Rational(1, 2), 100);
        c.require(!h2.unbounded && h2.horizon == 1, "horizon(1/2) != 1");
    });

    criterion(5, "Folner positive case on A_inf at index 4", 10.0, [](Check& c) {
        auto g = lazy_a_inf(Rational(4));
        auto cert = certificate_check(g, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, 0.5);
        c.require(cert.pass, "F = {0..12} does not certify at eps 0.5");
        c.require(cert.ratio >= 0.499 && cert.ratio <= 0.4995, "ratio outside [0.499, 0.4995]");
        auto out = spectral_cut_search(g, 0.1, 2000);
        c.require(out.found, "spectral cut search found no eps = 0.1 certificate");
        if (out.found) {
            c.require(out.frontier_size <= 2000, "frontier exceeded 2000");
            c.require(certificate_check(g, out.certificate->F, 0.1).pass,
                      "certificate fails re-validation");
            c.require(norm_bound_from_certificate(g, *out.certificate) >= 3.97,
                      "norm bound below 3.97");
        }
    });

    criterion(6, "Folner negative case at indices 4.5 and 5", 30.0, [](Check& c) {
        for (auto li : {Rational(9, 2), Rational(5)}) {
            auto g = lazy_a_inf(li);
            auto interval = interval_search(g, 0.5, 10000);
            c.require(!interval.found, "interval search found a certificate above the norm");
            auto spectral = spectral_cut_search(g, 0.5, 10000);
            c.require(!spectral.found, "spectral search found a certificate above the norm");
        }
    });

    criterion(7, "Basic construction for scalars and diag in M2", 1.0, [](Check& c) {
        MultiMatrixAlgebra amb{{2}, {Rational(1, 2)}};
        EmbeddedSubalgebra scalars(amb, {Element::identity(amb)});
        Element e11 = Element::zero(amb), e22 = Element::zero(amb);
        e11.block(0)(0, 0) = 1;
        e22.block(0)(1, 1) = 1;
        EmbeddedSubalgebra diag(amb, {e11, e22});
        auto bs = basic_construction(amb, scalars);
        c.require(bs.m1_dimension == 16, "dim <M, e_C> != 16");
        auto bd = basic_construction(amb, diag);
        c.require(bd.m1_dimension == 8, "dim <M, e_D> != 8");
        for (const auto* bc : {&bs, &bd}) {
            c.require(bc->prop_i <= 1e-10, "(i) exe = E(x)e violated beyond 1e-10");
            c.require(bc->prop_ii_dims && bc->prop_ii <= 1e-10, "(ii) commutant is not B");
            c.require(bc->prop_iii, "(iii) central support of e is not 1");
            c.require(bc->transpose_law_exact, "transpose law not exact");
        }
    });

    criterion(8, "Index duality for scalars in M2", 5.0, [](Check& c) {
        MultiMatrixAlgebra amb{{2}, {Rational(1, 2)}};
        EmbeddedSubalgebra B(amb, {Element::identity(amb)});
        ExpectationMap E(B);
        double first = index_via_ob(amb, orthonormal_basis(amb, B, E));
        c.require(std::abs(first - 4.0) <= 1e-9, "ind_ob != 4");
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            double again = index_via_ob(amb, orthonormal_basis(amb, B, E, seed));
            c.require(std::abs(again - first) <= 1e-9, "ind_ob depends on the basis order");
        }
        auto pi = probabilistic_index(amb, E);
        c.require(pi.lambda_lower <= 0.5 + 1e-9 && 0.5 <= pi.lambda_upper + 1e-9,
                  "bracket misses lambda(E) = 1/2");
        double inv = 1.0 / pi.lambda_upper;
        c.require(inv <= first + 1e-6 && first <= inv * inv + 1e-6,
                  "2.5 inequality chain violated");
        c.require(std::abs(inv - 2.0) <= 1e-6 && inv < first, "strict inequality 2 < 4 missing");
    });

    criterion(9, "Markov cells: spin and 3x3 Fourier", 1.0, [](Check& c) {
        auto spin = MarkovCell::from_scene(parse_scene_file(data_path("cells/spin.json")));
        auto cs = verify_cell(spin);
        c.require(cs.all_ok(), "spin cell has failing booleans");
        c.require(std::abs(cs.subfactor_index - 2.0) <= 1e-9, "spin index != 2");
        auto f3 = MarkovCell::from_scene(parse_scene_file(data_path("cells/fourier3.json")));
        auto cf = verify_cell(f3);
        c.require(cf.all_ok(), "fourier3 cell has failing booleans");
        c.require(std::abs(cf.subfactor_index - 3.0) <= 1e-9, "fourier3 index != 3");
        for (auto* pair : {&spin, &f3}) {
            auto cert = verify_cell(*pair);
            auto pv = cell_tower_preview(*pair, cert, 8);
            c.require(std::abs(pv.row0_norm2 - pv.row1_norm2) <= 2e-10, "row norms differ");
            c.require(std::abs(pv.vertical_norm2 - pv.vertical_dual_norm2) <= 2e-10,
                      "vertical norms differ");
            c.require(pv.composition_identity, "composition identity fails");
        }
    });

    criterion(10, "Coupling relations on A_inf and A_biinf", 5.0, [](Check& c) {
        {
            auto tr = line_truncation(0, 40, false);
            std::vector<double> d_M, d_N;
            for (const auto& l : tr.graph.even_labels()) d_M.push_back(std::stod(l) + 1.0);
            for (const auto& l : tr.graph.odd_labels()) d_N.push_back(2.0 * std::stod(l) + 2.0);
            auto rep = coupling_check(tr.graph, d_M, d_N, 4.0, 1e-8, tr.even_interior,
                                      tr.odd_interior);
            c.require(rep.pass && rep.residual_eigen < 1e-8,
                      "A_inf couplings (1,3,5,...) fail at index 4");
        }
        {
            const double r = 7.0 / 3.0;  // (1-t)/t at lambda = 0.21
            auto lt = locally_trivial_couplings(Rational(21, 100), -12, 12);
            auto tr = line_truncation(-24, 24, true);
            std::vector<double> d_M, d_N;
            for (const auto& l : tr.graph.even_labels())
                d_M.push_back(lt.values.at(std::stol(l) / 2));
            for (const auto& l : tr.graph.odd_labels()) {
                long v = std::stol(l);
                d_N.push_back(std::pow(r, (v - 1) / 2.0) + std::pow(r, (v + 1) / 2.0));
            }
            auto rep = coupling_check(tr.graph, d_M, d_N, 100.0 / 21.0, 1e-8, tr.even_interior,
                                      tr.odd_interior);
            c.require(rep.pass, "A_biinf locally trivial couplings fail at lambda 0.21");
        }
        {
            // Prop 3.9.1 diagnostic: report the eigen-relation residual of the
            // printed coupling formula without asserting it (open question).
            auto cs = a_inf_couplings(Rational(1, 4), 20);
            auto tr = line_truncation(0, 40, false);
            double max_res = 0.0;
            std::vector<double> d(21);
            for (int n = 0; n <= 20; ++n) d[n] = cs.values[n];
            for (std::size_t j = 0; j < tr.graph.even_count(); ++j) {
                if (!tr.even_interior[j]) continue;
                double acc = 0.0;
                for (std::size_t jp = 0; jp < tr.graph.even_count(); ++jp)
                    acc += tr.graph.strength(j, jp) * d[std::stoul(tr.graph.even_labels()[jp]) / 2];
                max_res = std::max(max_res, std::abs(acc - 4.0 * d[std::stoul(tr.graph.even_labels()[j]) / 2]));
            }
            std::printf("    [diagnostic] Prop 3.9.1 couplings vs eigen relation: residual_inf = "
                        "%.6f (open question logged; not asserted)\n",
                        max_res);
        }
    });

    if (failures != 0) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
