#ifndef SUBSPEC_CELLS_HPP
#define SUBSPEC_CELLS_HPP

#include <optional>
#include <string>
#include <vector>

#include "subspec/algebra_ops.hpp"
#include "subspec/basic_construction.hpp"
#include "subspec/scene_io.hpp"
#include "subspec/spectral.hpp"
#include "subspec/tower.hpp"

namespace subspec {

// A candidate Markov cell (P00 c P01) c (P10 c P11): concrete matrices,
// a trace state on P11 = ambient, and the claimed lambda_inv.
struct MarkovCell {
    Scene scene;  // must carry roles P00, P01, P10 (P11 = ambient) and lambda_inv

    static MarkovCell from_scene(Scene sc) {
        for (const char* role : {"P00", "P01", "P10"})
            if (!sc.has(role)) throw SchemaError(std::string("cell: missing role ") + role);
        if (!sc.lambda_inv) throw SchemaError("cell: missing lambda_inv");
        return MarkovCell{std::move(sc)};
    }
};

struct CellCertificate {
    bool csq_ok = false;
    bool nondegenerate_ok = false;
    bool rows_markov_ok = false;
    bool graphs_irreducible_ok = false;
    BipartiteGraph vertical_graph{{"i0"}, {"j0"}, {1}};  // Lambda_{P00 c P10}
    double subfactor_index = 0.0;                        // ||vertical||^2 when all booleans true

    // supporting detail
    bool corner_equals_p00 = false;
    double row0_markov_residual = 0.0, row1_markov_residual = 0.0;
    double vertical_markov_residual = 0.0;  // re-checked, reported, not asserted
    double csq_deviation = 0.0;
    BipartiteGraph row0_graph{{"i0"}, {"j0"}, {1}};  // Lambda_{P00 c P01}
    BipartiteGraph row1_graph{{"i0"}, {"j0"}, {1}};  // Lambda_{P10 c P11}
    double row0_norm2 = 0.0, row1_norm2 = 0.0;
    bool all_ok() const {
        return csq_ok && nondegenerate_ok && rows_markov_ok && graphs_irreducible_ok;
    }
};

inline CellCertificate verify_cell(const MarkovCell& cell, double tol = 1e-9) {
    const Scene& sc = cell.scene;
    EmbeddedSubalgebra P00 = sc.subalgebra("P00");
    EmbeddedSubalgebra P01 = sc.subalgebra("P01");
    EmbeddedSubalgebra P10 = sc.subalgebra("P10");
    EmbeddedSubalgebra P11 = full_subalgebra(sc.ambient);
    const double lambda_inv = to_double(*sc.lambda_inv);

    CellCertificate cert;
    auto csq = commuting_square_check(sc.ambient, P01, P10, tol);
    cert.csq_deviation = std::max(csq.dev_pn, csq.dev_q);
    // P00 must sit inside the corner P01 n P10; whether it equals the corner
    // is recorded separately (a cell may declare a smaller P00 and still
    // commute, but it then fails elsewhere).
    bool p00_in_corner = csq.intersection.has_value();
    if (p00_in_corner)
        for (const auto& b : P00.basis())
            p00_in_corner = p00_in_corner && csq.intersection->contains(b, 1e-8);
    cert.csq_ok = csq.is_csq && p00_in_corner;
    cert.corner_equals_p00 =
        p00_in_corner && csq.intersection->dimension() == P00.dimension();
    cert.nondegenerate_ok = nondegeneracy_check(sc.ambient, P01, P10);

    auto bs00 = block_structure(P00);
    auto bs01 = block_structure(P01);
    auto bs10 = block_structure(P10);
    auto bs11 = full_block_structure(sc.ambient);
    cert.row0_graph = inclusion_matrix(P00, P01, bs00, bs01);
    cert.row1_graph = inclusion_matrix(P10, P11, bs10, bs11);
    cert.graphs_irreducible_ok =
        is_connected(cert.row0_graph) && is_connected(cert.row1_graph);

    // Row Markov checks with the actual minimal-projection traces (2.7.1(iii)).
    auto markov_residual = [&](const BipartiteGraph& g, const std::vector<double>& t) {
        return verify_markov(g, t, lambda_inv, 1e-8).residual;
    };
    cert.row0_markov_residual = markov_residual(cert.row0_graph, bs01.min_proj_traces);
    std::vector<double> t11;
    for (std::size_t j = 0; j < sc.ambient.block_sizes.size(); ++j)
        t11.push_back(sc.ambient.weight_d(j));
    cert.row1_markov_residual = markov_residual(cert.row1_graph, t11);
    cert.rows_markov_ok =
        cert.row0_markov_residual <= 1e-8 && cert.row1_markov_residual <= 1e-8;

    cert.vertical_graph = inclusion_matrix(P00, P10, bs00, bs10);
    cert.subfactor_index = norm_squared(cert.vertical_graph);
    // 2.9 derives vertical Markovianity from the horizontal data; re-check
    // with the vertical index and report without asserting.
    cert.vertical_markov_residual =
        verify_markov(cert.vertical_graph, bs10.min_proj_traces, cert.subfactor_index, 1e-8)
            .residual;

    cert.row0_norm2 = norm_squared(cert.row0_graph);
    cert.row1_norm2 = norm_squared(cert.row1_graph);
    return cert;
}

struct CellTowerPreview {
    BratteliTower<double> row0, row1;
    double row0_norm2 = 0.0, row1_norm2 = 0.0;       // must match (2.9)
    double vertical_norm2 = 0.0, vertical_dual_norm2 = 0.0;  // ||P00 c P10|| vs ||P01 c P11||
    bool composition_identity = false;  // integer matrix identity of 2.9
    BipartiteGraph composed_via_p10{{"i0"}, {"j0"}, {1}};
    BipartiteGraph composed_via_p01{{"i0"}, {"j0"}, {1}};
};

// Inclusion-matrix composition: Lambda_{A c B} (A-blocks x B-blocks) times
// Lambda_{B c C} gives the multiplicities of A-blocks in C-blocks.
inline BipartiteGraph compose_inclusions(const BipartiteGraph& ab, const BipartiteGraph& bc) {
    if (ab.even_count() != bc.odd_count())
        throw std::invalid_argument("compose_inclusions: middle algebra mismatch");
    std::vector<std::int64_t> mult(ab.odd_count() * bc.even_count(), 0);
    for (std::size_t a = 0; a < ab.odd_count(); ++a)
        for (std::size_t c = 0; c < bc.even_count(); ++c) {
            std::int64_t acc = 0;
            for (std::size_t b = 0; b < ab.even_count(); ++b) acc += ab.mult(a, b) * bc.mult(b, c);
            mult[a * bc.even_count() + c] = acc;
        }
    return BipartiteGraph(ab.odd_labels(), bc.even_labels(), mult);
}

inline CellTowerPreview cell_tower_preview(const MarkovCell& cell, const CellCertificate& cert,
                                           int depth) {
    if (!cert.all_ok())
        throw std::invalid_argument("cell_tower_preview: cell certificate has failing checks");
    const Scene& sc = cell.scene;
    EmbeddedSubalgebra P00 = sc.subalgebra("P00");
    EmbeddedSubalgebra P01 = sc.subalgebra("P01");
    EmbeddedSubalgebra P10 = sc.subalgebra("P10");
    EmbeddedSubalgebra P11 = full_subalgebra(sc.ambient);
    auto bs00 = block_structure(P00);
    auto bs01 = block_structure(P01);
    auto bs10 = block_structure(P10);
    auto bs11 = full_block_structure(sc.ambient);

    auto row_tower = [&](const BipartiteGraph& g) {
        auto m = markov_weight(g, g.even_labels()[0]);
        return build_tower(m, depth);
    };
    CellTowerPreview pv{row_tower(cert.row0_graph), row_tower(cert.row1_graph)};
    pv.row0_norm2 = cert.row0_norm2;
    pv.row1_norm2 = cert.row1_norm2;
    pv.vertical_norm2 = norm_squared(cert.vertical_graph);
    pv.vertical_dual_norm2 = norm_squared(inclusion_matrix(P01, P11, bs01, bs11));
    pv.composed_via_p10 =
        compose_inclusions(cert.vertical_graph, cert.row1_graph);  // P00 -> P10 -> P11
    pv.composed_via_p01 =
        compose_inclusions(cert.row0_graph, inclusion_matrix(P01, P11, bs01, bs11));
    pv.composition_identity = pv.composed_via_p10.mult_flat() == pv.composed_via_p01.mult_flat() &&
                              pv.composed_via_p10.odd_count() == pv.composed_via_p01.odd_count() &&
                              pv.composed_via_p10.even_count() == pv.composed_via_p01.even_count();
    return pv;
}

}  // namespace subspec

#endif
