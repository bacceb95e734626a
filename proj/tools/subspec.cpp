// subspec: command-line front end for the subfactor-combinatorics toolkit.
// JSON reports go to stdout; a short human-readable summary goes to stderr.
// Exit codes: 0 = success/pass, 1 = checked-and-failed, 2 = input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "subspec/basic_construction.hpp"
#include "subspec/cells.hpp"
#include "subspec/espec.hpp"
#include "subspec/folner.hpp"
#include "subspec/json_io.hpp"
#include "subspec/lazy.hpp"
#include "subspec/scene_io.hpp"
#include "subspec/spectral.hpp"
#include "subspec/tlj.hpp"
#include "subspec/tower.hpp"
#include "subspec/version.hpp"

namespace {

using subspec::Json;

Json report_head(const std::string& subcommand,
                 const std::vector<std::pair<std::string, std::string>>& inputs) {
    Json j;
    j["tool"] = subspec::kToolName;
    j["version"] = subspec::kVersion;
    j["subcommand"] = subcommand;
    Json in = Json::object();
    for (const auto& [path, fp] : inputs) in[path] = fp;
    j["inputs"] = std::move(in);
    return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

struct LoadedGraph {
    subspec::GraphFile file;
    std::string path, fingerprint;
    bool is_lazy() const { return !file.builtin.empty(); }
    subspec::LazyWeightedGraph lazy() const {
        return subspec::lazy_builtin(file.builtin, *file.lambda_inv_exact);
    }
};

LoadedGraph load_graph(const std::string& path) {
    LoadedGraph g{subspec::parse_graph_file(path), path, subspec::file_fingerprint(path)};
    return g;
}

// "0..12" or "3,5,7" or "-4..4"
std::vector<std::int64_t> parse_vertex_set(const std::string& s) {
    std::vector<std::int64_t> out;
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        std::int64_t lo = std::stoll(s.substr(0, dots));
        std::int64_t hi = std::stoll(s.substr(dots + 2));
        if (hi < lo) throw subspec::SchemaError("vertex range is empty: " + s);
        for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::size_t at = 0;
    while (at < s.size()) {
        auto comma = s.find(',', at);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stoll(s.substr(at, comma - at)));
        at = comma + 1;
    }
    if (out.empty()) throw subspec::SchemaError("empty vertex set: " + s);
    return out;
}

Json certificate_json(const subspec::FolnerCertificate& c, const std::string& graph_fp) {
    Json j;
    j["F"] = c.F;
    j["epsilon"] = c.epsilon;
    j["boundary"] = c.boundary;
    j["boundary_norm"] = c.boundary_norm;
    j["bulk_norm"] = c.bulk_norm;
    j["ratio"] = c.ratio;
    j["pass"] = c.pass;
    j["graph_fingerprint"] = graph_fp;
    return j;
}

Json graph_json(const subspec::BipartiteGraph& g) {
    return subspec::graph_to_json(g);
}

int run_norm(const std::string& path, double tol) {
    auto g = load_graph(path);
    if (g.is_lazy()) throw subspec::SchemaError("norm: builtin graphs are infinite; pass a finite graph");
    auto rep = subspec::norm_squared_report(*g.file.graph, tol);
    Json j = report_head("norm", {{path, g.fingerprint}});
    j["norm_squared"] = rep.norm_squared;
    j["reducible"] = rep.reducible;
    j["components"] = rep.component_count;
    j["certified"] = rep.certified;
    emit(j);
    std::cerr << "norm_squared = " << rep.norm_squared << "\n";
    return 0;
}

int run_perron(const std::string& path, double tol, std::optional<std::uint64_t> seed) {
    std::ifstream in(path);
    if (!in) throw subspec::SchemaError("cannot open matrix file: " + path);
    Json mj;
    try {
        in >> mj;
    } catch (const nlohmann::json::parse_error& e) {
        throw subspec::SchemaError(std::string("matrix file: ") + e.what());
    }
    if (!mj.is_object() || !mj.contains("matrix"))
        throw subspec::SchemaError("matrix file: expected {\"matrix\": [[...], ...]}");
    subspec::SymMatrix A;
    for (const auto& row : mj.at("matrix")) {
        A.emplace_back();
        for (const auto& v : row) A.back().push_back(v.get<double>());
    }
    auto pr = subspec::perron(A, tol, seed);
    Json j = report_head("perron", {{path, subspec::file_fingerprint(path)}});
    j["eigenvalue"] = pr.eigenvalue;
    j["vector"] = pr.vector;
    j["residual_inf"] = pr.residual_inf;
    j["iterations"] = pr.iterations;
    if (seed) j["seed"] = *seed;
    emit(j);
    std::cerr << "eigenvalue = " << pr.eigenvalue << "\n";
    return 0;
}

int run_markov(const std::string& path, std::string basepoint, double tol) {
    auto g = load_graph(path);
    if (g.is_lazy()) throw subspec::SchemaError("markov: pass a finite graph file");
    const auto& graph = *g.file.graph;
    Json j = report_head("markov", {{path, g.fingerprint}});
    if (!g.file.weights.empty() && g.file.lambda_inv) {
        auto rep = subspec::verify_markov(graph, g.file.weights, *g.file.lambda_inv, tol);
        j["mode"] = "verify";
        j["residual"] = rep.residual;
        j["pass"] = rep.pass;
        emit(j);
        std::cerr << "verify_markov residual = " << rep.residual
                  << (rep.pass ? " (pass)" : " (fail)") << "\n";
        return rep.pass ? 0 : 1;
    }
    if (basepoint.empty()) basepoint = graph.even_labels()[0];
    auto m = subspec::markov_weight(graph, basepoint, tol);
    j["mode"] = "solve";
    j["lambda_inv"] = m.lambda_inv;
    Json w = Json::object();
    for (std::size_t k = 0; k < m.weights.size(); ++k)
        w[graph.even_labels()[k]] = m.weights[k];
    j["weights"] = std::move(w);
    j["basepoint"] = basepoint;
    emit(j);
    std::cerr << "lambda_inv = " << m.lambda_inv << "\n";
    return 0;
}

int run_tower(const std::string& path, int depth, std::string basepoint, double tol) {
    auto g = load_graph(path);
    if (g.is_lazy())
        throw subspec::SchemaError("tower: pass a finite graph (truncate infinite ones first)");
    const auto& graph = *g.file.graph;
    auto to_exact = [](const std::vector<double>& ws) {
        std::vector<subspec::Rational> out;
        for (double w : ws) {
            subspec::Rational q;
            mpq_set_d(q.get_mpq_t(), w);
            out.push_back(q);
        }
        return out;
    };
    subspec::MarkovWeighted<subspec::Rational> m{graph, {}, subspec::Rational(0), 0};
    if (!g.file.weights.empty() && g.file.lambda_inv_exact) {
        m.weights = to_exact(g.file.weights);
        m.lambda_inv = *g.file.lambda_inv_exact;
        m.basepoint = basepoint.empty() ? 0 : graph.even_index(basepoint);
    } else {
        auto md = subspec::markov_weight(
            graph, basepoint.empty() ? graph.even_labels()[0] : basepoint, tol);
        m.weights = to_exact(md.weights);
        mpq_set_d(m.lambda_inv.get_mpq_t(), md.lambda_inv);
        m.basepoint = md.basepoint;
    }
    auto tower = subspec::build_tower(m, depth, std::max(tol, 1e-8));
    Json j = report_head("tower", {{path, g.fingerprint}});
    j["depth"] = depth;
    j["lambda_inv"] = subspec::to_double(m.lambda_inv);
    j["graph"] = graph_json(graph);
    Json levels = Json::array();
    for (const auto& lv : tower.levels) {
        Json l;
        l["side"] = lv.even_side ? "even" : "odd";
        Json dims = Json::array(), traces = Json::array();
        for (const auto& d : lv.dims) dims.push_back(d.get_str());
        for (const auto& t : lv.traces) traces.push_back(subspec::to_double(t));
        l["dims"] = std::move(dims);
        l["traces"] = std::move(traces);
        l["total_dim"] = lv.total_dim.get_str();
        levels.push_back(std::move(l));
    }
    j["levels"] = std::move(levels);
    if (tower.levels.size() >= 6) {
        auto gr = subspec::growth_rate(tower, tol);
        j["growth_rate"] = gr.estimate;
        j["norm_squared"] = gr.norm_squared;
    }
    emit(j);
    std::cerr << "tower with " << tower.levels.size() << " levels; top total dim = "
              << tower.levels.back().total_dim.get_str() << "\n";
    return 0;
}

int run_tlj(int n, const std::string& lambda, int horizon_nmax) {
    Json j = report_head("tlj", {});
    auto p = subspec::jones_poly(n);
    j["n"] = n;
    Json coeffs = Json::array();
    for (const auto& c : p.coeffs) coeffs.push_back(c.get_str());
    j["coefficients"] = std::move(coeffs);
    if (!lambda.empty()) {
        subspec::Rational lam = subspec::parse_rational(lambda);
        j["lambda"] = subspec::to_string(lam);
        j["value"] = subspec::to_string(subspec::evaluate(p, lam));
        j["value_approx"] = subspec::to_double(subspec::evaluate(p, lam));
        auto h = subspec::positivity_horizon(lam, horizon_nmax);
        Json hj;
        hj["n_max"] = h.n_max;
        if (h.unbounded) hj["unbounded"] = true;
        else hj["horizon"] = h.horizon;
        j["positivity_horizon"] = std::move(hj);
    }
    emit(j);
    return 0;
}

int run_couplings(const std::string& lambda, int nmax, const std::string& mode, long range_lo,
                  long range_hi) {
    subspec::Rational lam = subspec::parse_rational(lambda);
    Json j = report_head("couplings", {});
    j["lambda"] = subspec::to_string(lam);
    if (mode == "locally-trivial") {
        auto lt = subspec::locally_trivial_couplings(lam, range_lo, range_hi);
        j["mode"] = mode;
        j["t"] = lt.t;
        j["ratio"] = lt.ratio;
        Json vals = Json::object();
        for (const auto& [n, v] : lt.values) vals[std::to_string(2 * n)] = v;
        j["d_even"] = std::move(vals);
        emit(j);
        return 0;
    }
    auto cs = subspec::a_inf_couplings(lam, nmax);
    j["mode"] = "a_inf";
    j["d"] = cs.values;
    // Companion diagnostic: the printed formula against the eigen relation
    // of Prop 3.4.2 on an A_inf truncation. Reported, never asserted.
    {
        const std::size_t n_verts = cs.values.size();
        auto tr = subspec::line_truncation(0, static_cast<std::int64_t>(n_verts) - 1, false);
        std::vector<double> d_M, d_N;
        for (const auto& l : tr.graph.even_labels())
            d_M.push_back(cs.values[static_cast<std::size_t>(std::stoll(l)) / 2]);
        (void)d_N;
        double max_res = 0.0;
        double lam_inv = 1.0 / subspec::to_double(lam);
        for (std::size_t jj = 0; jj < tr.graph.even_count(); ++jj) {
            if (!tr.even_interior[jj]) continue;
            double acc = 0.0;
            for (std::size_t jp = 0; jp < tr.graph.even_count(); ++jp)
                acc += tr.graph.strength(jj, jp) * d_M[jp];
            max_res = std::max(max_res, std::abs(acc - lam_inv * d_M[jj]));
        }
        Json diag;
        diag["eigen_relation_residual_inf"] = max_res;
        diag["note"] =
            "open question: the printed coupling formula d_n = sqrt(P_n/(lambda P_{n-1})) is "
            "bounded, while positive eigenvectors of the A_inf relation are unbounded for "
            "index >= 4; the residual is reported without assertion";
        j["eigen_diagnostic"] = std::move(diag);
    }
    emit(j);
    return 0;
}

int run_folner_check(const std::string& path, const std::string& set_spec, double eps) {
    auto g = load_graph(path);
    subspec::FolnerCertificate cert;
    if (g.is_lazy()) {
        auto lazy = g.lazy();
        cert = subspec::certificate_check(lazy, parse_vertex_set(set_spec), eps);
    } else {
        if (g.file.weights.empty() || !g.file.lambda_inv)
            throw subspec::SchemaError("folner-check: finite graph file needs weights and lambda_inv");
        subspec::MarkovWeightedGraph m{*g.file.graph, g.file.weights, *g.file.lambda_inv, 0};
        std::vector<std::string> labels;
        for (auto v : parse_vertex_set(set_spec)) labels.push_back(std::to_string(v));
        cert = subspec::certificate_check(m, subspec::VertexSet::of(labels), eps);
    }
    Json j = report_head("folner-check", {{path, g.fingerprint}});
    j["certificate"] = certificate_json(cert, g.fingerprint);
    emit(j);
    std::cerr << "ratio = " << cert.ratio << " vs epsilon = " << eps
              << (cert.pass ? " (pass)" : " (fail)") << "\n";
    return cert.pass ? 0 : 1;
}

int run_folner_search(const std::string& path, double eps, std::size_t max_size,
                      const std::string& method) {
    auto g = load_graph(path);
    subspec::SearchOutcome out;
    double lambda_inv = 0.0;
    if (g.is_lazy()) {
        auto lazy = g.lazy();
        lambda_inv = lazy.lambda_inv_d();
        out = method == "interval" ? subspec::interval_search(lazy, eps, max_size)
                                   : subspec::spectral_cut_search(lazy, eps, max_size);
    } else {
        if (g.file.weights.empty() || !g.file.lambda_inv)
            throw subspec::SchemaError("folner-search: finite graph file needs weights and lambda_inv");
        subspec::MarkovWeightedGraph m{*g.file.graph, g.file.weights, *g.file.lambda_inv, 0};
        lambda_inv = m.lambda_inv;
        out = subspec::spectral_cut_search(m, eps);
    }
    Json j = report_head("folner-search", {{path, g.fingerprint}});
    j["method"] = method;
    j["epsilon"] = eps;
    j["found"] = out.found;
    j["frontier_size"] = out.frontier_size;
    j["best_ratio"] = out.best_ratio;
    if (out.found) {
        j["certificate"] = certificate_json(*out.certificate, g.fingerprint);
        j["norm_lower_bound"] = subspec::norm_bound_from_certificate(lambda_inv, *out.certificate);
    }
    emit(j);
    std::cerr << (out.found ? "certificate found" : "exhausted") << ", best ratio "
              << out.best_ratio << "\n";
    return out.found ? 0 : 1;
}

int run_cell_verify(const std::string& path, int depth) {
    auto cell = subspec::MarkovCell::from_scene(subspec::parse_scene_file(path));
    auto cert = subspec::verify_cell(cell);
    Json j = report_head("cell-verify", {{path, subspec::file_fingerprint(path)}});
    j["csq_ok"] = cert.csq_ok;
    j["nondegenerate_ok"] = cert.nondegenerate_ok;
    j["rows_markov_ok"] = cert.rows_markov_ok;
    j["graphs_irreducible_ok"] = cert.graphs_irreducible_ok;
    j["vertical_graph"] = graph_json(cert.vertical_graph);
    j["subfactor_index"] = cert.subfactor_index;
    j["row0_markov_residual"] = cert.row0_markov_residual;
    j["row1_markov_residual"] = cert.row1_markov_residual;
    j["vertical_markov_residual"] = cert.vertical_markov_residual;
    auto verdict = subspec::jones_spectrum_member(cert.subfactor_index, 1e-6);
    j["jones_spectrum"] =
        verdict.tag == subspec::SpectrumTag::Continuum ? "Continuum"
        : verdict.tag == subspec::SpectrumTag::Four    ? "Four"
        : verdict.tag == subspec::SpectrumTag::CoxeterValue
            ? "CoxeterValue(" + std::to_string(*verdict.witness_n) + ")"
            : "NotInSpectrum";
    if (cert.all_ok() && depth >= 6) {
        auto pv = subspec::cell_tower_preview(cell, cert, depth);
        Json t;
        t["row_norms_squared"] = {pv.row0_norm2, pv.row1_norm2};
        t["vertical_norms_squared"] = {pv.vertical_norm2, pv.vertical_dual_norm2};
        t["composition_identity"] = pv.composition_identity;
        t["row0_top_dim"] = pv.row0.levels.back().total_dim.get_str();
        t["row1_top_dim"] = pv.row1.levels.back().total_dim.get_str();
        j["tower_preview"] = std::move(t);
    }
    emit(j);
    std::cerr << "cell " << (cert.all_ok() ? "verified" : "FAILED") << ", index "
              << cert.subfactor_index << "\n";
    return cert.all_ok() ? 0 : 1;
}

int run_basic_construction(const std::string& path, const std::string& role) {
    auto sc = subspec::parse_scene_file(path);
    auto B = sc.subalgebra(role);
    auto bc = subspec::basic_construction(sc.ambient, B);
    Json j = report_head("basic-construction", {{path, subspec::file_fingerprint(path)}});
    j["role"] = role;
    j["l2_dim"] = bc.l2_dim;
    j["m1_dimension"] = bc.m1_dimension;
    j["prop_i_residual"] = bc.prop_i;
    j["prop_ii_commutant_matches"] = bc.prop_ii_dims;
    j["prop_ii_residual"] = bc.prop_ii;
    j["prop_iii_central_support_one"] = bc.prop_iii;
    j["lambda_from_trace"] = bc.markov_lambda;
    j["lambda_B_M"] = graph_json(bc.lambda_B_M);
    j["lambda_M_M1"] = graph_json(bc.lambda_M_M1);
    j["transpose_law_exact"] = bc.transpose_law_exact;
    emit(j);
    bool ok = bc.prop_i <= 1e-10 && bc.prop_ii <= 1e-8 && bc.prop_ii_dims && bc.prop_iii &&
              bc.transpose_law_exact;
    std::cerr << "basic construction " << (ok ? "verified" : "FAILED") << "; dim M1 = "
              << bc.m1_dimension << "\n";
    return ok ? 0 : 1;
}

int run_index(const std::string& path, const std::string& role, std::uint64_t seed) {
    auto sc = subspec::parse_scene_file(path);
    auto B = sc.subalgebra(role);
    auto rep = subspec::index_report(sc.ambient, B, seed);
    Json j = report_head("index", {{path, subspec::file_fingerprint(path)}});
    j["role"] = role;
    j["seed"] = seed;
    j["ind_ob"] = rep.ind_ob;
    j["ob_size"] = rep.ob_size;
    j["lambda_E"] = rep.lambda_E;
    j["lambda_bracket"] = {rep.lambda_lower, rep.lambda_upper};
    j["rank_deficient"] = rep.rank_deficient;
    j["multiplicity_condition"] = rep.multiplicity_condition;
    j["regime"] = rep.regime;
    emit(j);
    std::cerr << "ind_ob = " << rep.ind_ob << ", lambda(E) ~ " << rep.lambda_E << " ("
              << rep.regime << ")\n";
    return 0;
}

int run_enumerate(std::size_t max_vertices, std::int64_t max_mult, std::int64_t max_edges,
                  std::size_t cap, std::string atlas_path) {
    subspec::EnumerationBounds b{max_vertices, max_mult, max_edges, cap};
    auto en = subspec::enumerate_graphs(b);
    auto atlas = subspec::classify(en.graphs);
    if (atlas_path.empty()) {
        const char* dir = std::getenv("SUBSPEC_ATLAS_DIR");
        atlas_path = (dir ? std::string(dir) : std::string(".")) + "/atlas.jsonl";
    }
    subspec::AtlasStore store(atlas_path);
    std::size_t before = store.size();
    for (const auto& cg : en.graphs) {
        subspec::CanonicalGraph withnorm = cg;
        withnorm.norm_squared = subspec::norm_squared(cg.to_graph());
        store.record(withnorm, withnorm.norm_squared,
                     subspec::classify_exact(withnorm.to_graph()));
    }
    Json j = report_head("enumerate", {});
    j["bounds"] = {{"max_vertices", max_vertices},
                   {"max_multiplicity", max_mult},
                   {"max_edges", max_edges},
                   {"cap", cap}};
    j["graph_count"] = en.graphs.size();
    j["truncated"] = en.truncated;
    j["atlas_path"] = atlas_path;
    j["atlas_new_records"] = store.size() - before;
    Json entries = Json::array();
    for (const auto& e : atlas) {
        Json ej;
        ej["norm_squared"] = e.norm_squared;
        ej["class"] = subspec::norm_class_name(e.cls);
        ej["witness"] = {{"rows", e.witness.rows}, {"cols", e.witness.cols}, {"mult", e.witness.mult}};
        entries.push_back(std::move(ej));
    }
    j["atlas"] = std::move(entries);
    emit(j);
    std::cerr << en.graphs.size() << " graphs, " << atlas.size() << " distinct norms\n";
    return 0;
}

int run_query_e2(double alpha, double tol, std::size_t max_vertices, std::int64_t max_mult,
                 std::int64_t max_edges, std::size_t cap) {
    subspec::EnumerationBounds b{max_vertices, max_mult, max_edges, cap};
    auto res = subspec::membership_query(alpha, tol, b);
    Json j = report_head("query-e2", {});
    j["alpha"] = alpha;
    j["tol"] = tol;
    j["found"] = res.found;
    if (res.found) {
        j["witness"] = {{"rows", res.witness->rows},
                        {"cols", res.witness->cols},
                        {"mult", res.witness->mult},
                        {"norm_squared", res.witness->norm_squared}};
    } else {
        j["note"] = res.note;
    }
    emit(j);
    std::cerr << (res.found ? "witness found" : "not found within bounds") << "\n";
    return res.found ? 0 : 1;
}

int run_emit_dot(const std::string& path, const std::string& out_path) {
    auto g = load_graph(path);
    if (g.is_lazy()) throw subspec::SchemaError("emit-dot: pass a finite graph file");
    std::string dot = subspec::emit_dot(*g.file.graph);
    if (out_path.empty()) {
        std::cout << dot;
    } else {
        std::ofstream out(out_path);
        out << dot;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subspec: bipartite inclusion graphs, Markov weights, Jones towers, "
                 "commuting squares, Folner certificates, and the graph-norm spectrum"};
    app.require_subcommand(1);

    std::string graph_path, matrix_path, scene_path, cell_path, set_spec, basepoint, role = "B";
    std::string lambda_str, mode = "a_inf", method = "spectral", atlas_path, out_path;
    double tol = subspec::kDefaultTol, eps = 0.5, alpha = 0.0, qtol = 1e-9;
    int depth = 8, n = 0, horizon_nmax = 500;
    long range_lo = 0, range_hi = 4;
    std::size_t max_size = 10000, max_vertices = 8, cap = 2000000;
    std::int64_t max_mult = 1, max_edges = 64;
    std::uint64_t seed = 7;
    std::optional<std::uint64_t> perron_seed;

    auto* c_norm = app.add_subcommand("norm", "largest eigenvalue of Lambda^t Lambda");
    c_norm->add_option("--graph", graph_path)->required();
    c_norm->add_option("--tol", tol);

    auto* c_perron = app.add_subcommand("perron", "dominant eigenpair of a symmetric matrix");
    c_perron->add_option("--matrix", matrix_path)->required();
    c_perron->add_option("--tol", tol);
    c_perron->add_option("--seed", [&perron_seed](const std::vector<std::string>& v) {
        perron_seed = std::stoull(v[0]);
        return true;
    }, "randomize the start vector");

    auto* c_markov = app.add_subcommand("markov", "solve or verify Markov weights");
    c_markov->add_option("--graph", graph_path)->required();
    c_markov->add_option("--basepoint", basepoint);
    c_markov->add_option("--tol", tol);

    auto* c_tower = app.add_subcommand("tower", "Bratteli tower with dims and traces");
    c_tower->add_option("--graph", graph_path)->required();
    c_tower->add_option("--depth", depth);
    c_tower->add_option("--basepoint", basepoint);
    c_tower->add_option("--tol", tol);

    auto* c_tlj = app.add_subcommand("tlj", "Jones polynomials P_n and positivity");
    c_tlj->add_option("--n", n)->required();
    c_tlj->add_option("--lambda", lambda_str);
    c_tlj->add_option("--horizon-nmax", horizon_nmax);

    auto* c_coup = app.add_subcommand("couplings", "A_inf / locally trivial coupling sequences");
    c_coup->add_option("--lambda", lambda_str)->required();
    c_coup->add_option("--nmax", n);
    c_coup->add_option("--mode", mode)->check(CLI::IsMember({"a_inf", "locally-trivial"}));
    c_coup->add_option("--range-lo", range_lo);
    c_coup->add_option("--range-hi", range_hi);

    auto* c_fc = app.add_subcommand("folner-check", "check condition (4.2.1) for an explicit F");
    c_fc->add_option("--graph", graph_path)->required();
    c_fc->add_option("--set", set_spec)->required();
    c_fc->add_option("--epsilon", eps)->required();

    auto* c_fs = app.add_subcommand("folner-search", "search for a Folner certificate");
    c_fs->add_option("--graph", graph_path)->required();
    c_fs->add_option("--epsilon", eps)->required();
    c_fs->add_option("--max-size", max_size);
    c_fs->add_option("--method", method)->check(CLI::IsMember({"interval", "spectral"}));

    auto* c_cell = app.add_subcommand("cell-verify", "verify a Markov cell");
    c_cell->add_option("--cell", cell_path)->required();
    c_cell->add_option("--depth", depth);

    auto* c_bc = app.add_subcommand("basic-construction", "Jones basic construction on L^2(M)");
    c_bc->add_option("--scene", scene_path)->required();
    c_bc->add_option("--role", role);

    auto* c_idx = app.add_subcommand("index", "index via orthonormal basis and lambda(E)");
    c_idx->add_option("--scene", scene_path)->required();
    c_idx->add_option("--role", role);
    c_idx->add_option("--seed", seed);

    auto* c_enum = app.add_subcommand("enumerate", "enumerate graphs and build the atlas");
    c_enum->add_option("--max-vertices", max_vertices);
    c_enum->add_option("--max-mult", max_mult);
    c_enum->add_option("--max-edges", max_edges);
    c_enum->add_option("--cap", cap);
    c_enum->add_option("--atlas", atlas_path);

    auto* c_query = app.add_subcommand("query-e2", "bounded membership query for E^2");
    c_query->add_option("--alpha", alpha)->required();
    c_query->add_option("--tol", qtol);
    c_query->add_option("--max-vertices", max_vertices);
    c_query->add_option("--max-mult", max_mult);
    c_query->add_option("--max-edges", max_edges);
    c_query->add_option("--cap", cap);

    auto* c_dot = app.add_subcommand("emit-dot", "emit a DOT drawing of a graph");
    c_dot->add_option("--graph", graph_path)->required();
    c_dot->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors are input errors
    }

    try {
        if (app.got_subcommand(c_norm)) return run_norm(graph_path, tol);
        if (app.got_subcommand(c_perron)) return run_perron(matrix_path, tol, perron_seed);
        if (app.got_subcommand(c_markov)) return run_markov(graph_path, basepoint, tol);
        if (app.got_subcommand(c_tower)) return run_tower(graph_path, depth, basepoint, tol);
        if (app.got_subcommand(c_tlj)) return run_tlj(n, lambda_str, horizon_nmax);
        if (app.got_subcommand(c_coup))
            return run_couplings(lambda_str, n > 0 ? n : 16, mode, range_lo, range_hi);
        if (app.got_subcommand(c_fc)) return run_folner_check(graph_path, set_spec, eps);
        if (app.got_subcommand(c_fs)) return run_folner_search(graph_path, eps, max_size, method);
        if (app.got_subcommand(c_cell)) return run_cell_verify(cell_path, depth);
        if (app.got_subcommand(c_bc)) return run_basic_construction(scene_path, role);
        if (app.got_subcommand(c_idx)) return run_index(scene_path, role, seed);
        if (app.got_subcommand(c_enum))
            return run_enumerate(max_vertices, max_mult, max_edges, cap, atlas_path);
        if (app.got_subcommand(c_query))
            return run_query_e2(alpha, qtol, max_vertices, max_mult, max_edges, cap);
        if (app.got_subcommand(c_dot)) return run_emit_dot(graph_path, out_path);
    } catch (const subspec::SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
