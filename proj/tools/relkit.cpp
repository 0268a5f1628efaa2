// relkit: command-line surface for the linear relation toolkit.
//
// Subcommands load matrices or relations from JSON documents, run the
// decomposition / classification / domination / closability machinery, and
// emit machine-readable reports with an assertion ledger.
//
// Exit codes: 0 success, 1 invariant failure, 2 input error,
//             3 mathematical precondition violation.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relkit/relkit.hpp"

namespace {

using relkit::json;
using relkit::Mat;
using relkit::Vec;

struct cli_options {
    std::string input;
    std::string input2;
    std::string mode;
    std::string out;
    std::vector<double> levels;
    std::vector<double> points;
    std::vector<int> grids{10, 100, 1000};
    std::uint64_t seed = 42;
    int count = 100;
    int dims = 5;
    bool text = false;
    double tol_rank = -1.0;
};

relkit::tolerance_config base_tolerances(const cli_options& opt) {
    relkit::tolerance_config tol;
    if (const char* env = std::getenv("RELKIT_TOL_RANK")) {
        try {
            tol.rank_rtol = std::stod(env);
        } catch (const std::exception&) {
            throw relkit::parse_error("RELKIT_TOL_RANK is not a number");
        }
    }
    if (opt.tol_rank > 0.0) tol.rank_rtol = opt.tol_rank;  // flags win over env
    tol.validate();
    return tol;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw relkit::parse_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw relkit::parse_error("invalid JSON in " + path + ": " + e.what());
    }
}

void render_text(const relkit::report& rep, std::ostream& os) {
    json j = rep.to_json(false);
    os << "command: " << j["command"].get<std::string>() << "\n";
    os << "results:\n" << j["results"].dump(2) << "\n";
    os << "assertions:\n";
    for (const auto& a : j["assertions"]) {
        os << "  [" << (a["pass"].get<bool>() ? "PASS" : "FAIL") << "] "
           << a["name"].get<std::string>() << "  residual=" << a["residual"].dump()
           << " tol=" << a["tolerance"].dump() << "\n";
    }
}

int emit(const relkit::report& rep, const cli_options& opt) {
    std::ostringstream body;
    if (opt.text)
        render_text(rep, body);
    else
        body << rep.to_json(true).dump(2) << "\n";
    if (opt.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(opt.out);
        if (!out) throw relkit::parse_error("cannot open output file: " + opt.out);
        out << body.str();
    }
    return rep.all_pass() ? 0 : 1;
}

json inputs_block(const cli_options& opt, const json& primary, const json& secondary = json()) {
    json inputs{{"digest", relkit::input_digest(primary)}};
    if (!opt.input.empty()) inputs["file"] = opt.input;
    if (!secondary.is_null()) {
        inputs["digest2"] = relkit::input_digest(secondary);
        if (!opt.input2.empty()) inputs["file2"] = opt.input2;
    }
    return inputs;
}

// ---------------------------------------------------------------------------

int cmd_classify(const cli_options& opt) {
    relkit::tolerance_config tol = base_tolerances(opt);
    json doc = load_json(opt.input);
    relkit::relation_document rd = relkit::parse_relation_document(doc, tol);
    tol = rd.tolerances;
    const relkit::linear_relation& t = rd.relation;
    relkit::linear_relation adj = t.adjoint(tol);

    relkit::report rep("classify");
    rep.set_inputs(inputs_block(opt, doc));
    json& res = rep.results();
    res["relation"] = relkit::relation_to_json(t);
    res["dom_dim"] = t.dom(tol).dim();
    res["ran_dim"] = t.ran(tol).dim();
    res["ker_dim"] = t.ker(tol).dim();
    res["mul_dim"] = t.mul(tol).dim();
    res["is_operator"] = relkit::is_operator(t, tol);
    res["is_regular"] = relkit::is_regular(t, tol);
    res["is_singular"] = relkit::is_singular(t, tol);

    // Every equivalent characterization is listed with its own residual.
    const int mul_dim = t.mul(tol).dim();
    rep.add_assertion({"operator_iff_trivial_mul", json(res["is_operator"]), json(mul_dim == 0),
                       0.0, static_cast<double>(mul_dim),
                       (mul_dim == 0) == res["is_operator"].get<bool>()});
    const double sing_adj = relkit::gap(adj.dom(tol), adj.ker(tol));
    const double sing_cl = relkit::gap(t.dom(tol), t.ker(tol));
    rep.add_assertion({"singular_via_adjoint_domain", json(res["is_singular"]),
                       json(sing_adj <= tol.eq), tol.eq, sing_adj,
                       (sing_adj <= tol.eq) == res["is_singular"].get<bool>()});
    rep.add_assertion({"singular_via_closure_kernel", json(res["is_singular"]),
                       json(sing_cl <= tol.eq), tol.eq, sing_cl,
                       (sing_cl <= tol.eq) == res["is_singular"].get<bool>()});
    const double reg_gap = relkit::gap(adj.dom(tol), relkit::subspace::full(t.dim_k()));
    rep.add_assertion({"regular_via_adjoint_domain_dense", json(res["is_regular"]),
                       json(reg_gap <= tol.eq), tol.eq, reg_gap,
                       (reg_gap <= tol.eq) == res["is_regular"].get<bool>()});
    return emit(rep, opt);
}

int cmd_decompose(const cli_options& opt) {
    relkit::tolerance_config tol = base_tolerances(opt);
    json doc = load_json(opt.input);
    relkit::relation_document rd = relkit::parse_relation_document(doc, tol);
    tol = rd.tolerances;
    const relkit::linear_relation& t = rd.relation;

    std::string mode = opt.mode.empty() ? "lebesgue" : opt.mode;
    relkit::lebesgue_split split = [&]() {
        if (mode == "lebesgue") return relkit::lebesgue(t, tol);
        if (mode == "weak") return relkit::weak_lebesgue(t, tol);
        if (mode == "type" || mode == "weak-type") {
            if (opt.input2.empty())
                throw relkit::parse_error("decompose: --input2 SUBSPACE_FILE required for mode " +
                                          mode);
            relkit::subspace m = relkit::parse_subspace_document(load_json(opt.input2), tol);
            return mode == "type" ? relkit::lebesgue_type(t, m, tol)
                                  : relkit::weak_lebesgue_type(t, m, tol);
        }
        throw relkit::parse_error("decompose: unknown mode '" + mode + "'");
    }();

    relkit::report rep("decompose");
    rep.set_inputs(inputs_block(opt, doc));
    json& res = rep.results();
    res["mode"] = mode;
    res["t1"] = relkit::relation_to_json(split.t1);
    res["t2"] = relkit::relation_to_json(split.t2);
    res["q"] = relkit::subspace_to_json(split.q);
    res["canonical_m"] = relkit::subspace_to_json(split.canonical_m);
    res["flags"] = json{{"t1_is_operator", split.t1_is_operator},
                        {"t1_is_regular", split.t1_is_regular},
                        {"t2_is_singular", split.t2_is_singular}};
    if (split.t2_is_singular) {
        relkit::canonical_subspaces cs = relkit::canonical_subspace(split, tol);
        res["l_component"] = relkit::subspace_to_json(cs.l);
    }

    rep.check("reconstruction",
              relkit::gap(relkit::rel_sum(split.t1, split.t2, tol).graph(), t.graph()), tol.eq);
    rep.check("range_orthogonality", relkit::range_orthogonality_residual(split, tol),
              tol.contain);
    rep.check("domain_t1", relkit::gap(split.t1.dom(tol), t.dom(tol)), tol.eq);
    rep.check("domain_t2", relkit::gap(split.t2.dom(tol), t.dom(tol)), tol.eq);
    return emit(rep, opt);
}

int cmd_dominate(const cli_options& opt) {
    relkit::tolerance_config tol = base_tolerances(opt);
    json doc1 = load_json(opt.input);
    json doc2 = load_json(opt.input2);
    relkit::relation_document rd1 = relkit::parse_relation_document(doc1, tol);
    relkit::relation_document rd2 = relkit::parse_relation_document(doc2, tol);

    relkit::report rep("dominate");
    rep.set_inputs(inputs_block(opt, doc1, doc2));
    json& res = rep.results();
    std::optional<relkit::domination_witness> w =
        relkit::dominates(rd1.relation, rd2.relation, tol);
    res["dominated"] = w.has_value();
    if (w) {
        res["witness"] = json{{"c", relkit::matrix_to_json(w->c)},
                              {"frobenius_norm", w->frobenius_norm},
                              {"spectral_norm", w->spectral_norm},
                              {"c_min", w->c_min},
                              {"contractive", w->contractive},
                              {"residual", w->residual}};
        if (w->canonical_c) res["witness"]["canonical_c"] = relkit::matrix_to_json(*w->canonical_c);
        rep.check("witness_residual", w->residual, tol.contain);
    }
    std::optional<double> c = relkit::min_constant(rd1.relation, rd2.relation, tol);
    if (c) res["min_constant"] = *c;
    return emit(rep, opt);
}

int cmd_metric(const cli_options& opt) {
    relkit::tolerance_config tol = base_tolerances(opt);
    json doc = load_json(opt.input);
    relkit::relation_document rd = relkit::parse_relation_document(doc, tol);
    tol = rd.tolerances;
    const relkit::linear_relation& t = rd.relation;

    relkit::report rep("metric");
    rep.set_inputs(inputs_block(opt, doc));
    json& res = rep.results();
    json table = json::array();
    Mat w = t.graph().frame();
    for (int j = 0; j < w.cols(); ++j) {
        Vec f = w.col(j).head(t.dim_h());
        Vec fp = w.col(j).tail(t.dim_k());
        relkit::metric_value mv = relkit::metric_defect(t, f, fp, tol);
        const double proj = relkit::projection_defect(t, f, fp, tol);
        const double complement_value = fp.squaredNorm() - proj;
        table.push_back(json{{"generator", j},
                             {"metric_defect", mv.value},
                             {"confident", mv.confident},
                             {"projection_defect", proj},
                             {"projection_complement", complement_value}});
        rep.check("oracle_agreement_generator_" + std::to_string(j),
                  std::abs(mv.value - complement_value),
                  tol.metric * (1.0 + fp.squaredNorm()));
    }
    res["defect_table"] = table;
    const bool metric_reg = relkit::is_regular_metric(t, tol);
    const bool alg_reg = relkit::is_regular(t, tol);
    res["is_regular_metric"] = metric_reg;
    res["is_regular"] = alg_reg;
    rep.check("regularity_routes_agree", metric_reg == alg_reg ? 0.0 : 1.0, 0.5);
    return emit(rep, opt);
}

int cmd_truncate(const cli_options& opt) {
    relkit::tolerance_config tol = base_tolerances(opt);
    json doc = load_json(opt.input);
    relkit::relation_document rd = relkit::parse_relation_document(doc, tol);
    tol = rd.tolerances;
    const relkit::linear_relation& t = rd.relation;
    if (opt.levels.empty()) throw relkit::parse_error("truncate: --levels required");

    relkit::truncation_sequence seq = relkit::make_truncation_sequence(t, opt.levels, tol);
    relkit::report rep("truncate");
    rep.set_inputs(inputs_block(opt, doc));
    json& res = rep.results();
    res["levels"] = opt.levels;
    json eig = json::array();
    for (int i = 0; i < seq.eigenvalues.size(); ++i) eig.push_back(seq.eigenvalues(i));
    res["eigenvalues"] = eig;

    // Norm table over the domain frame, one row per level.
    relkit::subspace d = t.dom(tol);
    json table = json::array();
    for (std::size_t n = 0; n < seq.operators.size(); ++n) {
        json row = json::array();
        for (int j = 0; j < d.dim(); ++j)
            row.push_back((seq.operators[n] * d.frame().col(j)).norm());
        table.push_back(json{{"level", seq.levels[n]}, {"norms", row}});
    }
    res["norm_table"] = table;
    const bool closable = relkit::closability_from_sequence(t, seq, tol);
    res["closable"] = closable;
    rep.check("sequence_certifies_closability", closable ? 0.0 : 1.0, 0.5);
    for (int j = 0; j < d.dim(); ++j) {
        const double tn = (seq.operators.back() * d.frame().col(j)).norm();
        const double tf = relkit::apply(t, Vec(d.frame().col(j)), tol).norm();
        rep.check("terminal_norm_generator_" + std::to_string(j), std::abs(tn - tf),
                  tol.metric * (1.0 + tf));
    }
    return emit(rep, opt);
}

int cmd_pair(const cli_options& opt) {
    relkit::tolerance_config tol = base_tolerances(opt);
    json doc1 = load_json(opt.input);
    json doc2 = load_json(opt.input2);
    Mat a = relkit::matrix_from_json(doc1.at("matrix"), "a.matrix");
    Mat b = relkit::matrix_from_json(doc2.at("matrix"), "b.matrix");

    relkit::report rep("pair");
    rep.set_inputs(inputs_block(opt, doc1, doc2));
    json& res = rep.results();

    if (opt.mode == "psd") {
        relkit::psd_split s = relkit::psd_pair_decomposition(a, b, tol);
        res["b_ac"] = relkit::matrix_to_json(s.b_ac);
        res["b_s"] = relkit::matrix_to_json(s.b_s);
        Mat oracle = relkit::ando_ac_oracle(a, b, 0.1 * tol.oracle, 60, tol);
        const double oracle_gap = relkit::spectral_norm(s.b_ac - oracle);
        res["oracle_gap"] = oracle_gap;
        rep.check("oracle_gap", oracle_gap, tol.oracle);
        rep.check("additivity", relkit::max_abs(s.b_ac + s.b_s - b),
                  1e-10 * (1.0 + relkit::max_abs(b)));
        rep.check("b_ac_psd", std::max(0.0, -relkit::min_eigenvalue(s.b_ac)), 1e-10);
        rep.check("b_s_psd", std::max(0.0, -relkit::min_eigenvalue(s.b_s)), 1e-10);
        return emit(rep, opt);
    }

    relkit::operator_pair pair = relkit::pair_relation(a, b, tol);
    relkit::pair_split s = relkit::pair_lebesgue(pair, tol);
    res["b1"] = relkit::matrix_to_json(s.b1);
    res["b2"] = relkit::matrix_to_json(s.b2);
    res["p"] = relkit::subspace_to_json(s.p);
    res["relation"] = relkit::relation_to_json(pair.relation);
    rep.check("additivity", relkit::max_abs(s.b1 + s.b2 - b), 1e-12 * (1.0 + relkit::max_abs(b)));
    rep.check("regular_component_operator",
              relkit::is_operator(relkit::pair_relation(a, s.b1, tol).relation, tol) ? 0.0 : 1.0,
              0.5);
    return emit(rep, opt);
}

int cmd_point_eval(const cli_options& opt) {
    relkit::tolerance_config tol = base_tolerances(opt);
    std::vector<int> grids = opt.grids;
    if (!opt.levels.empty()) {
        grids.clear();
        for (double l : opt.levels) grids.push_back(static_cast<int>(l));
    }
    relkit::point_eval_study study = relkit::run_point_eval_study(grids, opt.points, tol);

    relkit::report rep("point-eval");
    json params{{"grids", grids}, {"points", opt.points}};
    rep.set_inputs(json{{"digest", relkit::input_digest(params)}, {"parameters", params}});
    json& res = rep.results();
    json levels = json::array();
    for (const auto& level : study.levels) {
        levels.push_back(json{{"grid_size", level.grid_size},
                              {"dx", level.dx},
                              {"snapped_points", level.snapped_points},
                              {"snapped_warning", level.snapped_warning},
                              {"operator_norm", level.operator_norm},
                              {"regular_part_constant", level.regular_part_constant},
                              {"range_dim", level.range_dim},
                              {"adjoint_dom_dim", level.adjoint_dom_dim}});
    }
    res["levels"] = levels;
    res["norm_ratios"] = study.norm_ratios;
    res["notes"] =
        "On every finite grid the evaluation relation is an everywhere-defined operator whose "
        "adjoint has full domain; the operator norm grows like 1/sqrt(dx) under refinement, so "
        "the discretizations admit no bounded limit: the continuum evaluation operator is "
        "singular with trivial adjoint domain.";
    for (std::size_t i = 0; i < study.norm_ratios.size(); ++i) {
        if (!opt.points.empty())
            rep.check("norm_growth_" + std::to_string(i),
                      study.norm_ratios[i] >= 2.0 ? 0.0 : 1.0, 0.5, json(true),
                      json(study.norm_ratios[i]));
    }
    return emit(rep, opt);
}

int cmd_verify(const cli_options& opt) {
    relkit::tolerance_config tol = base_tolerances(opt);
    relkit::verify_outcome outcome = relkit::run_verify(opt.seed, opt.count, opt.dims, tol);

    relkit::report rep("verify");
    json params{{"seed", opt.seed}, {"count", opt.count}, {"dims", opt.dims},
                {"rank_rtol", tol.rank_rtol}};
    rep.set_inputs(json{{"digest", relkit::input_digest(params)}, {"parameters", params}});
    json& res = rep.results();
    json suites = json::array();
    for (const auto& s : outcome.suites) {
        suites.push_back(json{{"suite", s.name},
                              {"cases", s.cases},
                              {"checks", s.checks},
                              {"failures", s.failures},
                              {"worst_residual", s.worst_residual},
                              {"failed_checks", s.failed_checks}});
        rep.check("suite_" + s.name, static_cast<double>(s.failures), 0.0,
                  json("no failures"), json(s.failures));
    }
    res["suites"] = suites;
    if (!outcome.all_pass && !outcome.reproducer.is_null()) {
        const std::string path = "relkit_reproducer.json";
        std::ofstream repro(path);
        repro << outcome.reproducer.dump(2) << "\n";
        res["reproducer_file"] = path;
    }
    return emit(rep, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relkit: computational toolkit for linear relations between "
                 "finite-dimensional spaces"};
    app.require_subcommand(1);

    cli_options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", opt.input, "primary input document (JSON)");
        cmd->add_option("--input2", opt.input2, "secondary input document (JSON)");
        cmd->add_option("--mode", opt.mode, "command mode");
        cmd->add_option("--levels", opt.levels, "numeric levels (cutoffs / grid sizes)");
        cmd->add_option("--points", opt.points, "sample abscissae in [0,1]");
        cmd->add_option("--seed", opt.seed, "random seed");
        cmd->add_option("--count", opt.count, "number of random cases");
        cmd->add_option("--dims", opt.dims, "maximum space dimension");
        cmd->add_option("--tol-rank", opt.tol_rank, "override rank tolerance");
        cmd->add_option("--out", opt.out, "write the report to a file");
        cmd->add_flag("--text", opt.text, "human-readable output");
        bool json_flag = false;
        cmd->add_flag("--json", json_flag, "machine-readable output (default)");
    };

    CLI::App* classify = app.add_subcommand("classify", "operator/regular/singular flags");
    CLI::App* decompose = app.add_subcommand("decompose", "Lebesgue-style decompositions");
    CLI::App* dominate = app.add_subcommand("dominate", "domination witnesses");
    CLI::App* metric = app.add_subcommand("metric", "variational vs projection defects");
    CLI::App* truncate = app.add_subcommand("truncate", "spectral truncation sequences");
    CLI::App* pair = app.add_subcommand("pair", "operator pair decompositions");
    CLI::App* point_eval = app.add_subcommand("point-eval", "grid evaluation study");
    CLI::App* verify = app.add_subcommand("verify", "run the seeded property suites");
    for (CLI::App* cmd : {classify, decompose, dominate, metric, truncate, pair, point_eval, verify})
        add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (classify->parsed()) return cmd_classify(opt);
        if (decompose->parsed()) return cmd_decompose(opt);
        if (dominate->parsed()) return cmd_dominate(opt);
        if (metric->parsed()) return cmd_metric(opt);
        if (truncate->parsed()) return cmd_truncate(opt);
        if (pair->parsed()) return cmd_pair(opt);
        if (point_eval->parsed()) return cmd_point_eval(opt);
        if (verify->parsed()) return cmd_verify(opt);
    } catch (const relkit::parse_error& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "input"}}.dump() << "\n";
        return 2;
    } catch (const relkit::dimension_mismatch& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "input"}}.dump() << "\n";
        return 2;
    } catch (const relkit::condition_violation& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "precondition"}, {"clause", e.clause()}}
                         .dump()
                  << "\n";
        return 3;
    } catch (const relkit::internal_consistency& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "invariant"}}.dump() << "\n";
        return 1;
    } catch (const relkit::error& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "precondition"}}.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "input"}}.dump() << "\n";
        return 2;
    }
    return 2;
}
