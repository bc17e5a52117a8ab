// Command-line front end: dataset generation, embedding, scoring, refinement
// and neighborhood-size sweeps with file-based, reproducible I/O.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>

#include "lpm/datasets.hpp"
#include "lpm/embed_gp.hpp"
#include "lpm/embed_psa.hpp"
#include "lpm/io.hpp"
#include "lpm/measures.hpp"
#include "lpm/refine.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("PROCRUSTES_EMBED_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // hardware concurrency
}

lpm::Matrix jacobians_to_matrix(const std::vector<lpm::Matrix>& js) {
    // One row per point: the 3x2 frame flattened row-major.
    lpm::Matrix out(static_cast<lpm::Index>(js.size()), 6);
    for (size_t i = 0; i < js.size(); ++i)
        for (lpm::Index r = 0; r < 3; ++r)
            for (lpm::Index c = 0; c < 2; ++c) out(static_cast<lpm::Index>(i), 2 * r + c) = js[i](r, c);
    return out;
}

json measures_to_json(const lpm::MeasureReport& rep) {
    return json{{"R", rep.r},
                {"R_N", rep.r_n},
                {"R_PCA", rep.r_pca},
                {"R_C", rep.r_c},
                {"lower_bound_N", rep.lower_bound_n},
                {"skipped", rep.skipped}};
}

struct EmbedConfig {
    std::string algo = "gp";
    std::string input;
    std::string out = "Y.csv";
    std::string report_path = "report.json";
    int k = 12;
    double eps = 0.0;
    int dim = 2;
    std::uint64_t rng_seed = 0;
    long long seed_index = -1;
    bool seed_random = false;
    bool do_refine = false;
    double sa_alpha = 0.95;
    long long sa_steps = 0;
    int sa_chains = 1;
    bool header = false;
    int threads = 0;

    json to_json() const {
        return json{{"command", "embed"},   {"algo", algo},
                    {"input", input},       {"out", out},
                    {"report", report_path},{"k", k},
                    {"eps", eps},           {"dim", dim},
                    {"rng_seed", rng_seed}, {"seed_index", seed_index},
                    {"seed_random", seed_random}, {"refine", do_refine},
                    {"sa_alpha", sa_alpha}, {"sa_steps", sa_steps},
                    {"sa_chains", sa_chains}, {"header", header}};
    }
};

lpm::NeighborhoodGraph build_graph(const lpm::Matrix& x, int k, double eps) {
    if (eps > 0.0) return lpm::eps_graph(x, eps);
    return lpm::knn_graph(x, k);
}

int cmd_generate(const std::string& kind, long long n, double noise, std::uint64_t seed,
                 const std::string& out, const std::string& truth, const std::string& jac,
                 bool header) {
    lpm::RngStream rng(seed);
    lpm::SyntheticDataset ds;
    const auto k = lpm::kind_from_name(kind);
    switch (k) {
        case lpm::DatasetKind::swissroll: ds = lpm::gen_swissroll(n, noise, rng); break;
        case lpm::DatasetKind::hemisphere: ds = lpm::gen_hemisphere(n, rng); break;
        case lpm::DatasetKind::cylinder: ds = lpm::gen_cylinder(n, rng); break;
    }
    lpm::write_csv(out, ds.x, header);
    if (!truth.empty()) lpm::write_csv(truth, ds.z, header);
    if (!jac.empty()) lpm::write_csv(jac, jacobians_to_matrix(ds.jacobians), header);
    std::cout << "wrote " << ds.x.rows() << "x" << ds.x.cols() << " points to " << out << "\n";
    return 0;
}

int cmd_embed(const EmbedConfig& cfg) {
    lpm::set_thread_count(resolve_threads(cfg.threads));
    const auto t0 = Clock::now();
    const lpm::Matrix x = lpm::read_csv(cfg.input, cfg.header);
    lpm::RngStream rng(cfg.rng_seed);

    json timings;
    auto t = Clock::now();
    const auto g = build_graph(x, cfg.k, cfg.eps);
    timings["graph_s"] = seconds_since(t);

    lpm::Matrix y;
    std::vector<std::string> warnings;
    bool algorithmic_failure = false;
    t = Clock::now();
    if (cfg.algo == "gp") {
        lpm::GpOptions opt;
        opt.seed_index = cfg.seed_index;
        opt.random_seed = cfg.seed_random;
        auto res = lpm::embed_gp(x, g, cfg.dim, opt, rng);
        y = std::move(res.y);
        warnings = std::move(res.warnings);
    } else if (cfg.algo == "psa") {
        lpm::PsaOptions opt;
        opt.schedule.alpha = cfg.sa_alpha;
        opt.schedule.steps_per_temp = cfg.sa_steps;
        opt.chains = cfg.sa_chains;
        auto res = lpm::embed_psa(x, g, cfg.dim, opt, rng);
        y = std::move(res.y);
        warnings = std::move(res.warnings);
        if (!res.alignment_complete) algorithmic_failure = true;
    } else {
        throw CLI::ValidationError("--algo must be gp or psa");
    }
    timings["embed_s"] = seconds_since(t);

    if (cfg.do_refine) {
        t = Clock::now();
        auto res = lpm::refine(x, y, g);
        y = std::move(res.y);
        timings["refine_s"] = seconds_since(t);
    }

    t = Clock::now();
    const auto measures = lpm::measure_report(x, y, g);
    timings["score_s"] = seconds_since(t);
    timings["total_s"] = seconds_since(t0);

    const std::string suffix = algorithmic_failure ? ".partial" : "";
    lpm::write_csv(cfg.out + suffix, y, cfg.header);
    json report;
    report["config"] = cfg.to_json();
    report["measures"] = measures_to_json(measures);
    report["timings"] = timings;
    report["warnings"] = warnings;
    lpm::write_text_file(cfg.report_path + suffix, report.dump(2) + "\n");
    std::cout << measures.summary() << "\n";
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return algorithmic_failure ? 1 : 0;
}

int cmd_score(const std::string& input, const std::string& embedding,
              const std::vector<int>& ks, double eps, const std::string& report_path,
              bool header, int threads) {
    lpm::set_thread_count(resolve_threads(threads));
    const lpm::Matrix x = lpm::read_csv(input, header);
    const lpm::Matrix y = lpm::read_csv(embedding, header);
    json out;
    out["reports"] = json::array();
    if (eps > 0.0) {
        const auto g = lpm::eps_graph(x, eps);
        lpm::MeasureOptions opt;
        opt.neighborhood_param = "eps=" + std::to_string(eps);
        const auto rep = lpm::measure_report(x, y, g, opt);
        out["reports"].push_back(
            {{"eps", eps}, {"measures", measures_to_json(rep)}});
        std::cout << "eps=" << eps << " " << rep.summary() << "\n";
    }
    for (int k : ks) {
        const auto g = lpm::knn_graph(x, k);
        lpm::MeasureOptions opt;
        opt.neighborhood_param = "k=" + std::to_string(k);
        const auto rep = lpm::measure_report(x, y, g, opt);
        out["reports"].push_back({{"k", k}, {"measures", measures_to_json(rep)}});
        std::cout << "k=" << k << " " << rep.summary() << "\n";
    }
    if (!report_path.empty()) lpm::write_text_file(report_path, out.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const std::string& algo, const std::string& input, const std::vector<int>& ks,
              int dim, std::uint64_t seed, const std::string& out, bool header, int threads,
              int sa_chains) {
    lpm::set_thread_count(resolve_threads(threads));
    const lpm::Matrix x = lpm::read_csv(input, header);
    std::string csv = "k,R_N,R_C,lower_bound,runtime_s,is_min\r\n";
    std::vector<std::array<double, 4>> rows;
    for (int k : ks) {
        const auto t0 = Clock::now();
        const auto g = lpm::knn_graph(x, k);
        lpm::RngStream rng(seed);
        lpm::Matrix y;
        if (algo == "gp") {
            y = lpm::embed_gp(x, g, dim, lpm::GpOptions{}, rng).y;
        } else if (algo == "psa") {
            lpm::PsaOptions opt;
            opt.chains = sa_chains;
            y = lpm::embed_psa(x, g, dim, opt, rng).y;
        } else {
            throw CLI::ValidationError("--algo must be gp or psa");
        }
        const auto rep = lpm::measure_report(x, y, g);
        rows.push_back({rep.r_n, rep.r_c, rep.lower_bound_n, seconds_since(t0)});
        std::cout << "k=" << k << " " << rep.summary() << "\n";
    }
    size_t argmin = 0;
    for (size_t i = 1; i < rows.size(); ++i)
        if (rows[i][0] < rows[argmin][0]) argmin = i;
    char buf[256];
    for (size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d\r\n", ks[i], rows[i][0],
                      rows[i][1], rows[i][2], rows[i][3], i == argmin ? 1 : 0);
        csv += buf;
    }
    lpm::write_text_file(out, csv);
    std::cout << "minimum R_N at k=" << ks[argmin] << "\n";
    return 0;
}

int cmd_refine(const std::string& input, const std::string& embedding, int k, double eps,
               double tol, long long max_iters, const std::string& out,
               const std::string& trace_path, bool header, int threads) {
    lpm::set_thread_count(resolve_threads(threads));
    const lpm::Matrix x = lpm::read_csv(input, header);
    const lpm::Matrix y0 = lpm::read_csv(embedding, header);
    const auto g = build_graph(x, k, eps);
    const auto res = lpm::refine(x, y0, g, tol, max_iters);
    lpm::write_csv(out, res.y, header);
    if (!trace_path.empty()) {
        std::string csv = "iter,R,R_N,max_displacement\r\n";
        char buf[160];
        for (const auto& it : res.trace.iterations) {
            std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\r\n",
                          static_cast<long long>(it.iter), it.r, it.r_n, it.max_displacement);
            csv += buf;
        }
        lpm::write_text_file(trace_path, csv);
    }
    const char* reason = res.trace.stop_reason == lpm::RefineStop::converged ? "converged"
                         : res.trace.stop_reason == lpm::RefineStop::max_iters ? "max_iters"
                                                                               : "non_decreasing";
    std::cout << "refined in " << res.trace.iterations.size() - 1 << " iteration(s), stop reason: "
              << reason << ", R " << res.trace.iterations.front().r << " -> "
              << res.trace.iterations.back().r << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local-Procrustes embedding toolkit: generate synthetic manifolds, embed them, "
                 "score embeddings and refine them"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset as CSV");
    std::string gen_kind;
    long long gen_n = 1600;
    double gen_noise = 0.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "X.csv", gen_truth, gen_jac;
    bool gen_header = false;
    gen->add_option("--kind", gen_kind, "swissroll|hemisphere|cylinder")->required();
    gen->add_option("--n", gen_n, "sample size");
    gen->add_option("--noise", gen_noise, "Gaussian noise sd added to X");
    gen->add_option("--rng-seed", gen_seed, "random seed");
    gen->add_option("--out", gen_out, "output CSV for X");
    gen->add_option("--truth", gen_truth, "optional CSV for the ground-truth chart Z");
    gen->add_option("--jacobians", gen_jac, "optional CSV for the tangent frames (rows: 3x2 row-major)");
    gen->add_flag("--header", gen_header, "write a header row");

    // embed
    auto* emb = app.add_subcommand("embed", "Embed a point set with GP or PSA");
    EmbedConfig ecfg;
    emb->add_option("--algo", ecfg.algo, "gp|psa")->required();
    emb->add_option("--input", ecfg.input, "input CSV")->required();
    emb->add_option("--k", ecfg.k, "neighborhood size");
    emb->add_option("--eps", ecfg.eps, "eps-ball radius (overrides --k)");
    emb->add_option("--dim", ecfg.dim, "output dimension");
    emb->add_option("--rng-seed", ecfg.rng_seed, "random seed");
    emb->add_option("--seed-index", ecfg.seed_index, "GP seed neighborhood (default: centroid-closest)");
    emb->add_flag("--seed-random", ecfg.seed_random, "GP: choose the seed neighborhood randomly");
    emb->add_flag("--refine", ecfg.do_refine, "run iterative refinement on the output");
    emb->add_option("--sa-alpha", ecfg.sa_alpha, "PSA: geometric cooling factor");
    emb->add_option("--sa-steps", ecfg.sa_steps, "PSA: moves per temperature (0: 20n)");
    emb->add_option("--sa-chains", ecfg.sa_chains,
                    "PSA: independent SA chains, best-scoring embedding wins");
    emb->add_option("--out", ecfg.out, "output CSV for Y");
    emb->add_option("--report", ecfg.report_path, "output JSON report");
    emb->add_flag("--header", ecfg.header, "CSV files carry a header row");
    emb->add_option("--threads", ecfg.threads, "worker threads (0: hardware)");

    // score
    auto* sco = app.add_subcommand("score", "Score an embedding against its input");
    std::string sco_input, sco_embedding, sco_report;
    std::vector<int> sco_ks;
    double sco_eps = 0.0;
    bool sco_header = false;
    int sco_threads = 0;
    sco->add_option("--input", sco_input, "input CSV")->required();
    sco->add_option("--embedding", sco_embedding, "embedding CSV")->required();
    sco->add_option("--k", sco_ks, "neighborhood sizes (repeat or comma-separate)")->delimiter(',');
    sco->add_option("--eps", sco_eps, "eps-ball radius");
    sco->add_option("--report", sco_report, "output JSON report");
    sco->add_flag("--header", sco_header, "CSV files carry a header row");
    sco->add_option("--threads", sco_threads, "worker threads");

    // sweep
    auto* swp = app.add_subcommand("sweep", "Run an embedding across neighborhood sizes");
    std::string swp_algo = "gp", swp_input, swp_out = "sweep.csv";
    std::vector<int> swp_ks{6, 9, 12, 15, 18};
    int swp_dim = 2, swp_threads = 0, swp_chains = 1;
    std::uint64_t swp_seed = 0;
    bool swp_header = false;
    swp->add_option("--algo", swp_algo, "gp|psa");
    swp->add_option("--input", swp_input, "input CSV")->required();
    swp->add_option("--k", swp_ks, "neighborhood sizes")->delimiter(',');
    swp->add_option("--dim", swp_dim, "output dimension");
    swp->add_option("--rng-seed", swp_seed, "random seed");
    swp->add_option("--sa-chains", swp_chains, "PSA chains per k");
    swp->add_option("--out", swp_out, "output CSV table");
    swp->add_flag("--header", swp_header, "CSV files carry a header row");
    swp->add_option("--threads", swp_threads, "worker threads");

    // refine
    auto* ref = app.add_subcommand("refine", "Iteratively refine an existing embedding");
    std::string ref_input, ref_embedding, ref_out = "refined.csv", ref_trace;
    int ref_k = 12, ref_threads = 0;
    double ref_eps = 0.0, ref_tol = 1e-6;
    long long ref_iters = 200;
    bool ref_header = false;
    ref->add_option("--input", ref_input, "input CSV")->required();
    ref->add_option("--embedding", ref_embedding, "embedding CSV")->required();
    ref->add_option("--k", ref_k, "neighborhood size");
    ref->add_option("--eps", ref_eps, "eps-ball radius (overrides --k)");
    ref->add_option("--tol", ref_tol, "relative improvement tolerance");
    ref->add_option("--max-iters", ref_iters, "iteration cap");
    ref->add_option("--out", ref_out, "output CSV");
    ref->add_option("--trace", ref_trace, "output CSV with the per-iteration trace");
    ref->add_flag("--header", ref_header, "CSV files carry a header row");
    ref->add_option("--threads", ref_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_kind, gen_n, gen_noise, gen_seed, gen_out, gen_truth, gen_jac,
                                gen_header);
        if (emb->parsed()) return cmd_embed(ecfg);
        if (sco->parsed())
            return cmd_score(sco_input, sco_embedding, sco_ks, sco_eps, sco_report, sco_header,
                             sco_threads);
        if (swp->parsed())
            return cmd_sweep(swp_algo, swp_input, swp_ks, swp_dim, swp_seed, swp_out, swp_header,
                             swp_threads, swp_chains);
        if (ref->parsed())
            return cmd_refine(ref_input, ref_embedding, ref_k, ref_eps, ref_tol, ref_iters,
                              ref_out, ref_trace, ref_header, ref_threads);
    } catch (const lpm::SolverDiverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const lpm::DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
