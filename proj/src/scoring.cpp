#include "netoutlier/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <utility>

#include "netoutlier/errors.hpp"
#include "netoutlier/kernels.hpp"
#include "netoutlier/neighbors.hpp"
#include "netoutlier/objective.hpp"

namespace netoutlier {

namespace {

// Design + summary graph for one (candidate, K); the Laplacian factor is
// expensive and only needed when some lambda1 > 0, so it is built lazily.
struct CandidateContext {
    DesignSet design;
    SummaryGraph graph;
    LaplacianFactor factor;
    bool factor_ready = false;
};

CandidateContext make_context(const NetworkDatabase& db, const std::string& candidate_id,
                              int K, std::uint64_t seed) {
    CandidateContext ctx;
    ctx.design = assemble_design(db, candidate_id, K, seed);
    ctx.graph = build_summary_graph(db, candidate_id, ctx.design.neighbor_ids);
    return ctx;
}

void check_config(const NetworkDatabase& db, const DetectConfig& cfg) {
    if (cfg.K < 1 || cfg.K > db.n_samples() - 1)
        throw ValidationError("K must be in [1, m-1], got " + std::to_string(cfg.K) +
                              " with m = " + std::to_string(db.n_samples()));
    if (cfg.lambda1 < 0.0) throw ValidationError("lambda1 must be >= 0");
    if (cfg.lambda2 < 0.0) throw ValidationError("lambda2 must be >= 0");
}

// Newton with support shrinking: re-solve on the kept nodes (warm started)
// until no pair falls below the sparsify threshold, then scatter back.
struct ShrinkingSolve {
    ModelCoefficients coeffs;  // over the full node set
    std::vector<TraceRow> trace;
    int iterations = 0;
};

ShrinkingSolve solve_with_shrinking(SolverProblem problem, const SolverOptions& opts) {
    const int n_full = problem.n_nodes();
    ShrinkingSolve out;

    NewtonResult res = newton_solve(problem, opts);
    out.iterations = res.iterations;
    out.trace = res.trace;
    Eigen::VectorXd wt = std::move(res.w_tilde);

    std::vector<int> node_of(n_full);  // reduced index -> original node
    std::iota(node_of.begin(), node_of.end(), 0);

    bool emptied = false;
    while (true) {
        ShrunkProblem shr = shrink_support(problem, wt, opts);
        const int n_cur = problem.n_nodes();
        const int nk = static_cast<int>(shr.kept.size());
        if (nk == n_cur) break;
        if (nk == 0) {
            emptied = true;
            break;
        }
        Eigen::VectorXd init(2 * nk);
        std::vector<int> next_map(nk);
        for (int r = 0; r < nk; ++r) {
            init[r] = wt[shr.kept[r]];
            init[nk + r] = wt[n_cur + shr.kept[r]];
            next_map[r] = node_of[shr.kept[r]];
        }
        node_of = std::move(next_map);
        problem = std::move(shr.problem);
        res = newton_solve(problem, opts, init);
        out.iterations += res.iterations;
        out.trace.insert(out.trace.end(), res.trace.begin(), res.trace.end());
        wt = std::move(res.w_tilde);
    }

    Eigen::VectorXd wt_full = Eigen::VectorXd::Zero(2 * n_full);
    if (!emptied) {
        const int n_cur = problem.n_nodes();
        for (int r = 0; r < n_cur; ++r) {
            wt_full[node_of[r]] = wt[r];
            wt_full[n_full + node_of[r]] = wt[n_cur + r];
        }
    }
    out.coeffs = recover_coefficients(wt_full, opts);
    out.coeffs.iterations_used = out.iterations;
    out.coeffs.final_objective = emptied ? 0.0 : objective_value(problem, wt);
    return out;
}

DetectOutcome run_config(const NetworkDatabase& db, CandidateContext& ctx,
                         const DetectConfig& cfg, const SolverOptions& opts, int jobs) {
    if (cfg.lambda1 > 0.0 && !ctx.factor_ready) {
        ctx.factor = assemble_full_factor(ctx.graph);
        ctx.factor_ready = true;
    }
    static const LaplacianFactor no_factor;
    SolverProblem problem =
        build_problem(ctx.design, cfg.lambda1 > 0.0 ? ctx.factor : no_factor, cfg.lambda1,
                      cfg.lambda2, jobs);
    ShrinkingSolve sol = solve_with_shrinking(std::move(problem), opts);

    DetectOutcome out;
    out.iterations_used = sol.iterations;
    out.final_objective = sol.coeffs.final_objective;
    out.trace = std::move(sol.trace);
    out.explanation = extract_subnetworks(sol.coeffs, ctx.graph);
    out.explanation.candidate_id = ctx.design.candidate_id;
    out.fallback = sol.coeffs.support.empty();
    out.score = lof_score(db, ctx.design.candidate_id, sol.coeffs.support, cfg.K, jobs);
    return out;
}

// Every grid point for one sample; the maximum score wins, ties go to the
// earliest (smallest K, then smallest lambda1) configuration.
SampleRecord eval_sample(const NetworkDatabase& db, int sample_index,
                         const std::vector<std::pair<int, double>>& grid, double lambda2,
                         std::uint64_t seed, const SolverOptions& opts, int jobs) {
    const std::string& id = db.samples[sample_index].sample_id;
    const std::uint64_t task_seed = per_sample_seed(seed, sample_index);

    SampleRecord rec;
    rec.sample_id = id;
    bool have = false;
    CandidateContext ctx;
    int ctx_k = -1;
    for (const auto& [K, lambda1] : grid) {
        if (K != ctx_k) {
            ctx = make_context(db, id, K, task_seed);
            ctx_k = K;
        }
        DetectConfig cfg{K, lambda1, lambda2};
        DetectOutcome out;
        try {
            out = run_config(db, ctx, cfg, opts, jobs);
        } catch (const NumericalError& err) {
            // Score the sample anyway so the ranking stays total; the empty
            // explanation plus the fallback flag record the failure.
            out.score = lof_score(db, id, {}, K, jobs);
            out.explanation.candidate_id = id;
            out.fallback = true;
            out.trace = err.trace();
        }
        if (!have || out.score > rec.outcome.score) {
            rec.outcome = std::move(out);
            rec.k = K;
            rec.lambda1 = lambda1;
            have = true;
        }
    }
    return rec;
}

std::vector<std::pair<int, double>> canonical_grid(std::vector<std::pair<int, double>> grid) {
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

}  // namespace

Explanation extract_subnetworks(const ModelCoefficients& coeffs, const SummaryGraph& g) {
    Explanation e;
    e.selected_nodes = coeffs.support;
    e.subnetworks = induced_components(g, coeffs.support);
    for (int i : coeffs.support) e.weights[i] = coeffs.w[i];
    return e;
}

double lof_score(const NetworkDatabase& db, const std::string& candidate_id,
                 const std::vector<int>& selected_nodes, int K, int jobs) {
    const int m = db.n_samples();
    const int cand = db.sample_index(candidate_id);
    if (K < 1 || K > m - 1)
        throw ValidationError("LOF needs 1 <= MinPts <= m-1, got " + std::to_string(K));

    std::vector<int> cols = selected_nodes;
    if (cols.empty()) {
        cols.resize(db.n_nodes());
        std::iota(cols.begin(), cols.end(), 0);
    }
    for (int c : cols)
        if (c < 0 || c >= db.n_nodes())
            throw ValidationError("selected node index out of range: " + std::to_string(c));

    Eigen::MatrixXd M(m, static_cast<int>(cols.size()));
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < static_cast<int>(cols.size()); ++c)
            M(i, c) = db.samples[i].values[cols[c]];

    const Eigen::MatrixXd D2 = kernels::pairwise_sqdist(M, jobs);
    const Eigen::MatrixXd D = D2.cwiseMax(0.0).cwiseSqrt();

    // k-distance and neighborhood per point; distance ties are all included,
    // so a neighborhood can exceed K members.
    Eigen::VectorXd kdist(m);
    std::vector<std::vector<int>> nbrs(m);
    std::vector<double> others;
    for (int i = 0; i < m; ++i) {
        others.clear();
        for (int j = 0; j < m; ++j)
            if (j != i) others.push_back(D(i, j));
        std::nth_element(others.begin(), others.begin() + (K - 1), others.end());
        kdist[i] = others[K - 1];
        for (int j = 0; j < m; ++j)
            if (j != i && D(i, j) <= kdist[i]) nbrs[i].push_back(j);
    }

    Eigen::VectorXd lrd(m);
    for (int i = 0; i < m; ++i) {
        double reach_sum = 0.0;
        for (int j : nbrs[i]) reach_sum += std::max(kdist[j], D(i, j));
        lrd[i] = 1.0 / (reach_sum / static_cast<double>(nbrs[i].size()) + 1e-10);
    }

    double ratio_sum = 0.0;
    for (int j : nbrs[cand]) ratio_sum += lrd[j] / lrd[cand];
    return ratio_sum / static_cast<double>(nbrs[cand].size());
}

DetectOutcome detect_one(const NetworkDatabase& db, const std::string& candidate_id,
                         const DetectConfig& config, std::uint64_t seed,
                         const SolverOptions& opts, int jobs) {
    check_config(db, config);
    db.sample_index(candidate_id);  // validates the id
    CandidateContext ctx = make_context(db, candidate_id, config.K, seed);
    return run_config(db, ctx, config, opts, jobs);
}

SampleRecord detect_sample(const NetworkDatabase& db, const std::string& sample_id,
                           const std::vector<std::pair<int, double>>& grid, double lambda2,
                           std::uint64_t seed, const SolverOptions& opts, int jobs) {
    if (grid.empty()) throw ValidationError("configuration grid is empty");
    const std::vector<std::pair<int, double>> order = canonical_grid(grid);
    for (const auto& [K, lambda1] : order) check_config(db, DetectConfig{K, lambda1, lambda2});
    return eval_sample(db, db.sample_index(sample_id), order, lambda2, seed, opts, jobs);
}

OutlierReport detect_all(const NetworkDatabase& db,
                         const std::vector<std::pair<int, double>>& grid, double lambda2,
                         std::uint64_t seed, const SolverOptions& opts, int jobs) {
    if (grid.empty()) throw ValidationError("configuration grid is empty");
    const std::vector<std::pair<int, double>> order = canonical_grid(grid);
    for (const auto& [K, lambda1] : order) check_config(db, DetectConfig{K, lambda1, lambda2});

    const int m = db.n_samples();
    OutlierReport report;
    report.samples.resize(m);

    std::exception_ptr failure;
    const int threads = jobs > 0 ? jobs : 1;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < m; ++i) {
        try {
            report.samples[i] = eval_sample(db, i, order, lambda2, seed, opts, 1);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (report.samples[a].outcome.score != report.samples[b].outcome.score)
            return report.samples[a].outcome.score > report.samples[b].outcome.score;
        return report.samples[a].sample_id < report.samples[b].sample_id;
    });
    report.ranking.reserve(m);
    for (int i : idx) report.ranking.push_back(report.samples[i].sample_id);
    return report;
}

nlohmann::json report_json(const OutlierReport& report, bool with_trace) {
    nlohmann::json j;
    j["ranking"] = report.ranking;
    nlohmann::json samples = nlohmann::json::object();
    for (const SampleRecord& rec : report.samples) {
        nlohmann::json s;
        s["score"] = rec.outcome.score;
        s["config"] = {{"k", rec.k}, {"lambda1", rec.lambda1}};
        s["nodes"] = rec.outcome.explanation.selected_nodes;
        s["subnetworks"] = rec.outcome.explanation.subnetworks;
        nlohmann::json weights = nlohmann::json::object();
        for (const auto& [node, w] : rec.outcome.explanation.weights)
            weights[std::to_string(node)] = w;
        s["weights"] = weights;
        s["fallback"] = rec.outcome.fallback;
        if (with_trace) {
            nlohmann::json rows = nlohmann::json::array();
            for (const TraceRow& r : rec.outcome.trace)
                rows.push_back({{"iteration", r.iteration},
                                {"objective", r.objective},
                                {"grad_norm", r.grad_norm},
                                {"step", r.step},
                                {"active_size", r.active_size}});
            s["trace"] = rows;
        }
        samples[rec.sample_id] = std::move(s);
    }
    j["samples"] = std::move(samples);
    return j;
}

}  // namespace netoutlier
