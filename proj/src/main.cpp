#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "netoutlier/database.hpp"
#include "netoutlier/errors.hpp"
#include "netoutlier/metrics.hpp"
#include "netoutlier/numtext.hpp"
#include "netoutlier/scoring.hpp"
#include "netoutlier/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netoutlier;

namespace {

constexpr int kExitUsage = 64;

struct Options {
    std::string db_path;
    std::string out_path;
    std::string report_path;
    std::string sample_id;
    std::vector<int> k_list = {10, 15, 20, 25, 30};
    std::vector<double> lambda1_list = {0.1, 0.5, 1.0, 2.5, 5.0, 10.0};
    double lambda2 = 1.0;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool trace = false;
    bool as_json = false;

    SynthConfig synth;
    std::string topology = "ring";
};

std::vector<std::pair<int, double>> make_grid(const Options& opt) {
    if (opt.k_list.empty()) throw ValidationError("--k-list must not be empty");
    if (opt.lambda1_list.empty()) throw ValidationError("--lambda1-list must not be empty");
    std::vector<std::pair<int, double>> grid;
    for (int K : opt.k_list)
        for (double l1 : opt.lambda1_list) grid.push_back({K, l1});
    return grid;
}

json run_provenance(const std::string& command, const Options& opt) {
    json j;
    j["command"] = command;
    j["db"] = opt.db_path;
    j["k_list"] = opt.k_list;
    j["lambda1_list"] = opt.lambda1_list;
    j["lambda2"] = opt.lambda2;
    j["seed"] = opt.seed;
    j["jobs"] = opt.jobs;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

NetworkDatabase load_ready(const std::string& path) {
    return impute_missing(load_database(path));
}

int cmd_gen(const Options& opt) {
    SynthConfig cfg = opt.synth;
    cfg.seed = opt.seed;
    if (opt.topology == "ring") {
        cfg.topology = Topology::RingLattice;
    } else if (opt.topology == "grid") {
        cfg.topology = Topology::Grid;
    } else {
        throw ValidationError("--topology must be ring or grid");
    }
    auto [db, truth] = generate_synthetic(cfg);
    fs::create_directories(opt.out_path);
    save_database(db, opt.out_path);

    json t;
    t["labels"] = truth.labels;
    t["planted"] = truth.planted;
    json c;
    c["nodes"] = cfg.n_nodes;
    c["samples"] = cfg.n_samples;
    c["outliers"] = cfg.n_outliers;
    c["signal"] = cfg.signal_strength;
    c["planted_size"] = cfg.planted_size;
    c["clusters"] = cfg.heterogeneity;
    c["two_sided"] = cfg.two_sided;
    c["topology"] = opt.topology;
    c["rewire_p"] = cfg.rewire_p;
    c["seed"] = cfg.seed;
    t["config"] = c;
    write_text((fs::path(opt.out_path) / "truth.json").string(), t.dump(2) + "\n");
    std::cout << "wrote " << db.n_samples() << " samples over " << db.n_nodes()
              << " nodes to " << opt.out_path << "\n";
    return 0;
}

int cmd_detect(const Options& opt) {
    const NetworkDatabase db = load_ready(opt.db_path);
    OutlierReport report =
        detect_all(db, make_grid(opt), opt.lambda2, opt.seed, SolverOptions{}, opt.jobs);
    json j = report_json(report, opt.trace);
    j["run"] = run_provenance("detect", opt);
    write_text(opt.out_path, j.dump(2) + "\n");
    std::cout << "scored " << db.n_samples() << " samples; top: "
              << (report.ranking.empty() ? "-" : report.ranking.front()) << "\n";
    return 0;
}

int cmd_explain(const Options& opt) {
    const NetworkDatabase db = load_ready(opt.db_path);
    SampleRecord rec =
        detect_sample(db, opt.sample_id, make_grid(opt), opt.lambda2, opt.seed,
                      SolverOptions{}, opt.jobs);

    json j;
    j["sample"] = rec.sample_id;
    j["score"] = rec.outcome.score;
    j["config"] = {{"k", rec.k}, {"lambda1", rec.lambda1}};
    j["nodes"] = rec.outcome.explanation.selected_nodes;
    j["subnetworks"] = rec.outcome.explanation.subnetworks;
    json weights = json::object();
    for (const auto& [node, w] : rec.outcome.explanation.weights)
        weights[std::to_string(node)] = w;
    j["weights"] = weights;
    j["fallback"] = rec.outcome.fallback;
    j["run"] = run_provenance("explain", opt);

    if (!opt.out_path.empty()) write_text(opt.out_path, j.dump(2) + "\n");
    if (opt.as_json) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "sample " << rec.sample_id << "\n"
              << "  score   " << to_shortest_string(rec.outcome.score) << "  (K=" << rec.k
              << ", lambda1=" << to_shortest_string(rec.lambda1) << ")\n";
    if (rec.outcome.fallback)
        std::cout << "  scored over all nodes (no support survived)\n";
    std::cout << "  nodes   ";
    for (int v : rec.outcome.explanation.selected_nodes) std::cout << db.node_ids[v] << " ";
    std::cout << "\n  subnetworks\n";
    for (const auto& comp : rec.outcome.explanation.subnetworks) {
        std::cout << "    ";
        for (int v : comp)
            std::cout << db.node_ids[v] << "(w="
                      << to_shortest_string(rec.outcome.explanation.weights.at(v)) << ") ";
        std::cout << "\n";
    }
    return 0;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : (v[k - 1] + v[k]) / 2.0;
}

int cmd_eval(const Options& opt) {
    std::ifstream in(opt.report_path);
    if (!in) throw IoError("cannot read " + opt.report_path);
    json rep;
    try {
        in >> rep;
    } catch (const json::parse_error& e) {
        throw FormatError(opt.report_path + ": " + std::string(e.what()));
    }
    if (!rep.contains("ranking") || !rep.contains("samples"))
        throw FormatError("report needs 'ranking' and 'samples'");

    // Labels (and planted sets, when generated data) come from truth.json
    // next to the database, falling back to the database's labels file.
    std::map<std::string, int> labels;
    std::map<std::string, std::vector<int>> planted;
    const fs::path truth_path = fs::path(opt.db_path) / "truth.json";
    if (fs::exists(truth_path)) {
        GroundTruth truth = load_truth(truth_path.string());
        labels = truth.labels;
        planted = truth.planted;
    } else {
        const NetworkDatabase db = load_database(opt.db_path);
        if (!db.labels) throw ValidationError("no labels: need truth.json or labels.csv");
        labels = *db.labels;
    }

    std::map<std::string, double> scores;
    for (const auto& [id, body] : rep["samples"].items())
        scores[id] = body.at("score").get<double>();
    for (const auto& [id, lab] : labels)
        if (!scores.count(id)) throw ValidationError("report has no score for " + id);

    const RocResult roc = roc_auc(scores, labels);

    fs::create_directories(opt.out_path);
    std::string csv = "fpr,tpr\n";
    for (const auto& [fpr, tpr] : roc.curve)
        csv += to_shortest_string(fpr) + "," + to_shortest_string(tpr) + "\n";
    write_text((fs::path(opt.out_path) / "roc.csv").string(), csv);

    json metrics;
    metrics["auc"] = roc.auc;
    const std::vector<std::string> ranking = rep["ranking"].get<std::vector<std::string>>();
    auto rank_of = [&](const std::string& id) {
        for (size_t r = 0; r < ranking.size(); ++r)
            if (ranking[r] == id) return static_cast<int>(r) + 1;
        return 0;
    };
    json outliers = json::object();
    std::vector<double> top10_f1;
    for (const auto& [id, nodes] : planted) {
        json o;
        const int rank = rank_of(id);
        o["rank"] = rank;
        o["score"] = scores.at(id);
        // best component against the planted set: components are the unit the
        // explanation reports, so credit the one that matches best
        double best = 0.0;
        Recovery best_rec;
        for (const auto& comp : rep["samples"][id]["subnetworks"]) {
            Recovery r = subnetwork_recovery(comp.get<std::vector<int>>(), nodes);
            if (r.f1 > best) {
                best = r.f1;
                best_rec = r;
            }
        }
        o["precision"] = best_rec.precision;
        o["recall"] = best_rec.recall;
        o["f1"] = best_rec.f1;
        outliers[id] = o;
        if (rank >= 1 && rank <= 10) top10_f1.push_back(best);
    }
    if (!planted.empty()) metrics["outliers"] = outliers;
    if (!top10_f1.empty()) metrics["median_top10_f1"] = median(top10_f1);
    metrics["run"] = {{"command", "eval"},
                      {"db", opt.db_path},
                      {"report", opt.report_path}};
    write_text((fs::path(opt.out_path) / "metrics.json").string(), metrics.dump(2) + "\n");
    std::cout << "auc " << to_shortest_string(roc.auc);
    if (!top10_f1.empty())
        std::cout << "  median top-10 recovery f1 " << to_shortest_string(median(top10_f1));
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network-sample outlier detection with subnetwork explanations"};
    app.require_subcommand(1);
    Options opt;

    auto add_grid_flags = [&](CLI::App* c) {
        c->add_option("--k-list", opt.k_list, "neighborhood sizes")->delimiter(',');
        c->add_option("--lambda1-list", opt.lambda1_list, "network penalty weights")
            ->delimiter(',');
        c->add_option("--lambda2", opt.lambda2, "hinge loss weight");
        c->add_option("--seed", opt.seed, "RNG seed");
        c->add_option("--jobs", opt.jobs, "parallel worker threads");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic database");
    gen->add_option("--out", opt.out_path, "output directory")->required();
    gen->add_option("--nodes", opt.synth.n_nodes, "number of nodes");
    gen->add_option("--samples", opt.synth.n_samples, "number of samples");
    gen->add_option("--outliers", opt.synth.n_outliers, "number of planted outliers");
    gen->add_option("--signal", opt.synth.signal_strength, "shift in sigma units");
    gen->add_option("--planted-size", opt.synth.planted_size, "nodes per planted subgraph");
    gen->add_option("--clusters", opt.synth.heterogeneity, "inlier clusters");
    gen->add_flag("--two-sided", opt.synth.two_sided, "shift down as well as up");
    gen->add_option("--topology", opt.topology, "ring or grid");
    gen->add_option("--rewire-p", opt.synth.rewire_p, "ring rewiring probability");
    gen->add_option("--seed", opt.seed, "RNG seed");

    CLI::App* detect = app.add_subcommand("detect", "score every sample");
    detect->add_option("--db", opt.db_path, "database directory")->required();
    detect->add_option("--out", opt.out_path, "report JSON path")->required();
    detect->add_flag("--trace", opt.trace, "include solver traces in the report");
    add_grid_flags(detect);

    CLI::App* explain = app.add_subcommand("explain", "explain one sample");
    explain->add_option("--db", opt.db_path, "database directory")->required();
    explain->add_option("--sample", opt.sample_id, "sample id")->required();
    explain->add_option("--out", opt.out_path, "optional JSON output path");
    explain->add_flag("--json", opt.as_json, "JSON to stdout instead of text");
    add_grid_flags(explain);

    CLI::App* eval = app.add_subcommand("eval", "score a report against ground truth");
    eval->add_option("--db", opt.db_path, "database directory")->required();
    eval->add_option("--report", opt.report_path, "report JSON from detect")->required();
    eval->add_option("--out", opt.out_path, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(opt);
        if (detect->parsed()) return cmd_detect(opt);
        if (explain->parsed()) return cmd_explain(opt);
        return cmd_eval(opt);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
