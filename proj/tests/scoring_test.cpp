#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "netoutlier/errors.hpp"
#include "netoutlier/scoring.hpp"
#include "netoutlier/synth.hpp"

using namespace netoutlier;

namespace {

// n=1 line at 0, 1, 2, 10 with MinPts=2; LOF values worked out by hand.
NetworkDatabase line_db() {
    NetworkDatabase db;
    db.node_ids = {"x"};
    db.samples.resize(4);
    const double vals[4] = {0.0, 1.0, 2.0, 10.0};
    for (int s = 0; s < 4; ++s) {
        db.samples[s].sample_id = "p" + std::to_string(s);
        db.samples[s].values = Eigen::VectorXd::Constant(1, vals[s]);
        db.samples[s].missing_mask = {false};
    }
    return db;
}

NetworkDatabase small_synth(std::uint64_t seed, int n = 20, int m = 25) {
    SynthConfig cfg;
    cfg.n_nodes = n;
    cfg.n_samples = m;
    cfg.n_outliers = 3;
    cfg.planted_size = 4;
    cfg.seed = seed;
    return generate_synthetic(cfg).first;
}

}  // namespace

TEST_SUITE("scoring") {

TEST_CASE("LOF hand-computed fixture") {
    const NetworkDatabase db = line_db();
    // lrd: p0 -> 1/1.5, p1 -> 1/2, p2 -> 1/1.5, p3 -> 1/8.5
    CHECK(lof_score(db, "p3", {0}, 2) == doctest::Approx(119.0 / 24.0).epsilon(1e-6));
    CHECK(lof_score(db, "p1", {0}, 2) == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    CHECK(lof_score(db, "p0", {0}, 2) == doctest::Approx(7.0 / 8.0).epsilon(1e-6));
}

TEST_CASE("LOF of duplicated points stays finite and near one") {
    NetworkDatabase db = line_db();
    for (int s = 0; s < 3; ++s) db.samples[s].values[0] = 5.0;  // three exact duplicates
    const double v = lof_score(db, "p0", {0}, 2);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("LOF argument validation and empty-selection fallback") {
    const NetworkDatabase db = line_db();
    CHECK_THROWS_AS(lof_score(db, "p0", {0}, 4), ValidationError);   // K > m-1
    CHECK_THROWS_AS(lof_score(db, "p0", {0}, 0), ValidationError);
    CHECK_THROWS_AS(lof_score(db, "p0", {7}, 2), ValidationError);   // node out of range
    CHECK_THROWS_AS(lof_score(db, "nope", {0}, 2), ValidationError);
    // empty selection means the full node set
    CHECK(lof_score(db, "p3", {}, 2) == lof_score(db, "p3", {0}, 2));
}

TEST_CASE("deep cluster members score near 1, a far point scores high") {
    Rng rng(61);
    NetworkDatabase db;
    db.node_ids = {"a", "b"};
    db.samples.resize(41);
    for (int s = 0; s < 40; ++s) {
        db.samples[s].sample_id = testutil::padded('s', s);
        db.samples[s].values =
            Eigen::Vector2d(rng.normal(0.0, 1.0), rng.normal(0.0, 1.0));
        db.samples[s].missing_mask = {false, false};
    }
    db.samples[40].sample_id = "far";
    db.samples[40].values = Eigen::Vector2d(40.0, -35.0);
    db.samples[40].missing_mask = {false, false};
    CHECK(lof_score(db, "far", {0, 1}, 10) > 5.0);
    CHECK(lof_score(db, "s000", {0, 1}, 10) < 1.6);
}

TEST_CASE("extract_subnetworks groups the support by summary components") {
    const NetworkDatabase db = small_synth(2);
    const DesignSet d = assemble_design(db, "s05", 5, 99);
    const SummaryGraph g = build_summary_graph(db, "s05", d.neighbor_ids);
    ModelCoefficients coeffs;
    coeffs.w = Eigen::VectorXd::Zero(db.n_nodes());
    coeffs.w[2] = 0.5;
    coeffs.w[3] = -0.25;
    coeffs.w[11] = 0.25;
    coeffs.support = {2, 3, 11};
    const Explanation e = extract_subnetworks(coeffs, g);
    CHECK(e.selected_nodes == coeffs.support);
    CHECK(e.weights.at(2) == 0.5);
    CHECK(e.weights.at(11) == 0.25);
    // the subnetworks partition the support
    std::vector<int> flattened;
    for (const auto& comp : e.subnetworks)
        flattened.insert(flattened.end(), comp.begin(), comp.end());
    std::sort(flattened.begin(), flattened.end());
    CHECK(flattened == coeffs.support);
}

TEST_CASE("detect_one produces a normalized, partitioned explanation") {
    const NetworkDatabase db = small_synth(3);
    const DetectConfig cfg{6, 1.0, 1.0};
    const DetectOutcome out = detect_one(db, "s10", cfg, 12345);
    CHECK(std::isfinite(out.score));
    CHECK(out.score > 0.0);
    CHECK(!out.trace.empty());
    if (!out.fallback) {
        REQUIRE(!out.explanation.selected_nodes.empty());
        double l1 = 0.0;
        for (const auto& [node, w] : out.explanation.weights) {
            CHECK(node >= 0);
            CHECK(node < db.n_nodes());
            l1 += std::abs(w);
        }
        CHECK(l1 == doctest::Approx(1.0));
        std::vector<int> flattened;
        for (const auto& comp : out.explanation.subnetworks)
            flattened.insert(flattened.end(), comp.begin(), comp.end());
        std::sort(flattened.begin(), flattened.end());
        CHECK(flattened == out.explanation.selected_nodes);
    }
    // deterministic
    const DetectOutcome again = detect_one(db, "s10", cfg, 12345);
    CHECK(again.score == out.score);
    CHECK(again.explanation.selected_nodes == out.explanation.selected_nodes);
    CHECK_THROWS_AS(detect_one(db, "s10", DetectConfig{25, 1.0, 1.0}, 1), ValidationError);
    CHECK_THROWS_AS(detect_one(db, "s10", DetectConfig{6, -1.0, 1.0}, 1), ValidationError);
}

TEST_CASE("a singleton grid reproduces detect_one for every sample") {
    const NetworkDatabase db = small_synth(4);
    const std::uint64_t seed = 7;
    const OutlierReport report = detect_all(db, {{7, 0.5}}, 1.0, seed);
    REQUIRE(report.samples.size() == static_cast<size_t>(db.n_samples()));
    for (int i = 0; i < db.n_samples(); ++i) {
        const DetectOutcome one = detect_one(db, db.samples[i].sample_id, {7, 0.5, 1.0},
                                             per_sample_seed(seed, i));
        CHECK(report.samples[i].outcome.score == one.score);
        CHECK(report.samples[i].outcome.explanation.selected_nodes ==
              one.explanation.selected_nodes);
        CHECK(report.samples[i].outcome.explanation.subnetworks ==
              one.explanation.subnetworks);
        CHECK(report.samples[i].k == 7);
        CHECK(report.samples[i].lambda1 == 0.5);
    }
}

TEST_CASE("the grid ensemble takes the per-sample maximum, earliest config on ties") {
    const NetworkDatabase db = small_synth(5);
    const std::uint64_t seed = 3;
    const std::vector<std::pair<int, double>> grid = {{5, 0.1}, {5, 1.0}, {8, 0.1}, {8, 1.0}};
    const OutlierReport full = detect_all(db, grid, 1.0, seed);
    std::vector<OutlierReport> singles;
    for (const auto& pt : grid)
        singles.push_back(detect_all(db, {pt}, 1.0, seed));
    for (int i = 0; i < db.n_samples(); ++i) {
        double best = -1.0;
        int best_k = 0;
        double best_l1 = 0.0;
        for (size_t gix = 0; gix < grid.size(); ++gix) {
            const double s = singles[gix].samples[i].outcome.score;
            if (s > best) {
                best = s;
                best_k = grid[gix].first;
                best_l1 = grid[gix].second;
            }
        }
        CHECK(full.samples[i].outcome.score == best);
        CHECK(full.samples[i].k == best_k);
        CHECK(full.samples[i].lambda1 == best_l1);
    }
}

TEST_CASE("ranking is by descending score with id tiebreak") {
    const NetworkDatabase db = small_synth(6);
    const OutlierReport report = detect_all(db, {{6, 1.0}}, 1.0, 1);
    REQUIRE(report.ranking.size() == static_cast<size_t>(db.n_samples()));
    std::map<std::string, double> score;
    for (const auto& rec : report.samples) score[rec.sample_id] = rec.outcome.score;
    for (size_t r = 1; r < report.ranking.size(); ++r) {
        const double prev = score.at(report.ranking[r - 1]);
        const double cur = score.at(report.ranking[r]);
        CHECK(prev >= cur);
        if (prev == cur) CHECK(report.ranking[r - 1] < report.ranking[r]);
    }
}

TEST_CASE("worker count does not change any result") {
    const NetworkDatabase db = small_synth(7);
    const std::vector<std::pair<int, double>> grid = {{5, 0.0}, {5, 1.0}, {9, 2.5}};
    const OutlierReport a = detect_all(db, grid, 1.0, 42, SolverOptions{}, 1);
    const OutlierReport b = detect_all(db, grid, 1.0, 42, SolverOptions{}, 4);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(a.ranking == b.ranking);
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].outcome.score == b.samples[i].outcome.score);
        CHECK(a.samples[i].outcome.explanation.selected_nodes ==
              b.samples[i].outcome.explanation.selected_nodes);
    }
    CHECK(report_json(a, false).dump() == report_json(b, false).dump());
}

TEST_CASE("lambda1 = 0 never consults the topology") {
    // Same values, radically different edge sets: the no-network ablation
    // must score identically because the factor is never built.
    NetworkDatabase ring = small_synth(8);
    NetworkDatabase empty_edges = ring;
    empty_edges.shared_edges.clear();
    const OutlierReport a = detect_all(ring, {{6, 0.0}}, 1.0, 9);
    const OutlierReport b = detect_all(empty_edges, {{6, 0.0}}, 1.0, 9);
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].outcome.score == b.samples[i].outcome.score);
    }
    CHECK(a.ranking == b.ranking);
}

TEST_CASE("numerical failure falls back to a full-space score and is flagged") {
    const NetworkDatabase db = small_synth(9);
    // lambda2 large enough to overflow the hinge at the uniform start
    const OutlierReport report = detect_all(db, {{6, 1.0}}, 1e308, 1);
    for (int i = 0; i < db.n_samples(); ++i) {
        const auto& rec = report.samples[i];
        CHECK(rec.outcome.fallback);
        CHECK(rec.outcome.explanation.selected_nodes.empty());
        CHECK(rec.outcome.score == lof_score(db, rec.sample_id, {}, 6));
    }
}

TEST_CASE("detect_sample matches the full report entry") {
    const NetworkDatabase db = small_synth(10);
    const std::vector<std::pair<int, double>> grid = {{5, 0.1}, {7, 1.0}};
    const OutlierReport report = detect_all(db, grid, 1.0, 11);
    const SampleRecord rec = detect_sample(db, "s03", grid, 1.0, 11);
    const int idx = db.sample_index("s03");
    CHECK(rec.outcome.score == report.samples[idx].outcome.score);
    CHECK(rec.k == report.samples[idx].k);
    CHECK(rec.lambda1 == report.samples[idx].lambda1);
    CHECK(rec.outcome.explanation.subnetworks ==
          report.samples[idx].outcome.explanation.subnetworks);
}

TEST_CASE("report JSON shape") {
    const NetworkDatabase db = small_synth(12, 12, 10);
    const OutlierReport report = detect_all(db, {{4, 1.0}}, 1.0, 2);
    const nlohmann::json j = report_json(report, true);
    REQUIRE(j.contains("ranking"));
    REQUIRE(j.contains("samples"));
    CHECK(j["ranking"].size() == 10);
    const auto& first = j["samples"][db.samples[0].sample_id];
    CHECK(first.contains("score"));
    CHECK(first["config"]["k"] == 4);
    CHECK(first["config"]["lambda1"] == 1.0);
    CHECK(first.contains("nodes"));
    CHECK(first.contains("subnetworks"));
    CHECK(first.contains("weights"));
    CHECK(first.contains("trace"));
    const nlohmann::json bare = report_json(report, false);
    CHECK(!bare["samples"][db.samples[0].sample_id].contains("trace"));
}

}  // TEST_SUITE
