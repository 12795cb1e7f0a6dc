#pragma once

#include <cstdint>
#include <map>
#include <json.hpp>
#include <string>
#include <vector>

#include "netoutlier/database.hpp"
#include "netoutlier/rng.hpp"
#include "netoutlier/solver.hpp"
#include "netoutlier/summary_graph.hpp"

namespace netoutlier {

struct DetectConfig {
    int K = 10;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
};

// Subnetwork explanation of one candidate: the nonzero-coefficient nodes
// grouped into connected components of the candidate's summary graph.
struct Explanation {
    std::string candidate_id;
    std::vector<int> selected_nodes;               // sorted
    std::vector<std::vector<int>> subnetworks;     // partition of selected_nodes
    std::map<int, double> weights;                 // node -> recovered coefficient
};

// detect_one result for a single (candidate, config) evaluation.
struct DetectOutcome {
    double score = 0.0;
    Explanation explanation;
    bool fallback = false;           // scored over all nodes (empty support or failure)
    int iterations_used = 0;
    double final_objective = 0.0;
    std::vector<TraceRow> trace;
};

struct SampleRecord {
    std::string sample_id;
    DetectOutcome outcome;           // winning configuration's outcome
    int k = 0;                       // winning config
    double lambda1 = 0.0;
};

struct OutlierReport {
    std::vector<SampleRecord> samples;     // in database order
    std::vector<std::string> ranking;      // descending score, ties by sample_id
};

// Connected components of the summary graph induced on the support,
// packaged with the coefficients.
Explanation extract_subnetworks(const ModelCoefficients& coeffs, const SummaryGraph& g);

// LOF with MinPts = K, Euclidean distance over the selected coordinates
// only. An empty selection falls back to all coordinates (callers flag it).
double lof_score(const NetworkDatabase& db, const std::string& candidate_id,
                 const std::vector<int>& selected_nodes, int K, int jobs = 1);

// Full pipeline for one candidate and one configuration:
// neighbors -> summary graph -> problem -> Newton (with support shrinking)
// -> subnetworks -> subspace LOF.
DetectOutcome detect_one(const NetworkDatabase& db, const std::string& candidate_id,
                         const DetectConfig& config, std::uint64_t seed,
                         const SolverOptions& opts = {}, int jobs = 1);

// Object-wise maximum ensemble over the (K, lambda1) grid for one sample.
// Seeded exactly like detect_all, so explaining a sample reproduces the
// matching entry of the full report.
SampleRecord detect_sample(const NetworkDatabase& db, const std::string& sample_id,
                           const std::vector<std::pair<int, double>>& grid, double lambda2,
                           std::uint64_t seed, const SolverOptions& opts = {}, int jobs = 1);

// detect_sample for every sample. Grid points are evaluated in ascending
// (K, lambda1) order; on score ties the first (smallest) config keeps the
// explanation. Samples are independent tasks; jobs > 1 spreads them across
// OpenMP threads without changing any result.
OutlierReport detect_all(const NetworkDatabase& db,
                         const std::vector<std::pair<int, double>>& grid, double lambda2,
                         std::uint64_t seed, const SolverOptions& opts = {}, int jobs = 1);

// Seed handed to the per-sample pipeline by detect_all.
inline std::uint64_t per_sample_seed(std::uint64_t seed, int sample_index) {
    return mix64(seed, static_cast<std::uint64_t>(sample_index));
}

// Report serialization used by the CLI; sorted keys, optional solver traces.
nlohmann::json report_json(const OutlierReport& report, bool with_trace = false);

}  // namespace netoutlier
