#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netoutlier/database.hpp"

namespace netoutlier {

enum class Topology { RingLattice, Grid };

struct SynthConfig {
    int n_nodes = 100;
    int n_samples = 120;
    int n_outliers = 10;
    Topology topology = Topology::RingLattice;
    double rewire_p = 0.1;        // ring lattice only
    double signal_strength = 3.0; // shift in units of the per-node sigma (= 1)
    int planted_size = 10;
    int heterogeneity = 2;        // number of inlier clusters
    std::uint64_t seed = 0;
    bool two_sided = false;       // shift down as well as up (coin per outlier)
};

struct GroundTruth {
    std::map<std::string, int> labels;                  // sample_id -> {0,1}
    std::map<std::string, std::vector<int>> planted;    // outlier id -> sorted node set
};

// Planted-anomaly benchmark. Inliers draw from cluster-specific means with
// unit variance per node; the noise is split between a few smooth graph
// harmonics shared by all nodes of a sample and an iid residual, so inliers
// vary along global modes (which mask outliers in the full space) while each
// node's marginal stays N(mu_c, 1). Outliers copy a random inlier and shift
// a randomly grown connected subgraph of planted_size nodes by
// signal_strength. Bitwise-deterministic in cfg.
std::pair<NetworkDatabase, GroundTruth> generate_synthetic(const SynthConfig& cfg);

// truth.json next to the database: {"labels": {...}, "planted": {id: [nodes]}}.
void save_truth(const GroundTruth& truth, const std::string& path);
GroundTruth load_truth(const std::string& path);

}  // namespace netoutlier
