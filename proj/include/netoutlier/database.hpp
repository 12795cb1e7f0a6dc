#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace netoutlier {

using Edge = std::pair<int, int>;       // undirected, stored with first < second
using EdgeSet = std::vector<Edge>;      // sorted, unique

// One network sample: real value per node plus an optional private edge set.
struct NetworkSample {
    std::string sample_id;
    Eigen::VectorXd values;             // length n, node-indexed
    std::optional<EdgeSet> edge_override;
    std::vector<bool> missing_mask;     // true where the source cell was empty
};

// A database of m samples over one shared node universe.
struct NetworkDatabase {
    std::vector<std::string> node_ids;
    EdgeSet shared_edges;
    std::vector<NetworkSample> samples;
    std::optional<std::map<std::string, int>> labels;  // sample_id -> {0,1}

    int n_nodes() const { return static_cast<int>(node_ids.size()); }
    int n_samples() const { return static_cast<int>(samples.size()); }

    // Index of a sample by id; throws ValidationError when absent.
    int sample_index(const std::string& sample_id) const;
};

// Reads topology.json + values.csv (+ labels.csv, edges_<id>.csv) from a
// directory. Missing cells are recorded in missing_mask, not yet imputed.
NetworkDatabase load_database(const std::string& path);

// Inverse of load_database; writes every file the loader understands.
void save_database(const NetworkDatabase& db, const std::string& path);

// Replaces each masked cell with the mean of that node's unmasked values
// across samples (0 when a node is masked everywhere). Masks are preserved
// so reports can still tell which cells were filled. Idempotent.
NetworkDatabase impute_missing(const NetworkDatabase& db);

// The sample's own edge set when it has one, otherwise the shared edges.
const EdgeSet& effective_edges(const NetworkDatabase& db, const std::string& sample_id);

// Field-for-field equality, used by roundtrip tests.
bool operator==(const NetworkSample& a, const NetworkSample& b);
bool operator==(const NetworkDatabase& a, const NetworkDatabase& b);

}  // namespace netoutlier
