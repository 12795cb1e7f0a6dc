#include "netoutlier/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <numeric>
#include <set>

#include "netoutlier/errors.hpp"
#include "netoutlier/rng.hpp"

namespace netoutlier {

namespace {

// Share of each inlier's unit node variance carried by the smooth harmonics
// (the rest is iid residual), and the spread of the cluster means. Chosen so
// the full-space geometry is dominated by a handful of global modes while
// each node still has sigma = 1 exactly.
constexpr double kFactorShare = 0.8;
constexpr double kMeanSpread = 3.0;
constexpr int kRingNeighbors = 4;
const std::vector<int> kHarmonics = {1, 2};

std::string padded_id(char prefix, int index, int count) {
    const int width = static_cast<int>(std::to_string(count - 1).size());
    std::string digits = std::to_string(index);
    return prefix + std::string(width - static_cast<int>(digits.size()), '0') + digits;
}

EdgeSet ring_lattice(int n, int k, double p, Rng& rng) {
    std::set<Edge> base;
    for (int i = 0; i < n; ++i) {
        for (int d = 1; d <= k / 2; ++d) {
            const int j = (i + d) % n;
            base.insert({std::min(i, j), std::max(i, j)});
        }
    }
    std::set<Edge> out = base;
    for (Edge e : base) {
        const auto [i, j] = e;
        if (rng.uniform() >= p) continue;
        // checking against the live edge set keeps the count invariant
        out.erase(e);
        Edge replacement = e;
        for (int attempt = 0; attempt < 20; ++attempt) {
            const int j2 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            if (j2 != i && !out.count({std::min(i, j2), std::max(i, j2)})) {
                replacement = {std::min(i, j2), std::max(i, j2)};
                break;
            }
        }
        out.insert(replacement);
    }
    return EdgeSet(out.begin(), out.end());
}

EdgeSet grid_edges(int n) {
    const int rows = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    const int cols = (n + rows - 1) / rows;
    EdgeSet out;
    for (int idx = 0; idx < n; ++idx) {
        const int r = idx / cols, c = idx % cols;
        if (c + 1 < cols && idx + 1 < n) out.push_back({idx, idx + 1});
        if ((r + 1) * cols + c < n) out.push_back({idx, (r + 1) * cols + c});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> adjacency(int n, const EdgeSet& edges) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

int largest_component(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<bool> seen(n, false);
    int best = 0;
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        int size = 0;
        std::vector<int> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            ++size;
            for (int u : adj[v])
                if (!seen[u]) {
                    seen[u] = true;
                    stack.push_back(u);
                }
        }
        best = std::max(best, size);
    }
    return best;
}

// Randomized breadth-first growth from a random start node; connected by
// construction. May come up short if the start lands in a small component,
// in which case the caller re-draws.
std::vector<int> grow_connected(const std::vector<std::vector<int>>& adj, int size, Rng& rng) {
    const int n = static_cast<int>(adj.size());
    const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    std::set<int> chosen{start};
    std::vector<int> frontier(adj[start]);
    while (static_cast<int>(chosen.size()) < size && !frontier.empty()) {
        const auto idx = rng.below(frontier.size());
        const int v = frontier[idx];
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(idx));
        if (chosen.count(v)) continue;
        chosen.insert(v);
        for (int u : adj[v])
            if (!chosen.count(u)) frontier.push_back(u);
    }
    return std::vector<int>(chosen.begin(), chosen.end());
}

void check_config(const SynthConfig& cfg) {
    if (cfg.n_nodes < 2) throw ValidationError("n_nodes must be >= 2");
    if (cfg.n_samples < 2) throw ValidationError("n_samples must be >= 2");
    if (cfg.n_outliers < 0 || cfg.n_outliers >= cfg.n_samples)
        throw ValidationError("n_outliers must be in [0, n_samples)");
    if (cfg.planted_size < 1 || cfg.planted_size > cfg.n_nodes)
        throw ValidationError("planted_size must be in [1, n_nodes]");
    if (cfg.signal_strength < 0.0) throw ValidationError("signal_strength must be >= 0");
    if (cfg.heterogeneity < 1) throw ValidationError("heterogeneity must be >= 1");
    if (cfg.rewire_p < 0.0 || cfg.rewire_p > 1.0)
        throw ValidationError("rewire_p must be in [0, 1]");
}

}  // namespace

std::pair<NetworkDatabase, GroundTruth> generate_synthetic(const SynthConfig& cfg) {
    check_config(cfg);
    const int n = cfg.n_nodes, m = cfg.n_samples;
    const int n_in = m - cfg.n_outliers;
    Rng rng(mix64(cfg.seed));

    NetworkDatabase db;
    db.node_ids.reserve(n);
    for (int j = 0; j < n; ++j) db.node_ids.push_back(padded_id('n', j, n));
    db.shared_edges = cfg.topology == Topology::RingLattice
                          ? ring_lattice(n, kRingNeighbors, cfg.rewire_p, rng)
                          : grid_edges(n);
    const auto adj = adjacency(n, db.shared_edges);
    if (largest_component(adj) < cfg.planted_size)
        throw ValidationError("planted_size exceeds the largest topology component");

    // Cluster means, then the harmonic loading rows: sin/cos pairs over the
    // node index circle so every column has the same squared norm.
    Eigen::MatrixXd mu(cfg.heterogeneity, n);
    for (int c = 0; c < cfg.heterogeneity; ++c)
        for (int j = 0; j < n; ++j) mu(c, j) = rng.normal(0.0, kMeanSpread);

    const int r = 2 * static_cast<int>(kHarmonics.size());
    Eigen::MatrixXd B(r, n);
    for (size_t f = 0; f < kHarmonics.size(); ++f) {
        for (int j = 0; j < n; ++j) {
            const double t = 2.0 * std::numbers::pi * kHarmonics[f] * j / n;
            B(static_cast<int>(2 * f), j) = std::sin(t);
            B(static_cast<int>(2 * f + 1), j) = std::cos(t);
        }
    }
    const double a = std::sqrt(kFactorShare / static_cast<double>(kHarmonics.size()));
    const double s_res = std::sqrt(1.0 - kFactorShare);

    GroundTruth truth;
    db.samples.resize(m);
    for (int s = 0; s < m; ++s) {
        db.samples[s].sample_id = padded_id('s', s, m);
        db.samples[s].missing_mask.assign(n, false);
    }

    for (int s = 0; s < n_in; ++s) {
        const int c = s % cfg.heterogeneity;
        Eigen::VectorXd h(r);
        for (int q = 0; q < r; ++q) h[q] = rng.normal(0.0, 1.0);
        Eigen::VectorXd x = mu.row(c).transpose() + a * (B.transpose() * h);
        for (int j = 0; j < n; ++j) x[j] += s_res * rng.normal(0.0, 1.0);
        db.samples[s].values = std::move(x);
        truth.labels[db.samples[s].sample_id] = 0;
    }

    for (int o = n_in; o < m; ++o) {
        const int src = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_in)));
        Eigen::VectorXd x = db.samples[src].values;
        std::vector<int> nodes = grow_connected(adj, cfg.planted_size, rng);
        while (static_cast<int>(nodes.size()) < cfg.planted_size)
            nodes = grow_connected(adj, cfg.planted_size, rng);
        double shift = cfg.signal_strength;
        if (cfg.two_sided && rng.uniform() < 0.5) shift = -shift;
        for (int j : nodes) x[j] += shift;
        db.samples[o].values = std::move(x);
        truth.labels[db.samples[o].sample_id] = 1;
        truth.planted[db.samples[o].sample_id] = nodes;
    }

    db.labels = truth.labels;
    return {std::move(db), std::move(truth)};
}

void save_truth(const GroundTruth& truth, const std::string& path) {
    nlohmann::json j;
    j["labels"] = truth.labels;
    j["planted"] = truth.planted;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << "\n";
}

GroundTruth load_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path + ": " + std::string(e.what()));
    }
    GroundTruth truth;
    if (!j.contains("labels") || !j.contains("planted"))
        throw FormatError(path + " needs 'labels' and 'planted'");
    truth.labels = j["labels"].get<std::map<std::string, int>>();
    truth.planted = j["planted"].get<std::map<std::string, std::vector<int>>>();
    for (const auto& [id, lab] : truth.labels)
        if (lab != 0 && lab != 1) throw ValidationError("label for " + id + " must be 0/1");
    for (const auto& [id, nodes] : truth.planted) {
        auto it = truth.labels.find(id);
        if (it == truth.labels.end() || it->second != 1)
            throw ValidationError("planted id " + id + " is not a label-1 sample");
        (void)nodes;
    }
    return truth;
}

}  // namespace netoutlier
