#include "netoutlier/neighbors.hpp"

#include <algorithm>
#include <cmath>

#include "netoutlier/errors.hpp"
#include "netoutlier/rng.hpp"

namespace netoutlier {

double cosine_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) {
        throw ValidationError("cosine_distance: length mismatch");
    }
    const double nx = x.norm();
    const double ny = y.norm();
    if (nx == 0.0 || ny == 0.0) {
        throw ZeroVectorError("cosine distance undefined for a zero vector");
    }
    return 1.0 - x.dot(y) / (nx * ny);
}

std::vector<std::string> k_nearest(const NetworkDatabase& db,
                                   const std::string& candidate_id, int K) {
    const int m = db.n_samples();
    if (K < 1 || K > m - 1) {
        throw ValidationError("k_nearest: require 1 <= K <= m-1, got K=" + std::to_string(K) +
                              " with m=" + std::to_string(m));
    }
    const int cand = db.sample_index(candidate_id);
    const Eigen::VectorXd& xo = db.samples[cand].values;
    const double norm_o = xo.norm();

    std::vector<std::pair<double, const std::string*>> dist;
    dist.reserve(m - 1);
    for (int k = 0; k < m; ++k) {
        if (k == cand) continue;
        const Eigen::VectorXd& xk = db.samples[k].values;
        const double norm_k = xk.norm();
        // Zero vectors are maximally distant rather than an error here.
        const double d = (norm_o == 0.0 || norm_k == 0.0)
                             ? 2.0
                             : 1.0 - xo.dot(xk) / (norm_o * norm_k);
        dist.emplace_back(d, &db.samples[k].sample_id);
    }
    std::sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return *a.second < *b.second;
    });
    std::vector<std::string> out;
    out.reserve(K);
    for (int k = 0; k < K; ++k) out.push_back(*dist[k].second);
    return out;
}

std::vector<Eigen::VectorXd> upsample(const Eigen::VectorXd& candidate,
                                      const std::vector<Eigen::VectorXd>& neighbors,
                                      std::uint64_t seed) {
    const int K = static_cast<int>(neighbors.size());
    if (K < 1) throw ValidationError("upsample: need at least one neighbor");
    const auto n = candidate.size();
    std::vector<Eigen::VectorXd> replicas;
    if (K == 1) return replicas;  // a single neighbor balances the candidate alone

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    for (const auto& v : neighbors) mean += v;
    mean /= K;
    Eigen::VectorXd stddev(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double ss = 0.0;
        for (const auto& v : neighbors) {
            const double d = v[j] - mean[j];
            ss += d * d;
        }
        stddev[j] = std::sqrt(ss / (K - 1));
    }

    Rng rng(seed);
    replicas.reserve(K - 1);
    for (int r = 0; r < K - 1; ++r) {
        Eigen::VectorXd v(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            v[j] = stddev[j] > 0.0 ? rng.normal(candidate[j], stddev[j]) : candidate[j];
        }
        replicas.push_back(std::move(v));
    }
    return replicas;
}

DesignSet assemble_design(const NetworkDatabase& db, const std::string& candidate_id,
                          int K, std::uint64_t seed) {
    const int n = db.n_nodes();
    DesignSet design;
    design.candidate_id = candidate_id;
    design.neighbor_ids = k_nearest(db, candidate_id, K);

    std::vector<Eigen::VectorXd> neighbor_values;
    neighbor_values.reserve(K);
    for (const auto& id : design.neighbor_ids) {
        neighbor_values.push_back(db.samples[db.sample_index(id)].values);
    }
    const Eigen::VectorXd& candidate = db.samples[db.sample_index(candidate_id)].values;
    auto replicas = upsample(candidate, neighbor_values, seed);

    design.X.resize(2 * K, n);
    for (int k = 0; k < K; ++k) design.X.row(k) = neighbor_values[k];
    design.X.row(K) = candidate;
    for (int r = 0; r < K - 1; ++r) design.X.row(K + 1 + r) = replicas[r];
    design.z.resize(2 * K);
    design.z.head(K).setConstant(1.0);
    design.z.tail(K).setConstant(-1.0);
    return design;
}

}  // namespace netoutlier
