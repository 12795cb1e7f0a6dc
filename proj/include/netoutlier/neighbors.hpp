#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "netoutlier/database.hpp"

namespace netoutlier {

// Balanced regression input for one candidate: K neighbors labeled +1
// stacked over the candidate and its K-1 synthetic replicas labeled -1.
struct DesignSet {
    Eigen::MatrixXd X;                    // 2K x n; row K is the exact candidate
    Eigen::VectorXd z;                    // +1 for the first K rows, -1 after
    std::vector<std::string> neighbor_ids;
    std::string candidate_id;
};

// 1 - cos(x, y), in [0, 2]. Throws ZeroVectorError when either vector is
// all zeros (callers substitute the maximal distance 2).
double cosine_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// The K samples closest to the candidate in cosine distance, the candidate
// itself excluded. Ties broken by ascending sample_id so reruns agree.
std::vector<std::string> k_nearest(const NetworkDatabase& db,
                                   const std::string& candidate_id, int K);

// K-1 draws from N(candidate, diag(per-node sample variance of the
// neighbors)). The variance uses the unbiased (K-1) denominator.
std::vector<Eigen::VectorXd> upsample(const Eigen::VectorXd& candidate,
                                      const std::vector<Eigen::VectorXd>& neighbors,
                                      std::uint64_t seed);

// k_nearest + upsample composed into the full 2K x n design.
DesignSet assemble_design(const NetworkDatabase& db, const std::string& candidate_id,
                          int K, std::uint64_t seed);

}  // namespace netoutlier
