#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "netoutlier/database.hpp"

namespace netoutlier {

// Per-candidate weighted union of the candidate's and neighbors' topologies.
// A(i,j) is the edge popularity: max(present in candidate, fraction of
// neighbors containing it).
struct SummaryGraph {
    Eigen::MatrixXd A;                        // n x n, symmetric, zero diagonal
    Eigen::VectorXd deg;                      // weighted degree per node
    std::vector<std::vector<int>> components; // sorted node lists, singletons included
};

// L together with its square-root factor S (S^T S = L) and the clamped
// eigenvalue spectrum. Dimensions follow whatever node set L was built on.
struct LaplacianFactor {
    Eigen::MatrixXd L;
    Eigen::MatrixXd S;
    Eigen::VectorXd eigenvalues;  // ascending, negatives clamped to 0
};

SummaryGraph build_summary_graph(const NetworkDatabase& db, const std::string& candidate_id,
                                 const std::vector<std::string>& neighbor_ids);

// Normalized Laplacian restricted to one connected component (>= 2 nodes):
// unit diagonal, -A(i,j)/sqrt(deg(i) deg(j)) on connected pairs.
Eigen::MatrixXd normalized_laplacian(const SummaryGraph& g, const std::vector<int>& component);

// Symmetric eigendecomposition L = U diag(sigma) U^T, S = diag(sigma)^{1/2} U^T
// with negative round-off eigenvalues clamped to zero.
LaplacianFactor laplacian_factor(const Eigen::MatrixXd& L);

// w^T L w; equals the weighted edge-sum of squared normalized differences.
double quadratic_penalty(const Eigen::VectorXd& w, const SummaryGraph& g,
                         const Eigen::MatrixXd& L);

// Full n x n factor assembled block-diagonally over the components of g.
// Singleton nodes contribute zero rows (no network penalty).
LaplacianFactor assemble_full_factor(const SummaryGraph& g);

// Connected components of g's positive-weight adjacency restricted to the
// given node subset; each component sorted, components ordered by least node.
std::vector<std::vector<int>> induced_components(const SummaryGraph& g,
                                                 const std::vector<int>& nodes);

}  // namespace netoutlier
