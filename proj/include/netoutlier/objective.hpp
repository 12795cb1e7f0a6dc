#pragma once

#include <Eigen/Dense>
#include <vector>

#include "netoutlier/neighbors.hpp"
#include "netoutlier/summary_graph.hpp"

namespace netoutlier {

// Quadratic-plus-squared-hinge problem over the split coefficients
// w~ in R^{2n}. Built once per (candidate, K, lambda1); iterate-independent.
//
// Xtilde stacks [X0 - z 1^T | X0 + z 1^T] over [sqrt(lambda1) S | sqrt(lambda1) S];
// signs live in y (+1 for the first n columns, -1 for the rest), so the
// objective reads f(w) = w^T Q w + lambda2 * sum_i max(0, 1 - y_i q_i^T w)^2
// with q_i the i-th column of Q = Xtilde^T Xtilde.
struct SolverProblem {
    Eigen::MatrixXd Xtilde;   // (2K + n) x 2n
    Eigen::MatrixXd Q;        // 2n x 2n, symmetric PSD
    Eigen::VectorXd y;        // +1^n then -1^n
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    int jobs = 1;             // thread budget for kernel calls

    // Carried so support shrinking can rebuild the problem on a node subset.
    Eigen::MatrixXd X0;       // 2K x n design rows
    Eigen::VectorXd z;        // +-1 target of the design
    Eigen::MatrixXd L;        // n x n block-diagonal normalized Laplacian

    int n_nodes() const { return static_cast<int>(X0.cols()); }
};

// Assembles Xtilde and Q. With lambda1 = 0 the factor is never read and the
// bottom n rows stay zero, which is what isolates the no-network ablation.
SolverProblem build_problem(const DesignSet& design, const LaplacianFactor& factor,
                            double lambda1, double lambda2, int jobs = 1);

double objective_value(const SolverProblem& p, const Eigen::VectorXd& w);

// 2Qw - 2 lambda2 sum_{i active} q_i y_i (1 - y_i q_i^T w); a margin of
// exactly 1 counts as inactive (strict inequality).
Eigen::VectorXd gradient(const SolverProblem& p, const Eigen::VectorXd& w);

// 2Q + 2 lambda2 sum_{i active} q_i q_i^T.
Eigen::MatrixXd hessian(const SolverProblem& p, const Eigen::VectorXd& w);

// Indices with y_i q_i^T w < 1.
std::vector<int> active_set(const SolverProblem& p, const Eigen::VectorXd& w);

}  // namespace netoutlier
