#pragma once

#include <Eigen/Dense>
#include <vector>

namespace netoutlier::kernels {

// Dense compute kernels shared by the objective and scoring paths, each in
// an OpenMP variant plus a serial reference. Both variants compute every
// output column with the same per-column expression, so results are bitwise
// identical regardless of thread count; tests assert this.

// Q = Xt^T Xt. Column j is Xt^T * Xt.col(j); the lower triangle is then
// mirrored from the upper so the result is exactly symmetric.
Eigen::MatrixXd gram(const Eigen::MatrixXd& Xt, int jobs);
Eigen::MatrixXd gram_reference(const Eigen::MatrixXd& Xt);

// H = 2 Q + 2 lambda2 * QA QA^T with QA = Q(:, active).
Eigen::MatrixXd hessian_term(const Eigen::MatrixXd& Q, const std::vector<int>& active,
                             double lambda2, int jobs);
Eigen::MatrixXd hessian_term_reference(const Eigen::MatrixXd& Q,
                                       const std::vector<int>& active, double lambda2);

// D(i,j) = squared Euclidean distance between rows i and j.
Eigen::MatrixXd pairwise_sqdist(const Eigen::MatrixXd& rows, int jobs);
Eigen::MatrixXd pairwise_sqdist_reference(const Eigen::MatrixXd& rows);

}  // namespace netoutlier::kernels
