#include "netoutlier/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netoutlier::kernels {

namespace {

inline void gram_column(const Eigen::MatrixXd& Xt, Eigen::MatrixXd& Q, Eigen::Index j) {
    Q.col(j).noalias() = Xt.transpose() * Xt.col(j);
}

// The per-column products can disagree across the diagonal by one ulp
// (vectorized accumulation), so the lower triangle is copied from the upper
// to make the result exactly symmetric.
inline void mirror_upper(Eigen::MatrixXd& Q) {
    for (Eigen::Index j = 0; j < Q.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < Q.rows(); ++i) Q(i, j) = Q(j, i);
    }
}

inline void hessian_column(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& QA,
                           double lambda2, Eigen::MatrixXd& H, Eigen::Index j) {
    H.col(j).noalias() = 2.0 * Q.col(j);
    if (QA.cols() > 0) {
        H.col(j).noalias() += (2.0 * lambda2) * (QA * QA.row(j).transpose());
    }
}

inline void sqdist_row(const Eigen::MatrixXd& rows, Eigen::MatrixXd& D, Eigen::Index i) {
    for (Eigen::Index j = 0; j < rows.rows(); ++j) {
        D(i, j) = (rows.row(i) - rows.row(j)).squaredNorm();
    }
}

}  // namespace

Eigen::MatrixXd gram_reference(const Eigen::MatrixXd& Xt) {
    Eigen::MatrixXd Q(Xt.cols(), Xt.cols());
    for (Eigen::Index j = 0; j < Xt.cols(); ++j) gram_column(Xt, Q, j);
    mirror_upper(Q);
    return Q;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& Xt, int jobs) {
    Eigen::MatrixXd Q(Xt.cols(), Xt.cols());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(jobs > 0 ? jobs : 1)
#endif
    for (Eigen::Index j = 0; j < Xt.cols(); ++j) gram_column(Xt, Q, j);
    mirror_upper(Q);
    return Q;
}

Eigen::MatrixXd hessian_term_reference(const Eigen::MatrixXd& Q,
                                       const std::vector<int>& active, double lambda2) {
    Eigen::MatrixXd QA(Q.rows(), active.size());
    for (size_t a = 0; a < active.size(); ++a) QA.col(a) = Q.col(active[a]);
    Eigen::MatrixXd H(Q.rows(), Q.cols());
    for (Eigen::Index j = 0; j < Q.cols(); ++j) hessian_column(Q, QA, lambda2, H, j);
    return H;
}

Eigen::MatrixXd hessian_term(const Eigen::MatrixXd& Q, const std::vector<int>& active,
                             double lambda2, int jobs) {
    Eigen::MatrixXd QA(Q.rows(), active.size());
    for (size_t a = 0; a < active.size(); ++a) QA.col(a) = Q.col(active[a]);
    Eigen::MatrixXd H(Q.rows(), Q.cols());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(jobs > 0 ? jobs : 1)
#endif
    for (Eigen::Index j = 0; j < Q.cols(); ++j) hessian_column(Q, QA, lambda2, H, j);
    return H;
}

Eigen::MatrixXd pairwise_sqdist_reference(const Eigen::MatrixXd& rows) {
    Eigen::MatrixXd D(rows.rows(), rows.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) sqdist_row(rows, D, i);
    return D;
}

Eigen::MatrixXd pairwise_sqdist(const Eigen::MatrixXd& rows, int jobs) {
    Eigen::MatrixXd D(rows.rows(), rows.rows());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(jobs > 0 ? jobs : 1)
#endif
    for (Eigen::Index i = 0; i < rows.rows(); ++i) sqdist_row(rows, D, i);
    return D;
}

}  // namespace netoutlier::kernels
