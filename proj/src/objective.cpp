#include "netoutlier/objective.hpp"

#include <cmath>

#include "netoutlier/errors.hpp"
#include "netoutlier/kernels.hpp"

namespace netoutlier {

SolverProblem build_problem(const DesignSet& design, const LaplacianFactor& factor,
                            double lambda1, double lambda2, int jobs) {
    if (lambda1 < 0.0 || lambda2 < 0.0) {
        throw ValidationError("build_problem: lambda1 and lambda2 must be nonnegative");
    }
    const int n = static_cast<int>(design.X.cols());
    const int rows2k = static_cast<int>(design.X.rows());

    SolverProblem p;
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    p.jobs = jobs;
    p.X0 = design.X;
    p.z = design.z;

    p.Xtilde = Eigen::MatrixXd::Zero(rows2k + n, 2 * n);
    p.Xtilde.topLeftCorner(rows2k, n) = design.X.colwise() - design.z;
    p.Xtilde.topRightCorner(rows2k, n) = design.X.colwise() + design.z;
    if (lambda1 > 0.0) {
        if (factor.S.rows() != n || factor.S.cols() != n) {
            throw ValidationError("build_problem: factor does not match the design's node count");
        }
        const double root = std::sqrt(lambda1);
        p.Xtilde.bottomLeftCorner(n, n) = root * factor.S;
        p.Xtilde.bottomRightCorner(n, n) = root * factor.S;
        p.L = factor.L;
    } else {
        p.L = Eigen::MatrixXd::Zero(n, n);
    }

    p.Q = kernels::gram(p.Xtilde, jobs);
    p.y.resize(2 * n);
    p.y.head(n).setConstant(1.0);
    p.y.tail(n).setConstant(-1.0);
    return p;
}

double objective_value(const SolverProblem& p, const Eigen::VectorXd& w) {
    const Eigen::VectorXd qw = p.Q * w;
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < qw.size(); ++i) {
        const double slack = 1.0 - p.y[i] * qw[i];
        if (slack > 0.0) hinge += slack * slack;
    }
    return w.dot(qw) + p.lambda2 * hinge;
}

Eigen::VectorXd gradient(const SolverProblem& p, const Eigen::VectorXd& w) {
    const Eigen::VectorXd qw = p.Q * w;
    Eigen::VectorXd residual = Eigen::VectorXd::Zero(qw.size());
    for (Eigen::Index i = 0; i < qw.size(); ++i) {
        const double margin = p.y[i] * qw[i];
        if (margin < 1.0) residual[i] = p.y[i] * (1.0 - margin);
    }
    return 2.0 * qw - 2.0 * p.lambda2 * (p.Q * residual);
}

Eigen::MatrixXd hessian(const SolverProblem& p, const Eigen::VectorXd& w) {
    return kernels::hessian_term(p.Q, active_set(p, w), p.lambda2, p.jobs);
}

std::vector<int> active_set(const SolverProblem& p, const Eigen::VectorXd& w) {
    const Eigen::VectorXd qw = p.Q * w;
    std::vector<int> active;
    for (Eigen::Index i = 0; i < qw.size(); ++i) {
        if (p.y[i] * qw[i] < 1.0) active.push_back(static_cast<int>(i));
    }
    return active;
}

}  // namespace netoutlier
