#include "netoutlier/solver.hpp"

#include <cmath>

#include "netoutlier/kernels.hpp"

namespace netoutlier {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Connected blocks of a symmetric matrix's nonzero pattern.
std::vector<std::vector<int>> sparsity_blocks(const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    std::vector<std::vector<int>> blocks;
    std::vector<bool> seen(n, false);
    for (int v = 0; v < n; ++v) {
        if (seen[v]) continue;
        std::vector<int> block, stack{v};
        seen[v] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            block.push_back(u);
            for (int w = 0; w < n; ++w) {
                if (!seen[w] && u != w && M(u, w) != 0.0) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
    }
    return blocks;
}

}  // namespace

NewtonResult newton_solve(const SolverProblem& p, const SolverOptions& opts,
                          const std::optional<Eigen::VectorXd>& initial) {
    const Eigen::Index dim = p.Q.rows();
    NewtonResult res;
    res.w_tilde = initial ? *initial
                          : Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim));
    if (initial && initial->size() != dim) {
        throw ValidationError("newton_solve: initial point has wrong dimension");
    }

    double f = objective_value(p, res.w_tilde);
    Eigen::VectorXd g = gradient(p, res.w_tilde);
    double gnorm = g.size() > 0 ? g.cwiseAbs().maxCoeff() : 0.0;
    res.trace.push_back({0, f, gnorm, 0.0,
                         static_cast<int>(active_set(p, res.w_tilde).size())});
    if (!std::isfinite(f) || !all_finite(g)) {
        throw NumericalError("newton_solve: non-finite objective or gradient at start",
                             res.trace);
    }

    for (int it = 1; it <= opts.max_iterations; ++it) {
        if (gnorm <= opts.gradient_tolerance) {
            res.converged = true;
            break;
        }
        Eigen::MatrixXd H = hessian(p, res.w_tilde);
        H.diagonal().array() += 1e-10;  // Q can be rank-deficient (2K + n < 2n)
        Eigen::VectorXd d = H.ldlt().solve(-g);
        if (!all_finite(d) || g.dot(d) >= 0.0) d = -g;

        const double eta = line_search(p, res.w_tilde, d, opts);
        if (eta == 0.0) break;  // no acceptable step; keep the current iterate

        res.w_tilde += eta * d;
        f = objective_value(p, res.w_tilde);
        g = gradient(p, res.w_tilde);
        gnorm = g.cwiseAbs().maxCoeff();
        res.iterations = it;
        res.trace.push_back({it, f, gnorm, eta,
                             static_cast<int>(active_set(p, res.w_tilde).size())});
        if (!std::isfinite(f) || !all_finite(g)) {
            throw NumericalError("newton_solve: non-finite objective or gradient", res.trace);
        }
    }
    if (gnorm <= opts.gradient_tolerance) res.converged = true;
    return res;
}

double line_search(const SolverProblem& p, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& direction, const SolverOptions& opts) {
    const double f0 = objective_value(p, w);
    const double gd = gradient(p, w).dot(direction);
    if (!(gd < 0.0)) return 0.0;  // not a descent direction (covers direction = 0)
    double eta = 1.0;
    for (int t = 0; t <= 20; ++t) {
        const double f = objective_value(p, w + eta * direction);
        if (f <= f0 + opts.armijo_constant * eta * gd) return eta;
        eta *= opts.line_search_shrink;
    }
    return 0.0;
}

ModelCoefficients recover_coefficients(const Eigen::VectorXd& w_tilde,
                                       const SolverOptions& opts) {
    const Eigen::Index n = w_tilde.size() / 2;
    ModelCoefficients out;
    out.w = w_tilde.head(n) + w_tilde.tail(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(out.w[i]) < opts.sparsify_threshold) out.w[i] = 0.0;
    }
    const double l1 = out.w.cwiseAbs().sum();
    if (l1 > 0.0) {
        out.w /= l1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (out.w[i] != 0.0) out.support.push_back(static_cast<int>(i));
        }
    }
    return out;
}

ShrunkProblem shrink_support(const SolverProblem& p, const Eigen::VectorXd& w_tilde,
                             const SolverOptions& opts) {
    const int n = p.n_nodes();
    std::vector<int> kept;
    for (int i = 0; i < n; ++i) {
        if (std::abs(w_tilde[i]) + std::abs(w_tilde[n + i]) >= opts.sparsify_threshold) {
            kept.push_back(i);
        }
    }
    if (static_cast<int>(kept.size()) == n) return {p, std::move(kept)};

    ShrunkProblem out;
    out.kept = std::move(kept);
    const int nk = static_cast<int>(out.kept.size());
    if (nk == 0) {
        out.problem.lambda1 = p.lambda1;
        out.problem.lambda2 = p.lambda2;
        out.problem.jobs = p.jobs;
        out.problem.X0.resize(p.X0.rows(), 0);
        out.problem.z = p.z;
        return out;
    }

    DesignSet reduced;
    reduced.X.resize(p.X0.rows(), nk);
    for (int r = 0; r < nk; ++r) reduced.X.col(r) = p.X0.col(out.kept[r]);
    reduced.z = p.z;

    // Principal submatrix of the original Laplacian, refactored blockwise.
    LaplacianFactor factor;
    factor.L.resize(nk, nk);
    for (int r = 0; r < nk; ++r) {
        for (int s = 0; s < nk; ++s) factor.L(r, s) = p.L(out.kept[r], out.kept[s]);
    }
    factor.S = Eigen::MatrixXd::Zero(nk, nk);
    factor.eigenvalues = Eigen::VectorXd::Zero(nk);
    if (p.lambda1 > 0.0) {
        int at = 0;
        for (const auto& block : sparsity_blocks(factor.L)) {
            const int c = static_cast<int>(block.size());
            Eigen::MatrixXd Lb(c, c);
            for (int r = 0; r < c; ++r) {
                for (int s = 0; s < c; ++s) Lb(r, s) = factor.L(block[r], block[s]);
            }
            LaplacianFactor fb = laplacian_factor(Lb);
            for (int r = 0; r < c; ++r) {
                for (int s = 0; s < c; ++s) factor.S(block[r], block[s]) = fb.S(r, s);
            }
            factor.eigenvalues.segment(at, c) = fb.eigenvalues;
            at += c;
        }
    }

    out.problem = build_problem(reduced, factor, p.lambda1, p.lambda2, p.jobs);
    return out;
}

}  // namespace netoutlier
