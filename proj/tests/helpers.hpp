#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "netoutlier/database.hpp"
#include "netoutlier/objective.hpp"
#include "netoutlier/rng.hpp"
#include "netoutlier/summary_graph.hpp"

namespace testutil {

using namespace netoutlier;

inline std::string padded(char prefix, int i, int width = 3) {
    std::string d = std::to_string(i);
    const int zeros = std::max(0, width - static_cast<int>(d.size()));
    return prefix + std::string(zeros, '0') + d;
}

// Random weighted graph with components filled in, for Laplacian identities.
inline SummaryGraph random_graph(Rng& rng, int n, double p = 0.4) {
    SummaryGraph g;
    g.A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform() < p) {
                const double w = 0.05 + 0.95 * rng.uniform();
                g.A(i, j) = w;
                g.A(j, i) = w;
            }
        }
    }
    g.deg = g.A.rowwise().sum();
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    g.components = induced_components(g, all);
    return g;
}

// Random solver problem in the shape the detection pipeline produces; the
// same family the solver oracles were pinned on.
inline SolverProblem random_problem(Rng& rng, int n, int K, double lambda1, double lambda2,
                                    double scale = 0.7) {
    DesignSet d;
    d.X.resize(2 * K, n);
    for (int r = 0; r < 2 * K; ++r) {
        for (int c = 0; c < n; ++c) d.X(r, c) = rng.normal(0.0, scale);
    }
    d.z.resize(2 * K);
    d.z.head(K).setConstant(1.0);
    d.z.tail(K).setConstant(-1.0);
    const SummaryGraph g = random_graph(rng, n);
    const LaplacianFactor f = assemble_full_factor(g);
    return build_problem(d, f, lambda1, lambda2, 1);
}

// Euclidean projection onto the probability simplex (sort-based).
inline Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, css_rho = 0.0;
    int rho = -1;
    for (int i = 0; i < n; ++i) {
        css += u[i];
        if (u[i] * (i + 1) > css - 1.0) {
            rho = i;
            css_rho = css;
        }
    }
    const double theta = (css_rho - 1.0) / (rho + 1);
    return (v.array() - theta).cwiseMax(0.0);
}

// Independent slow solver used as ground truth for the Newton path: minimize
// a^T Qbar a + lambda2 |a|^2 over the simplex by projected gradient, with
// Qbar = diag(y) Q diag(y), then map the optimum back to an unnormalized
// primal point. The mapping is exact for lambda2 = 1, which is what the
// oracle suite pins.
inline Eigen::VectorXd pg_oracle_point(const SolverProblem& p, int iters = 100000,
                                       double step = 1e-3) {
    const Eigen::MatrixXd Qbar =
        p.y.asDiagonal() * p.Q * p.y.asDiagonal();
    const int n2 = static_cast<int>(p.Q.rows());
    Eigen::VectorXd a = Eigen::VectorXd::Constant(n2, 1.0 / n2);
    for (int t = 0; t < iters; ++t) {
        const Eigen::VectorXd g = 2.0 * (Qbar * a) + 2.0 * p.lambda2 * a;
        a = project_simplex(a - step * g);
    }
    const double mu = 2.0 * (a.dot(Qbar * a) + p.lambda2 * a.squaredNorm());
    return (2.0 / mu) * (p.y.asDiagonal() * a);
}

// Small database with iid values and a ring topology.
inline NetworkDatabase random_db(Rng& rng, int m, int n) {
    NetworkDatabase db;
    for (int j = 0; j < n; ++j) db.node_ids.push_back(padded('n', j));
    for (int j = 0; j < n; ++j) db.shared_edges.push_back({j, (j + 1) % n});
    for (auto& [i, j] : db.shared_edges) {
        if (i > j) std::swap(i, j);
    }
    std::sort(db.shared_edges.begin(), db.shared_edges.end());
    db.shared_edges.erase(std::unique(db.shared_edges.begin(), db.shared_edges.end()),
                          db.shared_edges.end());
    db.samples.resize(m);
    for (int s = 0; s < m; ++s) {
        db.samples[s].sample_id = padded('s', s);
        db.samples[s].values.resize(n);
        for (int j = 0; j < n; ++j) db.samples[s].values[j] = rng.normal(0.0, 1.0);
        db.samples[s].missing_mask.assign(n, false);
    }
    return db;
}

}  // namespace testutil
