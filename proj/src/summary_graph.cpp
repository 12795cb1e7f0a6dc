#include "netoutlier/summary_graph.hpp"

#include <algorithm>
#include <cmath>

#include "netoutlier/errors.hpp"

namespace netoutlier {

namespace {

std::vector<std::vector<int>> components_of(const Eigen::MatrixXd& A,
                                            const std::vector<int>& nodes) {
    std::vector<std::vector<int>> comps;
    std::vector<bool> in_set(A.rows(), false), seen(A.rows(), false);
    for (int v : nodes) in_set[v] = true;
    for (int v : nodes) {
        if (seen[v]) continue;
        std::vector<int> comp, stack{v};
        seen[v] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (int w : nodes) {
                if (!seen[w] && A(u, w) > 0.0) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

}  // namespace

SummaryGraph build_summary_graph(const NetworkDatabase& db, const std::string& candidate_id,
                                 const std::vector<std::string>& neighbor_ids) {
    if (neighbor_ids.empty()) throw ValidationError("build_summary_graph: no neighbors");
    const int n = db.n_nodes();
    const int K = static_cast<int>(neighbor_ids.size());

    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    for (const auto& id : neighbor_ids) {
        if (id == candidate_id) {
            throw ValidationError("build_summary_graph: candidate listed as its own neighbor");
        }
        for (const auto& [i, j] : effective_edges(db, id)) {
            counts(i, j) += 1.0;
            counts(j, i) += 1.0;
        }
    }
    SummaryGraph g;
    g.A = counts / static_cast<double>(K);
    for (const auto& [i, j] : effective_edges(db, candidate_id)) {
        g.A(i, j) = std::max(g.A(i, j), 1.0);
        g.A(j, i) = g.A(i, j);
    }
    g.deg = g.A.rowwise().sum();
    std::vector<int> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    g.components = components_of(g.A, all);
    return g;
}

Eigen::MatrixXd normalized_laplacian(const SummaryGraph& g, const std::vector<int>& component) {
    const int c = static_cast<int>(component.size());
    if (c < 2) throw ValidationError("normalized_laplacian: component needs >= 2 nodes");
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(c, c);
    for (int r = 0; r < c; ++r) {
        const int i = component[r];
        if (g.deg[i] <= 0.0) {
            throw Error("normalized_laplacian: zero-degree node inside a component");
        }
        for (int s = r + 1; s < c; ++s) {
            const int j = component[s];
            if (g.A(i, j) > 0.0) {
                const double v = -g.A(i, j) / std::sqrt(g.deg[i] * g.deg[j]);
                L(r, s) = v;
                L(s, r) = v;
            }
        }
    }
    return L;
}

LaplacianFactor laplacian_factor(const Eigen::MatrixXd& L) {
    if (L.rows() != L.cols()) throw ValidationError("laplacian_factor: non-square input");
    const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
    if ((L - L.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ValidationError("laplacian_factor: input is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("laplacian_factor: eigendecomposition failed", {});
    }
    LaplacianFactor f;
    f.L = L;
    f.eigenvalues = eig.eigenvalues().cwiseMax(0.0);
    // S = Sigma^{1/2} U^T so that S^T S = U Sigma U^T = L.
    f.S = f.eigenvalues.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
    return f;
}

double quadratic_penalty(const Eigen::VectorXd& w, const SummaryGraph& g,
                         const Eigen::MatrixXd& L) {
    (void)g;
    if (w.size() != L.rows()) throw ValidationError("quadratic_penalty: dimension mismatch");
    return w.dot(L * w);
}

LaplacianFactor assemble_full_factor(const SummaryGraph& g) {
    const int n = static_cast<int>(g.A.rows());
    LaplacianFactor full;
    full.L = Eigen::MatrixXd::Zero(n, n);
    full.S = Eigen::MatrixXd::Zero(n, n);
    full.eigenvalues = Eigen::VectorXd::Zero(n);
    int eig_at = 0;
    for (const auto& comp : g.components) {
        if (comp.size() < 2) {
            ++eig_at;  // singleton: zero row, zero eigenvalue
            continue;
        }
        LaplacianFactor f = laplacian_factor(normalized_laplacian(g, comp));
        const int c = static_cast<int>(comp.size());
        for (int r = 0; r < c; ++r) {
            for (int s = 0; s < c; ++s) {
                full.L(comp[r], comp[s]) = f.L(r, s);
                full.S(comp[r], comp[s]) = f.S(r, s);
            }
        }
        full.eigenvalues.segment(eig_at, c) = f.eigenvalues;
        eig_at += c;
    }
    return full;
}

std::vector<std::vector<int>> induced_components(const SummaryGraph& g,
                                                 const std::vector<int>& nodes) {
    return components_of(g.A, nodes);
}

}  // namespace netoutlier
