#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "netoutlier/errors.hpp"
#include "netoutlier/objective.hpp"

namespace netoutlier {

struct SolverOptions {
    int max_iterations = 10;          // "usually <= 10" holds across the test corpus
    double gradient_tolerance = 1e-6; // on the max-norm of the gradient
    double sparsify_threshold = 1e-8; // absolute, applied to recovered coefficients
    double line_search_shrink = 0.5;
    double armijo_constant = 1e-4;
};

struct ModelCoefficients {
    Eigen::VectorXd w;                // length n, L1-normalized when support nonempty
    std::vector<int> support;         // sorted indices with w != 0
    int iterations_used = 0;          // filled by the caller that ran the solve
    double final_objective = 0.0;
};

struct NewtonResult {
    Eigen::VectorXd w_tilde;          // length 2n
    std::vector<TraceRow> trace;      // row 0 is the initial state
    int iterations = 0;               // accepted steps
    bool converged = false;           // gradient tolerance reached (vs iteration cap)
};

// Damped Newton on the split objective. Each step solves
// (H + 1e-10 I) d = -g, falls back to -g when d is not a descent direction,
// and backtracks with the Armijo rule. Throws NumericalError (with the trace
// attached) if the objective or gradient ever turns non-finite.
NewtonResult newton_solve(const SolverProblem& p, const SolverOptions& opts,
                          const std::optional<Eigen::VectorXd>& initial = std::nullopt);

// Largest eta in {1, s, s^2, ..., s^20} with
// f(w + eta d) <= f(w) + armijo * eta * g^T d; 0 when none qualifies or the
// direction is not a descent direction.
double line_search(const SolverProblem& p, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& direction, const SolverOptions& opts);

// Undoes the sign-split: w = w~[0..n) + w~[n..2n), small entries zeroed,
// the rest rescaled to unit L1 norm. Empty support is a valid outcome
// (support empty, w all zero); scoring falls back to the full node space.
ModelCoefficients recover_coefficients(const Eigen::VectorXd& w_tilde,
                                       const SolverOptions& opts);

struct ShrunkProblem {
    SolverProblem problem;            // restricted to the kept nodes
    std::vector<int> kept;            // kept[r] = original node index of reduced node r
};

// Drops node pairs (i, n+i) whose combined magnitude is below the sparsify
// threshold, restricts the design and the Laplacian to the kept nodes
// (principal submatrix, refactored per connected block), and rebuilds Q.
// Keeping the Laplacian's principal submatrix rather than recomputing it on
// the induced graph preserves the objective on the restricted subspace, so
// shrunk and unshrunk solves agree.
ShrunkProblem shrink_support(const SolverProblem& p, const Eigen::VectorXd& w_tilde,
                             const SolverOptions& opts);

}  // namespace netoutlier
