#pragma once

#include "edpmc/types.hpp"

#include <cstdint>

namespace edpmc {

struct CompletionConfig {
    Index rank = 3;
    double lambda = 1e-2;    // ridge weight on the RMS-normalized objective
    double tolerance = 1e-8; // stop on relative objective decrease below this
    int max_sweeps = 500;
    // Random-init ALS can stall in local minima at sparse sampling; each
    // restart draws a fresh seeded Gaussian init and the lowest final
    // objective wins. Fully deterministic per seed.
    int restarts = 4;
    std::uint64_t seed = 0;

    void validate() const;
};

struct CompletionResult {
    MatrixXd estimate;                   // N x M, original scale
    Factorization factors;               // product equals `estimate`
    std::vector<double> objective_trace; // objective before sweep 1, then per sweep
    double scale;                        // RMS of observed entries (1 if all zero)
};

// Regularized alternating least squares over the observed cells:
// minimize sum_{(i,j) in mask} (X_ij - (A B)_ij)^2 + lambda (|A|_F^2 + |B|_F^2)
// with exact row/column ridge solves. The matrix is normalized by the RMS of
// its observed entries first (scale-only, so exact low-rank structure is
// preserved) and de-normalized on output; lambda applies to the normalized
// objective, making the default behave like 1e-2 * mean squared observed
// entry in original units.
CompletionResult als_complete(const Eigen::Ref<const MatrixXd>& values,
                              const MatrixXb& observed, const CompletionConfig& config);

CompletionResult als_complete(const EdpMatrix& matrix, const ObservationMask& mask,
                              const CompletionConfig& config);

// Hides a seeded fraction of the observed cells per column (always leaving
// at least one), completes at every candidate rank and returns the rank with
// the smallest holdout error; exact ties go to the smaller rank. The holdout
// error is the absolute Frobenius norm on the hidden cells - the candidate
// ranking is unaffected by normalization and stays defined when the truth is
// identically zero.
Index select_rank(const Eigen::Ref<const MatrixXd>& values, const MatrixXb& observed,
                  const std::vector<Index>& grid, double holdout_fraction,
                  std::uint64_t seed, const CompletionConfig& base = {});

}  // namespace edpmc
