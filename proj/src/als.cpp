#include "edpmc/als.hpp"

#include "edpmc/seeding.hpp"

#include <Eigen/Cholesky>

#include <algorithm>

#include <cmath>
#include <random>

namespace edpmc {

void CompletionConfig::validate() const {
    if (rank < 1) throw DataError("CompletionConfig: rank must be >= 1");
    if (lambda < 0.0) throw DataError("CompletionConfig: lambda must be >= 0");
    if (!(tolerance > 0.0)) throw DataError("CompletionConfig: tolerance must be positive");
    if (max_sweeps < 1) throw DataError("CompletionConfig: max_sweeps must be >= 1");
    if (restarts < 1) throw DataError("CompletionConfig: restarts must be >= 1");
}

namespace {

double masked_objective(const MatrixXd& y, const MatrixXb& observed, const MatrixXd& a,
                        const MatrixXd& b, double lambda) {
    double sum = 0.0;
    for (Index j = 0; j < y.cols(); ++j)
        for (Index i = 0; i < y.rows(); ++i)
            if (observed(i, j)) {
                const double r = y(i, j) - a.row(i).dot(b.col(j));
                sum += r * r;
            }
    return sum + lambda * (a.squaredNorm() + b.squaredNorm());
}

}  // namespace

CompletionResult als_complete(const Eigen::Ref<const MatrixXd>& values,
                              const MatrixXb& observed, const CompletionConfig& config) {
    config.validate();
    const Index n = values.rows();
    const Index m = values.cols();
    if (observed.rows() != n || observed.cols() != m)
        throw DataError("als_complete: mask dimensions do not match the matrix");
    if (config.rank >= std::min(n, m))
        throw DataError("als_complete: rank must satisfy R < min(N, M)");

    // Observed-cell index lists per row and per column.
    std::vector<std::vector<Index>> row_cells(static_cast<std::size_t>(n));
    std::vector<std::vector<Index>> col_cells(static_cast<std::size_t>(m));
    long observed_count = 0;
    double sum_sq = 0.0;
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i)
            if (observed(i, j)) {
                row_cells[static_cast<std::size_t>(i)].push_back(j);
                col_cells[static_cast<std::size_t>(j)].push_back(i);
                ++observed_count;
                sum_sq += values(i, j) * values(i, j);
            }
    if (observed_count == 0) throw DataError("als_complete: mask observes nothing");
    if (config.lambda == 0.0) {
        for (Index i = 0; i < n; ++i)
            if (row_cells[static_cast<std::size_t>(i)].empty())
                throw DataError("als_complete: row " + std::to_string(i + 1) +
                                " has no observed entry and lambda = 0 (singular solve)");
        for (Index j = 0; j < m; ++j)
            if (col_cells[static_cast<std::size_t>(j)].empty())
                throw DataError("als_complete: column " + std::to_string(j + 1) +
                                " has no observed entry and lambda = 0 (singular solve)");
    }

    const double rms = std::sqrt(sum_sq / static_cast<double>(observed_count));
    const double scale = rms > 0.0 ? rms : 1.0;
    const MatrixXd y = values / scale;

    const Index r = config.rank;
    MatrixXd a(n, r), b(r, m);
    MatrixXd best_a, best_b;
    std::vector<double> best_trace;
    double best_objective = std::numeric_limits<double>::infinity();

    MatrixXd gram(r, r);
    VectorXd rhs(r);
    for (int restart = 0; restart < config.restarts; ++restart) {
        auto engine = make_engine(derive_seed(config.seed, 0xa15u, restart));
        std::normal_distribution<double> init(0.0, 1.0 / std::sqrt(static_cast<double>(r)));
        for (Index k = 0; k < r; ++k)
            for (Index i = 0; i < n; ++i) a(i, k) = init(engine);
        for (Index j = 0; j < m; ++j)
            for (Index k = 0; k < r; ++k) b(k, j) = init(engine);

        std::vector<double> trace;
        trace.reserve(static_cast<std::size_t>(config.max_sweeps) + 1);
        trace.push_back(masked_objective(y, observed, a, b, config.lambda));

        for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
            // Rows of A given B.
            for (Index i = 0; i < n; ++i) {
                const auto& cells = row_cells[static_cast<std::size_t>(i)];
                gram = config.lambda * MatrixXd::Identity(r, r);
                rhs.setZero();
                for (Index j : cells) {
                    gram.noalias() += b.col(j) * b.col(j).transpose();
                    rhs.noalias() += y(i, j) * b.col(j);
                }
                a.row(i) = gram.ldlt().solve(rhs).transpose();
            }
            // Columns of B given A.
            for (Index j = 0; j < m; ++j) {
                const auto& cells = col_cells[static_cast<std::size_t>(j)];
                gram = config.lambda * MatrixXd::Identity(r, r);
                rhs.setZero();
                for (Index i : cells) {
                    gram.noalias() += a.row(i).transpose() * a.row(i);
                    rhs.noalias() += y(i, j) * a.row(i).transpose();
                }
                b.col(j) = gram.ldlt().solve(rhs);
            }

            const double objective = masked_objective(y, observed, a, b, config.lambda);
            const double previous = trace.back();
            trace.push_back(objective);
            if (std::abs(previous - objective) <=
                config.tolerance * std::max(previous, 1e-300))
                break;
        }

        if (trace.back() < best_objective) {
            best_objective = trace.back();
            best_a = a;
            best_b = b;
            best_trace = std::move(trace);
        }
    }

    CompletionResult result{MatrixXd(), Factorization(scale * best_a, best_b),
                            std::move(best_trace), scale};
    result.estimate = result.factors.product();
    if (!result.estimate.allFinite())
        throw DataError("als_complete: estimate diverged to non-finite values");
    return result;
}

CompletionResult als_complete(const EdpMatrix& matrix, const ObservationMask& mask,
                              const CompletionConfig& config) {
    if (mask.rows() != matrix.rows() || mask.cols() != matrix.cols())
        throw DataError("als_complete: mask dimensions do not match the matrix");
    return als_complete(matrix.values(), mask.flags(), config);
}

Index select_rank(const Eigen::Ref<const MatrixXd>& values, const MatrixXb& observed,
                  const std::vector<Index>& grid, double holdout_fraction,
                  std::uint64_t seed, const CompletionConfig& base) {
    if (grid.empty()) throw DataError("select_rank: empty rank grid");
    if (!(holdout_fraction > 0.0) || holdout_fraction > 0.5)
        throw DataError("select_rank: holdout fraction must lie in (0, 0.5]");

    // Hide a seeded fraction of the observed cells per column, keeping at
    // least one observation everywhere.
    MatrixXb training = observed;
    MatrixXb holdout = MatrixXb::Constant(values.rows(), values.cols(), false);
    long hidden = 0;
    for (Index j = 0; j < values.cols(); ++j) {
        std::vector<Index> cells;
        for (Index i = 0; i < values.rows(); ++i)
            if (observed(i, j)) cells.push_back(i);
        if (cells.empty()) continue;
        long h = std::lround(holdout_fraction * static_cast<double>(cells.size()));
        h = std::min<long>(h, static_cast<long>(cells.size()) - 1);
        if (h <= 0) continue;
        auto engine = make_engine(derive_seed(seed, 0x401du, j));
        for (long t = 0; t < h; ++t) {
            std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(t),
                                                            cells.size() - 1);
            std::swap(cells[static_cast<std::size_t>(t)], cells[pick(engine)]);
            training(cells[static_cast<std::size_t>(t)], j) = false;
            holdout(cells[static_cast<std::size_t>(t)], j) = true;
            ++hidden;
        }
    }
    if (hidden == 0)
        throw DataError("select_rank: infeasible holdout, no cell could be hidden");

    std::vector<double> errors;
    errors.reserve(grid.size());
    for (Index rank : grid) {
        CompletionConfig config = base;
        config.rank = rank;
        const auto result = als_complete(values, training, config);
        double error_sq = 0.0;
        for (Index j = 0; j < values.cols(); ++j)
            for (Index i = 0; i < values.rows(); ++i)
                if (holdout(i, j)) {
                    const double d = result.estimate(i, j) - values(i, j);
                    error_sq += d * d;
                }
        errors.push_back(std::sqrt(error_sq));
    }

    // Ties go to the smallest rank. Exact float equality would make the tie
    // rule dead code, so errors within 1e-6 of the observed-data norm count
    // as tied (all-zero data still ties at exactly zero).
    double observed_norm = 0.0;
    for (Index j = 0; j < values.cols(); ++j)
        for (Index i = 0; i < values.rows(); ++i)
            if (observed(i, j)) observed_norm += values(i, j) * values(i, j);
    const double tie_width = 1e-6 * std::sqrt(observed_norm);

    const double min_error = *std::min_element(errors.begin(), errors.end());
    Index best_rank = std::numeric_limits<Index>::max();
    for (std::size_t g = 0; g < grid.size(); ++g)
        if (errors[g] <= min_error + tie_width) best_rank = std::min(best_rank, grid[g]);
    return best_rank;
}

}  // namespace edpmc
