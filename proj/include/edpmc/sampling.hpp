#pragma once

#include "edpmc/types.hpp"

#include <cstdint>

namespace edpmc {

enum class Scheme { LatinHypercube, Halton, Sobol, PlainUniform };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& tag);

struct SamplerConfig {
    Scheme scheme = Scheme::LatinHypercube;
    Index count = 1;   // points to draw
    Index dims = 1;    // random variables
    std::uint64_t seed = 0;  // ignored by Halton/Sobol

    void validate() const;
};

// Highest dimension covered by the bundled Sobol direction-number table.
int sobol_max_dims();

// One point per equal-probability interval per dimension; interval order is
// a seeded permutation, the point inside each interval is seeded-uniform.
MatrixXd lhs_sample(const SamplerConfig& config);

// Digit reversal of `index` in `base`, mirrored about the radix point.
double radical_inverse(std::uint64_t index, unsigned base);

// Row i, dim d = radical_inverse(i, p_d), p_d the d-th prime; rows start at
// index 1.
MatrixXd halton_sample(const SamplerConfig& config);

// Gray-code Sobol sequence; the all-zeros point at index 0 is skipped.
MatrixXd sobol_sample(const SamplerConfig& config);

MatrixXd plain_uniform_sample(const SamplerConfig& config);

// Dispatch on config.scheme.
MatrixXd draw_samples(const SamplerConfig& config);

// Inverse standard-normal CDF, accurate to better than 1e-9 absolute for
// p in [1e-12, 1 - 1e-12] (rational approximation plus one Halley step).
double inverse_normal_cdf(double p);

// Per-cell Phi^{-1}(u) * std_d + mean_d; u must lie strictly inside (0,1).
MatrixXd gaussian_transform(const Eigen::Ref<const MatrixXd>& u,
                            const Eigen::Ref<const VectorXd>& means,
                            const Eigen::Ref<const VectorXd>& stds);

// First n primes (Halton bases).
std::vector<unsigned> first_primes(Index n);

}  // namespace edpmc
