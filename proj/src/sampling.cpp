#include "edpmc/sampling.hpp"

#include "edpmc/seeding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace edpmc {

namespace {

// Sobol direction-number table, 32 dimensions. Primitive polynomials in
// Peter Jaeckel's ordering ("Monte Carlo Methods in Finance", 2002) with the
// Joe-Kuo D6 initialization numbers (S. Joe and F. Y. Kuo, "Constructing
// Sobol sequences with better two-dimensional projections", SIAM J. Sci.
// Comput. 30 (2008); the same pairing QuantLib ships as JoeKuoD6).
// Dimension 1 is the van der Corput sequence in base 2 (all m_j = 1).
struct SobolDim {
    unsigned degree;              // s: degree of the primitive polynomial
    unsigned poly;                // interior coefficient bits a_1..a_{s-1}
    std::array<unsigned, 8> m;    // initial direction numbers m_1..m_s (odd)
};

constexpr std::array<SobolDim, 31> kSobolDims = {{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
    {7, 7, {1, 1, 3, 13, 7, 35, 63}},
    {7, 8, {1, 3, 5, 9, 1, 25, 53}},
    {7, 14, {1, 3, 1, 13, 9, 35, 107}},
    {7, 19, {1, 3, 1, 5, 27, 61, 31}},
    {7, 21, {1, 1, 5, 11, 19, 41, 61}},
    {7, 28, {1, 3, 5, 3, 3, 13, 69}},
    {7, 31, {1, 1, 7, 13, 1, 19, 1}},
    {7, 32, {1, 3, 7, 5, 13, 19, 59}},
    {7, 37, {1, 1, 3, 9, 25, 29, 41}},
    {7, 41, {1, 3, 5, 13, 23, 1, 55}},
    {7, 42, {1, 3, 7, 3, 13, 59, 17}},
}};

constexpr int kSobolBits = 52;  // fits a double mantissa exactly

// Direction integers V_1..V_kSobolBits for one dimension, scaled to
// kSobolBits bits.
std::array<std::uint64_t, kSobolBits> direction_integers(int dim) {
    std::array<std::uint64_t, kSobolBits> v{};
    if (dim == 0) {
        for (int j = 0; j < kSobolBits; ++j) v[j] = 1ULL << (kSobolBits - 1 - j);
        return v;
    }
    const SobolDim& d = kSobolDims[static_cast<std::size_t>(dim - 1)];
    const unsigned s = d.degree;
    for (unsigned j = 0; j < s; ++j)
        v[j] = static_cast<std::uint64_t>(d.m[j]) << (kSobolBits - 1 - j);
    for (int j = static_cast<int>(s); j < kSobolBits; ++j) {
        std::uint64_t value = v[j - s] ^ (v[j - s] >> s);
        for (unsigned k = 1; k < s; ++k)
            if ((d.poly >> (s - 1 - k)) & 1U) value ^= v[j - k];
        v[j] = value;
    }
    return v;
}

}  // namespace

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::LatinHypercube: return "lhs";
        case Scheme::Halton: return "halton";
        case Scheme::Sobol: return "sobol";
        case Scheme::PlainUniform: return "uniform";
    }
    throw DataError("unknown Scheme");
}

Scheme scheme_from_string(const std::string& tag) {
    if (tag == "lhs") return Scheme::LatinHypercube;
    if (tag == "halton") return Scheme::Halton;
    if (tag == "sobol") return Scheme::Sobol;
    if (tag == "uniform") return Scheme::PlainUniform;
    throw DataError("unknown sampling scheme '" + tag + "'");
}

void SamplerConfig::validate() const {
    if (count < 1) throw DataError("SamplerConfig: count must be >= 1");
    if (dims < 1) throw DataError("SamplerConfig: dims must be >= 1");
    if (scheme == Scheme::Sobol && dims > sobol_max_dims())
        throw DataError("SamplerConfig: Sobol table covers " +
                        std::to_string(sobol_max_dims()) + " dimensions, requested " +
                        std::to_string(dims));
}

int sobol_max_dims() { return static_cast<int>(kSobolDims.size()) + 1; }

MatrixXd lhs_sample(const SamplerConfig& config) {
    config.validate();
    MatrixXd points(config.count, config.dims);
    const double m = static_cast<double>(config.count);
    for (Index d = 0; d < config.dims; ++d) {
        auto engine = make_engine(derive_seed(config.seed, 0x1a5u, d));
        std::vector<Index> order(static_cast<std::size_t>(config.count));
        std::iota(order.begin(), order.end(), Index{0});
        std::shuffle(order.begin(), order.end(), engine);
        std::uniform_real_distribution<double> jitter(0.0, 1.0);
        for (Index i = 0; i < config.count; ++i)
            points(i, d) = (static_cast<double>(order[static_cast<std::size_t>(i)]) +
                            jitter(engine)) / m;
    }
    return points;
}

double radical_inverse(std::uint64_t index, unsigned base) {
    if (index < 1) throw DataError("radical_inverse: index must be >= 1");
    if (base < 2) throw DataError("radical_inverse: base must be >= 2");
    double result = 0.0;
    double scale = 1.0 / base;
    while (index > 0) {
        result += scale * static_cast<double>(index % base);
        index /= base;
        scale /= base;
    }
    return result;
}

std::vector<unsigned> first_primes(Index n) {
    std::vector<unsigned> primes;
    primes.reserve(static_cast<std::size_t>(n));
    unsigned candidate = 2;
    while (static_cast<Index>(primes.size()) < n) {
        bool is_prime = true;
        for (unsigned p : primes) {
            if (p * p > candidate) break;
            if (candidate % p == 0) { is_prime = false; break; }
        }
        if (is_prime) primes.push_back(candidate);
        ++candidate;
    }
    return primes;
}

MatrixXd halton_sample(const SamplerConfig& config) {
    config.validate();
    const auto primes = first_primes(config.dims);
    MatrixXd points(config.count, config.dims);
    for (Index i = 0; i < config.count; ++i)
        for (Index d = 0; d < config.dims; ++d)
            points(i, d) = radical_inverse(static_cast<std::uint64_t>(i) + 1,
                                           primes[static_cast<std::size_t>(d)]);
    return points;
}

MatrixXd sobol_sample(const SamplerConfig& config) {
    config.validate();
    std::vector<std::array<std::uint64_t, kSobolBits>> v;
    v.reserve(static_cast<std::size_t>(config.dims));
    for (Index d = 0; d < config.dims; ++d) v.push_back(direction_integers(static_cast<int>(d)));

    const double scale = std::ldexp(1.0, -kSobolBits);
    MatrixXd points(config.count, config.dims);
    std::vector<std::uint64_t> state(static_cast<std::size_t>(config.dims), 0);
    for (Index i = 0; i < config.count; ++i) {
        // Gray-code update: flip the direction integer indexed by the lowest
        // zero bit of i (points are X_1, X_2, ...; X_0 = 0 is skipped).
        const std::uint64_t n = static_cast<std::uint64_t>(i);
        int c = 0;
        while ((n >> c) & 1ULL) ++c;
        for (Index d = 0; d < config.dims; ++d) {
            auto& x = state[static_cast<std::size_t>(d)];
            x ^= v[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)];
            points(i, d) = static_cast<double>(x) * scale;
        }
    }
    return points;
}

MatrixXd plain_uniform_sample(const SamplerConfig& config) {
    config.validate();
    auto engine = make_engine(derive_seed(config.seed, 0xc3du));
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    MatrixXd points(config.count, config.dims);
    for (Index i = 0; i < config.count; ++i)
        for (Index d = 0; d < config.dims; ++d) points(i, d) = dist(engine);
    return points;
}

MatrixXd draw_samples(const SamplerConfig& config) {
    switch (config.scheme) {
        case Scheme::LatinHypercube: return lhs_sample(config);
        case Scheme::Halton: return halton_sample(config);
        case Scheme::Sobol: return sobol_sample(config);
        case Scheme::PlainUniform: return plain_uniform_sample(config);
    }
    throw DataError("draw_samples: unknown scheme");
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw DataError("inverse_normal_cdf: p must lie strictly inside (0, 1)");

    // Acklam's rational approximation (2003), |relative error| < 1.15e-9.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    static constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the erfc-based CDF pushes the error to the
    // last few ulps, comfortably inside the 1e-9 budget. The residual is
    // evaluated through the tail probability: 1-p is exact for p >= 0.5, so
    // no cancellation occurs near either endpoint.
    static const double sqrt2 = std::sqrt(2.0);
    static const double sqrt_2pi = std::sqrt(2.0 * M_PI);
    const double e = p >= 0.5 ? (1.0 - p) - 0.5 * std::erfc(x / sqrt2)
                              : 0.5 * std::erfc(-x / sqrt2) - p;
    const double u = e * sqrt_2pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

MatrixXd gaussian_transform(const Eigen::Ref<const MatrixXd>& u,
                            const Eigen::Ref<const VectorXd>& means,
                            const Eigen::Ref<const VectorXd>& stds) {
    if (means.size() != u.cols() || stds.size() != u.cols())
        throw DataError("gaussian_transform: means/stds must have one entry per dimension");
    if ((stds.array() < 0.0).any())
        throw DataError("gaussian_transform: standard deviations must be >= 0");
    MatrixXd out(u.rows(), u.cols());
    for (Index d = 0; d < u.cols(); ++d)
        for (Index i = 0; i < u.rows(); ++i)
            out(i, d) = means[d] + stds[d] * inverse_normal_cdf(u(i, d));
    return out;
}

}  // namespace edpmc
