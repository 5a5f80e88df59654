#ifndef BERNPOLY_SAMPLER_HPP
#define BERNPOLY_SAMPLER_HPP

/**
 * @file sampler.hpp
 * @brief Draws symmetric Bernoulli vectors as a mixture of diagonal
 *        distributions.
 *
 * Each draw picks a diagonal k with probability alpha_k and then emits the
 * representative vertex v_k or its complement with probability 1/2 each.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bernpoly/errors.hpp"
#include "bernpoly/polytope.hpp"

namespace bernpoly {

/**
 * @brief Seeded uniform stream. Not thread-safe; use one per thread with
 *        distinct (seed, stream) pairs.
 */
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform on the grid {k 2^-53 : 0 <= k < 2^53} in [0,1).
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0,1); 1 - u is then exactly representable and also in (0,1).
    double open_uniform() noexcept
    {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/**
 * @brief Categorical sampler over a fixed probability vector.
 *
 * Uses Vose's alias table above 64 outcomes and a cumulative scan below.
 */
class CategoricalSampler {
public:
    static constexpr std::size_t kAliasThreshold = 64;

    explicit CategoricalSampler(std::span<const double> probs) : size_(probs.size())
    {
        if (size_ == 0)
            throw DomainError("categorical sampler needs at least one outcome");
        if (size_ <= kAliasThreshold) {
            cumulative_.resize(size_);
            double acc = 0.0;
            for (std::size_t k = 0; k < size_; ++k) {
                acc += probs[k];
                cumulative_[k] = acc;
            }
            last_positive_ = 0;
            for (std::size_t k = 0; k < size_; ++k)
                if (probs[k] > 0.0)
                    last_positive_ = k;
        }
        else {
            build_alias(probs);
        }
    }

    bool uses_alias() const noexcept { return !alias_.empty(); }

    std::size_t operator()(RandomSource& rng) const
    {
        const double u = rng.uniform();
        if (!uses_alias()) {
            for (std::size_t k = 0; k < size_; ++k)
                if (u < cumulative_[k])
                    return k;
            return last_positive_;
        }
        const double scaled = u * static_cast<double>(size_);
        auto slot = static_cast<std::size_t>(scaled);
        if (slot >= size_)
            slot = size_ - 1;
        const double frac = scaled - static_cast<double>(slot);
        return frac < threshold_[slot] ? slot : alias_[slot];
    }

private:
    void build_alias(std::span<const double> probs)
    {
        threshold_.assign(size_, 0.0);
        alias_.assign(size_, 0);
        std::vector<double> scaled(size_);
        std::vector<std::size_t> small, large;
        for (std::size_t k = 0; k < size_; ++k) {
            scaled[k] = probs[k] * static_cast<double>(size_);
            (scaled[k] < 1.0 ? small : large).push_back(k);
        }
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            small.pop_back();
            const std::size_t l = large.back();
            threshold_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        // Leftovers are 1 up to rounding.
        for (std::size_t k : large) {
            threshold_[k] = 1.0;
            alias_[k] = k;
        }
        const auto heaviest = static_cast<std::size_t>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
        for (std::size_t k : small) {
            threshold_[k] = probs[k] > 0.0 ? 1.0 : 0.0;
            alias_[k] = heaviest;
        }
    }

    std::size_t size_;
    std::vector<double> cumulative_;
    std::size_t last_positive_ = 0;
    std::vector<double> threshold_;
    std::vector<std::size_t> alias_;
};

/// Convex weights over the 2^(n-1) diagonal distributions.
class MixingWeights {
public:
    static constexpr double kSumTol = 1e-9;

    MixingWeights(std::size_t n, std::vector<double> alpha) : n_(n), alpha_(std::move(alpha))
    {
        if (alpha_.size() != diagonal_count(n))
            throw DomainError("mixing weights for n=" + std::to_string(n) + " need " +
                              std::to_string(diagonal_count(n)) + " entries, got " +
                              std::to_string(alpha_.size()));
        double sum = 0.0;
        for (double a : alpha_) {
            if (!(a >= 0.0) || !std::isfinite(a))
                throw DomainError("mixing weights must be finite and nonnegative");
            sum += a;
        }
        if (std::abs(sum - 1.0) > kSumTol)
            throw DomainError("mixing weights sum to " + std::to_string(sum) + ", not 1");
    }

    /// Clips entries in (-clip_tol, 0) to zero and rescales to unit sum.
    static MixingWeights normalized(std::size_t n, std::vector<double> alpha,
                                    double clip_tol = 1e-6)
    {
        double sum = 0.0;
        for (double& a : alpha) {
            if (a < 0.0 && a > -clip_tol)
                a = 0.0;
            sum += a;
        }
        if (!(sum > 0.0))
            throw DomainError("mixing weights have no positive mass");
        for (double& a : alpha)
            a /= sum;
        return MixingWeights(n, std::move(alpha));
    }

    std::size_t n() const noexcept { return n_; }
    std::span<const double> alpha() const noexcept { return alpha_; }

private:
    std::size_t n_;
    std::vector<double> alpha_;
};

/// count x n matrix of bits, row-major.
struct BernoulliSampleBatch {
    std::size_t n = 0;
    std::size_t count = 0;
    std::vector<std::uint8_t> bits;

    std::uint8_t at(std::size_t row, std::size_t col) const { return bits[row * n + col]; }
    std::span<const std::uint8_t> row(std::size_t r) const
    {
        return std::span<const std::uint8_t>(bits).subspan(r * n, n);
    }
};

/// Streaming form of sample_bernoulli: one row per call.
class BernoulliDrawer {
public:
    explicit BernoulliDrawer(const MixingWeights& w) : n_(w.n()), pick_(w.alpha())
    {
        vertices_.resize(w.alpha().size() * n_);
        for (std::size_t k = 0; k < w.alpha().size(); ++k) {
            const auto y = diagonal_vertex(DiagonalIndex(k + 1, n_));
            std::copy(y.bits.begin(), y.bits.end(),
                      vertices_.begin() + static_cast<std::ptrdiff_t>(k * n_));
        }
    }

    std::size_t n() const noexcept { return n_; }

    void draw(RandomSource& rng, std::span<std::uint8_t> out) const
    {
        const std::size_t k = pick_(rng);
        // Dedicated uniform for the complement coin.
        const bool flip = rng.uniform() < 0.5;
        const std::uint8_t* v = vertices_.data() + k * n_;
        for (std::size_t i = 0; i < n_; ++i)
            out[i] = flip ? static_cast<std::uint8_t>(1 - v[i]) : v[i];
    }

private:
    std::size_t n_;
    CategoricalSampler pick_;
    std::vector<std::uint8_t> vertices_;
};

inline BernoulliSampleBatch sample_bernoulli(const MixingWeights& w, std::size_t count,
                                             RandomSource& rng)
{
    if (count < 1)
        throw DomainError("sample count must be at least 1");
    BernoulliDrawer drawer(w);
    BernoulliSampleBatch batch{w.n(), count, std::vector<std::uint8_t>(count * w.n())};
    for (std::size_t r = 0; r < count; ++r)
        drawer.draw(rng, std::span<std::uint8_t>(batch.bits).subspan(r * w.n(), w.n()));
    return batch;
}

/**
 * @brief Sample Pearson correlation of every column pair of a real matrix.
 *
 * @p data is count x n, row-major. Results are clamped to [-1,1] against
 * rounding.
 */
template <class T>
CorrelationVector pearson_correlation(std::span<const T> data, std::size_t n, std::size_t count)
{
    if (count < 2)
        throw DomainError("correlation needs at least two rows");
    if (data.size() != n * count)
        throw ShapeError("sample matrix storage does not match count x n");
    std::vector<double> mean(n, 0.0);
    for (std::size_t r = 0; r < count; ++r)
        for (std::size_t i = 0; i < n; ++i)
            mean[i] += static_cast<double>(data[r * n + i]);
    for (double& m : mean)
        m /= static_cast<double>(count);

    std::vector<double> cross(n * n, 0.0);
    std::vector<double> centered(n);
    for (std::size_t r = 0; r < count; ++r) {
        for (std::size_t i = 0; i < n; ++i)
            centered[i] = static_cast<double>(data[r * n + i]) - mean[i];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                cross[i * n + j] += centered[i] * centered[j];
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!(cross[i * n + i] > 0.0))
            throw DegenerateData("column " + std::to_string(i + 1) + " is constant", i + 1);

    std::vector<double> rho;
    rho.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = cross[i * n + j] / std::sqrt(cross[i * n + i] * cross[j * n + j]);
            rho.push_back(std::clamp(c, -1.0, 1.0));
        }
    return CorrelationVector(n, std::move(rho));
}

inline CorrelationVector empirical_correlation(const BernoulliSampleBatch& batch)
{
    return pearson_correlation<std::uint8_t>(batch.bits, batch.n, batch.count);
}

/// Column means of a batch.
inline std::vector<double> column_means(const BernoulliSampleBatch& batch)
{
    std::vector<double> mean(batch.n, 0.0);
    for (std::size_t r = 0; r < batch.count; ++r)
        for (std::size_t i = 0; i < batch.n; ++i)
            mean[i] += batch.at(r, i);
    for (double& m : mean)
        m /= static_cast<double>(batch.count);
    return mean;
}

/// Pairwise correlations implied by weights: the correlation rows of M w.
inline CorrelationVector mixture_correlation(const MixingWeights& w)
{
    const std::size_t n = w.n();
    std::vector<double> rho(pair_count(n), 0.0);
    for (std::size_t k = 0; k < w.alpha().size(); ++k) {
        const double a = w.alpha()[k];
        if (a == 0.0)
            continue;
        const std::uint64_t code = k;
        std::size_t r = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j, ++r) {
                const bool same = ((code >> (n - 1 - i)) & 1u) == ((code >> (n - 1 - j)) & 1u);
                rho[r] += same ? a : -a;
            }
    }
    for (double& v : rho)
        v = std::clamp(v, -1.0, 1.0);
    return CorrelationVector(n, std::move(rho));
}

}  // namespace bernpoly

#endif  // BERNPOLY_SAMPLER_HPP
