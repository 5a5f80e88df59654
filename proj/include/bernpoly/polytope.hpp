#ifndef BERNPOLY_POLYTOPE_HPP
#define BERNPOLY_POLYTOPE_HPP

/**
 * @file polytope.hpp
 * @brief Combinatorics of the symmetric-Bernoulli correlation polytope.
 *
 * Coordinates are 1-based throughout the public surface. Pairs (i,j) with
 * i < j are linearized row by row: (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n).
 *
 * A diagonal of the cube {0,1}^n is the pair {x, 1-x}. Its label is
 * k = 1 + sum_j y_j 2^(n-j) for the representative y with y_1 = 0, so that
 * labels run over 1..2^(n-1) and y_1 is the most significant bit of k-1.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bernpoly/errors.hpp"

namespace bernpoly {

/// Largest dimension accepted by build_vertex_matrix unless raised explicitly.
inline constexpr std::size_t kDefaultDimensionCap = 20;

/// Hard ceiling imposed by 64-bit diagonal labels.
inline constexpr std::size_t kMaxRepresentableDimension = 63;

inline std::size_t pair_count(std::size_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

inline std::size_t diagonal_count(std::size_t n)
{
    if (n == 0 || n > kMaxRepresentableDimension)
        throw RangeError("dimension " + std::to_string(n) + " has no diagonal labelling");
    return std::size_t{1} << (n - 1);
}

/// Unordered coordinate pair, 1-based, with i < j.
struct PairIndex {
    std::size_t i;
    std::size_t j;

    friend bool operator==(const PairIndex&, const PairIndex&) = default;
};

/// Position of (i,j) in the row-by-row order (0-based).
inline std::size_t pair_position(PairIndex p, std::size_t n)
{
    if (p.i < 1 || p.i >= p.j || p.j > n)
        throw RangeError("pair (" + std::to_string(p.i) + "," + std::to_string(p.j) +
                         ") invalid for n=" + std::to_string(n));
    const std::size_t row = p.i - 1;
    // Pairs in rows 1..i-1 precede row i.
    const std::size_t before = row * n - row * (row + 1) / 2;
    return before + (p.j - p.i - 1);
}

inline std::vector<PairIndex> all_pairs(std::size_t n)
{
    std::vector<PairIndex> out;
    out.reserve(pair_count(n));
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            out.push_back({i, j});
    return out;
}

namespace detail {

template <class Pred>
std::vector<double> checked_pair_values(std::size_t n, std::vector<double> values, Pred in_range,
                                        const char* what)
{
    if (values.size() != pair_count(n))
        throw ShapeError(std::string(what) + " for n=" + std::to_string(n) + " needs " +
                         std::to_string(pair_count(n)) + " entries, got " +
                         std::to_string(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]) || !in_range(values[k]))
            throw DomainError(std::string(what) + " entry " + std::to_string(k + 1) +
                              " out of range");
    }
    return values;
}

}  // namespace detail

/// Pairwise correlations in [-1,1], one per PairIndex.
class CorrelationVector {
public:
    CorrelationVector() = default;

    CorrelationVector(std::size_t n, std::vector<double> values)
        : n_(n), values_(detail::checked_pair_values(
                     n, std::move(values), [](double v) { return v >= -1.0 && v <= 1.0; },
                     "correlation vector"))
    {
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t pos) const { return values_[pos]; }
    double at(PairIndex p) const { return values_[pair_position(p, n_)]; }

    friend bool operator==(const CorrelationVector&, const CorrelationVector&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

/// Pairwise agreement probabilities P(B_i = B_j) in [0,1].
class AgreementVector {
public:
    AgreementVector() = default;

    AgreementVector(std::size_t n, std::vector<double> values)
        : n_(n), values_(detail::checked_pair_values(
                     n, std::move(values), [](double v) { return v >= 0.0 && v <= 1.0; },
                     "agreement vector"))
    {
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t pos) const { return values_[pos]; }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

/// Label 1..2^(n-1) of a cube diagonal.
class DiagonalIndex {
public:
    DiagonalIndex(std::uint64_t k, std::size_t n) : k_(k), n_(n)
    {
        if (k < 1 || k > diagonal_count(n))
            throw RangeError("diagonal label " + std::to_string(k) + " outside 1.." +
                             std::to_string(diagonal_count(n)) + " for n=" + std::to_string(n));
    }

    std::uint64_t k() const noexcept { return k_; }
    std::size_t n() const noexcept { return n_; }

private:
    std::uint64_t k_;
    std::size_t n_;
};

/// Vertex of {0,1}^n; bits[0] is coordinate 1.
struct BitVector {
    std::vector<std::uint8_t> bits;

    std::size_t size() const noexcept { return bits.size(); }

    BitVector complement() const
    {
        BitVector out{bits};
        for (auto& b : out.bits)
            b = static_cast<std::uint8_t>(1 - b);
        return out;
    }

    /// 1-based coordinates set to 1.
    std::vector<std::size_t> support() const
    {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i])
                s.push_back(i + 1);
        return s;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;
};

/// 0/1 indicator over pairs of the edges separated by a cut.
struct CutVector {
    std::size_t n = 0;
    std::vector<std::uint8_t> values;

    friend bool operator==(const CutVector&, const CutVector&) = default;
    friend auto operator<=>(const CutVector&, const CutVector&) = default;
};

inline BitVector diagonal_vertex(DiagonalIndex k)
{
    const std::size_t n = k.n();
    const std::uint64_t code = k.k() - 1;
    BitVector y;
    y.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        y.bits[i] = static_cast<std::uint8_t>((code >> (n - 1 - i)) & 1u);
    return y;
}

/// b(y) of the representative of y's diagonal; inverse of diagonal_vertex.
inline DiagonalIndex diagonal_label(const BitVector& x)
{
    const std::size_t n = x.size();
    const bool flip = n > 0 && x.bits[0] != 0;
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t bit = flip ? 1u - x.bits[i] : x.bits[i];
        code = (code << 1) | bit;
    }
    return DiagonalIndex(code + 1, n);
}

inline CorrelationVector vertex_correlation(DiagonalIndex k)
{
    const BitVector y = diagonal_vertex(k);
    const std::size_t n = k.n();
    std::vector<double> v;
    v.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            v.push_back(y.bits[i] == y.bits[j] ? 1.0 : -1.0);
    return CorrelationVector(n, std::move(v));
}

/// delta(S): 1 on pairs with exactly one endpoint in S.
inline CutVector cut_vector(std::span<const std::size_t> subset, std::size_t n)
{
    std::vector<std::uint8_t> in(n, 0);
    for (std::size_t s : subset) {
        if (s < 1 || s > n)
            throw DomainError("cut set element " + std::to_string(s) + " outside 1.." +
                              std::to_string(n));
        in[s - 1] = 1;
    }
    CutVector c{n, {}};
    c.values.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            c.values.push_back(static_cast<std::uint8_t>(in[i] != in[j]));
    return c;
}

inline AgreementVector correlation_to_agreement(const CorrelationVector& rho)
{
    std::vector<double> lambda(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k)
        lambda[k] = 0.5 * (1.0 + rho[k]);
    return AgreementVector(rho.n(), std::move(lambda));
}

inline CorrelationVector agreement_to_correlation(const AgreementVector& lambda)
{
    std::vector<double> rho(lambda.size());
    for (std::size_t k = 0; k < lambda.size(); ++k)
        rho[k] = 2.0 * lambda[k] - 1.0;
    return CorrelationVector(lambda.n(), std::move(rho));
}

/// 1 - 2 rho, entrywise; unclamped.
inline std::vector<double> cut_image(const CorrelationVector& rho)
{
    std::vector<double> out(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k)
        out[k] = 1.0 - 2.0 * rho[k];
    return out;
}

/**
 * @brief Vertex correlations stacked column-wise over an all-ones row.
 *
 * Entries are +-1 and stored as int8 so that n = 20 stays near 100 MB.
 * Row r < pair_count(n) is the PairIndex at position r; the last row is 1.
 */
class VertexMatrix {
public:
    explicit VertexMatrix(std::size_t n) : n_(n), rows_(pair_count(n) + 1), cols_(diagonal_count(n))
    {
        data_.assign(rows_ * cols_, 1);
        for (std::size_t c = 0; c < cols_; ++c) {
            const std::uint64_t code = c;
            std::size_t r = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto bi = (code >> (n - 1 - i)) & 1u;
                for (std::size_t j = i + 1; j < n; ++j, ++r) {
                    const auto bj = (code >> (n - 1 - j)) & 1u;
                    data_[r * cols_ + c] = bi == bj ? 1 : -1;
                }
            }
        }
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    int at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const std::int8_t> row(std::size_t r) const
    {
        return std::span<const std::int8_t>(data_).subspan(r * cols_, cols_);
    }

    /// Correlation part of column c (0-based column = label - 1).
    std::vector<int> column(std::size_t c) const
    {
        std::vector<int> out(rows_ - 1);
        for (std::size_t r = 0; r + 1 < rows_; ++r)
            out[r] = at(r, c);
        return out;
    }

    /// M * alpha, including the trailing sum row.
    std::vector<double> multiply(std::span<const double> alpha) const
    {
        if (alpha.size() != cols_)
            throw ShapeError("weight vector has " + std::to_string(alpha.size()) +
                             " entries, matrix has " + std::to_string(cols_) + " columns");
        std::vector<double> out(rows_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r) {
            const std::int8_t* row_ptr = data_.data() + r * cols_;
            double acc = 0.0;
            for (std::size_t c = 0; c < cols_; ++c)
                acc += row_ptr[c] * alpha[c];
            out[r] = acc;
        }
        return out;
    }

private:
    std::size_t n_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::int8_t> data_;
};

inline VertexMatrix build_vertex_matrix(std::size_t n, std::size_t cap = kDefaultDimensionCap)
{
    if (n < 1)
        throw DomainError("dimension must be positive");
    if (n > cap || n > kMaxRepresentableDimension)
        throw CapacityError("dimension " + std::to_string(n) + " exceeds the cap of " +
                                std::to_string(cap) + " (2^(n-1) vertex columns)",
                            cap);
    return VertexMatrix(n);
}

/// Right-hand side [rho, 1] of the vertex system.
inline std::vector<double> augmented(const CorrelationVector& rho)
{
    std::vector<double> b(rho.values().begin(), rho.values().end());
    b.push_back(1.0);
    return b;
}

/**
 * @brief Attainable correlation interval of two Bern(p) variables.
 *
 * Templated on the scalar so callers can evaluate it in exact rational
 * arithmetic.
 */
template <class T>
std::pair<T, T> bern_pair_bounds(const T& p)
{
    if (!(p > T(0)) || !(p < T(1)))
        throw DomainError("Bernoulli parameter must lie in (0,1)");
    const T one(1);
    const T half = one / T(2);
    T rho_min = p >= half ? T(-(one - p) / p) : T(-p / (one - p));
    return {rho_min, one};
}

}  // namespace bernpoly

#endif  // BERNPOLY_POLYTOPE_HPP
