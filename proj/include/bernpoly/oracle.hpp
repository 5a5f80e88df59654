#ifndef BERNPOLY_ORACLE_HPP
#define BERNPOLY_ORACLE_HPP

/**
 * @file oracle.hpp
 * @brief Brute-force feasibility over all 2^n atoms of {0,1}^n.
 *
 * Searches directly for a probability vector mu on the cube with Bern(1/2)
 * marginals and P(B_i = 1, B_j = 1) = (1 + rho_ij) / 4. For symmetric
 * Bernoullis E[B_i B_j] = P(B_i = B_j = 1), and P(B_i = B_j) = 2 E[B_i B_j]
 * (the 00 and 11 cells carry equal mass), so this is lambda = (1 + rho)/2
 * restated. No use is made of the diagonal-vertex description.
 *
 * Atom index x encodes coordinate 1 in its most significant bit.
 */

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bernpoly/errors.hpp"
#include "bernpoly/polytope.hpp"
#include "bernpoly/simplex.hpp"

namespace bernpoly {

inline constexpr std::size_t kOracleDimensionCap = 12;

inline bool atom_bit(std::uint64_t atom, std::size_t coord, std::size_t n)
{
    return ((atom >> (n - coord)) & 1u) != 0;
}

/// P(B_i = 1, B_j = 1) for a symmetric pair with correlation rho.
inline double joint_one_probability(double rho) { return 0.25 * (1.0 + rho); }

/**
 * Rows: total mass, then 2 P(B_k = 0) = 1 for k = 1..n, then
 * 4 P(B_i = 1, B_j = 1) = 1 + rho_ij in PairIndex order.
 *
 * The scaling puts residuals in correlation units, so a feasibility
 * tolerance means the same distance here as in the vertex program.
 */
inline StandardFormLP atom_system(const CorrelationVector& rho)
{
    const std::size_t n = rho.n();
    if (n < 1 || n > kOracleDimensionCap)
        throw CapacityError("atom oracle supports 1 <= n <= " +
                                std::to_string(kOracleDimensionCap) + ", got n=" +
                                std::to_string(n),
                            kOracleDimensionCap);
    StandardFormLP lp;
    lp.cols = std::size_t{1} << n;
    lp.rows = 1 + n + pair_count(n);
    lp.a.assign(lp.rows * lp.cols, 0.0);
    lp.b.assign(lp.rows, 0.0);

    for (std::uint64_t x = 0; x < lp.cols; ++x) {
        std::size_t r = 0;
        lp.a[r++ * lp.cols + x] = 1.0;
        for (std::size_t k = 1; k <= n; ++k, ++r)
            lp.a[r * lp.cols + x] = atom_bit(x, k, n) ? 0.0 : 2.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j, ++r)
                lp.a[r * lp.cols + x] = atom_bit(x, i, n) && atom_bit(x, j, n) ? 4.0 : 0.0;
    }

    std::size_t r = 0;
    lp.b[r++] = 1.0;
    for (std::size_t k = 1; k <= n; ++k)
        lp.b[r++] = 1.0;
    for (std::size_t pos = 0; pos < rho.size(); ++pos)
        lp.b[r++] = 4.0 * joint_one_probability(rho[pos]);
    return lp;
}

/// On success, alpha holds the atom masses mu(x), x = 0..2^n - 1.
inline FeasibilityResult oracle_feasible(const CorrelationVector& rho, const SolverConfig& cfg = {})
{
    return solve_phase1(atom_system(rho), cfg);
}

/// Marginal means and pairwise correlations 4 E[B_i B_j] - 1 of an atom distribution.
struct AtomMoments {
    std::vector<double> p_zero;
    std::vector<double> correlation;
};

inline AtomMoments atom_moments(std::size_t n, const std::vector<double>& mu)
{
    AtomMoments m{std::vector<double>(n, 0.0), std::vector<double>(pair_count(n), 0.0)};
    for (std::uint64_t x = 0; x < mu.size(); ++x) {
        std::size_t r = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            if (!atom_bit(x, i, n))
                m.p_zero[i - 1] += mu[x];
            for (std::size_t j = i + 1; j <= n; ++j, ++r)
                if (atom_bit(x, i, n) && atom_bit(x, j, n))
                    m.correlation[r] += mu[x];
        }
    }
    for (double& c : m.correlation)
        c = 4.0 * c - 1.0;
    return m;
}

}  // namespace bernpoly

#endif  // BERNPOLY_ORACLE_HPP
