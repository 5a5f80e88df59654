#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "bernpoly/oracle.hpp"
#include "bernpoly/simplex.hpp"
#include "test_support.hpp"

using namespace bernpoly;
using boost::multiprecision::cpp_rational;
using bernpoly::testing::CorrelationGenerator;

namespace {

// Exact solve of a square system by Gauss-Jordan elimination.
std::vector<cpp_rational> solve_exact(std::vector<std::vector<cpp_rational>> a,
                                      std::vector<cpp_rational> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (a[p][c] == 0)
            ++p;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0)
                continue;
            const cpp_rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t r = 0; r < n; ++r)
        b[r] /= a[r][r];
    return b;
}

}  // namespace

TEST(AtomOracle, Examples)
{
    EXPECT_FALSE(oracle_feasible(CorrelationVector(3, {-0.4, -0.4, -0.4})).feasible);
    EXPECT_TRUE(oracle_feasible(CorrelationVector(3, {0, 0, 0})).feasible);
    EXPECT_TRUE(oracle_feasible(CorrelationVector(4, bernpoly::testing::kExampleBernoulli)).feasible);
    EXPECT_THROW(atom_system(CorrelationVector(13, std::vector<double>(78, 0.0))), CapacityError);
}

TEST(AtomOracle, JointOneProbability)
{
    EXPECT_DOUBLE_EQ(joint_one_probability(1.0), 0.5);
    EXPECT_DOUBLE_EQ(joint_one_probability(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(joint_one_probability(0.0), 0.25);
}

TEST(AtomOracle, SystemShape)
{
    const StandardFormLP lp = atom_system(CorrelationVector(4, std::vector<double>(6, 0.0)));
    EXPECT_EQ(lp.rows, 1u + 4u + 6u);
    EXPECT_EQ(lp.cols, 16u);
    // Atom 0b0101 has B_2 = B_4 = 1, with coordinate 1 as the leading bit.
    EXPECT_FALSE(atom_bit(0b0101, 1, 4));
    EXPECT_TRUE(atom_bit(0b0101, 2, 4));
    EXPECT_TRUE(atom_bit(0b0101, 4, 4));
}

TEST(AtomOracle, SolutionsHaveRequestedMoments)
{
    CorrelationGenerator gen(51);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (std::size_t t = 0; t < 60; ++t) {
            const CorrelationVector rho = gen.convex(n, 1 + t % 7);
            const auto res = oracle_feasible(rho);
            ASSERT_TRUE(res.feasible);
            const auto m = atom_moments(n, *res.alpha);
            for (double p : m.p_zero)
                ASSERT_NEAR(p, 0.5, 1e-8);
            for (std::size_t k = 0; k < rho.size(); ++k)
                ASSERT_NEAR(m.correlation[k], rho[k], 1e-8);

            // Agreement probabilities read off the atoms equal (1 + rho) / 2.
            const auto lambda = correlation_to_agreement(rho);
            std::size_t pos = 0;
            for (std::size_t i = 1; i <= n; ++i)
                for (std::size_t j = i + 1; j <= n; ++j, ++pos) {
                    double agree = 0.0;
                    for (std::uint64_t x = 0; x < res.alpha->size(); ++x)
                        if (atom_bit(x, i, n) == atom_bit(x, j, n))
                            agree += (*res.alpha)[x];
                    ASSERT_NEAR(agree, lambda[pos], 1e-8);
                }
        }
    }
}

TEST(AtomOracle, AgreesWithVertexProgram)
{
    CorrelationGenerator gen(52);
    for (std::size_t n = 2; n <= 6; ++n) {
        const VertexMatrix m = build_vertex_matrix(n);
        for (std::size_t t = 0; t < 300; ++t) {
            const CorrelationVector rho = gen.mixed(n, t);
            const auto a = phase1_feasibility(m, rho);
            const auto b = oracle_feasible(rho);
            ASSERT_EQ(a.feasible, b.feasible) << "n=" << n << " t=" << t;
        }
    }
}

// For n <= 3 the vertex matrix is square and invertible, so membership is
// decided exactly by the sign of M^-1 rho_aug.
TEST(AtomOracle, ExactRationalCrossCheck)
{
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> num(-20, 20);
    for (std::size_t n = 2; n <= 3; ++n) {
        const VertexMatrix m = build_vertex_matrix(n);
        const std::size_t size = m.rows();
        ASSERT_EQ(size, m.cols());
        std::vector<std::vector<cpp_rational>> a(size, std::vector<cpp_rational>(size));
        for (std::size_t r = 0; r < size; ++r)
            for (std::size_t c = 0; c < size; ++c)
                a[r][c] = m.at(r, c);
        std::size_t feasible = 0, infeasible = 0;
        for (int t = 0; t < 2000; ++t) {
            std::vector<cpp_rational> b(size, cpp_rational(1));
            std::vector<double> rho(pair_count(n));
            for (std::size_t p = 0; p < rho.size(); ++p) {
                b[p] = cpp_rational(num(rng), 20);
                rho[p] = static_cast<double>(b[p]);
            }
            const auto alpha = solve_exact(a, b);
            bool exact = true;
            for (const auto& x : alpha)
                exact = exact && x >= 0;
            (exact ? feasible : infeasible)++;
            const CorrelationVector cv(n, rho);
            ASSERT_EQ(phase1_feasibility(m, cv).feasible, exact) << "n=" << n << " t=" << t;
            ASSERT_EQ(oracle_feasible(cv).feasible, exact) << "n=" << n << " t=" << t;
        }
        EXPECT_GT(feasible, 100u);
        // Every point of [-1,1] is attainable for a single pair.
        if (n == 3)
            EXPECT_GT(infeasible, 100u);
        else
            EXPECT_EQ(infeasible, 0u);
    }
}
