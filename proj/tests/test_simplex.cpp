#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bernpoly/simplex.hpp"
#include "test_support.hpp"

using namespace bernpoly;
using bernpoly::testing::CorrelationGenerator;

namespace {

CorrelationVector constant(std::size_t n, double r)
{
    return CorrelationVector(n, std::vector<double>(pair_count(n), r));
}

}  // namespace

TEST(Phase1, NegativeThreeCycleIsInfeasible)
{
    const VertexMatrix m = build_vertex_matrix(3);
    const CorrelationVector rho = constant(3, -0.4);
    const auto res = phase1_feasibility(m, rho);
    EXPECT_FALSE(res.feasible);
    EXPECT_FALSE(res.alpha.has_value());
    ASSERT_TRUE(res.certificate.has_value());
    EXPECT_TRUE(check_certificate(vertex_system(m, rho), *res.certificate, 1e-9));
    // Phase-I optimum: the cheapest violation of rho_12 + rho_13 + rho_23 >= -1.
    EXPECT_GT(res.objective_residual, 1e-3);
}

TEST(Phase1, AllOnesIsTheFirstVertex)
{
    const VertexMatrix m = build_vertex_matrix(3);
    const auto res = phase1_feasibility(m, constant(3, 1.0));
    ASSERT_TRUE(res.feasible);
    const std::vector<double> expected{1, 0, 0, 0};
    for (std::size_t k = 0; k < 4; ++k)
        EXPECT_NEAR((*res.alpha)[k], expected[k], 1e-12);
}

TEST(Phase1, UniformMixtureOfNonTrivialVertices)
{
    const VertexMatrix m = build_vertex_matrix(3);
    const CorrelationVector rho = constant(3, -1.0 / 3.0);
    const auto res = phase1_feasibility(m, rho);
    ASSERT_TRUE(res.feasible);
    EXPECT_TRUE(check_solution(m, rho, *res.alpha, 1e-9));
    // Only one convex combination exists: alpha_1 = 0 and the rest 1/3.
    EXPECT_NEAR((*res.alpha)[0], 0.0, 1e-12);
    for (std::size_t k = 1; k < 4; ++k)
        EXPECT_NEAR((*res.alpha)[k], 1.0 / 3.0, 1e-12);
}

TEST(Phase1, WorkedFourVariableExample)
{
    const VertexMatrix m = build_vertex_matrix(4);
    const CorrelationVector rho(4, bernpoly::testing::kExampleBernoulli);
    const auto res = phase1_feasibility(m, rho);
    ASSERT_TRUE(res.feasible);
    EXPECT_LE(max_residual(m, rho, *res.alpha), 1e-8);
    EXPECT_TRUE(check_solution(m, rho, bernpoly::testing::kPublishedAlpha, 5e-4));
}

TEST(CheckSolution, Examples)
{
    const VertexMatrix m3 = build_vertex_matrix(3);
    const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
    EXPECT_TRUE(check_solution(m3, constant(3, 0.0), uniform, 1e-12));
    EXPECT_FALSE(check_solution(m3, constant(3, 0.1), uniform, 1e-3));
    const std::vector<double> negative{1.5, -0.5, 0, 0};
    EXPECT_FALSE(check_solution(m3, CorrelationVector(3, {1, 0, 0}), negative, 1e-9));
    const std::vector<double> short_alpha{1, 0, 0};
    EXPECT_FALSE(check_solution(m3, constant(3, 1.0), short_alpha, 1e-9));
}

TEST(Phase1, ShapeMismatch)
{
    EXPECT_THROW(phase1_feasibility(build_vertex_matrix(4), constant(3, 0.0)), ShapeError);
    StandardFormLP lp{2, 2, {1, 0, 0}, {1, 1}};
    EXPECT_THROW(solve_phase1(lp), ShapeError);
}

TEST(Phase1, PivotLimitRaisesStall)
{
    SolverConfig cfg;
    cfg.max_pivots = 1;
    const CorrelationVector rho(4, bernpoly::testing::kExampleBernoulli);
    try {
        phase1_feasibility(build_vertex_matrix(4), rho, cfg);
        FAIL() << "expected SolverStall";
    }
    catch (const SolverStall& e) {
        EXPECT_EQ(e.iterations(), 1u);
    }
}

TEST(Phase1, ConfigValidation)
{
    SolverConfig bad_tol;
    bad_tol.feasibility_tol = 0.0;
    EXPECT_THROW(phase1_feasibility(build_vertex_matrix(3), constant(3, 0.0), bad_tol),
                 DomainError);
}

TEST(Phase1, GeneralSystemWithNegativeRhs)
{
    // x1 - x2 = -1, x1 + x2 = 3  ->  x = (1, 2)
    StandardFormLP lp{2, 2, {1, -1, 1, 1}, {-1, 3}};
    const auto res = solve_phase1(lp);
    ASSERT_TRUE(res.feasible);
    EXPECT_NEAR((*res.alpha)[0], 1.0, 1e-12);
    EXPECT_NEAR((*res.alpha)[1], 2.0, 1e-12);

    // x1 - x2 = 3, x1 + x2 = 1 forces x2 = -1.
    StandardFormLP bad{2, 2, {1, -1, 1, 1}, {3, 1}};
    const auto r2 = solve_phase1(bad);
    ASSERT_FALSE(r2.feasible);
    EXPECT_TRUE(check_certificate(bad, *r2.certificate, 1e-9));
}

// Every verdict comes with a witness that verifies independently.
TEST(Phase1, VerdictsAreCertified)
{
    CorrelationGenerator gen(101);
    SolverConfig cfg;
    for (std::size_t n = 2; n <= 7; ++n) {
        const VertexMatrix m = build_vertex_matrix(n);
        for (std::size_t t = 0; t < 150; ++t) {
            const CorrelationVector rho = gen.mixed(n, t);
            const auto res = phase1_feasibility(m, rho, cfg);
            if (res.feasible) {
                ASSERT_TRUE(check_solution(m, rho, *res.alpha, 10 * cfg.feasibility_tol))
                    << "n=" << n << " t=" << t;
            }
            else {
                ASSERT_TRUE(check_certificate(vertex_system(m, rho), *res.certificate,
                                              10 * cfg.feasibility_tol))
                    << "n=" << n << " t=" << t;
            }
        }
    }
}

TEST(Phase1, BlandRuleAgreesWithDefault)
{
    CorrelationGenerator gen(202);
    SolverConfig bland;
    bland.pivot_rule = PivotRule::bland;
    for (std::size_t n = 2; n <= 6; ++n) {
        const VertexMatrix m = build_vertex_matrix(n);
        for (std::size_t t = 0; t < 100; ++t) {
            const CorrelationVector rho = gen.mixed(n, t);
            const auto a = phase1_feasibility(m, rho);
            const auto b = phase1_feasibility(m, rho, bland);
            // Points within the tolerance of the boundary may legitimately flip.
            if (a.feasible != b.feasible) {
                EXPECT_LT(std::max(a.objective_residual, b.objective_residual), 1e-7);
                continue;
            }
            if (b.feasible) {
                EXPECT_TRUE(check_solution(m, rho, *b.alpha, 1e-8));
            }
        }
    }
}

TEST(Phase1, Deterministic)
{
    CorrelationGenerator gen(303);
    const VertexMatrix m = build_vertex_matrix(5);
    for (std::size_t t = 0; t < 30; ++t) {
        const CorrelationVector rho = gen.mixed(5, t);
        const auto a = phase1_feasibility(m, rho);
        const auto b = phase1_feasibility(m, rho);
        ASSERT_EQ(a.feasible, b.feasible);
        ASSERT_EQ(a.pivots, b.pivots);
        ASSERT_EQ(a.alpha, b.alpha);
        ASSERT_EQ(a.certificate, b.certificate);
    }
}

TEST(Phase1, VerdictInvariantUnderColumnPermutation)
{
    CorrelationGenerator gen(404);
    std::mt19937_64 rng(9);
    for (std::size_t n = 3; n <= 6; ++n) {
        const VertexMatrix m = build_vertex_matrix(n);
        for (std::size_t t = 0; t < 60; ++t) {
            const CorrelationVector rho = gen.mixed(n, t);
            StandardFormLP lp = vertex_system(m, rho);
            std::vector<std::size_t> perm(lp.cols);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            StandardFormLP shuffled = lp;
            for (std::size_t r = 0; r < lp.rows; ++r)
                for (std::size_t c = 0; c < lp.cols; ++c)
                    shuffled.a[r * lp.cols + c] = lp.at(r, perm[c]);
            const auto a = solve_phase1(lp);
            const auto b = solve_phase1(shuffled);
            if (a.feasible != b.feasible) {
                EXPECT_LT(std::max(a.objective_residual, b.objective_residual), 1e-7);
                continue;
            }
            if (b.feasible) {
                std::vector<double> unshuffled(lp.cols);
                for (std::size_t c = 0; c < lp.cols; ++c)
                    unshuffled[perm[c]] = (*b.alpha)[c];
                EXPECT_TRUE(check_solution(m, rho, unshuffled, 1e-8));
            }
        }
    }
}

TEST(Phase1, IdentityIsFeasibleAcrossDimensions)
{
    for (std::size_t n = 2; n <= 12; ++n) {
        const VertexMatrix m = build_vertex_matrix(n);
        const CorrelationVector rho = constant(n, 0.0);
        const auto res = phase1_feasibility(m, rho);
        ASSERT_TRUE(res.feasible) << "n=" << n;
        EXPECT_TRUE(check_solution(m, rho, *res.alpha, 1e-8));
    }
}

TEST(Phase1, MarginalFlagOnTouchingPoints)
{
    // A vertex nudged outward by less than the tolerance is still accepted.
    const VertexMatrix m = build_vertex_matrix(3);
    SolverConfig cfg;
    cfg.feasibility_tol = 1e-6;
    const CorrelationVector rho(3, {-1.0 / 3 - 1e-8, -1.0 / 3 - 1e-8, -1.0 / 3 - 1e-8});
    const auto res = phase1_feasibility(m, rho, cfg);
    EXPECT_TRUE(res.feasible);
    EXPECT_TRUE(res.marginal);
}
