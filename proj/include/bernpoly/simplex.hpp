#ifndef BERNPOLY_SIMPLEX_HPP
#define BERNPOLY_SIMPLEX_HPP

/**
 * @file simplex.hpp
 * @brief Dense Phase-I simplex deciding whether {x >= 0 : A x = b} is empty.
 *
 * Rows with a negative right-hand side are negated first, then one artificial
 * variable per row is added so that x = 0, z = |b| is a feasible start. The
 * Phase-I objective is sum(z). On a zero optimum the artificials are pivoted
 * out and x is read off the basis; otherwise the simplex multipliers of the
 * final basis give a Farkas witness y with y'A <= 0 and y'b > 0.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bernpoly/errors.hpp"
#include "bernpoly/polytope.hpp"

namespace bernpoly {

enum class PivotRule {
    bland,
    dantzig_with_bland_fallback,
};

struct SolverConfig {
    double feasibility_tol = 1e-9;
    /// Defaults to 50 * (rows + cols) when unset.
    std::optional<std::size_t> max_pivots;
    PivotRule pivot_rule = PivotRule::dantzig_with_bland_fallback;

    void validate() const
    {
        if (!(feasibility_tol > 0.0) || !std::isfinite(feasibility_tol))
            throw DomainError("feasibility tolerance must be positive");
        if (max_pivots && *max_pivots == 0)
            throw DomainError("pivot limit must be positive");
    }
};

/// Dense row-major equality system A x = b, x >= 0.
struct StandardFormLP {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;
    std::vector<double> b;

    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    void validate() const
    {
        if (rows == 0 || cols == 0)
            throw ShapeError("linear program needs at least one row and one column");
        if (a.size() != rows * cols || b.size() != rows)
            throw ShapeError("linear program storage does not match its declared shape");
    }
};

struct FeasibilityResult {
    bool feasible = false;
    /// Present iff feasible.
    std::optional<std::vector<double>> alpha;
    /// Phase-I optimum, i.e. the total artificial mass left.
    double objective_residual = 0.0;
    /// Farkas witness in the caller's row signs; present iff infeasible.
    std::optional<std::vector<double>> certificate;
    /// Objective landed in (1e-12, feasibility_tol]: feasible, but only just.
    bool marginal = false;
    std::size_t pivots = 0;
    bool switched_to_bland = false;
};

namespace detail {

class Phase1Tableau {
public:
    Phase1Tableau(const StandardFormLP& lp, const SolverConfig& cfg)
        : lp_(lp), cfg_(cfg), m_(lp.rows), p_(lp.cols), width_(lp.cols + lp.rows + 1)
    {
        lp.validate();
        cfg.validate();
        max_pivots_ = cfg.max_pivots.value_or(50 * (m_ + p_));
        bland_ = cfg.pivot_rule == PivotRule::bland;

        sign_.resize(m_);
        tab_.assign(m_ * width_, 0.0);
        obj_.assign(width_, 0.0);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            sign_[i] = lp.b[i] < 0.0 ? -1.0 : 1.0;
            double* row = row_ptr(i);
            for (std::size_t j = 0; j < p_; ++j) {
                row[j] = sign_[i] * lp.at(i, j);
                obj_[j] -= row[j];
            }
            row[p_ + i] = 1.0;
            row[rhs()] = sign_[i] * lp.b[i];
            obj_[rhs()] -= row[rhs()];
            basis_[i] = p_ + i;
        }
    }

    FeasibilityResult solve()
    {
        iterate();

        FeasibilityResult out;
        out.pivots = pivots_;
        out.switched_to_bland = switched_;
        out.objective_residual = artificial_mass();
        out.feasible = out.objective_residual <= cfg_.feasibility_tol;
        out.marginal = out.feasible && out.objective_residual > 1e-12;
        if (out.feasible) {
            drive_out_artificials();
            out.alpha = extract_primal();
        }
        else {
            out.certificate = extract_farkas();
        }
        return out;
    }

private:
    static constexpr double kCostTol = 1e-10;
    static constexpr double kPivotTol = 1e-9;
    static constexpr double kZero = 1e-14;

    std::size_t rhs() const noexcept { return width_ - 1; }
    double* row_ptr(std::size_t i) noexcept { return tab_.data() + i * width_; }
    const double* row_ptr(std::size_t i) const noexcept { return tab_.data() + i * width_; }
    bool is_artificial(std::size_t var) const noexcept { return var >= p_; }

    double artificial_mass() const
    {
        double z = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (is_artificial(basis_[i]))
                z += std::max(0.0, row_ptr(i)[rhs()]);
        return z;
    }

    // Artificials never re-enter, so only structural columns are priced.
    std::optional<std::size_t> entering() const
    {
        if (bland_) {
            for (std::size_t j = 0; j < p_; ++j)
                if (obj_[j] < -kCostTol)
                    return j;
            return std::nullopt;
        }
        std::optional<std::size_t> best;
        double best_cost = -kCostTol;
        for (std::size_t j = 0; j < p_; ++j) {
            if (obj_[j] < best_cost) {
                best_cost = obj_[j];
                best = j;
            }
        }
        return best;
    }

    std::optional<std::size_t> leaving(std::size_t col) const
    {
        std::optional<std::size_t> best;
        double best_ratio = 0.0;
        double best_pivot = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double* row = row_ptr(i);
            const double a = row[col];
            if (a <= kPivotTol)
                continue;
            const double ratio = std::max(0.0, row[rhs()]) / a;
            if (!best || ratio < best_ratio - 1e-12) {
                best = i;
                best_ratio = ratio;
                best_pivot = a;
                continue;
            }
            if (ratio > best_ratio + 1e-12)
                continue;
            // Tie.
            if (bland_) {
                if (basis_[i] < basis_[*best]) {
                    best = i;
                    best_pivot = a;
                }
            }
            else {
                const bool art_i = is_artificial(basis_[i]);
                const bool art_best = is_artificial(basis_[*best]);
                if ((art_i && !art_best) || (art_i == art_best && a > best_pivot)) {
                    best = i;
                    best_pivot = a;
                }
            }
        }
        if (best)
            last_ratio_ = best_ratio;
        return best;
    }

    void pivot(std::size_t r, std::size_t c)
    {
        double* prow = row_ptr(r);
        const double inv = 1.0 / prow[c];
        nonzero_.clear();
        for (std::size_t j = 0; j < width_; ++j) {
            if (prow[j] != 0.0) {
                prow[j] *= inv;
                nonzero_.push_back(j);
            }
        }
        prow[c] = 1.0;

        auto eliminate = [&](double* row) {
            const double f = row[c];
            if (f == 0.0)
                return;
            for (std::size_t j : nonzero_)
                row[j] -= f * prow[j];
            row[c] = 0.0;
        };
        for (std::size_t i = 0; i < m_; ++i)
            if (i != r)
                eliminate(row_ptr(i));
        eliminate(obj_.data());
        basis_[r] = c;
    }

    void iterate()
    {
        std::size_t degenerate_run = 0;
        while (artificial_mass() > kZero) {
            const auto col = entering();
            if (!col)
                return;
            const auto row = leaving(*col);
            if (!row)
                return;  // cannot happen in Phase I: the objective is bounded below
            if (pivots_ >= max_pivots_)
                throw SolverStall("simplex pivot limit of " + std::to_string(max_pivots_) +
                                      " reached",
                                  pivots_);
            pivot(*row, *col);
            ++pivots_;

            if (last_ratio_ <= 1e-12) {
                if (++degenerate_run >= 10 * m_ && !bland_) {
                    bland_ = true;
                    switched_ = true;
                }
            }
            else {
                degenerate_run = 0;
            }
        }
    }

    void drive_out_artificials()
    {
        std::vector<bool> in_basis(p_, false);
        for (std::size_t i = 0; i < m_; ++i)
            if (!is_artificial(basis_[i]))
                in_basis[basis_[i]] = true;

        for (std::size_t i = 0; i < m_; ++i) {
            if (!is_artificial(basis_[i]))
                continue;
            const double* row = row_ptr(i);
            std::optional<std::size_t> best;
            double best_abs = kPivotTol;
            for (std::size_t j = 0; j < p_; ++j) {
                if (in_basis[j])
                    continue;
                if (std::abs(row[j]) > best_abs) {
                    best_abs = std::abs(row[j]);
                    best = j;
                }
            }
            // No candidate: the row is a linear combination of the others.
            if (best) {
                pivot(i, *best);
                in_basis[*best] = true;
            }
        }
    }

    std::vector<double> extract_primal() const
    {
        std::vector<double> x(p_ + m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            x[basis_[i]] = row_ptr(i)[rhs()];

        // Iterative refinement against the original data; the artificial block
        // of the tableau holds the current basis inverse.
        std::vector<double> residual(m_);
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (std::size_t i = 0; i < m_; ++i) {
                double acc = sign_[i] * lp_.b[i] - x[p_ + i];
                for (std::size_t j = 0; j < p_; ++j)
                    if (x[j] != 0.0)
                        acc -= sign_[i] * lp_.at(i, j) * x[j];
                residual[i] = acc;
            }
            for (std::size_t r = 0; r < m_; ++r) {
                const double* row = row_ptr(r);
                double delta = 0.0;
                for (std::size_t i = 0; i < m_; ++i)
                    delta += row[p_ + i] * residual[i];
                x[basis_[r]] += delta;
            }
        }

        std::vector<double> alpha(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p_));
        for (double& v : alpha)
            if (v < 0.0 && v > -cfg_.feasibility_tol)
                v = 0.0;
        return alpha;
    }

    std::vector<double> extract_farkas() const
    {
        std::vector<double> y(m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            if (!is_artificial(basis_[r]))
                continue;
            const double* row = row_ptr(r);
            for (std::size_t i = 0; i < m_; ++i)
                y[i] += row[p_ + i];
        }
        for (std::size_t i = 0; i < m_; ++i)
            y[i] *= sign_[i];
        return y;
    }

    const StandardFormLP& lp_;
    SolverConfig cfg_;
    std::size_t m_, p_, width_;
    std::size_t max_pivots_ = 0;
    bool bland_ = false;
    bool switched_ = false;
    std::size_t pivots_ = 0;
    mutable double last_ratio_ = 0.0;

    std::vector<double> sign_;
    std::vector<double> tab_;
    std::vector<double> obj_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> nonzero_;
};

}  // namespace detail

inline FeasibilityResult solve_phase1(const StandardFormLP& lp, const SolverConfig& cfg = {})
{
    detail::Phase1Tableau tableau(lp, cfg);
    return tableau.solve();
}

inline StandardFormLP vertex_system(const VertexMatrix& m, const CorrelationVector& rho)
{
    if (rho.n() != m.n())
        throw ShapeError("correlation vector has dimension " + std::to_string(rho.n()) +
                         ", vertex matrix has dimension " + std::to_string(m.n()));
    StandardFormLP lp;
    lp.rows = m.rows();
    lp.cols = m.cols();
    lp.a.resize(lp.rows * lp.cols);
    for (std::size_t r = 0; r < lp.rows; ++r) {
        const auto row = m.row(r);
        std::copy(row.begin(), row.end(), lp.a.begin() + static_cast<std::ptrdiff_t>(r * lp.cols));
    }
    lp.b = augmented(rho);
    return lp;
}

/// Decides rho in R(B_n): finds alpha >= 0 with M alpha = [rho, 1].
inline FeasibilityResult phase1_feasibility(const VertexMatrix& m, const CorrelationVector& rho,
                                            const SolverConfig& cfg = {})
{
    return solve_phase1(vertex_system(m, rho), cfg);
}

inline double max_residual(const VertexMatrix& m, const CorrelationVector& rho,
                           std::span<const double> alpha)
{
    const auto lhs = m.multiply(alpha);
    const auto rhs = augmented(rho);
    double worst = 0.0;
    for (std::size_t r = 0; r < lhs.size(); ++r)
        worst = std::max(worst, std::abs(lhs[r] - rhs[r]));
    return worst;
}

inline bool check_solution(const VertexMatrix& m, const CorrelationVector& rho,
                           std::span<const double> alpha, double tol)
{
    if (rho.n() != m.n() || alpha.size() != m.cols())
        return false;
    for (double a : alpha)
        if (!(a >= -tol))
            return false;
    return max_residual(m, rho, alpha) <= tol;
}

/// y'A <= tol entrywise and y'b > tol.
inline bool check_certificate(const StandardFormLP& lp, std::span<const double> y, double tol)
{
    if (y.size() != lp.rows)
        return false;
    double yb = 0.0;
    for (std::size_t i = 0; i < lp.rows; ++i)
        yb += y[i] * lp.b[i];
    if (!(yb > tol))
        return false;
    for (std::size_t j = 0; j < lp.cols; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < lp.rows; ++i)
            acc += y[i] * lp.at(i, j);
        if (acc > tol)
            return false;
    }
    return true;
}

}  // namespace bernpoly

#endif  // BERNPOLY_SIMPLEX_HPP
