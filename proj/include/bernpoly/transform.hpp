#ifndef BERNPOLY_TRANSFORM_HPP
#define BERNPOLY_TRANSFORM_HPP

/**
 * @file transform.hpp
 * @brief General marginals through antithetic coupling of one uniform.
 *
 * Every coordinate is driven by the same U: X_i = F_i^-1(U) when B_i = 1 and
 * X_i = F_i^-1(1-U) when B_i = 0. A pair whose bits agree is comonotone and
 * reaches the upper Frechet-Hoeffding correlation; a pair whose bits differ is
 * antithetic and reaches the lower one. corr(X_i, X_j) is therefore the
 * convex combination w * rho_max + (1-w) * rho_min with w = P(B_i = B_j), and
 * the Bernoulli correlation needed for that pair is 2w - 1.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "bernpoly/errors.hpp"
#include "bernpoly/marginal.hpp"
#include "bernpoly/polytope.hpp"
#include "bernpoly/sampler.hpp"

namespace bernpoly {

struct QuadratureConfig {
    /// Convergence threshold on successive panel estimates.
    double tol = 1e-8;
    /// Bisection depth limit per breakpoint-free segment.
    int max_depth = 20;
    /// Integration runs over (epsilon, 1 - epsilon).
    double epsilon = 1e-12;
};

struct QuadratureResult {
    double value = 0.0;
    /// Sum of |left + right - whole| over accepted panels.
    double error_estimate = 0.0;
    /// Some panel stopped at the depth limit rather than its own tolerance.
    bool hit_depth_limit = false;
    /// error_estimate within the configured tolerance.
    bool converged = true;
};

namespace detail {

class PanelIntegrator {
public:
    static constexpr int kNodes = 64;

    template <class F>
    static double panel(const F& f, double a, double b)
    {
        using rule = boost::math::quadrature::gauss<double, kNodes>;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        const auto& x = rule::abscissa();
        const auto& w = rule::weights();
        for (std::size_t i = 0; i < x.size(); ++i)
            acc += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
        return acc * half;
    }

    template <class F>
    static void refine(const F& f, double a, double b, double whole, double tol, int depth,
                       int max_depth, QuadratureResult& out)
    {
        const double mid = 0.5 * (a + b);
        const double left = panel(f, a, mid);
        const double right = panel(f, mid, b);
        const double diff = std::abs(left + right - whole);
        if (!std::isfinite(left) || !std::isfinite(right))
            throw DivergenceError("quadrature produced a non-finite panel");
        if (diff <= tol) {
            out.value += left + right;
            out.error_estimate += diff;
            return;
        }
        if (depth >= max_depth) {
            out.value += left + right;
            out.error_estimate += diff;
            out.hit_depth_limit = true;
            return;
        }
        refine(f, a, mid, left, 0.5 * tol, depth + 1, max_depth, out);
        refine(f, mid, b, right, 0.5 * tol, depth + 1, max_depth, out);
    }
};

}  // namespace detail

/**
 * @brief Composite Gauss-Legendre integral of f over (epsilon, 1 - epsilon).
 *
 * The interval is first split at @p breaks (points where f jumps); each piece
 * is then bisected until two halves agree with the whole panel.
 */
template <class F>
QuadratureResult integrate_unit_interval(const F& f, std::vector<double> breaks,
                                         const QuadratureConfig& cfg = {})
{
    const double lo = cfg.epsilon;
    const double hi = 1.0 - cfg.epsilon;
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::erase_if(breaks, [&](double b) { return b < lo || b > hi; });
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    QuadratureResult out;
    const double span = hi - lo;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k];
        const double b = breaks[k + 1];
        const double whole = detail::PanelIntegrator::panel(f, a, b);
        if (!std::isfinite(whole))
            throw DivergenceError("quadrature produced a non-finite panel");
        detail::PanelIntegrator::refine(f, a, b, whole, cfg.tol * (b - a) / span, 0, cfg.max_depth,
                                        out);
    }
    out.converged = out.error_estimate <= cfg.tol;
    return out;
}

/// Extreme attainable correlations between two fixed marginals.
struct FHBounds {
    double rho_min = -1.0;
    double rho_max = 1.0;
    /// Quadrature did not meet its tolerance within the depth limit.
    bool precision_warning = false;
};

namespace detail {

/// Bound on the neglected mass of |g| over (0, eps) and (1 - eps, 1).
template <class F>
double tail_allowance(const F& g, const Marginal& a, const Marginal& b, double eps)
{
    double t = 0.0;
    // |F^-1| grows at most logarithmically near an unbounded end, so
    // integral_0^eps |g| <= eps * |g(eps)| * (1 + 2 / ln(1/eps)) is a generous cover.
    const double widen = 1.0 + 2.0 / -std::log(eps);
    if (a.unbounded_low() || b.unbounded_low() || a.unbounded_high() || b.unbounded_high()) {
        t += eps * std::abs(g(eps)) * widen;
        t += eps * std::abs(g(1.0 - eps)) * widen;
    }
    return t;
}

inline double coupled_correlation(const Marginal& a, const Marginal& b, bool antithetic,
                                  const QuadratureConfig& cfg, bool& warn)
{
    const double mu_a = a.mean();
    const double mu_b = b.mean();
    const double sd_a = a.stddev();
    const double sd_b = b.stddev();
    if (!(sd_a > 0.0) || !(sd_b > 0.0) || !std::isfinite(sd_a) || !std::isfinite(sd_b))
        throw DomainError("marginal has zero or non-finite variance");

    // Standardized, so the quadrature tolerance is on the correlation scale.
    auto g = [&](double u) {
        const double v = antithetic ? 1.0 - u : u;
        return (inverse_cdf(a, u) - mu_a) / sd_a * ((inverse_cdf(b, v) - mu_b) / sd_b);
    };

    std::vector<double> breaks = a.jump_points();
    for (double j : b.jump_points())
        breaks.push_back(antithetic ? 1.0 - j : j);

    const QuadratureResult q = integrate_unit_interval(g, std::move(breaks), cfg);
    if (!std::isfinite(q.value))
        throw DivergenceError("cross moment is not finite");
    const double err = q.error_estimate + tail_allowance(g, a, b, cfg.epsilon);
    if (!q.converged || err > cfg.tol)
        warn = true;
    return std::clamp(q.value, -1.0, 1.0);
}

}  // namespace detail

/**
 * @brief Frechet-Hoeffding correlation bounds.
 *
 * rho_max = corr(F_a^-1(U), F_b^-1(U)) and rho_min = corr(F_a^-1(U),
 * F_b^-1(1-U)); cross moments by quadrature in u-space, means and variances
 * in closed form.
 */
inline FHBounds fh_bounds(const Marginal& a, const Marginal& b, const QuadratureConfig& cfg = {})
{
    FHBounds out;
    out.rho_max = detail::coupled_correlation(a, b, false, cfg, out.precision_warning);
    out.rho_min = detail::coupled_correlation(a, b, true, cfg, out.precision_warning);
    return out;
}

struct PairMixing {
    /// Probability that the two driving bits agree.
    double w;
    /// Symmetric-Bernoulli correlation 2w - 1.
    double bern_rho;
};

/// Targets this close outside the bounds are accepted and clamped, since the
/// bounds themselves carry quadrature error of the same order.
inline constexpr double kBoundSlack = 1e-8;

inline PairMixing pair_mixing_weight(double target_rho, const FHBounds& bounds)
{
    constexpr double slack = kBoundSlack;
    if (!(bounds.rho_max > bounds.rho_min))
        throw DegenerateBounds("correlation bounds collapse to a single point");
    if (!(target_rho >= bounds.rho_min - slack) || !(target_rho <= bounds.rho_max + slack))
        throw InfeasiblePair("target correlation " + std::to_string(target_rho) + " outside [" +
                                 std::to_string(bounds.rho_min) + ", " +
                                 std::to_string(bounds.rho_max) + "]",
                             0, 0, bounds.rho_min, bounds.rho_max);
    const double w =
        std::clamp((target_rho - bounds.rho_min) / (bounds.rho_max - bounds.rho_min), 0.0, 1.0);
    return {w, 2.0 * w - 1.0};
}

struct PairPlan {
    PairIndex pair;
    FHBounds bounds;
    double w;
    double bern_rho;
};

struct TransformPlan {
    std::size_t n = 0;
    std::vector<Marginal> marginals;
    CorrelationVector target;
    CorrelationVector bernoulli_target;
    std::vector<PairPlan> pairs;
};

/**
 * @brief Per-pair bounds and weights, and the Bernoulli correlation vector
 *        they induce.
 *
 * Only pairwise attainability is checked here. The resulting
 * bernoulli_target still has to pass phase1_feasibility before sampling.
 */
inline TransformPlan build_transform_plan(std::vector<Marginal> marginals,
                                          const CorrelationVector& target,
                                          const QuadratureConfig& cfg = {})
{
    const std::size_t n = marginals.size();
    if (target.n() != n)
        throw ShapeError("target has dimension " + std::to_string(target.n()) + " but " +
                         std::to_string(n) + " marginals were given");

    TransformPlan plan;
    plan.n = n;
    plan.target = target;
    std::vector<double> bern;
    bern.reserve(pair_count(n));
    for (const PairIndex p : all_pairs(n)) {
        const FHBounds bounds = fh_bounds(marginals[p.i - 1], marginals[p.j - 1], cfg);
        const double rho = target.at(p);
        PairMixing mix{};
        try {
            mix = pair_mixing_weight(rho, bounds);
        }
        catch (const InfeasiblePair&) {
            throw InfeasiblePair("pair (" + std::to_string(p.i) + "," + std::to_string(p.j) +
                                     "): target " + std::to_string(rho) +
                                     " outside attainable [" + std::to_string(bounds.rho_min) +
                                     ", " + std::to_string(bounds.rho_max) + "]",
                                 p.i, p.j, bounds.rho_min, bounds.rho_max);
        }
        plan.pairs.push_back({p, bounds, mix.w, mix.bern_rho});
        bern.push_back(mix.bern_rho);
    }
    plan.bernoulli_target = CorrelationVector(n, std::move(bern));
    plan.marginals = std::move(marginals);
    return plan;
}

/// count x n joint draws, row-major.
struct GeneralSampleBatch {
    std::size_t n = 0;
    std::size_t count = 0;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[row * n + col]; }
};

/// Streaming form of sample_general.
class GeneralDrawer {
public:
    GeneralDrawer(const TransformPlan& plan, const MixingWeights& w, double check_tol = 1e-6)
        : plan_(plan), bits_(w), scratch_(plan.n)
    {
        if (w.n() != plan.n)
            throw ShapeError("mixing weights and plan disagree on dimension");
        const CorrelationVector implied = mixture_correlation(w);
        for (std::size_t k = 0; k < implied.size(); ++k)
            if (std::abs(implied[k] - plan.bernoulli_target[k]) > check_tol)
                throw DomainError("mixing weights do not reproduce the plan's Bernoulli target");
    }

    void draw(RandomSource& rng, std::span<double> out)
    {
        const double u = rng.open_uniform();
        bits_.draw(rng, scratch_);
        for (std::size_t i = 0; i < plan_.n; ++i)
            out[i] = inverse_cdf(plan_.marginals[i], scratch_[i] ? u : 1.0 - u);
    }

private:
    const TransformPlan& plan_;
    BernoulliDrawer bits_;
    std::vector<std::uint8_t> scratch_;
};

inline GeneralSampleBatch sample_general(const TransformPlan& plan, const MixingWeights& w,
                                         std::size_t count, RandomSource& rng)
{
    if (count < 1)
        throw DomainError("sample count must be at least 1");
    GeneralDrawer drawer(plan, w);
    GeneralSampleBatch batch{plan.n, count, std::vector<double>(count * plan.n)};
    for (std::size_t r = 0; r < count; ++r)
        drawer.draw(rng, std::span<double>(batch.values).subspan(r * plan.n, plan.n));
    return batch;
}

inline CorrelationVector empirical_correlation(const GeneralSampleBatch& batch)
{
    return pearson_correlation<double>(batch.values, batch.n, batch.count);
}

}  // namespace bernpoly

#endif  // BERNPOLY_TRANSFORM_HPP
