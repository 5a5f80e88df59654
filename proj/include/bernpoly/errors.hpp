#ifndef BERNPOLY_ERRORS_HPP
#define BERNPOLY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bernpoly {

/// Index or label outside its admissible range.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Argument violates a mathematical precondition (probability outside (0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Mismatched dimensions between objects that must agree.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested dimension exceeds a configured cap.
class CapacityError : public std::length_error {
public:
    CapacityError(const std::string& what, std::size_t cap)
        : std::length_error(what), cap_(cap) {}

    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

/// The simplex engine hit its pivot limit.
class SolverStall : public std::runtime_error {
public:
    SolverStall(const std::string& what, std::size_t iterations)
        : std::runtime_error(what), iterations_(iterations) {}

    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

/// Sample data for which a statistic is undefined (constant column).
class DegenerateData : public std::runtime_error {
public:
    DegenerateData(const std::string& what, std::size_t column)
        : std::runtime_error(what), column_(column) {}

    /// 1-based column index.
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// A pairwise target correlation outside its attainable interval.
class InfeasiblePair : public std::runtime_error {
public:
    InfeasiblePair(const std::string& what, std::size_t i, std::size_t j, double rho_min,
                   double rho_max)
        : std::runtime_error(what), i_(i), j_(j), rho_min_(rho_min), rho_max_(rho_max) {}

    std::size_t i() const noexcept { return i_; }
    std::size_t j() const noexcept { return j_; }
    double rho_min() const noexcept { return rho_min_; }
    double rho_max() const noexcept { return rho_max_; }

private:
    std::size_t i_, j_;
    double rho_min_, rho_max_;
};

/// Attainable interval collapsed to a point; the affine inversion is undefined.
class DegenerateBounds : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Non-finite moment encountered during quadrature.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bernpoly

#endif  // BERNPOLY_ERRORS_HPP
