#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pwnorm {

/// Grid-size cap for dyadic step functions. Defaults to 20 (about one
/// million cells); the environment variable PWNORM_MAX_LEVEL overrides it
/// (clamped to [0, 22]).
int max_level();

/// Half-open dyadic interval [index * 2^-level, (index + 1) * 2^-level).
struct DyadicInterval {
    int level = 0;
    std::uint64_t index = 0;
};

/// Finite union of dyadic intervals. Intervals must be pairwise disjoint.
using DyadicSet = std::vector<DyadicInterval>;

void validate_dyadic_set(const DyadicSet& set);
double measure(const DyadicSet& set);

/// Real-valued function on [0,1) that is constant on each of the 2^level
/// dyadic intervals of its level. Immutable value type; all operations on
/// step functions are pure and align grids internally.
class StepFunction {
public:
    /// The zero function at level 0.
    StepFunction() : level_(0), values_(1, 0.0) {}

    /// values[k] is the value on [k * 2^-level, (k+1) * 2^-level).
    /// Requires values.size() == 2^level and all values finite.
    StepFunction(int level, std::vector<double> values);

    static StepFunction constant(double value);
    static StepFunction zero(int level);
    static StepFunction indicator(const DyadicInterval& cell);
    static StepFunction indicator(const DyadicSet& set);

    int level() const { return level_; }
    std::span<const double> values() const { return values_; }
    std::size_t cells() const { return values_.size(); }

private:
    int level_;
    std::vector<double> values_;
};

/// Re-express f on the finer grid of the given level (values replicate).
/// level < f.level() is an error ("cannot coarsen by refine").
StepFunction refine(const StepFunction& f, int level);

enum class PointwiseOp { add, mul, max };

/// Apply op value-by-value at the common (max) level of the operands.
StepFunction pointwise(PointwiseOp op, const StepFunction& f, const StepFunction& h);

StepFunction operator+(const StepFunction& f, const StepFunction& h);
StepFunction operator-(const StepFunction& f, const StepFunction& h);
StepFunction operator*(const StepFunction& f, const StepFunction& h);
StepFunction operator*(double scalar, const StepFunction& f);
StepFunction pointwise_max(const StepFunction& f, const StepFunction& h);

/// Pointwise |f(t)|^exponent. Requires exponent > 0.
StepFunction abs_pow(const StepFunction& f, double exponent);

/// Exact Lebesgue integral over [0,1): sum of values * 2^-level. Summation
/// runs over the dyadic tree, so refining a function never changes its
/// integral, bit for bit.
double integral(const StepFunction& f);

/// (integral |f|^p)^(1/p) for p >= 1.
double lp_norm(const StepFunction& f, double p);

/// Conditional expectation: constant (integral_A f) / measure(A) on each set
/// A, zero off the union. Sets must be non-empty and pairwise disjoint
/// (including across sets).
StepFunction cond_expect(const StepFunction& f, std::span<const DyadicSet> sets);

/// Cells (at f's own level) where f is non-zero.
DyadicSet support(const StepFunction& f);

/// Equality modulo refinement: equal iff the refinements to the common level
/// have identical value vectors.
bool operator==(const StepFunction& f, const StepFunction& h);

/// Max absolute pointwise difference at the common level is <= tol.
bool approx_equal(const StepFunction& f, const StepFunction& h, double tol);

}  // namespace pwnorm
