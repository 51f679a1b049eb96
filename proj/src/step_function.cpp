#include "pwnorm/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace pwnorm {

namespace {

constexpr int kDefaultMaxLevel = 20;
constexpr int kHardMaxLevel = 22;

// Sum over the dyadic tree: repeatedly add adjacent pairs. For a refined
// function the replicated blocks collapse by exact doubling, so the result
// matches the coarse-grid sum bit for bit.
double tree_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    std::vector<double> scratch(values.begin(), values.end());
    std::size_t n = scratch.size();
    while (n > 1) {
        n /= 2;
        for (std::size_t i = 0; i < n; ++i)
            scratch[i] = scratch[2 * i] + scratch[2 * i + 1];
    }
    return scratch[0];
}

void check_level_in_range(int level) {
    if (level < 0)
        throw std::invalid_argument("level must be non-negative");
    if (level > max_level())
        throw std::invalid_argument("level " + std::to_string(level) +
                                    " exceeds the grid cap " + std::to_string(max_level()));
}

void check_interval(const DyadicInterval& iv) {
    check_level_in_range(iv.level);
    if (iv.index >= (std::uint64_t{1} << iv.level))
        throw std::invalid_argument("dyadic interval index out of range");
}

// Cell range [lo, hi) of an interval on the grid of the given level.
std::pair<std::uint64_t, std::uint64_t> cell_range(const DyadicInterval& iv, int level) {
    const int shift = level - iv.level;
    return {iv.index << shift, (iv.index + 1) << shift};
}

}  // namespace

int max_level() {
    static const int cap = [] {
        if (const char* env = std::getenv("PWNORM_MAX_LEVEL")) {
            const long v = std::strtol(env, nullptr, 10);
            return static_cast<int>(std::clamp(v, 0L, static_cast<long>(kHardMaxLevel)));
        }
        return kDefaultMaxLevel;
    }();
    return cap;
}

void validate_dyadic_set(const DyadicSet& set) {
    int common = 0;
    for (const auto& iv : set) {
        check_interval(iv);
        common = std::max(common, iv.level);
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    ranges.reserve(set.size());
    for (const auto& iv : set) ranges.push_back(cell_range(iv, common));
    std::sort(ranges.begin(), ranges.end());
    for (std::size_t i = 1; i < ranges.size(); ++i)
        if (ranges[i].first < ranges[i - 1].second)
            throw std::invalid_argument("overlapping sets");
}

double measure(const DyadicSet& set) {
    validate_dyadic_set(set);
    double total = 0.0;
    for (const auto& iv : set) total += std::ldexp(1.0, -iv.level);
    return total;
}

StepFunction::StepFunction(int level, std::vector<double> values)
    : level_(level), values_(std::move(values)) {
    check_level_in_range(level_);
    if (values_.size() != (std::size_t{1} << level_))
        throw std::invalid_argument("values length must be 2^level");
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("step function values must be finite");
}

StepFunction StepFunction::constant(double value) {
    return StepFunction(0, {value});
}

StepFunction StepFunction::zero(int level) {
    check_level_in_range(level);
    return StepFunction(level, std::vector<double>(std::size_t{1} << level, 0.0));
}

StepFunction StepFunction::indicator(const DyadicInterval& cell) {
    return indicator(DyadicSet{cell});
}

StepFunction StepFunction::indicator(const DyadicSet& set) {
    validate_dyadic_set(set);
    int level = 0;
    for (const auto& iv : set) level = std::max(level, iv.level);
    std::vector<double> values(std::size_t{1} << level, 0.0);
    for (const auto& iv : set) {
        auto [lo, hi] = cell_range(iv, level);
        for (std::uint64_t c = lo; c < hi; ++c) values[c] = 1.0;
    }
    return StepFunction(level, std::move(values));
}

StepFunction refine(const StepFunction& f, int level) {
    if (level < f.level())
        throw std::invalid_argument("cannot coarsen by refine");
    check_level_in_range(level);
    if (level == f.level()) return f;
    const int shift = level - f.level();
    std::vector<double> values(std::size_t{1} << level);
    for (std::size_t c = 0; c < values.size(); ++c)
        values[c] = f.values()[c >> shift];
    return StepFunction(level, std::move(values));
}

StepFunction pointwise(PointwiseOp op, const StepFunction& f, const StepFunction& h) {
    const int level = std::max(f.level(), h.level());
    const StepFunction fa = refine(f, level);
    const StepFunction ha = refine(h, level);
    std::vector<double> values(fa.cells());
    switch (op) {
        case PointwiseOp::add:
            for (std::size_t c = 0; c < values.size(); ++c)
                values[c] = fa.values()[c] + ha.values()[c];
            break;
        case PointwiseOp::mul:
            for (std::size_t c = 0; c < values.size(); ++c)
                values[c] = fa.values()[c] * ha.values()[c];
            break;
        case PointwiseOp::max:
            for (std::size_t c = 0; c < values.size(); ++c)
                values[c] = std::max(fa.values()[c], ha.values()[c]);
            break;
    }
    return StepFunction(level, std::move(values));
}

StepFunction operator+(const StepFunction& f, const StepFunction& h) {
    return pointwise(PointwiseOp::add, f, h);
}

StepFunction operator-(const StepFunction& f, const StepFunction& h) {
    return f + (-1.0 * h);
}

StepFunction operator*(const StepFunction& f, const StepFunction& h) {
    return pointwise(PointwiseOp::mul, f, h);
}

StepFunction operator*(double scalar, const StepFunction& f) {
    std::vector<double> values(f.values().begin(), f.values().end());
    for (double& v : values) v *= scalar;
    return StepFunction(f.level(), std::move(values));
}

StepFunction pointwise_max(const StepFunction& f, const StepFunction& h) {
    return pointwise(PointwiseOp::max, f, h);
}

StepFunction abs_pow(const StepFunction& f, double exponent) {
    if (!(exponent > 0.0))
        throw std::invalid_argument("abs_pow requires a positive exponent");
    std::vector<double> values(f.values().begin(), f.values().end());
    if (exponent == 1.0) {
        for (double& v : values) v = std::fabs(v);
    } else if (exponent == 2.0) {
        for (double& v : values) v = v * v;
    } else {
        for (double& v : values) v = std::pow(std::fabs(v), exponent);
    }
    return StepFunction(f.level(), std::move(values));
}

double integral(const StepFunction& f) {
    return std::ldexp(tree_sum(f.values()), -f.level());
}

double lp_norm(const StepFunction& f, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm requires p >= 1");
    if (p == 1.0) return integral(abs_pow(f, 1.0));
    if (p == 2.0) return std::sqrt(integral(abs_pow(f, 2.0)));
    return std::pow(integral(abs_pow(f, p)), 1.0 / p);
}

StepFunction cond_expect(const StepFunction& f, std::span<const DyadicSet> sets) {
    int level = f.level();
    for (const auto& set : sets) {
        if (set.empty())
            throw std::invalid_argument("empty set in conditioning list");
        for (const auto& iv : set) {
            check_interval(iv);
            level = std::max(level, iv.level);
        }
    }
    const std::size_t cells = std::size_t{1} << level;
    std::vector<int> owner(cells, -1);
    for (std::size_t s = 0; s < sets.size(); ++s) {
        for (const auto& iv : sets[s]) {
            auto [lo, hi] = cell_range(iv, level);
            for (std::uint64_t c = lo; c < hi; ++c) {
                if (owner[c] != -1)
                    throw std::invalid_argument("overlapping sets");
                owner[c] = static_cast<int>(s);
            }
        }
    }
    const StepFunction fr = refine(f, level);
    std::vector<double> mean(sets.size(), 0.0);
    std::vector<std::size_t> count(sets.size(), 0);
    for (std::size_t c = 0; c < cells; ++c) {
        if (owner[c] >= 0) {
            mean[owner[c]] += fr.values()[c];
            ++count[owner[c]];
        }
    }
    for (std::size_t s = 0; s < sets.size(); ++s)
        mean[s] /= static_cast<double>(count[s]);
    std::vector<double> values(cells, 0.0);
    for (std::size_t c = 0; c < cells; ++c)
        if (owner[c] >= 0) values[c] = mean[owner[c]];
    return StepFunction(level, std::move(values));
}

DyadicSet support(const StepFunction& f) {
    DyadicSet cells;
    for (std::size_t c = 0; c < f.cells(); ++c)
        if (f.values()[c] != 0.0)
            cells.push_back({f.level(), static_cast<std::uint64_t>(c)});
    return cells;
}

bool operator==(const StepFunction& f, const StepFunction& h) {
    const int level = std::max(f.level(), h.level());
    const StepFunction fa = refine(f, level);
    const StepFunction ha = refine(h, level);
    for (std::size_t c = 0; c < fa.cells(); ++c)
        if (fa.values()[c] != ha.values()[c]) return false;
    return true;
}

bool approx_equal(const StepFunction& f, const StepFunction& h, double tol) {
    const int level = std::max(f.level(), h.level());
    const StepFunction fa = refine(f, level);
    const StepFunction ha = refine(h, level);
    for (std::size_t c = 0; c < fa.cells(); ++c)
        if (std::fabs(fa.values()[c] - ha.values()[c]) > tol) return false;
    return true;
}

}  // namespace pwnorm
