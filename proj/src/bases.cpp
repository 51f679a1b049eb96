#include "pwnorm/bases.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pwnorm {

namespace {

constexpr double kNormSlack = 1e-10;

void require_p_above_2(double p) {
    if (!(p > 2.0)) throw std::invalid_argument("requires p > 2");
}

}  // namespace

void validate_haar_index(const HaarIndex& idx) {
    if (idx.n < 0) throw std::invalid_argument("haar index n must be >= 0");
    if (idx.n == 0) {
        if (idx.k != 0) throw std::invalid_argument("haar index (0, k) requires k = 0");
        return;
    }
    if (idx.n > max_level())
        throw std::invalid_argument("haar index level exceeds the grid cap");
    if (idx.k < 0 || idx.k >= (1 << (idx.n - 1)))
        throw std::invalid_argument("haar index k out of range");
}

int haar_linear_index(const HaarIndex& idx) {
    validate_haar_index(idx);
    if (idx.n == 0) return 0;
    return (1 << (idx.n - 1)) + idx.k;
}

HaarIndex haar_index_from_linear(int i) {
    if (i < 0) throw std::invalid_argument("linear haar index must be >= 0");
    if (i == 0) return {0, 0};
    int n = 1;
    while ((1 << n) <= i) ++n;
    return {n, i - (1 << (n - 1))};
}

void validate_haar_g(const HaarG& hg) {
    require_p_above_2(hg.p);
    if (hg.n < 1) throw std::invalid_argument("haar g requires n >= 1");
    if (hg.n > max_level() + 1)
        throw std::invalid_argument("haar g level exceeds the grid cap");
    if (hg.b.size() != (std::size_t{1} << (hg.n - 1)))
        throw std::invalid_argument("haar g needs 2^{n-1} coefficients");
    for (double v : hg.b)
        if (!(v >= 0.0)) throw std::invalid_argument("haar g coefficients must be non-negative");
    const double q = dual_exponent(hg.p);
    if (std::fabs(ell_p_norm(hg.b, q) - 1.0) > kNormSlack)
        throw std::invalid_argument("haar g coefficients must be ell_q-normalized");
}

BasisSequence disjoint_indicators(const std::vector<DyadicInterval>& intervals, double p) {
    require_p_above_2(p);
    if (intervals.empty()) throw std::invalid_argument("no intervals given");
    DyadicSet all(intervals.begin(), intervals.end());
    validate_dyadic_set(all);  // throws "overlapping sets" on overlap
    std::vector<StepFunction> functions;
    functions.reserve(intervals.size());
    for (const auto& iv : intervals) {
        const double lambda = std::ldexp(1.0, -iv.level);
        functions.push_back(std::pow(lambda, -1.0 / p) * StepFunction::indicator(iv));
    }
    return BasisSequence(std::move(functions), p,
                         {.disjoint_supports = true, .normalized = true});
}

DisjointFamily disjointly_supported(const std::vector<StepFunction>& fns, double p) {
    require_p_above_2(p);
    if (fns.empty()) throw std::invalid_argument("no functions given");
    std::vector<StepFunction> normalized;
    normalized.reserve(fns.size());
    for (const auto& f : fns) {
        const double nrm = lp_norm(f, p);
        if (nrm == 0.0) throw std::invalid_argument("zero function in disjoint family");
        normalized.push_back((1.0 / nrm) * f);
    }
    BasisSequence basis(std::move(normalized), p,
                        {.disjoint_supports = true, .normalized = true});
    std::vector<NormingFunction> companions;
    companions.reserve(fns.size());
    for (int k = 0; k < basis.size(); ++k) {
        const BasisSequence single({basis.function(k)}, p, {.normalized = true});
        companions.push_back(optimal_g({1.0}, single));
    }
    return {std::move(basis), std::move(companions)};
}

StepFunction rademacher(int j) {
    if (j < 1) throw std::invalid_argument("rademacher index must be >= 1");
    if (j > max_level()) throw std::invalid_argument("rademacher index exceeds the grid cap");
    std::vector<double> values(std::size_t{1} << j);
    for (std::size_t c = 0; c < values.size(); ++c)
        values[c] = (c & 1) == 0 ? 1.0 : -1.0;
    return StepFunction(j, std::move(values));
}

BasisSequence rademacher_basis(int count, double p) {
    if (count < 1) throw std::invalid_argument("rademacher basis needs count >= 1");
    std::vector<StepFunction> functions;
    functions.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) functions.push_back(rademacher(j));
    return BasisSequence(std::move(functions), p, {.independent = true, .normalized = true});
}

BasisSequence indicator_rademacher_grid(const std::vector<DyadicInterval>& intervals,
                                        int j_count, double p) {
    require_p_above_2(p);
    if (j_count < 1) throw std::invalid_argument("grid needs j_count >= 1");
    DyadicSet all(intervals.begin(), intervals.end());
    validate_dyadic_set(all);
    if (intervals.empty()) throw std::invalid_argument("no intervals given");
    std::vector<StepFunction> functions;
    std::vector<std::vector<int>> groups;
    functions.reserve(intervals.size() * static_cast<std::size_t>(j_count));
    int index = 0;
    for (const auto& iv : intervals) {
        const double lambda = std::ldexp(1.0, -iv.level);
        const StepFunction xn = std::pow(lambda, -1.0 / p) * StepFunction::indicator(iv);
        groups.emplace_back();
        for (int j = 1; j <= j_count; ++j) {
            functions.push_back(xn * rademacher(j));
            groups.back().push_back(index++);
        }
    }
    return BasisSequence(std::move(functions), p, {.normalized = true}, std::move(groups));
}

BasisSequence independent_digit_functions(const std::vector<DigitBlock>& blocks, double p) {
    require_p_above_2(p);
    if (blocks.empty()) throw std::invalid_argument("no digit blocks given");
    std::vector<char> used(static_cast<std::size_t>(max_level()) + 1, 0);
    for (const auto& block : blocks) {
        if (block.digits.empty()) throw std::invalid_argument("empty digit block");
        if (block.table.size() != (std::size_t{1} << block.digits.size()))
            throw std::invalid_argument("digit block table needs 2^digits entries");
        for (int d : block.digits) {
            if (d < 1 || d > max_level())
                throw std::invalid_argument("digit index out of range");
            if (used[static_cast<std::size_t>(d)])
                throw std::invalid_argument("overlapping digit blocks");
            used[static_cast<std::size_t>(d)] = 1;
        }
    }
    std::vector<StepFunction> functions;
    functions.reserve(blocks.size());
    for (const auto& block : blocks) {
        const int level = *std::max_element(block.digits.begin(), block.digits.end());
        std::vector<double> values(std::size_t{1} << level);
        for (std::size_t c = 0; c < values.size(); ++c) {
            std::size_t key = 0;
            for (int d : block.digits)
                key = (key << 1) | ((c >> (level - d)) & 1);
            values[c] = block.table[key];
        }
        StepFunction f(level, std::move(values));
        const double nrm = lp_norm(f, p);
        if (nrm == 0.0) throw std::invalid_argument("zero function in digit block");
        functions.push_back((1.0 / nrm) * f);
    }
    return BasisSequence(std::move(functions), p, {.independent = true, .normalized = true});
}

StepFunction haar(const HaarIndex& idx, double p) {
    validate_haar_index(idx);
    if (!(p >= 1.0)) throw std::invalid_argument("haar requires p >= 1");
    if (idx.n == 0) return StepFunction::constant(1.0);
    const double height = std::pow(2.0, static_cast<double>(idx.n - 1) / p);
    std::vector<double> values(std::size_t{1} << idx.n, 0.0);
    values[static_cast<std::size_t>(2 * idx.k)] = height;
    values[static_cast<std::size_t>(2 * idx.k + 1)] = -height;
    return StepFunction(idx.n, std::move(values));
}

BasisSequence haar_basis(int max_lvl, double p) {
    if (max_lvl < 0) throw std::invalid_argument("haar basis needs max level >= 0");
    const int count = 1 << max_lvl;
    std::vector<StepFunction> functions;
    functions.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        functions.push_back(haar(haar_index_from_linear(i), p));
    return BasisSequence(std::move(functions), p, {.haar = true, .normalized = true});
}

double haar_weight_closed_form(const HaarG& hg, int m, int l) {
    validate_haar_g(hg);
    validate_haar_index({m, m == 0 ? 0 : l});
    const int n = hg.n;
    const double p = hg.p;
    if (m == 0) {
        double s = 0.0;
        for (double bk : hg.b) s += bk;
        return s * std::pow(2.0, 2.0 * (1.0 - n) / p);
    }
    if (m <= n) {
        const int width = 1 << (n - m);
        double s = 0.0;
        for (int k = l * width; k < (l + 1) * width; ++k)
            s += hg.b[static_cast<std::size_t>(k)];
        return s * std::pow(2.0, 2.0 * (m - n) / p);
    }
    const int k = l >> (m - n);  // the coarse cell owning [2^{1-m} l, 2^{1-m}(l+1))
    return hg.b[static_cast<std::size_t>(k)] *
           std::pow(2.0, static_cast<double>(n - m) * (p - 2.0) / p);
}

NormingFunction haar_g(const HaarG& hg) {
    validate_haar_g(hg);
    const double scale = std::pow(2.0, static_cast<double>(hg.n - 1) * (hg.p - 2.0) / hg.p);
    std::vector<double> values(hg.b.size());
    for (std::size_t k = 0; k < hg.b.size(); ++k) values[k] = hg.b[k] * scale;
    return NormingFunction(StepFunction(hg.n - 1, std::move(values)), dual_exponent(hg.p));
}

void validate_haar_coefficients(const HaarCoefficients& coeffs) {
    if (coeffs.max_level < 0)
        throw std::invalid_argument("haar coefficients need max level >= 0");
    if (coeffs.a.size() != (std::size_t{1} << coeffs.max_level))
        throw std::invalid_argument("haar coefficients need 2^max_level entries");
}

HaarSupPair haar_truncated_norm(const HaarCoefficients& coeffs,
                                const std::vector<HaarG>& family, double p) {
    validate_haar_coefficients(coeffs);
    if (family.empty()) throw std::invalid_argument("empty family");
    HaarSupPair sup;
    for (const auto& hg : family) {
        if (hg.p != p) throw std::invalid_argument("family exponent mismatch");
        double head = 0.0;  // terms with m <= n
        double tail = 0.0;  // terms with m > n
        for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
            const double a = coeffs.a[i];
            if (a == 0.0) continue;
            const HaarIndex idx = haar_index_from_linear(static_cast<int>(i));
            const double w = haar_weight_closed_form(hg, idx.n, idx.k);
            if (idx.n <= hg.n)
                head += a * a * w;
            else
                tail += a * a * w;
        }
        // full = head + tail keeps truncated <= full exact: tail >= 0.
        sup.truncated = std::max(sup.truncated, std::sqrt(head));
        sup.full = std::max(sup.full, std::sqrt(head + tail));
    }
    return sup;
}

}  // namespace pwnorm
