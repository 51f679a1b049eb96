#include "pwnorm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwnorm {

namespace {

constexpr double kWeightUpperSlack = 1e-10;
constexpr double kNormalizationTol = 1e-10;

void require_p_above_2(double p) {
    if (!(p > 2.0)) throw std::invalid_argument("requires p > 2");
}

}  // namespace

Partition Partition::trivial(int n) {
    Partition partition;
    partition.blocks.emplace_back();
    partition.blocks.back().reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) partition.blocks.back().push_back(j);
    return partition;
}

Partition Partition::discrete(int n) {
    Partition partition;
    partition.blocks.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) partition.blocks.push_back({j});
    return partition;
}

void validate_partition(const Partition& partition, int n) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::size_t covered = 0;
    for (const auto& block : partition.blocks) {
        if (block.empty()) throw std::invalid_argument("partition has an empty block");
        for (int j : block) {
            if (j < 0 || j >= n) throw std::invalid_argument("partition index out of range");
            if (seen[static_cast<std::size_t>(j)])
                throw std::invalid_argument("partition blocks overlap");
            seen[static_cast<std::size_t>(j)] = 1;
            ++covered;
        }
    }
    if (covered != static_cast<std::size_t>(n))
        throw std::invalid_argument("partition does not cover the index set");
}

void validate_weights(const Weights& weights) {
    for (double w : weights.w) {
        if (!std::isfinite(w) || w <= 0.0 || w > 1.0 + kWeightUpperSlack)
            throw std::invalid_argument("weights must lie in (0, 1]");
    }
}

BasisSequence::BasisSequence(std::vector<StepFunction> functions, double p, BasisTags tags,
                             std::vector<std::vector<int>> groups)
    : functions_(std::move(functions)), p_(p), tags_(tags), groups_(std::move(groups)) {
    require_p_above_2(p_);
    if (functions_.empty()) throw std::invalid_argument("basis must be non-empty");
    if (tags_.normalized) {
        for (const auto& f : functions_)
            if (std::fabs(lp_norm(f, p_) - 1.0) > kNormalizationTol)
                throw std::invalid_argument("basis tagged normalized is not L_p-normalized");
    }
    if (tags_.disjoint_supports) {
        int level = 0;
        for (const auto& f : functions_) level = std::max(level, f.level());
        std::vector<char> claimed(std::size_t{1} << level, 0);
        for (const auto& f : functions_) {
            const StepFunction fr = refine(f, level);
            for (std::size_t c = 0; c < fr.cells(); ++c) {
                if (fr.values()[c] == 0.0) continue;
                if (claimed[c])
                    throw std::invalid_argument("basis tagged disjoint_supports has overlapping supports");
                claimed[c] = 1;
            }
        }
    }
    if (!groups_.empty()) {
        std::vector<char> seen(functions_.size(), 0);
        std::size_t covered = 0;
        for (const auto& group : groups_) {
            if (group.empty()) throw std::invalid_argument("basis grouping has an empty group");
            for (int j : group) {
                if (j < 0 || j >= size()) throw std::invalid_argument("basis grouping index out of range");
                if (seen[static_cast<std::size_t>(j)])
                    throw std::invalid_argument("basis grouping overlaps");
                seen[static_cast<std::size_t>(j)] = 1;
                ++covered;
            }
        }
        if (covered != functions_.size())
            throw std::invalid_argument("basis grouping does not cover the index set");
    }
}

double pw_norm(const Coefficients& a, const PWPair& pair, double p) {
    require_p_above_2(p);
    const int n = static_cast<int>(a.size());
    if (pair.weights.w.size() != a.size())
        throw std::invalid_argument("dimension mismatch");
    validate_partition(pair.partition, n);
    validate_weights(pair.weights);
    double outer = 0.0;
    for (const auto& block : pair.partition.blocks) {
        double inner = 0.0;
        for (int j : block) {
            const double t = a[static_cast<std::size_t>(j)] * pair.weights.w[static_cast<std::size_t>(j)];
            inner += t * t;
        }
        outer += std::pow(inner, p / 2.0);
    }
    return std::pow(outer, 1.0 / p);
}

double family_norm(const Coefficients& a, const Family& family, double p) {
    if (family.pairs.empty()) throw std::invalid_argument("empty family");
    double best = 0.0;
    for (const auto& pair : family.pairs)
        best = std::max(best, pw_norm(a, pair, p));
    return best;
}

double ell_p_norm(const Coefficients& a, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("ell_p_norm requires p >= 1");
    if (p == 1.0) {
        double s = 0.0;
        for (double v : a) s += std::fabs(v);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double v : a) s += v * v;
        return std::sqrt(s);
    }
    double s = 0.0;
    for (double v : a) s += std::pow(std::fabs(v), p);
    return std::pow(s, 1.0 / p);
}

double mixed_norm(const std::vector<Coefficients>& groups, double p) {
    require_p_above_2(p);
    if (groups.empty()) throw std::invalid_argument("empty groups");
    double outer = 0.0;
    for (const auto& group : groups) {
        double inner = 0.0;
        for (double v : group) inner += v * v;
        outer += std::pow(inner, p / 2.0);
    }
    return std::pow(outer, 1.0 / p);
}

StepFunction square_function(const Coefficients& a, const BasisSequence& basis) {
    if (a.size() != basis.functions().size())
        throw std::invalid_argument("dimension mismatch");
    int level = 0;
    for (const auto& f : basis.functions()) level = std::max(level, f.level());
    StepFunction sum = StepFunction::zero(level);
    for (std::size_t n = 0; n < a.size(); ++n)
        sum = sum + (a[n] * a[n]) * (basis.function(static_cast<int>(n)) *
                                     basis.function(static_cast<int>(n)));
    return sum;
}

double square_function_norm(const Coefficients& a, const BasisSequence& basis) {
    return std::sqrt(lp_norm(square_function(a, basis), basis.p() / 2.0));
}

double expansion_norm(const Coefficients& a, const BasisSequence& basis) {
    if (a.size() != basis.functions().size())
        throw std::invalid_argument("dimension mismatch");
    int level = 0;
    for (const auto& f : basis.functions()) level = std::max(level, f.level());
    StepFunction sum = StepFunction::zero(level);
    for (std::size_t n = 0; n < a.size(); ++n)
        sum = sum + a[n] * basis.function(static_cast<int>(n));
    return lp_norm(sum, basis.p());
}

}  // namespace pwnorm
