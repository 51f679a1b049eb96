#include "pwnorm/experiments.hpp"

#include "pwnorm/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pwnorm {

namespace {

std::string tag(const std::string& experiment, const std::string& basis_name, double p) {
    std::string s = experiment + "[";
    if (!basis_name.empty()) s += basis_name + ",";
    s += "p=" + fmt_double10(p) + "]";
    return s;
}

void set_ratio(TrialRow& row) {
    row.ratio = row.rhs != 0.0 ? row.lhs / row.rhs : 0.0;
}

void finish(ExperimentReport& report, const ExperimentConfig& config) {
    report.ratio = report.rhs != 0.0 ? report.lhs / report.rhs : 0.0;
    report.metadata["seed"] = std::to_string(config.seed);
    report.metadata["trials"] = std::to_string(config.trials);
    bool all = true;
    for (const auto& row : report.trials) all = all && row.pass;
    report.pass = report.pass && all;
}

// Worst trial under the declared relation: for equal, the largest relative
// discrepancy; for leq/geq, the smallest margin.
void pick_worst(ExperimentReport& report) {
    if (report.trials.empty()) return;
    std::size_t worst = 0;
    double score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        const auto& row = report.trials[i];
        double s = 0.0;
        switch (report.relation) {
            case Relation::equal:
                s = std::fabs(row.lhs - row.rhs) / (row.rhs != 0.0 ? std::fabs(row.rhs) : 1.0);
                break;
            case Relation::leq:
                s = row.lhs - row.rhs;
                break;
            case Relation::geq:
                s = row.rhs - row.lhs;
                break;
        }
        if (s > score) {
            score = s;
            worst = i;
        }
    }
    report.lhs = report.trials[worst].lhs;
    report.rhs = report.trials[worst].rhs;
}

PWPair trivial_pair(const Coefficients& a, const NormingFunction& g, const BasisSequence& basis) {
    return {Partition::trivial(static_cast<int>(a.size())), weights_from_g(g, basis).weights};
}

bool indicator_like(const BasisSequence& basis) {
    for (const auto& x : basis.functions()) {
        double seen = 0.0;
        for (double v : x.values()) {
            if (v == 0.0) continue;
            if (seen == 0.0)
                seen = v;
            else if (v != seen)
                return false;
        }
    }
    return true;
}

}  // namespace

std::string relation_name(Relation relation) {
    switch (relation) {
        case Relation::equal: return "equal";
        case Relation::leq: return "leq";
        case Relation::geq: return "geq";
    }
    return "equal";
}

Coefficients random_coefficients(int n, Rng& rng, int trial_index) {
    Coefficients a(static_cast<std::size_t>(n));
    for (double& v : a) v = rng.normal();
    if (trial_index % 4 == 3) {
        for (double& v : a)
            if (rng.uniform() < 0.5) v = 0.0;
    }
    bool any = false;
    for (double v : a) any = any || v != 0.0;
    if (!any) a[0] = 1.0;
    return a;
}

ExperimentReport certify_theorem1(const BasisSequence& basis, const ExperimentConfig& config,
                                  const std::string& basis_name) {
    const double p = basis.p();
    ExperimentReport report;
    report.name = tag("theorem1", basis_name, p);
    report.p = p;
    report.n = basis.size();
    report.relation = Relation::equal;
    report.tolerance = 1e-9;
    report.pass = true;

    Rng rng(config.seed);
    const auto gs = sample_g(config.family_samples, config.sample_level, p, rng);
    const std::vector<int> sizes = {std::max(1, config.family_samples / 16),
                                    std::max(1, config.family_samples / 4),
                                    config.family_samples};
    std::vector<Family> nested;
    for (int size : sizes)
        nested.push_back(build_family(std::span(gs.data(), static_cast<std::size_t>(size)), basis));

    double worst_rel = 0.0;
    double worst_sampled_gap = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < config.trials; ++t) {
        const Coefficients a = random_coefficients(basis.size(), rng, t);
        const double sfn = square_function_norm(a, basis);
        double previous = 0.0;
        bool sampled_ok = true;
        double sampled_full = 0.0;
        for (const auto& fam : nested) {
            const double v = family_norm(a, fam, p);
            sampled_ok = sampled_ok && v + 1e-15 >= previous && v <= sfn + 1e-10;
            previous = v;
            sampled_full = v;
        }
        worst_sampled_gap = std::max(worst_sampled_gap, sampled_full - sfn);
        Family with_optimal = nested.back();
        with_optimal.pairs.push_back(trivial_pair(a, optimal_g(a, basis), basis));
        const double attained = family_norm(a, with_optimal, p);
        const double rel = std::fabs(attained - sfn) / sfn;
        worst_rel = std::max(worst_rel, rel);
        TrialRow row{attained, sfn, 0.0, rel <= report.tolerance && sampled_ok};
        set_ratio(row);
        report.trials.push_back(row);
    }
    pick_worst(report);
    report.metadata["basis"] = basis_name;
    report.metadata["sample_level"] = std::to_string(config.sample_level);
    report.metadata["family_samples"] = std::to_string(config.family_samples);
    report.metadata["worst_rel_discrepancy"] = fmt_double(worst_rel);
    report.metadata["worst_sampled_gap"] = fmt_double(worst_sampled_gap);
    finish(report, config);
    return report;
}

ExperimentReport certify_lp_isometry(const BasisSequence& basis, const ExperimentConfig& config,
                                     const std::string& basis_name) {
    if (!basis.tags().disjoint_supports)
        throw std::invalid_argument("basis lacks disjoint_supports tag");
    const double p = basis.p();
    ExperimentReport report;
    report.name = tag("lp_isometry", basis_name, p);
    report.p = p;
    report.n = basis.size();
    report.relation = Relation::equal;
    report.tolerance = 1e-10;
    report.pass = true;

    Rng rng(config.seed);
    const bool reductions = indicator_like(basis);
    std::vector<DyadicSet> supports;
    if (reductions)
        for (const auto& x : basis.functions()) supports.push_back(support(x));

    double worst_rel = 0.0;
    double worst_reduction = 0.0;
    for (int t = 0; t < config.trials; ++t) {
        const Coefficients a = random_coefficients(basis.size(), rng, t);
        const double lhs = square_function_norm(a, basis);
        const double rhs = ell_p_norm(a, p);
        const double rel = std::fabs(lhs - rhs) / rhs;
        worst_rel = std::max(worst_rel, rel);
        bool ok = rel <= report.tolerance;
        if (reductions) {
            const auto g = sample_g(1, config.sample_level, p, rng).front();
            const auto w1 = weights_from_g(g, basis);
            const auto w2 = weights_from_g(reduce_g(g, supports), basis);
            for (std::size_t i = 0; i < w1.weights.w.size(); ++i) {
                const double diff = std::fabs(w1.weights.w[i] - w2.weights.w[i]);
                worst_reduction = std::max(worst_reduction, diff);
                ok = ok && diff <= 1e-12;
            }
        }
        TrialRow row{lhs, rhs, 0.0, ok};
        set_ratio(row);
        report.trials.push_back(row);
    }
    pick_worst(report);
    report.metadata["basis"] = basis_name;
    report.metadata["worst_rel_discrepancy"] = fmt_double(worst_rel);
    if (reductions)
        report.metadata["worst_reduction_drift"] = fmt_double(worst_reduction);
    finish(report, config);
    return report;
}

ExperimentReport certify_mixed_isometry(const std::vector<DyadicInterval>& intervals,
                                        int j_count, double p, const ExperimentConfig& config) {
    const BasisSequence grid = indicator_rademacher_grid(intervals, j_count, p);
    ExperimentReport report;
    report.name = tag("mixed_isometry", std::to_string(intervals.size()) + "x" +
                                            std::to_string(j_count), p);
    report.p = p;
    report.n = grid.size();
    report.relation = Relation::equal;
    report.tolerance = 1e-10;
    report.pass = true;

    Rng rng(config.seed);
    double worst_rel = 0.0;
    for (int t = 0; t < config.trials; ++t) {
        const Coefficients a = random_coefficients(grid.size(), rng, t);
        const double lhs = square_function_norm(a, grid);
        std::vector<Coefficients> grouped;
        for (const auto& group : grid.groups()) {
            grouped.emplace_back();
            for (int j : group) grouped.back().push_back(a[static_cast<std::size_t>(j)]);
        }
        const double rhs = mixed_norm(grouped, p);
        const double rel = std::fabs(lhs - rhs) / rhs;
        worst_rel = std::max(worst_rel, rel);
        TrialRow row{lhs, rhs, 0.0, rel <= report.tolerance};
        set_ratio(row);
        report.trials.push_back(row);
    }
    pick_worst(report);
    report.metadata["worst_rel_discrepancy"] = fmt_double(worst_rel);
    finish(report, config);
    return report;
}

ExperimentReport certify_rosenthal_bounds(const BasisSequence& basis,
                                          const ExperimentConfig& config,
                                          const std::string& basis_name) {
    if (!basis.tags().independent || !basis.tags().normalized)
        throw std::invalid_argument("basis lacks independent/normalized tags");
    const double p = basis.p();
    const double q = dual_exponent(p);
    ExperimentReport report;
    report.name = tag("rosenthal_bounds", basis_name, p);
    report.p = p;
    report.n = basis.size();
    report.relation = Relation::leq;
    report.tolerance = 1e-10;
    report.pass = true;

    Rng rng(config.seed);
    const NormingFunction ones(StepFunction::constant(1.0), q);
    const Weights l2_weights = weights_from_g(ones, basis).weights;
    const Partition trivial = Partition::trivial(basis.size());

    double khat_max = 0.0;
    double worst_maxc_margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < config.trials; ++t) {
        const Coefficients a = random_coefficients(basis.size(), rng, t);
        const StepFunction f = square_function(a, basis);
        const double sfn = std::sqrt(lp_norm(f, p / 2.0));
        const double l2_part = pw_norm(a, {trivial, l2_weights}, p);
        const double ellp = ell_p_norm(a, p);
        const Coefficients c = dual_optimal_c(a, p);
        const double maxc_value = pw_norm(a, trivial_pair(a, maxc_g(c, basis), basis), p);
        worst_maxc_margin = std::min(worst_maxc_margin, maxc_value - ellp);
        const bool duality_ok = l2_part <= sfn + 1e-10 && maxc_value <= sfn + 1e-10 &&
                                maxc_value >= ellp - 1e-8;
        // Measured upper-bound constant: |||.|||^2 over the max of the L_1
        // term and the ell_{p/2} aggregation term.
        double moment_sum = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double term = lp_norm((a[i] * a[i]) * (basis.function(static_cast<int>(i)) *
                                                         basis.function(static_cast<int>(i))),
                                        p / 2.0);
            moment_sum += std::pow(term, p / 2.0);
        }
        const double denom = std::max(integral(f), std::pow(moment_sum, 2.0 / p));
        khat_max = std::max(khat_max, sfn * sfn / denom);
        TrialRow row{std::max(l2_part, ellp), sfn, 0.0,
                     std::max(l2_part, ellp) <= sfn + report.tolerance && duality_ok};
        set_ratio(row);
        report.trials.push_back(row);
    }
    pick_worst(report);
    report.pass = report.pass && std::isfinite(khat_max);
    report.metadata["basis"] = basis_name;
    report.metadata["khat_max"] = fmt_double(khat_max);
    report.metadata["worst_maxc_margin"] = fmt_double(worst_maxc_margin);
    finish(report, config);
    return report;
}

ExperimentReport certify_discrete_partition(const BasisSequence& basis,
                                            const ExperimentConfig& config,
                                            const std::string& basis_name) {
    if (!basis.tags().normalized)
        throw std::invalid_argument("basis lacks normalized tag");
    const double p = basis.p();
    ExperimentReport report;
    report.name = tag("discrete_partition", basis_name, p);
    report.p = p;
    report.n = basis.size();
    report.relation = Relation::leq;
    report.tolerance = 1e-9;
    report.pass = true;

    Rng rng(config.seed);
    const auto gs = sample_g(16, config.sample_level, p, rng);
    const Family sampled = build_family(gs, basis, /*include_discrete=*/true);
    const PWPair discrete{Partition::discrete(basis.size()),
                          Weights{std::vector<double>(static_cast<std::size_t>(basis.size()), 1.0)}};

    double worst_lower_margin = std::numeric_limits<double>::infinity();
    double worst_grid_excess = -std::numeric_limits<double>::infinity();
    bool grid_checked = false;
    for (int t = 0; t < config.trials; ++t) {
        const Coefficients a = random_coefficients(basis.size(), rng, t);
        const double sfn = square_function_norm(a, basis);
        const double ellp = ell_p_norm(a, p);
        const Coefficients c = dual_optimal_c(a, p);
        const double maxc_value = pw_norm(a, trivial_pair(a, maxc_g(c, basis), basis), p);
        worst_lower_margin = std::min(worst_lower_margin, maxc_value - ellp);
        bool ok = maxc_value >= ellp - 1e-8;
        // The discrete pair itself evaluates to the ell_p norm.
        ok = ok && std::fabs(pw_norm(a, discrete, p) - ellp) <= 1e-12 * ellp;
        Family family = sampled;
        family.pairs.push_back(trivial_pair(a, optimal_g(a, basis), basis));
        const double fam_value = family_norm(a, family, p);
        ok = ok && fam_value <= sfn + report.tolerance;
        if (basis.size() <= 4) {
            grid_checked = true;
            double dual_value = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) dual_value += a[i] * a[i] * c[i];
            const double grid = dual_grid_max(a, p, config.dual_grid_steps);
            worst_grid_excess = std::max(worst_grid_excess, grid - dual_value);
            ok = ok && grid <= dual_value + 1e-8;
        }
        TrialRow row{fam_value, sfn, 0.0, ok};
        set_ratio(row);
        report.trials.push_back(row);
    }
    pick_worst(report);
    report.metadata["basis"] = basis_name;
    report.metadata["worst_lower_margin"] = fmt_double(worst_lower_margin);
    if (grid_checked) {
        report.metadata["dual_grid_steps"] = std::to_string(config.dual_grid_steps);
        report.metadata["worst_grid_excess"] = fmt_double(worst_grid_excess);
    }
    finish(report, config);
    return report;
}

ExperimentReport certify_haar_closed_forms(int max_level, double p,
                                           const std::vector<HaarG>& family,
                                           const ExperimentConfig& config) {
    if (family.empty()) throw std::invalid_argument("empty family");
    const BasisSequence basis = haar_basis(max_level, p);
    ExperimentReport report;
    report.name = tag("haar_closed_form", "M=" + std::to_string(max_level), p);
    report.p = p;
    report.n = basis.size();
    report.relation = Relation::leq;
    report.tolerance = 0.0;
    report.pass = true;

    // Closed form against the integration oracle at this experiment's sizes.
    double worst_agreement = 0.0;
    for (const auto& hg : family) {
        const NormingFunction g = haar_g(hg);
        for (int i = 0; i < basis.size(); ++i) {
            const HaarIndex idx = haar_index_from_linear(i);
            const double closed = haar_weight_closed_form(hg, idx.n, idx.k);
            const double direct = integral(g.fn() * (basis.function(i) * basis.function(i)));
            const double scale = std::max({std::fabs(closed), std::fabs(direct), 1.0});
            worst_agreement = std::max(worst_agreement, std::fabs(closed - direct) / scale);
        }
    }
    report.pass = worst_agreement <= 1e-10;

    Rng rng(config.seed);
    double worst_full_over_truncated = 0.0;
    double c1 = std::numeric_limits<double>::infinity();
    double c2 = 0.0;
    for (int t = 0; t < config.trials; ++t) {
        const Coefficients a = random_coefficients(basis.size(), rng, t);
        const HaarSupPair sup = haar_truncated_norm({max_level, a}, family, p);
        const double sfn = square_function_norm(a, basis);
        bool ok = sup.truncated <= sup.full && sup.full <= sfn + 1e-9;
        const double blow = sup.truncated > 0.0
                                ? sup.full / sup.truncated
                                : std::numeric_limits<double>::infinity();
        ok = ok && std::isfinite(blow);
        worst_full_over_truncated = std::max(worst_full_over_truncated, blow);
        c1 = std::min({c1, sup.truncated / sfn, sup.full / sfn});
        c2 = std::max({c2, sup.full / sfn});
        TrialRow row{sup.truncated, sup.full, 0.0, ok};
        set_ratio(row);
        report.trials.push_back(row);
    }
    pick_worst(report);
    report.metadata["max_level"] = std::to_string(max_level);
    report.metadata["family_size"] = std::to_string(family.size());
    report.metadata["worst_agreement"] = fmt_double(worst_agreement);
    report.metadata["worst_full_over_truncated"] = fmt_double(worst_full_over_truncated);
    report.metadata["c1_vs_square_function"] = fmt_double(c1);
    report.metadata["c2_vs_square_function"] = fmt_double(c2);
    finish(report, config);
    return report;
}

ExperimentReport khintchine_ratio(const BasisSequence& basis, const ExperimentConfig& config,
                                  const std::string& basis_name, bool rademacher_checks) {
    const double p = basis.p();
    ExperimentReport report;
    report.name = tag("khintchine_ratio", basis_name, p);
    report.p = p;
    report.n = basis.size();
    report.relation = Relation::geq;
    report.tolerance = 0.0;
    report.pass = true;

    Rng rng(config.seed);
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (int t = 0; t < config.trials; ++t) {
        const Coefficients a = random_coefficients(basis.size(), rng, t);
        const double e = expansion_norm(a, basis);
        const double s = square_function_norm(a, basis);
        const double r = e / s;
        min_ratio = std::min(min_ratio, r);
        max_ratio = std::max(max_ratio, r);
        bool ok = r > 0.0 && std::isfinite(r);
        if (rademacher_checks) {
            const double l2 = ell_p_norm(a, 2.0);
            ok = ok && std::fabs(s - l2) <= 1e-12 * l2 && e >= l2 - 1e-10;
        }
        TrialRow row{r, 0.0, 0.0, ok};
        set_ratio(row);
        report.trials.push_back(row);
    }
    report.lhs = min_ratio;
    report.rhs = 0.0;
    report.pass = report.pass && min_ratio > 0.0 && std::isfinite(max_ratio);
    report.metadata["basis"] = basis_name;
    report.metadata["min_ratio"] = fmt_double(min_ratio);
    report.metadata["max_ratio"] = fmt_double(max_ratio);
    if (rademacher_checks) report.metadata["rademacher_checks"] = "true";
    finish(report, config);
    return report;
}

std::vector<NamedBasis> standard_bases(double p) {
    std::vector<NamedBasis> bases;

    const std::vector<DyadicInterval> intervals = {
        {2, 0}, {2, 1}, {3, 4}, {3, 5}, {4, 12}, {4, 13}, {4, 14}, {4, 15}};
    bases.push_back({"indicators", disjoint_indicators(intervals, p)});

    std::vector<StepFunction> disjoint_fns;
    for (std::size_t m = 0; m < intervals.size(); ++m) {
        const auto& iv = intervals[m];
        std::vector<double> values(1u << 5, 0.0);
        const std::uint64_t lo = iv.index << (5 - iv.level);
        const std::uint64_t hi = (iv.index + 1) << (5 - iv.level);
        for (std::uint64_t c = lo; c < hi; ++c)
            values[c] = 1.0 + static_cast<double>((c + m) % 3);
        disjoint_fns.emplace_back(5, std::move(values));
    }
    bases.push_back({"disjoint", disjointly_supported(disjoint_fns, p).basis});

    bases.push_back({"rademacher", rademacher_basis(5, p)});

    bases.push_back({"grid", indicator_rademacher_grid({{1, 0}, {1, 1}}, 3, p)});

    const std::vector<DigitBlock> blocks = {
        {{1, 2}, {0.5, 1.5, 1.0, 2.0}},
        {{3}, {1.0, -1.0}},
        {{4, 5}, {2.0, 1.0, 1.0, 0.25}},
        {{6}, {0.5, 1.25}}};
    bases.push_back({"independent", independent_digit_functions(blocks, p)});

    bases.push_back({"haar3", haar_basis(3, p)});

    return bases;
}

std::vector<HaarG> standard_haar_family(int max_level, double p, Rng& rng) {
    if (max_level < 1) throw std::invalid_argument("family needs max level >= 1");
    const double q = dual_exponent(p);
    std::vector<HaarG> family;
    for (int n = 1; n <= max_level; ++n) {
        const std::size_t count = std::size_t{1} << (n - 1);
        std::vector<double> uniform(count,
                                    std::pow(static_cast<double>(count), -1.0 / q));
        family.push_back({n, std::move(uniform), p});
        for (int extra = 0; extra < 2; ++extra) {
            std::vector<double> b(count);
            double nrm = 0.0;
            while (nrm == 0.0) {
                for (double& v : b) {
                    const double z = rng.normal();
                    v = z * z;
                }
                nrm = ell_p_norm(b, q);
            }
            for (double& v : b) v /= nrm;
            family.push_back({n, std::move(b), p});
        }
    }
    return family;
}

}  // namespace pwnorm
