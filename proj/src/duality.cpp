#include "pwnorm/duality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwnorm {

namespace {

constexpr double kNormSlack = 1e-10;
constexpr double kWeightFloor = 1e-30;

// |v|^e with exact special cases for the exponents that occur at p = 3, 4.
double abs_pow_scalar(double v, double e) {
    if (e == 1.0) return std::fabs(v);
    if (e == 2.0) return v * v;
    return std::pow(std::fabs(v), e);
}

}  // namespace

double dual_exponent(double p) {
    if (!(p > 2.0)) throw std::invalid_argument("requires p > 2");
    return p / (p - 2.0);
}

NormingFunction::NormingFunction(StepFunction g, double q) : g_(std::move(g)), q_(q) {
    if (!(q_ > 1.0)) throw std::invalid_argument("norming function needs a dual exponent q > 1");
    for (double v : g_.values())
        if (v < 0.0) throw std::invalid_argument("norming function must be non-negative");
    if (lp_norm(g_, q_) > 1.0 + kNormSlack)
        throw std::invalid_argument("norming function exceeds the dual unit ball");
}

NormingWeights weights_from_g(const NormingFunction& g, const BasisSequence& basis) {
    NormingWeights result;
    result.weights.w.reserve(basis.functions().size());
    for (const auto& x : basis.functions()) {
        const double t = integral(g.fn() * (x * x));
        if (t < 0.0) throw std::logic_error("negative integral of a non-negative integrand");
        double w = std::sqrt(t);
        if (w < kWeightFloor) {
            w = kWeightFloor;
            ++result.clamped;
        }
        result.weights.w.push_back(w);
    }
    validate_weights(result.weights);
    return result;
}

NormingFunction optimal_g(const Coefficients& a, const BasisSequence& basis) {
    const double p = basis.p();
    const StepFunction f = square_function(a, basis);
    const double norm_f = lp_norm(f, p / 2.0);
    if (norm_f == 0.0) throw std::invalid_argument("degenerate coefficient vector");
    const double scale = 1.0 / std::pow(norm_f, (p - 2.0) / 2.0);
    return NormingFunction(scale * abs_pow(f, (p - 2.0) / 2.0), dual_exponent(p));
}

NormingFunction maxc_g(const Coefficients& c, const BasisSequence& basis) {
    if (c.size() != basis.functions().size())
        throw std::invalid_argument("dimension mismatch");
    const double p = basis.p();
    const double q = dual_exponent(p);
    for (double v : c)
        if (v < 0.0) throw std::invalid_argument("maxc_g requires non-negative c");
    if (std::fabs(ell_p_norm(c, q) - 1.0) > kNormSlack)
        throw std::invalid_argument("maxc_g requires c on the unit sphere of ell_q");
    int level = 0;
    for (const auto& x : basis.functions()) level = std::max(level, x.level());
    std::vector<double> values(std::size_t{1} << level, 0.0);
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (c[n] == 0.0) continue;
        const StepFunction xr = refine(basis.function(static_cast<int>(n)), level);
        for (std::size_t cell = 0; cell < values.size(); ++cell)
            values[cell] = std::max(values[cell], c[n] * abs_pow_scalar(xr.values()[cell], p - 2.0));
    }
    return NormingFunction(StepFunction(level, std::move(values)), q);
}

NormingFunction reduce_g(const NormingFunction& g, std::span<const DyadicSet> sets) {
    return NormingFunction(cond_expect(g.fn(), sets), g.q());
}

Family build_family(std::span<const NormingFunction> gs, const BasisSequence& basis,
                    bool include_discrete) {
    if (gs.empty()) throw std::invalid_argument("empty norming family");
    const int n = basis.size();
    Family family;
    family.pairs.reserve(gs.size() + (include_discrete ? 1 : 0));
    for (const auto& g : gs)
        family.pairs.push_back({Partition::trivial(n), weights_from_g(g, basis).weights});
    if (include_discrete)
        family.pairs.push_back({Partition::discrete(n),
                                Weights{std::vector<double>(static_cast<std::size_t>(n), 1.0)}});
    return family;
}

std::vector<NormingFunction> sample_g(int count, int level, double p, Rng& rng) {
    const double q = dual_exponent(p);
    std::vector<NormingFunction> gs;
    gs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::vector<double> values(std::size_t{1} << level);
        double nrm = 0.0;
        while (nrm == 0.0) {
            for (double& v : values) {
                const double z = rng.normal();
                v = z * z;
            }
            nrm = lp_norm(StepFunction(level, values), q);
        }
        for (double& v : values) v /= nrm;
        gs.emplace_back(StepFunction(level, std::move(values)), q);
    }
    return gs;
}

Coefficients dual_optimal_c(const Coefficients& a, double p) {
    const double q = dual_exponent(p);
    Coefficients c(a.size());
    for (std::size_t n = 0; n < a.size(); ++n)
        c[n] = abs_pow_scalar(a[n], p - 2.0);
    const double nrm = ell_p_norm(c, q);
    if (nrm == 0.0) throw std::invalid_argument("degenerate coefficient vector");
    for (double& v : c) v /= nrm;
    return c;
}

double dual_grid_max(const Coefficients& a, double p, int steps) {
    const double q = dual_exponent(p);
    const int n = static_cast<int>(a.size());
    if (n < 1 || n > 4)
        throw std::invalid_argument("dual_grid_max supports 1 <= N <= 4");
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    // c_n = (u_n)^{1/q} with u on the unit simplex keeps every grid point
    // exactly on the ell_q sphere.
    std::vector<double> root(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i)
        root[static_cast<std::size_t>(i)] =
            std::pow(static_cast<double>(i) / static_cast<double>(steps), 1.0 / q);
    std::vector<double> a2(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) a2[i] = a[i] * a[i];
    double best = 0.0;
    switch (n) {
        case 1:
            best = a2[0];
            break;
        case 2:
            for (int i = 0; i <= steps; ++i)
                best = std::max(best, a2[0] * root[i] + a2[1] * root[steps - i]);
            break;
        case 3:
            for (int i = 0; i <= steps; ++i)
                for (int j = 0; j <= steps - i; ++j)
                    best = std::max(best, a2[0] * root[i] + a2[1] * root[j] +
                                              a2[2] * root[steps - i - j]);
            break;
        case 4:
            for (int i = 0; i <= steps; ++i)
                for (int j = 0; j <= steps - i; ++j) {
                    const double partial = a2[0] * root[i] + a2[1] * root[j];
                    const int rest = steps - i - j;
                    for (int k = 0; k <= rest; ++k) {
                        const double v = partial + a2[2] * root[k] + a2[3] * root[rest - k];
                        if (v > best) best = v;
                    }
                }
            break;
    }
    return best;
}

}  // namespace pwnorm
