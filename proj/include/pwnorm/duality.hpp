#pragma once

#include "pwnorm/norms.hpp"
#include "pwnorm/random.hpp"

#include <span>

namespace pwnorm {

/// p/(p-2), the exponent conjugate to p/2. Requires p > 2.
double dual_exponent(double p);

/// Non-negative step function g with ||g||_q <= 1 (q = p/(p-2)), the dual
/// object that generates weight vectors w_n = (integral g x_n^2)^{1/2}.
/// Validated on construction; a 1e-10 slack is allowed on the norm bound.
class NormingFunction {
public:
    NormingFunction(StepFunction g, double q);

    const StepFunction& fn() const { return g_; }
    double q() const { return q_; }

private:
    StepFunction g_;
    double q_;
};

struct NormingWeights {
    Weights weights;
    std::size_t clamped = 0;  // entries raised to the 1e-30 floor
};

/// w_n = (integral g x_n^2)^{1/2} for each basis function. Weights that come
/// out zero (g vanishing on a support) are clamped to 1e-30 so the (0, 1]
/// weight contract holds; the clamp count is reported.
NormingWeights weights_from_g(const NormingFunction& g, const BasisSequence& basis);

/// The g attaining sup{ integral g f : g >= 0, ||g||_q = 1 } for
/// f = sum a_n^2 x_n^2, namely g = f^{(p-2)/2} / ||f||_{p/2}^{(p-2)/2}.
/// Errors if f is identically zero.
NormingFunction optimal_g(const Coefficients& a, const BasisSequence& basis);

/// g(t) = max_n c_n |x_n(t)|^{p-2} for c >= 0 with ||c||_{p/(p-2)} = 1.
/// For an L_p-normalized basis, ||g||_q <= 1 and integral g x_n^2 >= c_n.
NormingFunction maxc_g(const Coefficients& c, const BasisSequence& basis);

/// Conditional expectation of g on the given disjoint sets. Weight vectors
/// are unchanged for any basis measurable with respect to the sets.
NormingFunction reduce_g(const NormingFunction& g, std::span<const DyadicSet> sets);

/// One trivial-partition pair per g, with weights_from_g weights; optionally
/// appends the discrete partition with constant weight one.
Family build_family(std::span<const NormingFunction> gs, const BasisSequence& basis,
                    bool include_discrete = false);

/// Random elements of the dual ball: i.i.d. squared normals per cell,
/// normalized in L_q.
std::vector<NormingFunction> sample_g(int count, int level, double p, Rng& rng);

/// The c >= 0 on the unit sphere of ell_{p/(p-2)} maximizing sum a_n^2 c_n,
/// namely c_n proportional to |a_n|^{p-2}. Then (sum a_n^2 c_n)^{1/2} equals
/// the ell_p norm of a.
Coefficients dual_optimal_c(const Coefficients& a, double p);

/// Brute-force verification oracle for dual_optimal_c: max of sum a_n^2 c_n
/// over the grid {c : c_n = u_n^{1/q}, sum u_n = 1, u_n in {0, 1/steps, ..}}
/// on the ell_q sphere. Supports a.size() <= 4.
double dual_grid_max(const Coefficients& a, double p, int steps);

}  // namespace pwnorm
