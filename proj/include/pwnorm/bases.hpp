#pragma once

#include "pwnorm/duality.hpp"

namespace pwnorm {

/// Haar index: n = 0 forces k = 0; for n >= 1, 0 <= k <= 2^{n-1} - 1.
struct HaarIndex {
    int n = 0;
    int k = 0;
};

void validate_haar_index(const HaarIndex& idx);

/// Linear enumeration: (0,0) -> 0 and (n,k) -> 2^{n-1} + k for n >= 1.
int haar_linear_index(const HaarIndex& idx);
HaarIndex haar_index_from_linear(int i);

/// Dual step function constant on the 2^{n-1} intervals of length 2^{1-n},
/// with coefficients b >= 0 normalized in ell_{p/(p-2)}.
struct HaarG {
    int n = 1;
    std::vector<double> b;
    double p = 4.0;
};

void validate_haar_g(const HaarG& hg);

/// x_n = measure(A_n)^{-1/p} 1_{A_n} on disjoint dyadic intervals.
BasisSequence disjoint_indicators(const std::vector<DyadicInterval>& intervals, double p);

struct DisjointFamily {
    BasisSequence basis;
    /// For each k, the unique non-negative y_k with ||y_k||_{p/(p-2)} = 1 and
    /// integral y_k x_k^2 = ||x_k^2||_{p/2}.
    std::vector<NormingFunction> companions;
};

/// Rescales disjointly supported non-zero functions to unit L_p norm and
/// attaches the norming companions of each x_k^2.
DisjointFamily disjointly_supported(const std::vector<StepFunction>& fns, double p);

/// r_j: +1 on level-j cells whose j-th binary digit is 0, -1 otherwise.
StepFunction rademacher(int j);

/// The first `count` Rademacher functions as a normalized independent basis.
BasisSequence rademacher_basis(int count, double p);

/// x_{n,j} = measure(A_n)^{-1/p} 1_{A_n} r_j, flattened row-major (n outer,
/// j inner) with the row grouping recorded. x_{n,j}^2 = x_{n,1}^2 exactly.
BasisSequence indicator_rademacher_grid(const std::vector<DyadicInterval>& intervals,
                                        int j_count, double p);

/// A function of the binary digits in `digits` (1-based, most significant
/// first). table has 2^digits.size() entries indexed by the digit bits in
/// the listed order.
struct DigitBlock {
    std::vector<int> digits;
    std::vector<double> table;
};

/// Stochastically independent normalized functions built on disjoint digit
/// blocks; independence is exact on the dyadic grid.
BasisSequence independent_digit_functions(const std::vector<DigitBlock>& blocks, double p);

/// L_p-normalized Haar function h_{n,k}.
StepFunction haar(const HaarIndex& idx, double p);

/// All Haar functions with n <= max_level, in linear-index order.
BasisSequence haar_basis(int max_level, double p);

/// integral g h_{m,l}^2 in closed form, by the three cases m = 0,
/// 0 < m <= n and m > n (where the owning coarse cell is k = l / 2^{m-n}).
double haar_weight_closed_form(const HaarG& hg, int m, int l);

/// The step function of a HaarG: values b_k 2^{(n-1)(p-2)/p} at level n - 1.
NormingFunction haar_g(const HaarG& hg);

/// Haar coefficients a_{m,l} for all indices with m <= max_level, stored in
/// linear-index order (2^max_level entries).
struct HaarCoefficients {
    int max_level = 0;
    std::vector<double> a;
};

void validate_haar_coefficients(const HaarCoefficients& coeffs);

struct HaarSupPair {
    double full = 0.0;       // sup over the family including the m > n terms
    double truncated = 0.0;  // same sup with the m > n terms dropped
};

/// sup over the family of (sum_{m,l} a_{m,l}^2 closed_form(m,l))^{1/2},
/// with and without the m > n contributions.
HaarSupPair haar_truncated_norm(const HaarCoefficients& coeffs,
                                const std::vector<HaarG>& family, double p);

}  // namespace pwnorm
