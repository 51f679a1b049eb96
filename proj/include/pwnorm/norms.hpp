#pragma once

#include "pwnorm/step_function.hpp"

namespace pwnorm {

/// Finitely supported coefficient sequence (a_n), n = 0..N-1.
using Coefficients = std::vector<double>;

/// Partition of the index set {0,..,N-1} into disjoint non-empty blocks.
struct Partition {
    std::vector<std::vector<int>> blocks;

    /// Single block {0,..,n-1}.
    static Partition trivial(int n);
    /// All singletons.
    static Partition discrete(int n);
};

void validate_partition(const Partition& partition, int n);

/// Weight vector with entries in (0, 1] (a 1e-10 slack is allowed at the
/// top end for weights that arrive through float-rounded integrals).
struct Weights {
    std::vector<double> w;
};

void validate_weights(const Weights& weights);

struct PWPair {
    Partition partition;
    Weights weights;
};

struct Family {
    std::vector<PWPair> pairs;
};

struct BasisTags {
    bool disjoint_supports = false;
    bool independent = false;
    bool haar = false;
    bool normalized = false;
};

/// Finite system (x_n) of step functions together with the exponent p > 2 it
/// lives under and structural tags. Tags are validated on construction:
/// normalized means lp_norm(x_n, p) = 1 to 1e-10, disjoint_supports means the
/// supports are pairwise disjoint. An optional row grouping (disjoint index
/// blocks covering 0..N-1) supports doubly-indexed systems.
class BasisSequence {
public:
    BasisSequence(std::vector<StepFunction> functions, double p, BasisTags tags,
                  std::vector<std::vector<int>> groups = {});

    int size() const { return static_cast<int>(functions_.size()); }
    const StepFunction& function(int n) const { return functions_[static_cast<std::size_t>(n)]; }
    const std::vector<StepFunction>& functions() const { return functions_; }
    double p() const { return p_; }
    const BasisTags& tags() const { return tags_; }
    const std::vector<std::vector<int>>& groups() const { return groups_; }

private:
    std::vector<StepFunction> functions_;
    double p_;
    BasisTags tags_;
    std::vector<std::vector<int>> groups_;
};

/// Partition-weight norm (sum_i (sum_{j in N_i} a_j^2 w_j^2)^{p/2})^{1/p}.
double pw_norm(const Coefficients& a, const PWPair& pair, double p);

/// sup (= max) of pw_norm over a finite non-empty family of pairs.
double family_norm(const Coefficients& a, const Family& family, double p);

/// (sum |a_n|^p)^{1/p} for p >= 1.
double ell_p_norm(const Coefficients& a, double p);

/// (sum_n (sum_j a_{n,j}^2)^{p/2})^{1/p}: the ell_p sum of ell_2 group norms.
double mixed_norm(const std::vector<Coefficients>& groups, double p);

/// The step function sum_n a_n^2 x_n^2.
StepFunction square_function(const Coefficients& a, const BasisSequence& basis);

/// || sum a_n^2 x_n^2 ||_{p/2}^{1/2}, by exact grid integration.
double square_function_norm(const Coefficients& a, const BasisSequence& basis);

/// || sum a_n x_n ||_p, the plain norm of the expansion.
double expansion_norm(const Coefficients& a, const BasisSequence& basis);

}  // namespace pwnorm
