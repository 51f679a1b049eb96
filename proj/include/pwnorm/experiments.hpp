#pragma once

#include "pwnorm/bases.hpp"

#include <map>
#include <string>

namespace pwnorm {

enum class Relation { equal, leq, geq };

std::string relation_name(Relation relation);

struct TrialRow {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

/// Outcome of one certification run. lhs/rhs hold the worst-case trial of
/// the declared relation; per-trial rows and free-form metadata (seeds,
/// levels, measured ratios) ride along for the serializers.
struct ExperimentReport {
    std::string name;
    double p = 0.0;
    int n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::equal;
    double tolerance = 0.0;
    double ratio = 0.0;
    bool pass = false;
    std::map<std::string, std::string> metadata;
    std::vector<TrialRow> trials;
};

struct ExperimentConfig {
    int trials = 200;
    std::uint64_t seed = 0;
    int sample_level = 6;      // grid level of sampled norming functions
    int family_samples = 64;   // size of the sampled dual family
    int dual_grid_steps = 200; // brute-force grid used when N <= 4
};

/// family_norm over {optimal g} + sampled duals reproduces the square
/// function norm; sampled-only families stay below it and grow monotonically.
ExperimentReport certify_theorem1(const BasisSequence& basis, const ExperimentConfig& config,
                                  const std::string& basis_name = "");

/// Disjoint supports: square function norm equals the ell_p norm; for
/// indicator systems, conditioning g on the supports leaves weights fixed.
ExperimentReport certify_lp_isometry(const BasisSequence& basis, const ExperimentConfig& config,
                                     const std::string& basis_name = "");

/// Indicator-times-Rademacher grid: square function norm equals the mixed
/// (sum ell_2)_{ell_p} norm of the grouped coefficients.
ExperimentReport certify_mixed_isometry(const std::vector<DyadicInterval>& intervals,
                                        int j_count, double p, const ExperimentConfig& config);

/// Independent systems: max{(sum a_n^2 ||x_n||_2^2)^{1/2}, ell_p} lower
/// bound, certified through g = 1 and the max-c construction; the upper
/// bound constant is measured and reported.
ExperimentReport certify_rosenthal_bounds(const BasisSequence& basis,
                                          const ExperimentConfig& config,
                                          const std::string& basis_name = "");

/// The discrete partition with weight one is always admissible: its value is
/// the ell_p norm, dominated by the square function norm; the max-c route
/// reaches ell_p, cross-checked by grid search for N <= 4.
ExperimentReport certify_discrete_partition(const BasisSequence& basis,
                                            const ExperimentConfig& config,
                                            const std::string& basis_name = "");

/// Haar system: closed-form weights against direct integration, and the
/// truncated sup against the full one, with measured sandwich constants.
ExperimentReport certify_haar_closed_forms(int max_level, double p,
                                           const std::vector<HaarG>& family,
                                           const ExperimentConfig& config);

/// Measured ratio expansion_norm / square_function_norm across trials. For
/// the Rademacher system the square function norm must equal ell_2 exactly.
ExperimentReport khintchine_ratio(const BasisSequence& basis, const ExperimentConfig& config,
                                  const std::string& basis_name = "",
                                  bool rademacher_checks = false);

struct NamedBasis {
    std::string name;
    BasisSequence basis;
};

/// The stock generated systems every certification runs over.
std::vector<NamedBasis> standard_bases(double p);

/// Uniform plus two random admissible b vectors for each n = 1..max_level.
std::vector<HaarG> standard_haar_family(int max_level, double p, Rng& rng);

/// Standard-normal coefficients, every fourth draw sparsified, never all
/// zero.
Coefficients random_coefficients(int n, Rng& rng, int trial_index);

}  // namespace pwnorm
