#pragma once

#include "pwnorm/experiments.hpp"

#include <span>
#include <string>

namespace pwnorm {

/// Scientific notation with 17 significant digits; round-trips any double
/// and keeps report files byte-stable.
std::string fmt_double(double x);

/// 10 significant digits, for human-readable tables.
std::string fmt_double10(double x);

// --- parsing (JSON text in, validated domain objects out) ---

StepFunction parse_step_function(const std::string& text);
Coefficients parse_coefficients(const std::string& text);
Partition parse_partition(const std::string& text);  // blocks carry 1-based indices
Weights parse_weights(const std::string& text);
PWPair parse_pair(const std::string& text);
Family parse_family(const std::string& text);

/// Basis descriptors: {"kind": "indicators" | "disjoint" | "rademacher" |
/// "grid" | "independent" | "haar" | "explicit", ...} plus "p".
BasisSequence parse_basis(const std::string& text);

// --- serialization (hand-rolled writers, stable key order) ---

std::string step_function_json(const StepFunction& f);
std::string coefficients_json(const Coefficients& a);
std::string family_json(const Family& family);
std::string norming_functions_json(std::span<const NormingFunction> gs);
std::string reports_json(std::span<const ExperimentReport> reports);
std::string reports_csv(std::span<const ExperimentReport> reports);

// --- files ---

std::string read_file(const std::string& path);
void atomic_write(const std::string& path, const std::string& content);

}  // namespace pwnorm
