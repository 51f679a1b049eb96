// pwnorm: partition-and-weights norms on dyadic step function systems.
//
// Subcommands: norm, square, verify, haar-table, sample-g. Exit codes:
// 0 success, 1 certification failure, 2 usage or validation error.

#include "pwnorm/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace {

using namespace pwnorm;

struct NormArgs {
    double p = 0.0;
    std::string coeffs_path;
    std::string family_path;
    std::string pair_path;
    bool verbose = false;
};

int run_norm(const NormArgs& args) {
    const Coefficients a = parse_coefficients(read_file(args.coeffs_path));
    if (args.family_path.empty() == args.pair_path.empty())
        throw std::invalid_argument("provide exactly one of --family or --pair");
    if (!args.pair_path.empty()) {
        const PWPair pair = parse_pair(read_file(args.pair_path));
        std::cout << fmt_double(pw_norm(a, pair, args.p)) << "\n";
        return 0;
    }
    const Family family = parse_family(read_file(args.family_path));
    if (args.verbose) {
        for (std::size_t i = 0; i < family.pairs.size(); ++i)
            std::cout << "pair " << i << ": " << fmt_double(pw_norm(a, family.pairs[i], args.p))
                      << "\n";
    }
    std::cout << fmt_double(family_norm(a, family, args.p)) << "\n";
    return 0;
}

struct SquareArgs {
    std::string coeffs_path;
    std::string basis_path;
};

int run_square(const SquareArgs& args) {
    const Coefficients a = parse_coefficients(read_file(args.coeffs_path));
    const BasisSequence basis = parse_basis(read_file(args.basis_path));
    std::cout << fmt_double(square_function_norm(a, basis)) << "\n";
    return 0;
}

struct VerifyArgs {
    bool all = false;
    std::string experiment;
    double p = 0.0;  // 0 = full grid
    std::uint64_t seed = 7;
    int trials = 200;
    int max_level = 5;
    std::string basis_path;
    std::string out_path;
    std::string format = "json";
};

const std::vector<std::string> kExperiments = {"theorem1", "lp",       "mixed",     "rosenthal",
                                               "discrete", "haar",     "khintchine"};

bool wants(const VerifyArgs& args, const std::string& name) {
    return args.all || args.experiment == name;
}

std::vector<ExperimentReport> run_roster(const VerifyArgs& args) {
    if (!args.all &&
        std::find(kExperiments.begin(), kExperiments.end(), args.experiment) == kExperiments.end())
        throw std::invalid_argument("unknown experiment name: " + args.experiment);

    ExperimentConfig config;
    config.trials = args.trials;
    config.seed = args.seed;

    std::vector<double> ps = {2.5, 3.0, 4.0, 6.0};
    if (args.p != 0.0) ps = {args.p};

    std::vector<ExperimentReport> reports;
    for (double p : ps) {
        std::vector<NamedBasis> roster;
        if (!args.basis_path.empty())
            roster.push_back({"user", parse_basis(read_file(args.basis_path))});
        else
            roster = standard_bases(p);

        if (wants(args, "theorem1"))
            for (const auto& nb : roster) reports.push_back(certify_theorem1(nb.basis, config, nb.name));
        if (wants(args, "lp"))
            for (const auto& nb : roster)
                if (nb.basis.tags().disjoint_supports)
                    reports.push_back(certify_lp_isometry(nb.basis, config, nb.name));
        if (wants(args, "mixed") && args.basis_path.empty())
            reports.push_back(certify_mixed_isometry({{1, 0}, {1, 1}}, 3, p, config));
        if (wants(args, "rosenthal"))
            for (const auto& nb : roster)
                if (nb.basis.tags().independent && nb.basis.tags().normalized)
                    reports.push_back(certify_rosenthal_bounds(nb.basis, config, nb.name));
        if (wants(args, "discrete"))
            for (const auto& nb : roster)
                if (nb.basis.tags().normalized)
                    reports.push_back(certify_discrete_partition(nb.basis, config, nb.name));
        if (wants(args, "haar") && args.basis_path.empty()) {
            Rng rng(config.seed);
            reports.push_back(certify_haar_closed_forms(
                args.max_level, p, standard_haar_family(args.max_level, p, rng), config));
        }
        if (wants(args, "khintchine"))
            for (const auto& nb : roster)
                reports.push_back(khintchine_ratio(nb.basis, config, nb.name,
                                                   /*rademacher_checks=*/nb.name == "rademacher"));
    }
    if (reports.empty())
        throw std::invalid_argument("experiment " + args.experiment +
                                    " is not applicable to the given basis");
    return reports;
}

int run_verify(const VerifyArgs& args) {
    const std::vector<ExperimentReport> reports = run_roster(args);
    const std::string payload = args.format == "csv" ? reports_csv(reports) : reports_json(reports);
    if (args.out_path.empty())
        std::cout << payload;
    else
        atomic_write(args.out_path, payload);
    bool all_pass = true;
    for (const auto& r : reports) {
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << " lhs=" << fmt_double10(r.lhs)
                  << " rhs=" << fmt_double10(r.rhs) << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

struct HaarTableArgs {
    int n = 1;
    double p = 4.0;
    std::string b_csv;
    int max_m = -2;  // default n + 2
    std::string out_path;
};

int run_haar_table(const HaarTableArgs& args) {
    HaarG hg;
    hg.n = args.n;
    hg.p = args.p;
    if (args.b_csv.empty()) {
        const std::size_t count = std::size_t{1} << (args.n - 1);
        hg.b.assign(count, std::pow(static_cast<double>(count), -1.0 / dual_exponent(args.p)));
    } else {
        std::stringstream ss(args.b_csv);
        std::string item;
        while (std::getline(ss, item, ',')) hg.b.push_back(std::stod(item));
    }
    validate_haar_g(hg);
    const int max_m = args.max_m == -2 ? args.n + 2 : args.max_m;
    const NormingFunction g = haar_g(hg);
    std::string csv = "m,l,closed_form,direct_integral,abs_diff\n";
    for (int m = 0; m <= max_m; ++m) {
        const int l_count = m == 0 ? 1 : 1 << (m - 1);
        for (int l = 0; l < l_count; ++l) {
            const double closed = haar_weight_closed_form(hg, m, l);
            const StepFunction h = haar({m, l}, args.p);
            const double direct = integral(g.fn() * (h * h));
            csv += std::to_string(m) + ',' + std::to_string(l) + ',' + fmt_double10(closed) + ',' +
                   fmt_double10(direct) + ',' + fmt_double10(std::fabs(closed - direct)) + '\n';
        }
    }
    if (args.out_path.empty())
        std::cout << csv;
    else
        atomic_write(args.out_path, csv);
    return 0;
}

struct SampleGArgs {
    double p = 4.0;
    std::uint64_t seed = 7;
    int level = 6;
    int count = 8;
    std::string out_path;
};

int run_sample_g(const SampleGArgs& args) {
    Rng rng(args.seed);
    const auto gs = sample_g(args.count, args.level, args.p, rng);
    const std::string payload = norming_functions_json(gs);
    if (args.out_path.empty())
        std::cout << payload;
    else
        atomic_write(args.out_path, payload);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partition-and-weights norms on dyadic step function systems"};
    app.require_subcommand(1);

    NormArgs norm_args;
    auto* norm_cmd = app.add_subcommand("norm", "evaluate a partition-weight family norm");
    norm_cmd->add_option("--p", norm_args.p, "exponent p > 2")->required();
    norm_cmd->add_option("--coeffs", norm_args.coeffs_path, "coefficients JSON file")->required();
    norm_cmd->add_option("--family", norm_args.family_path, "family JSON file");
    norm_cmd->add_option("--pair", norm_args.pair_path, "single pair JSON file");
    norm_cmd->add_flag("--verbose", norm_args.verbose, "print the per-pair breakdown");

    SquareArgs square_args;
    auto* square_cmd = app.add_subcommand("square", "evaluate the square function norm");
    square_cmd->add_option("--coeffs", square_args.coeffs_path, "coefficients JSON file")->required();
    square_cmd->add_option("--basis", square_args.basis_path, "basis descriptor JSON file")->required();

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "run certification experiments");
    verify_cmd->add_flag("--all", verify_args.all, "run every experiment");
    verify_cmd->add_option("--experiment", verify_args.experiment, "single experiment name");
    verify_cmd->add_option("--p", verify_args.p, "restrict to one exponent (default grid 2.5,3,4,6)");
    verify_cmd->add_option("--seed", verify_args.seed, "random seed (default 7)");
    verify_cmd->add_option("--trials", verify_args.trials, "trials per report (default 200)");
    verify_cmd->add_option("--max-level", verify_args.max_level, "haar family depth (default 5)");
    verify_cmd->add_option("--basis", verify_args.basis_path, "user basis descriptor JSON file");
    verify_cmd->add_option("--out", verify_args.out_path, "output file (default stdout)");
    verify_cmd->add_option("--format", verify_args.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    HaarTableArgs haar_args;
    auto* haar_cmd = app.add_subcommand("haar-table", "closed-form vs integrated haar weights");
    haar_cmd->add_option("--n", haar_args.n, "dual function level parameter")->required();
    haar_cmd->add_option("--p", haar_args.p, "exponent p > 2")->required();
    haar_cmd->add_option("--b", haar_args.b_csv, "comma-separated b vector (default uniform)");
    haar_cmd->add_option("--max-m", haar_args.max_m, "largest haar level (default n + 2)");
    haar_cmd->add_option("--out", haar_args.out_path, "output file (default stdout)");

    SampleGArgs sample_args;
    auto* sample_cmd = app.add_subcommand("sample-g", "draw random dual functions");
    sample_cmd->add_option("--p", sample_args.p, "exponent p > 2")->required();
    sample_cmd->add_option("--seed", sample_args.seed, "random seed (default 7)");
    sample_cmd->add_option("--level", sample_args.level, "grid level (default 6)");
    sample_cmd->add_option("--count", sample_args.count, "number of samples (default 8)");
    sample_cmd->add_option("--out", sample_args.out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (norm_cmd->parsed()) return run_norm(norm_args);
        if (square_cmd->parsed()) return run_square(square_args);
        if (verify_cmd->parsed()) return run_verify(verify_args);
        if (haar_cmd->parsed()) return run_haar_table(haar_args);
        if (sample_cmd->parsed()) return run_sample_g(sample_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
