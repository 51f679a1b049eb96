#include "pwnorm/json_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pwnorm {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
    return json::parse(text);  // parse_error.what() carries line and column
}

std::vector<double> number_array(const json& j, const char* key) {
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw std::invalid_argument(std::string(key) + " must be an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) out.push_back(v.get<double>());
    return out;
}

StepFunction step_function_from(const json& j) {
    return StepFunction(j.at("level").get<int>(), number_array(j, "values"));
}

Partition partition_from(const json& j) {
    Partition partition;
    for (const auto& block : j.at("blocks")) {
        partition.blocks.emplace_back();
        for (const auto& v : block)
            partition.blocks.back().push_back(v.get<int>() - 1);  // wire format is 1-based
    }
    return partition;
}

Weights weights_from(const json& j) {
    Weights weights{number_array(j, "w")};
    validate_weights(weights);
    return weights;
}

PWPair pair_from(const json& j) {
    return {partition_from(j.at("partition")), weights_from(j.at("weights"))};
}

std::vector<DyadicInterval> intervals_from(const json& j) {
    std::vector<DyadicInterval> intervals;
    for (const auto& iv : j.at("intervals"))
        intervals.push_back({iv.at("level").get<int>(), iv.at("index").get<std::uint64_t>()});
    return intervals;
}

BasisSequence basis_from(const json& j) {
    const double p = j.at("p").get<double>();
    const std::string kind = j.value("kind", std::string("explicit"));
    if (kind == "indicators") return disjoint_indicators(intervals_from(j), p);
    if (kind == "disjoint") {
        std::vector<StepFunction> fns;
        for (const auto& f : j.at("functions")) fns.push_back(step_function_from(f));
        return disjointly_supported(fns, p).basis;
    }
    if (kind == "rademacher") return rademacher_basis(j.at("count").get<int>(), p);
    if (kind == "grid")
        return indicator_rademacher_grid(intervals_from(j), j.at("j").get<int>(), p);
    if (kind == "independent") {
        std::vector<DigitBlock> blocks;
        for (const auto& b : j.at("blocks")) {
            DigitBlock block;
            for (const auto& d : b.at("digits")) block.digits.push_back(d.get<int>());
            block.table = number_array(b, "table");
            blocks.push_back(std::move(block));
        }
        return independent_digit_functions(blocks, p);
    }
    if (kind == "haar") return haar_basis(j.at("max_level").get<int>(), p);
    if (kind == "explicit") {
        std::vector<StepFunction> fns;
        for (const auto& f : j.at("functions")) fns.push_back(step_function_from(f));
        BasisTags tags;
        if (j.contains("tags")) {
            for (const auto& t : j.at("tags")) {
                const std::string name = t.get<std::string>();
                if (name == "disjoint_supports") tags.disjoint_supports = true;
                else if (name == "independent") tags.independent = true;
                else if (name == "haar") tags.haar = true;
                else if (name == "normalized") tags.normalized = true;
                else throw std::invalid_argument("unknown basis tag: " + name);
            }
        }
        std::vector<std::vector<int>> groups;
        if (j.contains("groups")) {
            for (const auto& g : j.at("groups")) {
                groups.emplace_back();
                for (const auto& v : g) groups.back().push_back(v.get<int>());
            }
        }
        return BasisSequence(std::move(fns), p, tags, std::move(groups));
    }
    throw std::invalid_argument("unknown basis kind: " + kind);
}

// --- writer utilities ---

void write_doubles(std::string& out, std::span<const double> values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(values[i]);
    }
    out += ']';
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void write_step_function(std::string& out, const StepFunction& f, const std::string& indent) {
    out += indent + "{\"level\": " + std::to_string(f.level()) + ", \"values\": ";
    write_doubles(out, f.values());
    out += '}';
}

}  // namespace

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string fmt_double10(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9e", x);
    return buf;
}

StepFunction parse_step_function(const std::string& text) {
    return step_function_from(parse_text(text));
}

Coefficients parse_coefficients(const std::string& text) {
    Coefficients a = number_array(parse_text(text), "a");
    if (a.empty()) throw std::invalid_argument("coefficient vector is empty");
    return a;
}

Partition parse_partition(const std::string& text) {
    return partition_from(parse_text(text));
}

Weights parse_weights(const std::string& text) {
    return weights_from(parse_text(text));
}

PWPair parse_pair(const std::string& text) {
    return pair_from(parse_text(text));
}

Family parse_family(const std::string& text) {
    const json j = parse_text(text);
    Family family;
    for (const auto& pair : j.at("pairs")) family.pairs.push_back(pair_from(pair));
    if (family.pairs.empty()) throw std::invalid_argument("empty family");
    return family;
}

BasisSequence parse_basis(const std::string& text) {
    return basis_from(parse_text(text));
}

std::string step_function_json(const StepFunction& f) {
    std::string out;
    write_step_function(out, f, "");
    out += '\n';
    return out;
}

std::string coefficients_json(const Coefficients& a) {
    std::string out = "{\"a\": ";
    write_doubles(out, a);
    out += "}\n";
    return out;
}

std::string family_json(const Family& family) {
    std::string out = "{\n  \"pairs\": [\n";
    for (std::size_t i = 0; i < family.pairs.size(); ++i) {
        const auto& pair = family.pairs[i];
        out += "    {\"partition\": {\"blocks\": [";
        for (std::size_t b = 0; b < pair.partition.blocks.size(); ++b) {
            if (b) out += ", ";
            out += '[';
            for (std::size_t k = 0; k < pair.partition.blocks[b].size(); ++k) {
                if (k) out += ", ";
                out += std::to_string(pair.partition.blocks[b][k] + 1);
            }
            out += ']';
        }
        out += "]}, \"weights\": {\"w\": ";
        write_doubles(out, pair.weights.w);
        out += "}}";
        if (i + 1 < family.pairs.size()) out += ',';
        out += '\n';
    }
    out += "  ]\n}\n";
    return out;
}

std::string norming_functions_json(std::span<const NormingFunction> gs) {
    std::string out = "{\n  \"norming_functions\": [\n";
    for (std::size_t i = 0; i < gs.size(); ++i) {
        out += "    {\"q\": " + fmt_double(gs[i].q()) + ", \"level\": " +
               std::to_string(gs[i].fn().level()) + ", \"values\": ";
        write_doubles(out, gs[i].fn().values());
        out += '}';
        if (i + 1 < gs.size()) out += ',';
        out += '\n';
    }
    out += "  ]\n}\n";
    return out;
}

std::string reports_json(std::span<const ExperimentReport> reports) {
    std::string out = "{\n  \"reports\": [\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        out += "    {\n";
        out += "      \"name\": \"" + escape(r.name) + "\",\n";
        out += "      \"p\": " + fmt_double(r.p) + ",\n";
        out += "      \"n\": " + std::to_string(r.n) + ",\n";
        out += "      \"lhs\": " + fmt_double(r.lhs) + ",\n";
        out += "      \"rhs\": " + fmt_double(r.rhs) + ",\n";
        out += "      \"relation\": \"" + relation_name(r.relation) + "\",\n";
        out += "      \"tolerance\": " + fmt_double(r.tolerance) + ",\n";
        out += "      \"ratio\": " + fmt_double(r.ratio) + ",\n";
        out += std::string("      \"pass\": ") + (r.pass ? "true" : "false") + ",\n";
        out += "      \"metadata\": {";
        bool first = true;
        for (const auto& [key, value] : r.metadata) {
            if (!first) out += ", ";
            first = false;
            out += "\"" + escape(key) + "\": \"" + escape(value) + "\"";
        }
        out += "},\n";
        out += "      \"trials\": [\n";
        for (std::size_t t = 0; t < r.trials.size(); ++t) {
            const auto& row = r.trials[t];
            out += "        {\"lhs\": " + fmt_double(row.lhs) + ", \"rhs\": " + fmt_double(row.rhs) +
                   ", \"ratio\": " + fmt_double(row.ratio) + ", \"pass\": " +
                   (row.pass ? "true" : "false") + "}";
            if (t + 1 < r.trials.size()) out += ',';
            out += '\n';
        }
        out += "      ]\n";
        out += "    }";
        if (i + 1 < reports.size()) out += ',';
        out += '\n';
    }
    out += "  ]\n}\n";
    return out;
}

std::string reports_csv(std::span<const ExperimentReport> reports) {
    std::string out = "experiment,p,n,lhs,rhs,ratio,pass\n";
    for (const auto& r : reports) {
        for (const auto& row : r.trials) {
            out += escape(r.name) + ',' + fmt_double(r.p) + ',' + std::to_string(r.n) + ',' +
                   fmt_double(row.lhs) + ',' + fmt_double(row.rhs) + ',' + fmt_double(row.ratio) +
                   ',' + (row.pass ? "true" : "false") + '\n';
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        if (!out.good()) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace pwnorm
