#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "walsheq/combinatorics.hpp"
#include "walsheq/functions.hpp"
#include "walsheq/perturbation.hpp"
#include "walsheq/search.hpp"

namespace walsheq {

inline constexpr const char* tool_version = "0.1.0";

using json = nlohmann::ordered_json;

inline json to_json(const CountResult& r) {
    json j;
    j["set_kind"] = std::string(to_string(r.set_kind));
    j["n"] = r.n;
    j["v"] = r.v ? json(*r.v) : json(nullptr);
    j["count"] = r.count;
    j["ratio8"] = r.ratio8;
    j["ratio8_logadj"] = r.ratio8_logadj;
    j["bound"] = r.bound ? json(*r.bound) : json(nullptr);
    j["bound_status"] = std::string(to_string(r.bound_status));
    j["verdict"] = r.verdict ? json(*r.verdict ? "pass" : "fail") : json(nullptr);
    return j;
}

inline json to_json(const NormResult& r) {
    json j;
    j["p"] = r.p;
    j["value"] = r.value;
    j["method"] = std::string(to_string(r.method));
    j["grid_s_points"] = r.grid_s_points;
    j["grid_t_cells"] = r.grid_t_cells;
    j["exact"] = r.exact;
    return j;
}

inline json to_json(const PerturbationReport& r) {
    json j;
    j["flavor"] = r.flavor == DeviationFlavor::xor_metric ? "xor" : "abs";
    j["n"] = r.n;
    j["max_deviation"] = r.max_deviation;
    j["offset_limit"] = r.offset_limit;
    j["count_sigma"] = r.count_sigma;
    j["count_pi"] = r.count_pi;
    j["union_count"] = r.union_count;
    j["factor"] = r.factor;
    j["triples_checked"] = r.triples_checked;
    j["inclusion_failures"] = r.inclusion_failures;
    j["identity_failures"] = r.identity_failures;
    j["inclusion_holds"] = r.inclusion_holds;
    j["union_bound_holds"] = r.union_bound_holds;
    j["inequality_holds"] = r.inequality_holds;
    j["slack"] = r.slack ? json(*r.slack) : json(nullptr);
    return j;
}

inline json to_json(const SubsetExampleReport& r) {
    json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["seed"] = r.seed;
    j["bit_set"] = r.bit_set;
    j["pi_n_linear"] = r.pi_n_linear;
    j["count_sigma"] = r.count_sigma;
    j["count_composed"] = r.count_composed;
    j["count_pi_n"] = r.count_pi_n;
    j["count_identity"] = r.count_identity;
    j["max_deviation"] = r.max_deviation;
    j["deviation_below_2m"] = r.deviation_below_2m;
    j["perturbation_factor"] = r.perturbation.factor;
    j["perturbation_holds"] = r.perturbation.all_hold();
    j["composition_invariant"] = r.composition_invariant();
    j["linear_invariant"] = r.linear_invariant();
    j["chained_bound"] = r.chained_bound;
    j["bound_holds"] = r.bound_holds;
    j["ratio8"] = r.ratio8;
    j["ratio8_bound"] = r.ratio8_bound;
    j["density"] = r.density;
    j["density_threshold"] = r.density_threshold;
    j["all_hold"] = r.all_hold();
    return j;
}

inline json to_json(const DeviationIdentityReport& r) {
    json j;
    j["xor_triples"] = r.xor_triples;
    j["xor_failures"] = r.xor_failures;
    j["abs_triples"] = r.abs_triples;
    j["abs_failures"] = r.abs_failures;
    j["holds"] = r.holds();
    return j;
}

/// Search report: {n, mode, max_count, bound_3n, conjecture_holds,
/// nodes_visited, wall_seconds, witness} plus coverage details.
inline json search_report(const SearchOutcome& o, std::string_view goal, std::string_view strategy) {
    json j;
    j["n"] = o.checkpoint.n;
    j["mode"] = "pruned";
    j["max_count"] = o.checkpoint.best_count;
    j["bound_3n"] = pow_u64(3, o.checkpoint.n);
    j["conjecture_holds"] = o.conjecture_holds();
    j["nodes_visited"] = o.checkpoint.nodes_visited;
    j["wall_seconds"] = o.wall_seconds;
    j["witness"] = o.checkpoint.witness;
    j["goal"] = std::string(goal);
    j["strategy"] = std::string(strategy);
    j["complete"] = o.complete;
    j["maximizer_count"] = o.maximizer_count ? json(*o.maximizer_count) : json(nullptr);
    j["canonical_classes_covered"] = to_decimal(o.checkpoint.canonical_class_cursor);
    j["canonical_classes_total"] = to_decimal(o.classes_total);
    j["coverage"] = o.coverage();
    return j;
}

inline json search_report(const ExhaustiveResult& r, double wall_seconds) {
    json j;
    j["n"] = r.n;
    j["mode"] = "exhaustive";
    j["set"] = std::string(to_string(r.set));
    j["max_count"] = r.max_count;
    j["bound_3n"] = pow_u64(3, r.n);
    j["conjecture_holds"] = r.set != SetKind::B || r.max_count <= pow_u64(3, r.n);
    j["nodes_visited"] = r.permutations;
    j["wall_seconds"] = wall_seconds;
    j["witness"] = r.maximizers.empty() ? json::array() : json(r.maximizers.front());
    j["maximizer_count"] = r.maximizers.size();
    j["maximizers"] = r.maximizers;
    return j;
}

/// Report envelope. `results` is an array of flat-ish objects.
struct Report {
    std::string command;
    json parameters = json::object();
    json results = json::array();
    double wall_seconds = 0.0;

    json to_json() const {
        json j;
        j["command"] = command;
        j["parameters"] = parameters;
        j["results"] = results;
        j["tool_version"] = tool_version;
        j["timing"] = {{"wall_seconds", wall_seconds}};
        return j;
    }
};

namespace detail {

inline std::string csv_cell(const json& value) {
    std::string text;
    if (value.is_null()) {
        text = "";
    } else if (value.is_string()) {
        text = value.get<std::string>();
    } else if (value.is_array()) {
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (i) text.push_back(';');
            text += csv_cell(value[i]);
        }
    } else {
        text = value.dump();
    }
    if (text.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : text) {
            if (c == '"') quoted.push_back('"');
            quoted.push_back(c);
        }
        return quoted + "\"";
    }
    return text;
}

}  // namespace detail

/// One CSV row per result; columns are the union of result keys in first-seen order.
inline std::string to_csv(const Report& report) {
    std::vector<std::string> columns;
    for (const auto& row : report.results) {
        for (const auto& [key, value] : row.items()) {
            if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
        }
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : report.results) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ",";
            if (row.contains(columns[i])) out << detail::csv_cell(row.at(columns[i]));
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace walsheq
