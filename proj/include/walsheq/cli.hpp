#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "walsheq/combinatorics.hpp"
#include "walsheq/functions.hpp"
#include "walsheq/ordering_spec.hpp"
#include "walsheq/perturbation.hpp"
#include "walsheq/report.hpp"
#include "walsheq/search.hpp"

namespace walsheq::cli {

enum ExitCode : int { success = 0, verification_failed = 1, usage_error = 2 };

struct CommonOptions {
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::optional<double> budget_seconds;
    std::string checkpoint;

    unsigned thread_count() const { return threads ? threads : default_thread_count(); }
};

namespace detail {

inline SetKind parse_set(const std::string& s) {
    static const std::map<std::string, SetKind> names = {
        {"A", SetKind::A},         {"A_v", SetKind::A_v},         {"A_tilde", SetKind::A_tilde},
        {"B", SetKind::B},         {"A_hat", SetKind::A_hat_v},   {"A_hat_v", SetKind::A_hat_v},
        {"psi", SetKind::psi_pairs}, {"psi_pairs", SetKind::psi_pairs}};
    const auto it = names.find(s);
    if (it == names.end()) throw CLI::ValidationError("--set", "unknown set '" + s + "'");
    return it->second;
}

inline std::vector<std::int64_t> load_psi(const std::string& path, unsigned n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open psi file " + path);
    std::vector<std::int64_t> psi{std::istream_iterator<std::int64_t>(in), std::istream_iterator<std::int64_t>()};
    if (!in.eof()) throw std::invalid_argument("psi file " + path + ": expected whitespace-separated integers");
    if (psi.size() != block_size(n)) {
        throw std::invalid_argument("psi file " + path + ": has " + std::to_string(psi.size()) + " values, expected 2^" +
                                    std::to_string(n));
    }
    return psi;
}

inline std::vector<std::int64_t> make_psi(const std::string& how, unsigned n, std::uint64_t seed) {
    if (how == "identity") {
        std::vector<std::int64_t> psi(block_size(n));
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = static_cast<std::int64_t>(i);
        return psi;
    }
    if (how == "random") {
        Rng rng(seed);
        return random_psi(n, rng);
    }
    if (how.rfind("file:", 0) == 0) return load_psi(how.substr(5), n);
    throw CLI::ValidationError("--psi", "expected identity, random or file:PATH");
}

inline void write_output(const Report& report, const CommonOptions& common, std::ostream& out) {
    const std::string text = common.format == "csv" ? to_csv(report) : report.to_json().dump(2) + "\n";
    if (common.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(common.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + common.out);
    file << text;
}

inline json row_with(json row, std::initializer_list<std::pair<const char*, json>> extra) {
    json merged;
    for (auto& [key, value] : extra) merged[key] = value;
    for (auto& [key, value] : row.items()) merged[key] = value;
    return merged;
}

inline std::optional<SearchCheckpoint> read_checkpoint(const std::string& path) {
    if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_checkpoint(buffer.str());
}

inline void write_checkpoint(const std::string& path, const SearchCheckpoint& c) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write checkpoint " + tmp);
        file << serialize_checkpoint(c);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// Runs one invocation; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Walsh/trigonometric equivalence toolkit", "walsheq"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    CommonOptions common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", common.out, "write the report to PATH instead of stdout");
        sub->add_option("--seed", common.seed, "seed for random instances");
        sub->add_option("--threads", common.threads, "worker threads (0: available parallelism)");
        sub->add_option("--budget-seconds", common.budget_seconds, "wall-clock budget");
        sub->add_option("--checkpoint", common.checkpoint, "checkpoint file (search)");
    };

    // count
    auto* count = app.add_subcommand("count", "count a witness set");
    std::string count_set = "A";
    unsigned count_n = 0;
    std::string count_ordering = "identity";
    std::int64_t count_v = 0;
    std::string count_algorithm = "grouped";
    std::string count_psi = "identity";
    count->add_option("--set", count_set, "A | A_v | A_tilde | B | A_hat | psi");
    count->add_option("--n", count_n, "block exponent")->required()->check(CLI::Range(0u, max_ordering_bits - 1));
    count->add_option("--ordering", count_ordering, "ordering spec");
    count->add_option("--v", count_v, "offset for A_v / A_hat");
    count->add_option("--algorithm", count_algorithm, "enumerate or grouped")
        ->check(CLI::IsMember({"enumerate", "grouped"}));
    count->add_option("--psi", count_psi, "identity | random | file:PATH (psi set)");
    add_common(count);

    // norm
    auto* norm = app.add_subcommand("norm", "L_p norm of the key function");
    unsigned norm_n = 0;
    std::string norm_ordering = "identity";
    std::string norm_variant = "full";
    double norm_p = 4.0;
    std::string norm_method = "grid";
    std::size_t norm_grid_s = 0;
    std::size_t norm_grid_t = 0;
    bool norm_exact = false;
    bool norm_rp = false;
    norm->add_option("--n", norm_n, "block exponent")->required()->check(CLI::Range(0u, 12u));
    norm->add_option("--ordering", norm_ordering, "ordering spec");
    norm->add_option("--variant", norm_variant, "full or tail")->check(CLI::IsMember({"full", "tail"}));
    norm->add_option("--p", norm_p, "exponent");
    norm->add_option("--method", norm_method, "grid | count | both")->check(CLI::IsMember({"grid", "count", "both"}));
    norm->add_option("--grid-s", norm_grid_s, "s points (0: default)");
    norm->add_option("--grid-t", norm_grid_t, "t cells (0: default)");
    norm->add_flag("--require-exact", norm_exact, "fail unless the rule is exact");
    norm->add_flag("--rp-bound", norm_rp, "also report the Dirichlet lower bound on r_p");
    add_common(norm);

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string verify_suite = "all";
    unsigned verify_n = 3;
    unsigned verify_samples = 10;
    unsigned verify_m = 2;
    std::vector<unsigned> verify_bits;
    verify->add_option("--suite", verify_suite, "bounds | perturbation | subset | identities | all")
        ->check(CLI::IsMember({"bounds", "perturbation", "subset", "identities", "all"}));
    verify->add_option("--n", verify_n, "block exponent")->check(CLI::Range(0u, 10u));
    verify->add_option("--samples", verify_samples, "random instances per check");
    verify->add_option("--m", verify_m, "scrambled bit count (subset suite)");
    verify->add_option("--bits", verify_bits, "explicit scrambled bits (subset suite)")->delimiter(',');
    add_common(verify);

    // search
    auto* search = app.add_subcommand("search", "maximum of #B over permutations");
    unsigned search_n = 3;
    std::string search_mode = "pruned";
    std::string search_goal = "verify";
    std::string search_strategy = "fiber";
    std::string search_set = "B";
    unsigned search_split = 4;
    std::optional<std::uint64_t> search_node_budget;
    std::uint64_t search_interval = 0;
    search->add_option("--n", search_n, "block exponent")->check(CLI::Range(0u, pruned_search_max_bits));
    search->add_option("--mode", search_mode, "exhaustive or pruned")->check(CLI::IsMember({"exhaustive", "pruned"}));
    search->add_option("--goal", search_goal, "verify or maximize")->check(CLI::IsMember({"verify", "maximize"}));
    search->add_option("--strategy", search_strategy, "simple or fiber")->check(CLI::IsMember({"simple", "fiber"}));
    search->add_option("--set", search_set, "B or A (exhaustive mode)")->check(CLI::IsMember({"B", "A"}));
    search->add_option("--split-depth", search_split, "prefix length of parallel subtrees");
    search->add_option("--node-budget", search_node_budget, "stop after this many nodes");
    search->add_option("--checkpoint-interval", search_interval, "nodes between checkpoint writes");
    add_common(search);

    // decay
    auto* decay = app.add_subcommand("decay", "count / 8^n table");
    unsigned decay_n_max = 8;
    std::string decay_ordering = "identity";
    std::string decay_set = "A";
    decay->add_option("--n-max", decay_n_max, "largest block exponent")->check(CLI::Range(0u, 10u));
    decay->add_option("--ordering", decay_ordering, "ordering spec (built on the needed bits)");
    decay->add_option("--set", decay_set, "A or A_tilde")->check(CLI::IsMember({"A", "A_tilde"}));
    add_common(decay);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return success;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << "\n";
        return success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }

    const auto start = std::chrono::steady_clock::now();
    Report report;
    bool failed = false;
    try {
        CountOptions count_options;
        count_options.threads = common.thread_count();
        count_options.algorithm = CountAlgorithm::grouped;

        if (count->parsed()) {
            report.command = "count";
            const SetKind set = detail::parse_set(count_set);
            count_options.algorithm =
                count_algorithm == "enumerate" ? CountAlgorithm::enumerate : CountAlgorithm::grouped;
            report.parameters = {{"set", count_set}, {"n", count_n}, {"ordering", count_ordering},
                                 {"v", count_v},     {"algorithm", count_algorithm}};
            CountResult result;
            if (set == SetKind::psi_pairs) {
                report.parameters["ordering"] = nullptr;
                report.parameters["psi"] = count_psi;
                report.parameters["seed"] = common.seed;
                const auto psi = detail::make_psi(count_psi, count_n, common.seed);
                result = count_psi_pairs(count_n, psi);
            } else {
                const unsigned bits = set == SetKind::A_tilde ? count_n + 1 : count_n;
                const Ordering sigma = parse_ordering_spec(count_ordering, bits);
                switch (set) {
                    case SetKind::A:
                    case SetKind::A_v:
                        if (count_v < 0) throw CLI::ValidationError("--v", "must be non-negative for A_v");
                        result = count_A(count_n, sigma, static_cast<Index>(count_v), count_options);
                        break;
                    case SetKind::A_tilde: result = count_A_tilde(count_n, sigma, count_options); break;
                    case SetKind::B: result = count_B(count_n, sigma); break;
                    default: result = count_A_hat(count_n, sigma, count_v, count_options); break;
                }
            }
            failed = result.violated();
            report.results.push_back(to_json(result));
        } else if (norm->parsed()) {
            report.command = "norm";
            const KeyVariant variant = norm_variant == "full" ? KeyVariant::full : KeyVariant::tail;
            const unsigned bits = variant == KeyVariant::full ? norm_n : norm_n + 1;
            const KeyFunctionSpec spec(norm_n, parse_ordering_spec(norm_ordering, bits), variant);
            report.parameters = {{"n", norm_n},         {"ordering", norm_ordering}, {"variant", norm_variant},
                                 {"p", norm_p},         {"method", norm_method},     {"grid_s", norm_grid_s},
                                 {"grid_t", norm_grid_t}};
            std::optional<double> grid_value, count_value;
            if (norm_method != "count") {
                QuadratureOptions q;
                q.grid_s = norm_grid_s;
                q.grid_t = norm_grid_t;
                q.require_exact = norm_exact;
                q.threads = common.thread_count();
                const NormResult r = lp_norm_key(spec, norm_p, q);
                grid_value = r.value;
                report.results.push_back(to_json(r));
            }
            if (norm_method != "grid") {
                const NormResult r = lp_norm_by_count(spec, norm_p, count_options);
                count_value = r.value;
                report.results.push_back(to_json(r));
            }
            if (grid_value && count_value) {
                // compare the p-th powers, which are the exact integers
                const double a = std::pow(*grid_value, norm_p);
                const double b = std::pow(*count_value, norm_p);
                const double rel = b == 0.0 ? std::abs(a) : std::abs(a - b) / b;
                const bool agree = rel <= 1e-9;
                for (auto& row : report.results) {
                    row["relative_difference"] = rel;
                    row["agree"] = agree;
                }
                failed = !agree;
            }
            if (norm_rp) {
                for (auto& row : report.results) {
                    row["rp_lower_bound"] =
                        dirichlet_lp_norm(spec.term_count(), norm_p) / row.at("value").get<double>();
                }
            }
        } else if (verify->parsed()) {
            report.command = "verify";
            report.parameters = {{"suite", verify_suite}, {"n", verify_n},       {"samples", verify_samples},
                                 {"seed", common.seed},   {"m", verify_m},       {"bits", verify_bits}};
            const bool all = verify_suite == "all";
            const unsigned n = verify_n;
            if (all || verify_suite == "bounds") {
                auto push = [&](const char* check, const std::string& label, const CountResult& r) {
                    failed = failed || r.violated();
                    report.results.push_back(detail::row_with(to_json(r), {{"suite", "bounds"}, {"check", check},
                                                                          {"instance", label},
                                                                          {"pass", !r.violated()}}));
                };
                push("B_identity", "identity", count_B(n, identity_ordering(n)));
                for (auto name : {NamedOrdering::identity, NamedOrdering::original_walsh, NamedOrdering::kronecker}) {
                    push("A_linear", std::string(to_string(name)),
                         count_A(n, make_named_ordering(name, n), 0, count_options));
                }
                Rng rng(common.seed);
                for (unsigned i = 0; i < verify_samples; ++i) {
                    push("A_linear", "random_linear#" + std::to_string(i),
                         count_A(n, random_linear_ordering(n, rng), 0, count_options));
                }
                push("A_tilde_piecewise", "kaczmarz",
                     count_A_tilde(n, make_named_ordering(NamedOrdering::kaczmarz, n + 1), count_options));
                for (unsigned i = 0; i < verify_samples; ++i) {
                    push("psi_pairs", "random_psi#" + std::to_string(i), count_psi_pairs(n, random_psi(n, rng)));
                }
            }
            if (all || verify_suite == "perturbation") {
                Rng rng(mix_seed(common.seed, 1));
                auto push = [&](const char* check, unsigned index, const PerturbationReport& r) {
                    failed = failed || !r.all_hold();
                    report.results.push_back(detail::row_with(to_json(r), {{"suite", "perturbation"},
                                                                          {"check", check},
                                                                          {"instance", index},
                                                                          {"pass", r.all_hold()}}));
                };
                for (unsigned i = 0; i < verify_samples; ++i) {
                    const Ordering sigma = random_ordering(n, rng);
                    const Ordering pi = random_ordering(n, rng);
                    push("A_xor", i, verify_perturbation_A(n, sigma, pi, count_options));
                    push("A_hat_abs", i, verify_perturbation_A_hat(n, sigma, pi));
                }
                const Ordering same = random_ordering(n, rng);
                const auto degenerate = verify_perturbation_A(n, same, same, count_options);
                const bool equality = degenerate.factor == 1 && degenerate.count_sigma == degenerate.count_pi;
                failed = failed || !equality;
                report.results.push_back(detail::row_with(to_json(degenerate), {{"suite", "perturbation"},
                                                                               {"check", "A_xor_degenerate"},
                                                                               {"instance", 0},
                                                                               {"pass", equality}}));
            }
            if (all || verify_suite == "identities") {
                Rng rng(mix_seed(common.seed, 2));
                for (unsigned i = 0; i < verify_samples; ++i) {
                    const Ordering sigma = random_ordering(n, rng);
                    const Ordering pi = random_ordering(n, rng);
                    const auto r = check_deviation_identities(n, sigma, pi);
                    failed = failed || !r.holds();
                    report.results.push_back(detail::row_with(to_json(r), {{"suite", "identities"},
                                                                          {"check", "deviation"},
                                                                          {"instance", i},
                                                                          {"pass", r.holds()}}));
                }
                for (unsigned i = 0; i < verify_samples; ++i) {
                    const Ordering lambda = random_linear_ordering(n, rng);
                    const Ordering pi = random_ordering(n, rng);
                    const auto lhs = count_A(n, compose(lambda, pi), 0, count_options).count;
                    const auto rhs = count_A(n, pi, 0, count_options).count;
                    failed = failed || lhs != rhs;
                    report.results.push_back({{"suite", "identities"}, {"check", "linear_precomposition"},
                                              {"instance", i}, {"n", n}, {"count_composed", lhs},
                                              {"count", rhs}, {"pass", lhs == rhs}});
                }
            }
            if (all || verify_suite == "subset") {
                Rng rng(mix_seed(common.seed, 3));
                if (verify_m > n) throw CLI::ValidationError("--m", "must not exceed --n");
                for (unsigned i = 0; i < verify_samples; ++i) {
                    std::vector<unsigned> bits = verify_bits;
                    if (bits.empty()) {
                        std::vector<unsigned> all_bits(n);
                        for (unsigned b = 0; b < n; ++b) all_bits[b] = b;
                        rng.shuffle(all_bits);
                        bits.assign(all_bits.begin(), all_bits.begin() + verify_m);
                    }
                    const std::uint64_t seed = common.seed + i;
                    const auto r = verify_subset_example(n, bits, seed, count_options);
                    failed = failed || !r.all_hold();
                    report.results.push_back(detail::row_with(to_json(r), {{"suite", "subset"},
                                                                          {"check", "chained_bound"},
                                                                          {"instance", i},
                                                                          {"pass", r.all_hold()}}));
                }
            }
        } else if (search->parsed()) {
            report.command = "search";
            report.parameters = {{"n", search_n},         {"mode", search_mode},
                                 {"goal", search_goal},   {"strategy", search_strategy},
                                 {"set", search_set},     {"split_depth", search_split},
                                 {"node_budget", search_node_budget ? json(*search_node_budget) : json(nullptr)},
                                 {"budget_seconds", common.budget_seconds ? json(*common.budget_seconds) : json(nullptr)},
                                 {"checkpoint", common.checkpoint.empty() ? json(nullptr) : json(common.checkpoint)}};
            if (search_mode == "exhaustive") {
                if (search_n > exhaustive_max_bits) {
                    throw CLI::ValidationError("--n", "exhaustive mode supports n <= " +
                                                          std::to_string(exhaustive_max_bits));
                }
                const auto t0 = std::chrono::steady_clock::now();
                const auto r = exhaustive_max(search_n, search_set == "A" ? SetKind::A : SetKind::B);
                const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                json row = search_report(r, wall);
                failed = !row.at("conjecture_holds").get<bool>();
                report.results.push_back(std::move(row));
            } else {
                if (search_set != "B") throw CLI::ValidationError("--set", "pruned mode searches B only");
                SearchOptions options;
                options.goal = search_goal == "maximize" ? SearchGoal::maximize : SearchGoal::verify;
                options.strategy = search_strategy == "simple" ? BoundStrategy::simple : BoundStrategy::fiber;
                options.split_depth = search_split;
                options.threads = common.thread_count();
                options.node_budget = search_node_budget;
                options.time_budget_seconds = common.budget_seconds;
                options.checkpoint_interval = search_interval;
                const std::string path = common.checkpoint;
                if (!path.empty()) {
                    options.on_checkpoint = [path](const SearchCheckpoint& c) { detail::write_checkpoint(path, c); };
                }
                const auto resume = detail::read_checkpoint(path);
                if (resume && resume->n != search_n) {
                    throw CheckpointError("checkpoint is for n = " + std::to_string(resume->n) + ", not " +
                                          std::to_string(search_n));
                }
                report.parameters["resumed"] = resume.has_value();
                const SearchOutcome outcome = pruned_search(search_n, options, resume);
                json row = search_report(outcome, search_goal, search_strategy);
                row["violations"] = outcome.violations;
                row["subtrees_done"] = outcome.subtrees_done;
                row["subtrees_total"] = outcome.subtrees_total;
                failed = !outcome.conjecture_holds();
                report.results.push_back(std::move(row));
            }
        } else if (decay->parsed()) {
            report.command = "decay";
            const SetKind set = decay_set == "A" ? SetKind::A : SetKind::A_tilde;
            report.parameters = {{"n_max", decay_n_max}, {"ordering", decay_ordering}, {"set", decay_set}};
            const std::string text = decay_ordering;
            const auto rows = decay_report(
                decay_n_max, [&text](unsigned bits) { return parse_ordering_spec(text, bits); }, set, count_options);
            const double base = 6.0 / 8.0;
            double previous = 2.0;
            for (const auto& r : rows) {
                json row = to_json(r);
                row["decay_envelope"] = std::pow(base, static_cast<double>(r.n));
                row["nonincreasing"] = r.ratio8 <= previous;
                previous = r.ratio8;
                failed = failed || r.violated();
                report.results.push_back(std::move(row));
            }
        }
        report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        detail::write_output(report, common, out);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
    return failed ? verification_failed : success;
}

}  // namespace walsheq::cli
