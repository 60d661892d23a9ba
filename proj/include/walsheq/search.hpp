#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "walsheq/combinatorics.hpp"
#include "walsheq/ordering.hpp"
#include "walsheq/parallel.hpp"

namespace walsheq {

using u128 = unsigned __int128;

inline std::string to_decimal(u128 value) {
    if (value == 0) return "0";
    std::string digits;
    while (value > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    return {digits.rbegin(), digits.rend()};
}

inline u128 parse_decimal_u128(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty decimal string");
    u128 value = 0;
    const u128 max = ~u128{0};
    for (char c : text) {
        if (c < '0' || c > '9') throw std::invalid_argument("not a decimal string: " + text);
        const auto digit = static_cast<unsigned>(c - '0');
        if (value > (max - digit) / 10) throw std::invalid_argument("decimal value too large: " + text);
        value = value * 10 + digit;
    }
    return value;
}

// ---------------------------------------------------------------------------
// Canonical forms under left composition with GL(n, F2).
//
// Left composition by an invertible linear map preserves B_n^sigma, and the
// group acts freely on permutations. Scanning images in index order, the
// lexicographically least member of an orbit assigns every image that is not
// in the span of the earlier images the smallest vector outside that span.
// With the earlier images spanning [2^r] this means: image <= 2^r.
// ---------------------------------------------------------------------------

/// Number of invertible n x n matrices over F2 that fix the first r unit vectors.
inline u128 linear_stabilizer_order(unsigned n, unsigned r) {
    u128 order = 1;
    for (unsigned i = r; i < n; ++i) order *= static_cast<u128>(block_size(n) - block_size(i));
    return order;
}

/// Canonical full permutations extending a canonical prefix of length `assigned`
/// whose images span [2^rank].
inline u128 canonical_completions(unsigned n, unsigned assigned, unsigned rank) {
    u128 arrangements = 1;
    for (Index k = 2; k <= block_size(n) - assigned; ++k) arrangements *= k;
    return arrangements / linear_stabilizer_order(n, rank);
}

inline u128 canonical_class_total(unsigned n) { return canonical_completions(n, 0, 0); }

/// Rank (as span [2^rank]) of a canonical image prefix, or nullopt if not canonical.
inline std::optional<unsigned> canonical_prefix_rank(std::span<const Index> prefix, unsigned n) {
    unsigned rank = 0;
    Index used = 0;
    for (Index image : prefix) {
        if (image >= block_size(n) || ((used >> image) & 1u)) return std::nullopt;
        if (image > block_size(rank)) return std::nullopt;
        if (image == block_size(rank)) ++rank;
        used |= Index{1} << image;
    }
    return rank;
}

inline bool is_canonical(const Ordering& sigma) {
    return canonical_prefix_rank(sigma.images(), sigma.bits()).has_value();
}

/// The canonical member of the orbit {lambda o sigma : lambda in GL(n, F2)}.
inline Ordering canonical_form(const Ordering& sigma) {
    const unsigned n = sigma.bits();
    // lambda sends the images that raise the rank, in index order, to 1, 2, 4, ...
    std::array<Index, 64> basis{};
    std::vector<Index> independent;
    for (Index k = 0; k < sigma.size() && independent.size() < n; ++k) {
        Index v = sigma(k);
        for (int bit = static_cast<int>(n) - 1; bit >= 0 && v; --bit) {
            if (!((v >> bit) & 1u)) continue;
            if (basis[bit] == 0) {
                basis[bit] = v;
                independent.push_back(sigma(k));
                v = 0;
            } else {
                v ^= basis[bit];
            }
        }
    }
    LinearMatrix columns(n);
    for (unsigned j = 0; j < n; ++j) {
        for (unsigned i = 0; i < n; ++i) columns.set(i, j, (independent[j] >> i) & 1u);
    }
    const LinearMatrix lambda = columns.inverse();
    std::vector<Index> images(sigma.size());
    for (Index k = 0; k < sigma.size(); ++k) images[k] = lambda.apply(sigma(k));
    return Ordering(n, std::move(images), OrderingKind::table, "canonical");
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

inline constexpr const char* checkpoint_version = "bsearch-1";

struct SearchCheckpoint {
    std::string version = checkpoint_version;
    unsigned n = 0;
    /// Images sigma(0..k-1) of the next unfinished subtree; empty when fresh or done.
    std::vector<Index> prefix;
    std::uint64_t best_count = 0;
    std::vector<Index> witness;
    std::uint64_t nodes_visited = 0;
    /// Canonical classes (orbits) enumerated so far, in canonical order.
    u128 canonical_class_cursor = 0;

    friend bool operator==(const SearchCheckpoint&, const SearchCheckpoint&) = default;

    bool complete() const { return canonical_class_cursor == canonical_class_total(n); }
};

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline nlohmann::json checkpoint_to_json(const SearchCheckpoint& c) {
    nlohmann::json j;
    j["version"] = c.version;
    j["n"] = c.n;
    j["prefix"] = c.prefix;
    j["best_count"] = c.best_count;
    j["witness"] = c.witness;
    j["nodes_visited"] = c.nodes_visited;
    j["canonical_class_cursor"] = to_decimal(c.canonical_class_cursor);
    return j;
}

inline std::string serialize_checkpoint(const SearchCheckpoint& c) { return checkpoint_to_json(c).dump(2) + "\n"; }

inline SearchCheckpoint parse_checkpoint(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        SearchCheckpoint c;
        c.version = j.at("version").get<std::string>();
        if (c.version != checkpoint_version) {
            throw CheckpointError("checkpoint version '" + c.version + "' is not " + checkpoint_version);
        }
        c.n = j.at("n").get<unsigned>();
        if (c.n > 5) throw CheckpointError("checkpoint n out of range");
        c.prefix = j.at("prefix").get<std::vector<Index>>();
        c.best_count = j.at("best_count").get<std::uint64_t>();
        c.witness = j.at("witness").get<std::vector<Index>>();
        c.nodes_visited = j.at("nodes_visited").get<std::uint64_t>();
        c.canonical_class_cursor = parse_decimal_u128(j.at("canonical_class_cursor").get<std::string>());
        if (c.prefix.size() > block_size(c.n) || !canonical_prefix_rank(c.prefix, c.n)) {
            throw CheckpointError("checkpoint prefix is not a canonical partial permutation");
        }
        if (c.best_count > pow_u64(4, c.n)) throw CheckpointError("checkpoint best_count exceeds 4^n");
        if (!c.witness.empty()) {
            if (c.witness.size() != block_size(c.n)) throw CheckpointError("checkpoint witness has wrong length");
            const Ordering w = from_table(c.witness, c.n);
            if (count_B_raw(c.n, w) != c.best_count) throw CheckpointError("checkpoint witness does not attain best_count");
        }
        if (c.canonical_class_cursor > canonical_class_total(c.n)) {
            throw CheckpointError("checkpoint cursor exceeds the number of canonical classes");
        }
        return c;
    } catch (const CheckpointError&) {
        throw;
    } catch (const std::exception& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
}

inline SearchCheckpoint checkpoint_roundtrip(const SearchCheckpoint& c) { return parse_checkpoint(serialize_checkpoint(c)); }

/// Fresh state: nothing enumerated, best seeded with the identity (3^n).
inline SearchCheckpoint fresh_checkpoint(unsigned n) {
    SearchCheckpoint c;
    c.n = n;
    const Ordering id = identity_ordering(n);
    c.best_count = count_B_raw(n, id);
    c.witness.assign(id.images().begin(), id.images().end());
    return c;
}

// ---------------------------------------------------------------------------
// Exhaustive search
// ---------------------------------------------------------------------------

inline constexpr unsigned exhaustive_max_bits = 3;

struct ExhaustiveResult {
    unsigned n = 0;
    SetKind set = SetKind::B;
    std::uint64_t max_count = 0;
    std::vector<std::vector<Index>> maximizers;  ///< all, in lexicographic order
    std::uint64_t permutations = 0;
};

/// Maximum of #B (or #A) over every permutation of [2^n], n <= 3.
inline ExhaustiveResult exhaustive_max(unsigned n, SetKind set = SetKind::B) {
    if (n > exhaustive_max_bits) {
        throw std::invalid_argument("exhaustive search is limited to n <= 3 (got " + std::to_string(n) + ")");
    }
    if (set != SetKind::B && set != SetKind::A) throw std::invalid_argument("exhaustive search counts A or B");
    ExhaustiveResult r;
    r.n = n;
    r.set = set;
    std::vector<Index> images(block_size(n));
    for (Index i = 0; i < images.size(); ++i) images[i] = i;
    do {
        const Ordering sigma(n, images, OrderingKind::table);
        const std::uint64_t c = set == SetKind::B ? count_B_raw(n, sigma) : count_A(n, sigma).count;
        ++r.permutations;
        if (c > r.max_count || r.maximizers.empty()) {
            r.max_count = c;
            r.maximizers.clear();
        }
        if (c == r.max_count) r.maximizers.push_back(images);
    } while (std::next_permutation(images.begin(), images.end()));
    return r;
}

inline ExhaustiveResult exhaustive_max_B(unsigned n) { return exhaustive_max(n, SetKind::B); }

// ---------------------------------------------------------------------------
// Branch-and-bound search over canonical permutations
// ---------------------------------------------------------------------------

enum class SearchGoal {
    maximize,  ///< exact maximum of #B and the number of maximizing classes
    verify     ///< only look for permutations beating 3^n
};

enum class BoundStrategy {
    simple,  ///< every undecided pair may still hold
    fiber    ///< per sum s, decided pairs can agree with at most one value of sigma(s)
};

inline std::string_view to_string(SearchGoal g) { return g == SearchGoal::maximize ? "maximize" : "verify"; }
inline std::string_view to_string(BoundStrategy b) { return b == BoundStrategy::simple ? "simple" : "fiber"; }

inline constexpr unsigned pruned_search_max_bits = 5;

struct SearchOptions {
    SearchGoal goal = SearchGoal::verify;
    BoundStrategy strategy = BoundStrategy::fiber;
    /// Subtrees are rooted at canonical prefixes of this length.
    unsigned split_depth = 4;
    unsigned threads = 1;
    /// Stop after the first subtree whose cumulative node count reaches this.
    std::optional<std::uint64_t> node_budget;
    std::optional<double> time_budget_seconds;
    /// Emit a checkpoint whenever this many nodes completed since the last one (0: never).
    std::uint64_t checkpoint_interval = 0;
    std::function<void(const SearchCheckpoint&)> on_checkpoint;
};

struct SearchOutcome {
    SearchCheckpoint checkpoint;
    bool complete = false;
    /// Number of maximizing permutations (maximize goal, uninterrupted fresh run only).
    std::optional<std::uint64_t> maximizer_count;
    /// Leaves with #B > 3^n found in this run.
    std::uint64_t violations = 0;
    u128 classes_total = 0;
    std::uint64_t subtrees_total = 0;
    std::uint64_t subtrees_done = 0;
    double wall_seconds = 0.0;

    double coverage() const {
        return classes_total == 0 ? 0.0
                                  : static_cast<double>(checkpoint.canonical_class_cursor) / static_cast<double>(classes_total);
    }
    bool conjecture_holds() const { return checkpoint.best_count <= pow_u64(3, checkpoint.n); }
};

namespace detail {

/// Incremental state for one depth-first search over canonical permutations.
class BSearcher {
public:
    static constexpr unsigned max_size = 32;

    using Clock = std::chrono::steady_clock;

    BSearcher(unsigned n, BoundStrategy strategy, std::uint64_t floor, SearchGoal goal,
              const std::atomic<bool>* cancel, std::optional<Clock::time_point> deadline = std::nullopt)
        : n_(n), size_(static_cast<unsigned>(block_size(n))), strategy_(strategy), floor_(floor), goal_(goal),
          cancel_(cancel), deadline_(deadline), hist_(size_ * size_, 0) {}

    struct Result {
        std::uint64_t nodes = 0;
        u128 classes = 0;
        std::uint64_t best = 0;          ///< best leaf count >= threshold (0 if none)
        std::uint64_t best_leaves = 0;   ///< leaves attaining best
        std::vector<Index> witness;
        std::uint64_t violations = 0;
        bool cancelled = false;
    };

    /// Searches the subtree below a canonical prefix.
    Result run(std::span<const Index> prefix) {
        result_ = Result{};
        best_ = floor_;
        decided_ = 0;
        used_ = 0;
        std::fill(hist_.begin(), hist_.end(), 0);
        maxm_.fill(0);
        unsigned rank = 0;
        const unsigned depth = static_cast<unsigned>(prefix.size());
        const u128 task_classes = canonical_completions(n_, depth, *canonical_prefix_rank(prefix, n_));
        bool pruned = false;
        for (unsigned j = 0; j < depth; ++j) {
            const std::uint64_t bound = push(j, prefix[j]);
            if (prefix[j] == block_size(rank)) ++rank;
            if (j + 1 < size_ && prunable(bound)) {
                pruned = true;
                break;
            }
        }
        ++result_.nodes;
        if (pruned) {
            result_.classes = task_classes;
        } else if (depth == size_) {
            leaf();
            result_.classes = 1;
        } else {
            descend(depth, rank);
        }
        return result_;
    }

private:
    bool prunable(std::uint64_t bound) const {
        return goal_ == SearchGoal::verify ? bound <= floor_ : bound < best_;
    }

    /// Assigns sigma(j) = c; returns an upper bound on #B over all completions.
    std::uint64_t push(unsigned j, Index c) {
        sig_[j] = static_cast<std::uint8_t>(c);
        used_ |= std::uint64_t{1} << c;
        unsigned hit = 0;
        for (unsigned k = 0; k <= j; ++k) hit += (sig_[k] ^ sig_[j - k]) == c;
        decided_stack_[j] = decided_;
        decided_ += hit;
        if (strategy_ == BoundStrategy::simple) {
            std::uint64_t open = 0;
            for (unsigned s = j + 1; s < size_; ++s) open += s + 1;
            return decided_ + open;
        }
        for (unsigned i = 1; i <= j; ++i) {
            const unsigned s = i + j;
            if (s >= size_) break;
            saved_maxm_[j][s] = maxm_[s];
            auto& h = hist_[s * size_ + (sig_[i] ^ c)];
            h += i == j ? 1 : 2;
            maxm_[s] = std::max<unsigned>(maxm_[s], h);
        }
        const unsigned zero_ok = sig_[0] == 0 ? 1 : 0;
        std::uint64_t rest = 0;
        for (unsigned s = j + 1; s < size_; ++s) {
            const int lo = std::max<int>(1, static_cast<int>(s) - static_cast<int>(j));
            const int hi = std::min<int>(static_cast<int>(s) - 1, static_cast<int>(j));
            const unsigned known = hi >= lo ? static_cast<unsigned>(hi - lo + 1) : 0;
            const unsigned inner = s >= 1 ? s - 1 : 0;
            rest += 2 * zero_ok + (inner - known) + maxm_[s];
        }
        return decided_ + rest;
    }

    void pop(unsigned j, Index c) {
        if (strategy_ == BoundStrategy::fiber) {
            for (unsigned i = 1; i <= j; ++i) {
                const unsigned s = i + j;
                if (s >= size_) break;
                hist_[s * size_ + (sig_[i] ^ c)] -= i == j ? 1 : 2;
                maxm_[s] = saved_maxm_[j][s];
            }
        }
        decided_ = decided_stack_[j];
        used_ &= ~(std::uint64_t{1} << c);
    }

    void leaf() {
        const std::uint64_t count = decided_;
        if (count > pow_u64(3, n_)) ++result_.violations;
        if (count < best_ || (goal_ == SearchGoal::verify && count <= floor_)) return;
        if (count > best_ || result_.best_leaves == 0) {
            best_ = count;
            result_.best = count;
            result_.best_leaves = 0;
            result_.witness.assign(sig_.begin(), sig_.begin() + size_);
        }
        ++result_.best_leaves;
    }

    /// sigma(0..j-1) assigned, spanning [2^rank].
    void descend(unsigned j, unsigned rank) {
        if (++poll_ >= 4096) {
            poll_ = 0;
            if ((cancel_ && cancel_->load(std::memory_order_relaxed)) || (deadline_ && Clock::now() >= *deadline_)) {
                result_.cancelled = true;
                return;
            }
        }
        const Index limit = std::min<Index>(block_size(rank), size_ - 1);
        for (Index c = 0; c <= limit; ++c) {
            if ((used_ >> c) & 1u) continue;
            const unsigned next_rank = c == block_size(rank) ? rank + 1 : rank;
            const std::uint64_t bound = push(j, c);
            ++result_.nodes;
            if (j + 1 == size_) {
                leaf();
                result_.classes += 1;
            } else if (prunable(bound)) {
                result_.classes += canonical_completions(n_, j + 1, next_rank);
            } else {
                descend(j + 1, next_rank);
            }
            pop(j, c);
            if (result_.cancelled) return;
        }
    }

    unsigned n_;
    unsigned size_;
    BoundStrategy strategy_;
    std::uint64_t floor_;
    SearchGoal goal_;
    const std::atomic<bool>* cancel_;
    std::optional<Clock::time_point> deadline_;
    unsigned poll_ = 0;

    std::array<std::uint8_t, max_size> sig_{};
    std::uint64_t used_ = 0;
    std::uint64_t decided_ = 0;
    std::array<std::uint64_t, max_size> decided_stack_{};
    std::vector<std::uint16_t> hist_;
    std::array<unsigned, max_size> maxm_{};
    std::array<std::array<unsigned, max_size>, max_size> saved_maxm_{};
    std::uint64_t best_ = 0;
    Result result_;
};

/// Canonical prefixes of the given length, in lexicographic order.
inline std::vector<std::vector<Index>> canonical_prefixes(unsigned n, unsigned depth) {
    std::vector<std::vector<Index>> out;
    std::vector<Index> current;
    std::uint64_t used = 0;
    const Index size = block_size(n);
    std::function<void(unsigned)> rec = [&](unsigned rank) {
        if (current.size() == depth) {
            out.push_back(current);
            return;
        }
        const Index limit = std::min<Index>(block_size(rank), size - 1);
        for (Index c = 0; c <= limit; ++c) {
            if ((used >> c) & 1u) continue;
            current.push_back(c);
            used |= std::uint64_t{1} << c;
            rec(c == block_size(rank) ? rank + 1 : rank);
            used &= ~(std::uint64_t{1} << c);
            current.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace detail

/// Depth-first branch and bound over one representative per GL(n, F2)-orbit.
/// Subtrees are rooted at canonical prefixes of length split_depth and may run
/// in parallel; the returned checkpoint only reflects the longest run of
/// completed subtrees in canonical order, so it never depends on scheduling.
inline SearchOutcome pruned_search(unsigned n, const SearchOptions& options = {},
                                   const std::optional<SearchCheckpoint>& resume = std::nullopt) {
    if (n > pruned_search_max_bits) {
        throw std::invalid_argument("pruned search supports n <= 5 (got " + std::to_string(n) + ")");
    }
    const auto start = std::chrono::steady_clock::now();
    const unsigned size = static_cast<unsigned>(block_size(n));
    unsigned depth = std::min(options.split_depth, size);
    SearchCheckpoint state = fresh_checkpoint(n);

    if (resume) {
        if (resume->version != checkpoint_version) throw CheckpointError("checkpoint version mismatch");
        if (resume->n != n) {
            throw CheckpointError("checkpoint is for n = " + std::to_string(resume->n) + ", not " + std::to_string(n));
        }
        state = *resume;
        if (!state.prefix.empty()) depth = static_cast<unsigned>(state.prefix.size());
    }

    const auto tasks = detail::canonical_prefixes(n, depth);
    std::vector<u128> task_classes(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        task_classes[i] = canonical_completions(n, depth, *canonical_prefix_rank(tasks[i], n));
    }

    SearchOutcome outcome;
    outcome.classes_total = canonical_class_total(n);
    outcome.subtrees_total = tasks.size();

    std::size_t first = 0;
    if (resume && !state.complete()) {
        if (state.prefix.empty()) {
            if (state.canonical_class_cursor != 0) throw CheckpointError("checkpoint has a cursor but no prefix");
        } else {
            const auto it = std::lower_bound(tasks.begin(), tasks.end(), state.prefix);
            if (it == tasks.end() || *it != state.prefix) throw CheckpointError("checkpoint prefix is not a subtree root");
            first = static_cast<std::size_t>(it - tasks.begin());
            u128 before = 0;
            for (std::size_t i = 0; i < first; ++i) before += task_classes[i];
            if (before != state.canonical_class_cursor) {
                throw CheckpointError("checkpoint cursor does not match its prefix");
            }
        }
    } else if (resume) {
        first = tasks.size();
    }
    const bool fresh_run = first == 0 && state.nodes_visited == 0;

    const std::uint64_t floor = pow_u64(3, n);
    std::vector<std::optional<detail::BSearcher::Result>> results(tasks.size());
    std::atomic<bool> cancel{false};
    std::mutex commit_mutex;
    std::size_t committed = first;
    std::uint64_t nodes_since_emit = 0;
    std::uint64_t maximizers = 0;
    bool stop = false;

    auto budget_reached = [&] { return options.node_budget && state.nodes_visited >= *options.node_budget; };

    auto commit_ready = [&] {
        // caller holds commit_mutex
        while (!stop && committed < tasks.size() && results[committed]) {
            const auto& r = *results[committed];
            if (r.cancelled) break;
            state.nodes_visited += r.nodes;
            nodes_since_emit += r.nodes;
            state.canonical_class_cursor += task_classes[committed];
            outcome.violations += r.violations;
            if (r.best_leaves > 0) {
                if (r.best > state.best_count) {
                    state.best_count = r.best;
                    state.witness = r.witness;
                    maximizers = r.best_leaves;
                } else if (r.best == state.best_count) {
                    maximizers += r.best_leaves;
                }
            }
            ++committed;
            if (budget_reached()) stop = true;
            state.prefix = committed < tasks.size() ? tasks[committed] : std::vector<Index>{};
            if (options.on_checkpoint && options.checkpoint_interval > 0 &&
                nodes_since_emit >= options.checkpoint_interval) {
                nodes_since_emit = 0;
                options.on_checkpoint(state);
            }
        }
        if (stop) cancel = true;
    };

    std::atomic<std::size_t> next{first};
    auto worker = [&] {
        std::optional<detail::BSearcher::Clock::time_point> deadline;
        if (options.time_budget_seconds) {
            deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                   std::chrono::duration<double>(*options.time_budget_seconds));
        }
        detail::BSearcher searcher(n, options.strategy, floor, options.goal, &cancel, deadline);
        while (!cancel.load()) {
            if (options.time_budget_seconds) {
                const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                if (elapsed >= *options.time_budget_seconds) {
                    cancel = true;
                    break;
                }
            }
            const std::size_t i = next++;
            if (i >= tasks.size()) break;
            auto r = searcher.run(tasks[i]);
            std::lock_guard lock(commit_mutex);
            if (r.cancelled) {
                cancel = true;
                break;
            }
            results[i] = std::move(r);
            commit_ready();
        }
    };

    const unsigned threads = std::max(1u, options.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // release results of subtrees completed past the committed frontier
    state.prefix = committed < tasks.size() ? tasks[committed] : std::vector<Index>{};
    outcome.checkpoint = state;
    outcome.complete = committed == tasks.size();
    outcome.subtrees_done = committed;
    if (options.goal == SearchGoal::maximize && fresh_run && outcome.complete) {
        outcome.maximizer_count = static_cast<std::uint64_t>(maximizers * linear_stabilizer_order(n, 0));
    }
    outcome.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.on_checkpoint) options.on_checkpoint(outcome.checkpoint);
    return outcome;
}

}  // namespace walsheq
