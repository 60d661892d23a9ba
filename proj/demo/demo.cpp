// Tour of the library: orderings, witness counts, key-function norms and the
// conjecture search at small n.

#include <cstdio>

#include "walsheq.hpp"

using namespace walsheq;

int main() {
    const unsigned n = 5;

    std::printf("witness counts at n = %u (6^n = %llu)\n", n, (unsigned long long)pow_u64(6, n));
    for (const auto name : all_named_orderings) {
        const Ordering sigma = make_named_ordering(name, n + 1);
        const auto a = count_A(n, sigma);
        const auto t = count_A_tilde(n, sigma);
        std::printf("  %-15s #A = %6llu  #A~ = %6llu  linear: %s\n", std::string(to_string(name)).c_str(),
                    (unsigned long long)a.count, (unsigned long long)t.count,
                    is_dyadically_linear(make_named_ordering(name, n)).linear ? "yes" : "no");
    }

    // the fourth power of the key-function norm reproduces #A
    const KeyFunctionSpec spec(n, make_named_ordering(NamedOrdering::kaczmarz, n));
    const auto norm = lp_norm_key(spec, 4.0);
    std::printf("\n||F||_4^4 (Kaczmarz, n = %u) = %.6f on a %zu x %zu grid\n", n, std::pow(norm.value, 4),
                norm.grid_s_points, norm.grid_t_cells);
    std::printf("r_4 lower bound: %.6f\n", rp_lower_bound(spec, 4.0));

    // a small perturbation of the identity
    const Ordering scrambled = subset_scramble({0, 3}, n, 11);
    const auto report = verify_perturbation_A(n, scrambled, identity_ordering(n));
    std::printf("\nscramble of bits {0,3}: f* = %llu, #A = %llu <= %llu * %llu\n",
                (unsigned long long)report.max_deviation, (unsigned long long)report.count_sigma,
                (unsigned long long)report.factor, (unsigned long long)report.count_pi);

    // conjecture #B <= 3^n over all permutations of [16]
    SearchOptions options;
    options.goal = SearchGoal::maximize;
    const auto outcome = pruned_search(4, options);
    std::printf("\nmax #B over permutations of [16]: %llu (3^4 = 81), %llu nodes\n",
                (unsigned long long)outcome.checkpoint.best_count, (unsigned long long)outcome.checkpoint.nodes_visited);
    return 0;
}
