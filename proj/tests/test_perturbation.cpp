#include <gtest/gtest.h>

#include "oracles.hpp"
#include "walsheq/perturbation.hpp"

using namespace walsheq;

namespace {
oracle::Table table_of(const Ordering& o) { return {o.images().begin(), o.images().end()}; }

// every member of A^sigma lies in A^pi(v) for some v with pi(v) <= 4 f*
bool inclusion_oracle_A(unsigned n, const oracle::Table& s, const oracle::Table& p) {
    const std::int64_t size = std::int64_t{1} << n;
    std::uint64_t fstar = 0;
    for (std::int64_t u = 0; u < size; ++u) fstar = std::max<std::uint64_t>(fstar, s[u] ^ p[u]);
    for (std::int64_t k = 0; k < size; ++k)
        for (std::int64_t l = 0; l < size; ++l)
            for (std::int64_t m = 0; m < size; ++m) {
                const std::int64_t j = k + l - m;
                if (j < 0 || j >= size || (s[k] ^ s[l] ^ s[m]) != s[j]) continue;
                bool found = false;
                for (std::int64_t v = 0; v < size && !found; ++v) {
                    found = p[v] <= 4 * fstar && (p[k] ^ p[l] ^ p[m] ^ p[v]) == p[j];
                }
                if (!found) return false;
            }
    return true;
}

bool inclusion_oracle_A_hat(unsigned n, const oracle::Table& s, const oracle::Table& p) {
    const std::uint64_t size = std::uint64_t{1} << n;
    std::int64_t fstar = 0;
    for (std::uint64_t u = 0; u < size; ++u) fstar = std::max(fstar, std::abs(std::int64_t(s[u]) - std::int64_t(p[u])));
    for (std::uint64_t x = 0; x < size; ++x)
        for (std::uint64_t y = 0; y < size; ++y)
            for (std::uint64_t z = 0; z < size; ++z) {
                const std::uint64_t w = x ^ y ^ z;
                if (std::int64_t(s[x]) + std::int64_t(s[y]) - std::int64_t(s[z]) != std::int64_t(s[w])) continue;
                const std::int64_t v = std::int64_t(p[w]) - std::int64_t(p[x]) - std::int64_t(p[y]) + std::int64_t(p[z]);
                if (std::abs(v) > 4 * fstar) return false;
            }
    return true;
}
}  // namespace

TEST(PerturbationA, DegenerateEquality) {
    Rng rng(1);
    for (unsigned n = 0; n <= 4; ++n) {
        const Ordering s = random_ordering(n, rng);
        const auto r = verify_perturbation_A(n, s, s);
        EXPECT_EQ(r.max_deviation, 0u);
        EXPECT_EQ(r.factor, 1u);
        EXPECT_EQ(r.count_sigma, r.count_pi);
        EXPECT_TRUE(r.all_hold());
        if (r.count_sigma) { EXPECT_DOUBLE_EQ(*r.slack, 1.0); }
    }
}

TEST(PerturbationA, RandomPairsAgainstOracle) {
    Rng rng(2);
    for (unsigned n = 1; n <= 4; ++n)
        for (int i = 0; i < (n < 4 ? 20 : 5); ++i) {
            const Ordering s = random_ordering(n, rng), p = random_ordering(n, rng);
            const auto r = verify_perturbation_A(n, s, p);
            EXPECT_TRUE(r.all_hold());
            EXPECT_EQ(r.count_sigma, oracle::count_A(n, table_of(s)));
            EXPECT_EQ(r.count_pi, oracle::count_A(n, table_of(p)));
            EXPECT_EQ(r.triples_checked, r.count_sigma);
            EXPECT_EQ(r.factor, 4 * r.max_deviation + 1);
            EXPECT_TRUE(inclusion_oracle_A(n, table_of(s), table_of(p)));
            EXPECT_LE(r.count_sigma, r.union_count);
        }
}

TEST(PerturbationA, SmallPerturbations) {
    Rng rng(3);
    const unsigned n = 5;
    for (int i = 0; i < 10; ++i) {
        const Ordering p = random_ordering(n, rng);
        std::vector<Index> images(p.images().begin(), p.images().end());
        // swap values that differ only in the lowest bit
        for (Index u = 0; u < images.size(); ++u) {
            if (rng.below(3) == 0) images[u] ^= 1;
        }
        std::vector<Index> fixed(p.images().begin(), p.images().end());
        for (Index u = 0; u < images.size(); ++u) {
            if (images[u] != fixed[u]) {
                const auto partner = std::find(fixed.begin(), fixed.end(), images[u]) - fixed.begin();
                std::swap(fixed[u], fixed[partner]);
            }
        }
        const Ordering s = from_table(fixed, n);
        const auto r = verify_perturbation_A(n, s, p);
        EXPECT_LE(r.max_deviation, 1u);
        EXPECT_TRUE(r.all_hold());
    }
}

TEST(PerturbationA, OffsetSetsNeverExceedUnshifted) {
    Rng rng(4);
    for (unsigned n = 1; n <= 5; ++n)
        for (int i = 0; i < 10; ++i) {
            const Ordering p = random_ordering(n, rng);
            const auto hist = xor_target_histogram(n, p);
            for (std::size_t c = 1; c < hist.size(); ++c) EXPECT_LE(hist[c], hist[0]);
        }
}

TEST(PerturbationAHat, DegenerateAndRandom) {
    Rng rng(5);
    for (unsigned n = 0; n <= 4; ++n) {
        const Ordering s = random_ordering(n, rng);
        const auto same = verify_perturbation_A_hat(n, s, s);
        EXPECT_EQ(same.factor, 1u);
        EXPECT_EQ(same.count_sigma, same.count_pi);
        EXPECT_TRUE(same.all_hold());
    }
    for (unsigned n = 1; n <= 4; ++n)
        for (int i = 0; i < (n < 4 ? 20 : 5); ++i) {
            const Ordering s = random_ordering(n, rng), p = random_ordering(n, rng);
            const auto r = verify_perturbation_A_hat(n, s, p);
            EXPECT_TRUE(r.all_hold());
            EXPECT_EQ(r.factor, 8 * r.max_deviation + 1);
            EXPECT_EQ(r.count_sigma, oracle::count_A_hat(n, table_of(s)));
            EXPECT_TRUE(inclusion_oracle_A_hat(n, table_of(s), table_of(p)));
        }
}

TEST(PerturbationAHat, LinearReference) {
    Rng rng(6);
    for (unsigned n = 1; n <= 4; ++n)
        for (int i = 0; i < 5; ++i) {
            const Ordering p = random_linear_ordering(n, rng), s = random_ordering(n, rng);
            const auto r = verify_perturbation_A_hat(n, s, p);
            EXPECT_LE(r.count_sigma, r.factor * pow_u64(6, n));
        }
}

TEST(DeviationIdentities, HoldExhaustively) {
    Rng rng(7);
    for (unsigned n = 1; n <= 4; ++n)
        for (int i = 0; i < 5; ++i) {
            const auto r = check_deviation_identities(n, random_ordering(n, rng), random_ordering(n, rng));
            EXPECT_TRUE(r.holds());
            EXPECT_GT(r.xor_triples, 0u);
            EXPECT_GT(r.abs_triples, 0u);
        }
}

TEST(SubsetExample, EmptyAndFullBitSets) {
    const auto empty = verify_subset_example(5, {}, 1);
    EXPECT_EQ(empty.m, 0u);
    EXPECT_EQ(empty.count_sigma, count_A(5, identity_ordering(5)).count);
    EXPECT_LE(empty.count_sigma, pow_u64(6, 5));
    EXPECT_EQ(empty.chained_bound, 4 * pow_u64(6, 5));
    EXPECT_TRUE(empty.all_hold());
    const auto full = verify_subset_example(4, {0, 1, 2, 3}, 9);
    EXPECT_EQ(full.m, 4u);
    EXPECT_TRUE(full.bound_holds);
    EXPECT_TRUE(full.all_hold());
}

TEST(SubsetExample, FullScale) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = verify_subset_example(6, {1, 4}, seed, [] {
            CountOptions o;
            o.algorithm = CountAlgorithm::grouped;
            return o;
        }());
        EXPECT_TRUE(r.pi_n_linear);
        EXPECT_TRUE(r.composition_invariant());
        EXPECT_TRUE(r.linear_invariant());
        EXPECT_TRUE(r.deviation_below_2m);
        EXPECT_TRUE(r.bound_holds);
        EXPECT_LE(r.ratio8, r.ratio8_bound);
        EXPECT_EQ(r.chained_bound, 4 * 4 * pow_u64(6, 6));
        EXPECT_DOUBLE_EQ(r.density, 2.0 / 6.0);
        EXPECT_NEAR(r.density_threshold, 0.415037, 1e-6);
    }
    EXPECT_THROW(verify_subset_example(3, {3}, 0), std::invalid_argument);
}
