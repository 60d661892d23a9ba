#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "walsheq/combinatorics.hpp"
#include "walsheq/ordering.hpp"

namespace walsheq {

/// Outcome of checking A^sigma inside the union of the shifted sets of pi.
struct PerturbationReport {
    DeviationFlavor flavor = DeviationFlavor::xor_metric;
    unsigned n = 0;
    Index max_deviation = 0;             ///< f*_n (xor) or f^*_n (abs)
    std::uint64_t offset_limit = 0;      ///< 4 f*: largest pi(v) (xor) or |v| (abs) admitted
    std::uint64_t count_sigma = 0;
    std::uint64_t count_pi = 0;
    std::uint64_t union_count = 0;       ///< sum over admitted v of the pi-side set sizes
    std::uint64_t factor = 1;            ///< 4 f* + 1 (xor) or 8 f^* + 1 (abs)
    std::uint64_t triples_checked = 0;   ///< members of the sigma-side set
    std::uint64_t inclusion_failures = 0;
    std::uint64_t identity_failures = 0; ///< pointwise deviation identity violations
    bool inclusion_holds = true;
    bool union_bound_holds = true;       ///< count_sigma <= union_count
    bool inequality_holds = true;        ///< count_sigma <= factor * count_pi
    std::optional<double> slack;         ///< factor * count_pi / count_sigma

    bool all_hold() const {
        return inclusion_holds && union_bound_holds && inequality_holds && identity_failures == 0;
    }
};

namespace detail {

inline void require_pair(unsigned n, const Ordering& sigma, const Ordering& pi, const char* what) {
    check_same_bits(sigma, pi, what);
    require_cover(sigma, n, what);
}

inline void finish_report(PerturbationReport& r) {
    r.inclusion_holds = r.inclusion_failures == 0;
    r.union_bound_holds = r.count_sigma <= r.union_count;
    r.inequality_holds = r.count_sigma <= r.factor * r.count_pi;
    if (r.count_sigma > 0) {
        r.slack = static_cast<double>(r.factor) * static_cast<double>(r.count_pi) / static_cast<double>(r.count_sigma);
    }
}

inline std::int64_t as_signed(Index x) { return static_cast<std::int64_t>(x); }

}  // namespace detail

/// A_n^sigma is contained in the union of A_n^pi(v) over pi(v) <= 4 f*_n, with
/// f = pi XOR sigma; hence #A_n^sigma <= (4 f*_n + 1) #A_n^pi. Every member
/// triple of A_n^sigma is checked individually.
inline PerturbationReport verify_perturbation_A(unsigned n, const Ordering& sigma, const Ordering& pi,
                                                const CountOptions& options = {}) {
    detail::require_pair(n, sigma, pi, "verify_perturbation_A");
    const Index size = block_size(n);
    const auto f = xor_deviation(pi, sigma);
    const Ordering pi_inverse = invert(pi);

    PerturbationReport r;
    r.flavor = DeviationFlavor::xor_metric;
    r.n = n;
    r.max_deviation = f.max_over_block(n);
    r.offset_limit = 4 * r.max_deviation;
    r.factor = r.offset_limit + 1;

    for (Index x = 0; x < size; ++x) {
        for (Index y = 0; y < size; ++y) {
            const Index s = x + y;
            const Index z_lo = s >= size ? s - (size - 1) : 0;
            const Index z_hi = std::min<Index>(s, size - 1);
            for (Index z = z_lo; z <= z_hi; ++z) {
                const Index w = s - z;
                const Index sigma_xor = sigma(x) ^ sigma(y) ^ sigma(z) ^ sigma(w);
                const Index pi_xor = pi(x) ^ pi(y) ^ pi(z) ^ pi(w);
                if ((sigma_xor ^ pi_xor) != (f.values[x] ^ f.values[y] ^ f.values[z] ^ f.values[w])) {
                    ++r.identity_failures;
                }
                if (sigma_xor != 0) continue;
                ++r.triples_checked;
                // v with pi(v) equal to the pi-side XOR; membership in A^pi(v)
                const Index v = pi_inverse(pi_xor);
                const bool member = (pi(x) ^ pi(y) ^ pi(z) ^ pi(v)) == pi(w);
                if (!member || pi(v) > r.offset_limit) ++r.inclusion_failures;
            }
        }
    }
    r.count_sigma = r.triples_checked;

    const auto hist = xor_target_histogram(n, pi, options);
    r.count_pi = hist[0];
    for (Index c = 0; c < hist.size() && c <= r.offset_limit; ++c) r.union_count += hist[c];
    detail::finish_report(r);
    return r;
}

/// A^_n^sigma is contained in the union of A^_n^pi(v) over |v| <= 4 f^*_n, with
/// f^ = |pi - sigma|; hence #A^_n^sigma <= (8 f^*_n + 1) #A^_n^pi.
inline PerturbationReport verify_perturbation_A_hat(unsigned n, const Ordering& sigma, const Ordering& pi) {
    detail::require_pair(n, sigma, pi, "verify_perturbation_A_hat");
    const Index size = block_size(n);
    const auto f = abs_deviation(pi, sigma);

    PerturbationReport r;
    r.flavor = DeviationFlavor::abs_metric;
    r.n = n;
    r.max_deviation = f.max_over_block(n);
    r.offset_limit = 4 * r.max_deviation;
    r.factor = 8 * r.max_deviation + 1;
    const auto limit = static_cast<std::int64_t>(r.offset_limit);

    std::vector<std::uint64_t> pi_offsets(2 * r.offset_limit + 1, 0);  // index v + limit
    using detail::as_signed;
    for (Index x = 0; x < size; ++x) {
        for (Index y = 0; y < size; ++y) {
            for (Index z = 0; z < size; ++z) {
                const Index w = x ^ y ^ z;
                const std::int64_t sigma_gap =
                    as_signed(sigma(w)) - as_signed(sigma(x)) - as_signed(sigma(y)) + as_signed(sigma(z));
                const std::int64_t v =
                    as_signed(pi(w)) - as_signed(pi(x)) - as_signed(pi(y)) + as_signed(pi(z));
                if (v >= -limit && v <= limit) ++pi_offsets[static_cast<std::size_t>(v + limit)];
                const auto deviation_sum = f.values[w] + f.values[x] + f.values[y] + f.values[z];
                if (static_cast<Index>(std::llabs(sigma_gap - v)) > deviation_sum) ++r.identity_failures;
                if (sigma_gap != 0) continue;
                ++r.triples_checked;
                const bool member = as_signed(pi(x)) + as_signed(pi(y)) - as_signed(pi(z)) + v == as_signed(pi(w));
                if (!member || v < -limit || v > limit) ++r.inclusion_failures;
            }
        }
    }
    r.count_sigma = r.triples_checked;
    r.count_pi = pi_offsets[static_cast<std::size_t>(limit)];
    for (auto c : pi_offsets) r.union_count += c;
    detail::finish_report(r);
    return r;
}

/// Checks, over every triple, that the XOR deviation identity
/// (sigma-XOR) ^ (pi-XOR) = f(x)^f(y)^f(z)^f(x+y-z) and the absolute deviation
/// estimate |sigma-gap - pi-gap| <= f^(x^y^z) + f^(x) + f^(y) + f^(z) hold.
struct DeviationIdentityReport {
    std::uint64_t xor_triples = 0;
    std::uint64_t xor_failures = 0;
    std::uint64_t abs_triples = 0;
    std::uint64_t abs_failures = 0;
    bool holds() const { return xor_failures == 0 && abs_failures == 0; }
};

inline DeviationIdentityReport check_deviation_identities(unsigned n, const Ordering& sigma, const Ordering& pi) {
    detail::require_pair(n, sigma, pi, "check_deviation_identities");
    const Index size = block_size(n);
    const auto f = xor_deviation(pi, sigma);
    const auto g = abs_deviation(pi, sigma);
    using detail::as_signed;
    DeviationIdentityReport r;
    for (Index x = 0; x < size; ++x) {
        for (Index y = 0; y < size; ++y) {
            for (Index z = 0; z < size; ++z) {
                const Index w = x ^ y ^ z;
                const std::int64_t gap = as_signed(sigma(w)) - as_signed(sigma(x)) - as_signed(sigma(y)) +
                                         as_signed(sigma(z)) - as_signed(pi(w)) + as_signed(pi(x)) +
                                         as_signed(pi(y)) - as_signed(pi(z));
                ++r.abs_triples;
                if (static_cast<Index>(std::llabs(gap)) > g.values[w] + g.values[x] + g.values[y] + g.values[z]) {
                    ++r.abs_failures;
                }
                if (x + y < z || x + y - z >= size) continue;
                const Index u = x + y - z;
                ++r.xor_triples;
                const Index lhs = sigma(x) ^ sigma(y) ^ sigma(z) ^ sigma(u) ^ pi(x) ^ pi(y) ^ pi(z) ^ pi(u);
                if (lhs != (f.values[x] ^ f.values[y] ^ f.values[z] ^ f.values[u])) ++r.xor_failures;
            }
        }
    }
    return r;
}

/// Subset-scramble example: sigma scrambles the coordinates in bit_set, pi_n
/// moves those coordinates to the bottom. Expected chain:
/// #A^sigma = #A^{pi_n o sigma} <= (4 f* + 1) #A^{pi_n} = (4 f* + 1) #A^identity <= 4 2^m 6^n.
struct SubsetExampleReport {
    unsigned n = 0;
    unsigned m = 0;
    std::uint64_t seed = 0;
    std::vector<unsigned> bit_set;
    bool pi_n_linear = false;
    std::uint64_t count_sigma = 0;
    std::uint64_t count_composed = 0;  ///< #A^{pi_n o sigma}
    std::uint64_t count_pi_n = 0;
    std::uint64_t count_identity = 0;
    Index max_deviation = 0;           ///< max over u of (pi_n o sigma)(u) XOR pi_n(u)
    bool deviation_below_2m = false;
    PerturbationReport perturbation;   ///< sigma' = pi_n o sigma against pi_n
    std::uint64_t chained_bound = 0;   ///< 4 2^m 6^n
    bool bound_holds = false;
    double ratio8 = 0.0;               ///< #A^sigma / 8^n
    double ratio8_bound = 0.0;         ///< 4 2^m (6/8)^n
    double density = 0.0;              ///< m / n
    double density_threshold = 2.0 - std::log2(3.0);

    bool composition_invariant() const { return count_sigma == count_composed; }
    bool linear_invariant() const { return count_pi_n == count_identity; }
    bool all_hold() const {
        return pi_n_linear && composition_invariant() && linear_invariant() && deviation_below_2m &&
               perturbation.all_hold() && bound_holds;
    }
};

inline SubsetExampleReport verify_subset_example(unsigned n, std::vector<unsigned> bit_set, std::uint64_t seed,
                                                 const CountOptions& options = {}) {
    const Ordering sigma = subset_scramble(bit_set, n, seed);
    const Ordering pi_n = low_coordinate_permutation(bit_set, n);
    const Ordering composed = compose(pi_n, sigma);

    SubsetExampleReport r;
    r.n = n;
    r.seed = seed;
    r.bit_set = detail::normalize_bit_set(std::move(bit_set), n);
    r.m = static_cast<unsigned>(r.bit_set.size());
    r.pi_n_linear = is_dyadically_linear(pi_n).linear;
    r.count_sigma = count_A(n, sigma, 0, options).count;
    r.count_composed = count_A(n, composed, 0, options).count;
    r.count_pi_n = count_A(n, pi_n, 0, options).count;
    r.count_identity = count_A(n, identity_ordering(n), 0, options).count;
    r.max_deviation = xor_deviation(composed, pi_n).max_value;
    r.deviation_below_2m = r.max_deviation < block_size(r.m);
    r.perturbation = verify_perturbation_A(n, composed, pi_n, options);
    r.chained_bound = 4 * block_size(r.m) * pow_u64(6, n);
    r.bound_holds = r.count_sigma <= r.chained_bound;
    r.ratio8 = static_cast<double>(r.count_sigma) / static_cast<double>(pow_u64(8, n));
    r.ratio8_bound = 4.0 * static_cast<double>(block_size(r.m)) * std::pow(0.75, static_cast<double>(n));
    r.density = n == 0 ? 0.0 : static_cast<double>(r.m) / static_cast<double>(n);
    return r;
}

}  // namespace walsheq
