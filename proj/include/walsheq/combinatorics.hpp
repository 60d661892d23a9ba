#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "walsheq/dyadic.hpp"
#include "walsheq/functions.hpp"
#include "walsheq/ordering.hpp"
#include "walsheq/parallel.hpp"

namespace walsheq {

enum class SetKind { A, A_v, A_tilde, B, A_hat_v, psi_pairs };

inline std::string_view to_string(SetKind k) {
    switch (k) {
        case SetKind::A: return "A";
        case SetKind::A_v: return "A_v";
        case SetKind::A_tilde: return "A_tilde";
        case SetKind::B: return "B";
        case SetKind::A_hat_v: return "A_hat_v";
        case SetKind::psi_pairs: return "psi_pairs";
    }
    return "?";
}

/// proven: the bound is established for this (set, ordering) pair; conjectured: only the
/// open conjecture does.
enum class BoundStatus { none, proven, conjectured };

inline std::string_view to_string(BoundStatus b) {
    switch (b) {
        case BoundStatus::none: return "none";
        case BoundStatus::proven: return "proven";
        case BoundStatus::conjectured: return "conjectured";
    }
    return "?";
}

struct CountResult {
    SetKind set_kind = SetKind::A;
    unsigned n = 0;
    std::optional<std::int64_t> v;
    std::uint64_t count = 0;
    double ratio8 = 0.0;
    double ratio8_logadj = 0.0;
    std::optional<std::uint64_t> bound;
    BoundStatus bound_status = BoundStatus::none;
    std::optional<bool> verdict;

    /// A bound that applies and failed.
    bool violated() const { return verdict.has_value() && !*verdict; }
};

/// count / 8^n and n^2 count / 8^n.
inline void fill_ratios(CountResult& r) {
    const double denom = static_cast<double>(pow_u64(8, r.n));
    r.ratio8 = static_cast<double>(r.count) / denom;
    r.ratio8_logadj = static_cast<double>(r.n) * static_cast<double>(r.n) * r.ratio8;
}

inline void apply_bound(CountResult& r, std::uint64_t bound, BoundStatus status) {
    r.bound = bound;
    r.bound_status = status;
    r.verdict = r.count <= bound;
}

enum class CountAlgorithm {
    enumerate,  ///< direct loop over all tuples with early range rejection
    grouped     ///< groups tuples by their shared sum and counts matching XOR classes
};

struct CountOptions {
    CountAlgorithm algorithm = CountAlgorithm::enumerate;
    unsigned threads = 1;
    /// Fixed number of work partitions; results never depend on it.
    std::size_t partitions = 64;
};

namespace detail {

inline void require_cover(const Ordering& sigma, unsigned bits, const char* what) {
    if (sigma.bits() < bits) {
        throw std::invalid_argument(std::string(what) + ": ordering on [2^" + std::to_string(sigma.bits()) +
                                    "] does not cover [2^" + std::to_string(bits) + "]");
    }
}

/// sigma(0) = 0 and sigma(x ^ y) = sigma(x) ^ sigma(y) on [2^n].
inline bool linear_on_block(const Ordering& sigma, unsigned n) {
    if (sigma(0) != 0) return false;
    for (Index x = 1; x < block_size(n); ++x) {
        const Index low = x & (~x + 1);
        if (sigma(x) != (sigma(low) ^ sigma(x ^ low))) return false;
    }
    return true;
}

/// The block 2^n + [2^n] is invariant and sigma(2^n + m) - 2^n is linear in m.
inline bool linear_on_shifted_block(const Ordering& sigma, unsigned n) {
    const Index base = block_size(n);
    auto local = [&](Index m) -> std::optional<Index> {
        const Index image = sigma(base + m);
        if (image < base || image >= 2 * base) return std::nullopt;
        return image - base;
    };
    if (local(0) != Index{0}) return false;
    for (Index m = 1; m < base; ++m) {
        const Index low = m & (~m + 1);
        const auto a = local(m), b = local(low), c = local(m ^ low);
        if (!a || !b || !c || *a != (*b ^ *c)) return false;
    }
    return true;
}

/// sigma(0) = 0 and every block 2^k + [2^k], k < n, is invariant with a linear local map.
inline bool piecewise_linear_on_block(const Ordering& sigma, unsigned n) {
    if (sigma(0) != 0) return false;
    for (unsigned k = 0; k < n; ++k) {
        if (!linear_on_shifted_block(sigma, k)) return false;
    }
    return true;
}

/// #{(k,l,m) in (base + [size])^3 : k+l-m in base + [size],
///   sigma(k)^sigma(l)^sigma(m)^sigma(k+l-m) == target}.
inline std::uint64_t count_xor_triples(const Ordering& sigma, Index base, Index size, Index target,
                                       const CountOptions& options) {
    if (options.algorithm == CountAlgorithm::grouped) {
        // Triples (k,l,m) with k+l = m+w = s: count pairs of pairs in the same
        // s-class whose XORs differ by target.
        return chunked_sum<std::uint64_t>(2 * size - 1, options.partitions, options.threads,
                                          [&](std::size_t begin, std::size_t end) {
            std::uint64_t acc = 0;
            std::vector<std::uint32_t> hist;
            std::vector<Index> touched;
            for (std::size_t s = begin; s < end; ++s) {
                const Index lo = s < size ? 0 : s - (size - 1);
                const Index hi = s < size ? s : size - 1;
                touched.clear();
                for (Index k = lo; k <= hi; ++k) {
                    const Index u = sigma(base + k) ^ sigma(base + s - k);
                    if (u >= hist.size()) hist.resize(std::bit_ceil(u + 1), 0);
                    if (hist[u]++ == 0) touched.push_back(u);
                }
                for (Index u : touched) {
                    const Index partner = u ^ target;
                    if (partner < hist.size()) acc += std::uint64_t{hist[u]} * hist[partner];
                }
                for (Index u : touched) hist[u] = 0;
            }
            return acc;
        });
    }
    return chunked_sum<std::uint64_t>(size, options.partitions, options.threads,
                                      [&](std::size_t begin, std::size_t end) {
        std::uint64_t acc = 0;
        for (Index k = begin; k < end; ++k) {
            const Index sk = sigma(base + k);
            for (Index l = 0; l < size; ++l) {
                const Index skl = sk ^ sigma(base + l) ^ target;
                const Index s = k + l;
                // m in [s - (size-1), s] intersected with [0, size)
                const Index m_lo = s >= size ? s - (size - 1) : 0;
                const Index m_hi = std::min<Index>(s, size - 1);
                for (Index m = m_lo; m <= m_hi; ++m) {
                    acc += (skl ^ sigma(base + m)) == sigma(base + s - m);
                }
            }
        }
        return acc;
    });
}

}  // namespace detail

/// Histogram over c of #{(k,l,m) in [2^n]^3 : k+l-m in [2^n], the XOR of the
/// four images is c}. Entry 0 is the size of A; entry sigma(v) of A(v).
inline std::vector<std::uint64_t> xor_target_histogram(unsigned n, const Ordering& sigma,
                                                       const CountOptions& options = {}) {
    detail::require_cover(sigma, n, "xor_target_histogram");
    const Index size = block_size(n);
    Index largest = 0;
    for (Index k = 0; k < size; ++k) largest = std::max(largest, sigma(k));
    const std::size_t width = std::bit_ceil(largest + 1);
    std::vector<std::uint64_t> hist(width, 0);
    // per-s partial histograms, merged in s order
    const std::size_t sums = 2 * size - 1;
    const std::size_t chunks = std::min<std::size_t>(options.partitions, sums);
    std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(width, 0));
    parallel_for(chunks, options.threads, [&](std::size_t c) {
        std::vector<std::uint32_t> local(width, 0);
        std::vector<Index> touched;
        for (std::size_t s = sums * c / chunks; s < sums * (c + 1) / chunks; ++s) {
            const Index lo = s < size ? 0 : s - (size - 1);
            const Index hi = s < size ? s : size - 1;
            touched.clear();
            for (Index k = lo; k <= hi; ++k) {
                const Index u = sigma(k) ^ sigma(s - k);
                if (local[u]++ == 0) touched.push_back(u);
            }
            for (Index a : touched) {
                for (Index b : touched) partial[c][a ^ b] += std::uint64_t{local[a]} * local[b];
            }
            for (Index a : touched) local[a] = 0;
        }
    });
    for (const auto& p : partial) {
        for (std::size_t i = 0; i < width; ++i) hist[i] += p[i];
    }
    return hist;
}

/// #A_n^sigma (v = 0) or #A_n^sigma(v): triples (k,l,m) in [2^n]^3 with
/// k+l-m in [2^n] and sigma(k)^sigma(l)^sigma(m)^sigma(v) = sigma(k+l-m).
/// v = 0 always selects A_n^sigma itself (XOR target 0), which coincides with
/// A_n^sigma(0) whenever sigma(0) = 0.
inline CountResult count_A(unsigned n, const Ordering& sigma, Index v = 0, const CountOptions& options = {}) {
    detail::require_cover(sigma, n, "count_A");
    if (v >= block_size(n)) {
        throw std::invalid_argument("count_A: offset " + std::to_string(v) + " is outside [2^" + std::to_string(n) + "]");
    }
    CountResult r;
    r.set_kind = v == 0 ? SetKind::A : SetKind::A_v;
    r.n = n;
    if (v != 0) r.v = static_cast<std::int64_t>(v);
    const Index target = v == 0 ? 0 : sigma(v);
    r.count = detail::count_xor_triples(sigma, 0, block_size(n), target, options);
    fill_ratios(r);
    if (detail::linear_on_block(sigma, n)) {
        apply_bound(r, pow_u64(6, n), BoundStatus::proven);
    } else if (detail::piecewise_linear_on_block(sigma, n)) {
        apply_bound(r, pow_u64(6, n), BoundStatus::conjectured);
    }
    return r;
}

/// #A~_n^sigma: triples in (2^n + [2^n])^3 with k+l-m in 2^n + [2^n] and
/// sigma(k)^sigma(l)^sigma(m) = sigma(k+l-m). sigma must cover [2^{n+1}].
inline CountResult count_A_tilde(unsigned n, const Ordering& sigma, const CountOptions& options = {}) {
    if (sigma.bits() < n + 1) {
        throw std::invalid_argument("count_A_tilde: ordering on [2^" + std::to_string(sigma.bits()) +
                                    "] does not cover the shifted block 2^" + std::to_string(n) + " + [2^" +
                                    std::to_string(n) + "]");
    }
    CountResult r;
    r.set_kind = SetKind::A_tilde;
    r.n = n;
    r.count = detail::count_xor_triples(sigma, block_size(n), block_size(n), 0, options);
    fill_ratios(r);
    if (detail::linear_on_shifted_block(sigma, n)) apply_bound(r, pow_u64(6, n), BoundStatus::proven);
    return r;
}

/// #B_n^sigma: pairs (k,l) in [2^n]^2 with k+l in [2^n] and sigma(k)^sigma(l) = sigma(k+l).
inline std::uint64_t count_B_raw(unsigned n, const Ordering& sigma) {
    const Index size = block_size(n);
    std::uint64_t count = 0;
    for (Index k = 0; k < size; ++k) {
        const Index sk = sigma(k);
        for (Index l = 0; k + l < size; ++l) count += (sk ^ sigma(l)) == sigma(k + l);
    }
    return count;
}

inline CountResult count_B(unsigned n, const Ordering& sigma) {
    detail::require_cover(sigma, n, "count_B");
    CountResult r;
    r.set_kind = SetKind::B;
    r.n = n;
    r.count = count_B_raw(n, sigma);
    fill_ratios(r);
    const bool structured = detail::linear_on_block(sigma, n) || detail::piecewise_linear_on_block(sigma, n);
    apply_bound(r, pow_u64(3, n), structured ? BoundStatus::proven : BoundStatus::conjectured);
    return r;
}

/// #A^_n^sigma(v): triples (x,y,z) in [2^n]^3 with
/// sigma(x) + sigma(y) - sigma(z) + v = sigma(x ^ y ^ z).
inline CountResult count_A_hat(unsigned n, const Ordering& sigma, std::int64_t v = 0, const CountOptions& options = {}) {
    detail::require_cover(sigma, n, "count_A_hat");
    const Index size = block_size(n);
    CountResult r;
    r.set_kind = SetKind::A_hat_v;
    r.n = n;
    r.v = v;
    if (options.algorithm == CountAlgorithm::grouped) {
        // x^y = z^w = d and sigma(x) + sigma(y) + v = sigma(z) + sigma(w).
        r.count = chunked_sum<std::uint64_t>(size, options.partitions, options.threads,
                                             [&](std::size_t begin, std::size_t end) {
            std::uint64_t acc = 0;
            Index largest = 0;
            for (Index k = 0; k < size; ++k) largest = std::max(largest, sigma(k));
            std::vector<std::uint32_t> sums(2 * largest + 1, 0);
            for (Index d = begin; d < end; ++d) {
                for (Index x = 0; x < size; ++x) ++sums[sigma(x) + sigma(x ^ d)];
                for (Index x = 0; x < size; ++x) {
                    const std::int64_t partner = static_cast<std::int64_t>(sigma(x) + sigma(x ^ d)) + v;
                    if (partner >= 0 && partner < static_cast<std::int64_t>(sums.size())) acc += sums[partner];
                }
                for (Index x = 0; x < size; ++x) sums[sigma(x) + sigma(x ^ d)] = 0;
            }
            return acc;
        });
    } else {
        r.count = chunked_sum<std::uint64_t>(size, options.partitions, options.threads,
                                             [&](std::size_t begin, std::size_t end) {
            std::uint64_t acc = 0;
            for (Index x = begin; x < end; ++x) {
                for (Index y = 0; y < size; ++y) {
                    const std::int64_t head = static_cast<std::int64_t>(sigma(x) + sigma(y)) + v;
                    for (Index z = 0; z < size; ++z) {
                        acc += head - static_cast<std::int64_t>(sigma(z)) ==
                               static_cast<std::int64_t>(sigma(x ^ y ^ z));
                    }
                }
            }
            return acc;
        });
    }
    fill_ratios(r);
    if (detail::linear_on_block(sigma, n)) apply_bound(r, pow_u64(6, n), BoundStatus::proven);
    return r;
}

/// Seeded psi map on [2^n] with values in [-2^{n+1}, 2^{n+2}].
inline std::vector<std::int64_t> random_psi(unsigned n, Rng& rng) {
    const auto size = static_cast<std::int64_t>(block_size(n));
    std::vector<std::int64_t> psi(static_cast<std::size_t>(size));
    for (auto& value : psi) value = rng.between(-2 * size, 4 * size);
    return psi;
}

/// #{(x,y) in [2^n]^2 : psi(x ^ y) = x + y}; psi is given on [2^n].
inline CountResult count_psi_pairs(unsigned n, std::span<const std::int64_t> psi) {
    const Index size = block_size(n);
    if (psi.size() < size) throw std::invalid_argument("count_psi_pairs: psi must be defined on [2^n]");
    CountResult r;
    r.set_kind = SetKind::psi_pairs;
    r.n = n;
    for (Index x = 0; x < size; ++x) {
        for (Index y = 0; y < size; ++y) r.count += psi[x ^ y] == static_cast<std::int64_t>(x + y);
    }
    fill_ratios(r);
    apply_bound(r, pow_u64(3, n), BoundStatus::proven);
    return r;
}

/// Norm of the key function from exact counts: p = 2 by Parseval (term count),
/// p = 4 as the fourth root of #A (full) or #A~ (tail).
inline NormResult lp_norm_by_count(const KeyFunctionSpec& spec, double p, const CountOptions& options = {}) {
    NormResult r;
    r.p = p;
    r.method = NormMethod::count;
    r.exact = true;
    if (p == 2.0) {
        r.value = std::sqrt(static_cast<double>(spec.term_count()));
    } else if (p == 4.0) {
        const auto count = spec.variant == KeyVariant::full ? count_A(spec.n, spec.ordering, 0, options).count
                                                            : count_A_tilde(spec.n, spec.ordering, options).count;
        r.value = std::pow(static_cast<double>(count), 0.25);
    } else {
        throw std::invalid_argument("count method supports only p = 2 and p = 4");
    }
    return r;
}

/// Builds the ordering used at block exponent n; it receives the number of
/// bits the counted set needs (n, or n + 1 for the shifted set).
using OrderingFamily = std::function<Ordering(unsigned bits)>;

/// count, ratio8 and ratio8_logadj for n = 0 ... n_max.
inline std::vector<CountResult> decay_report(unsigned n_max, const OrderingFamily& family, SetKind set = SetKind::A,
                                             const CountOptions& options = {}) {
    if (set != SetKind::A && set != SetKind::A_tilde) {
        throw std::invalid_argument("decay_report: only A and A_tilde are supported");
    }
    std::vector<CountResult> rows;
    for (unsigned n = 0; n <= n_max; ++n) {
        if (set == SetKind::A) {
            rows.push_back(count_A(n, family(n), 0, options));
        } else {
            rows.push_back(count_A_tilde(n, family(n + 1), options));
        }
    }
    return rows;
}

}  // namespace walsheq
