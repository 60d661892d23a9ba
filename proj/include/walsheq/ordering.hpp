#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "walsheq/dyadic.hpp"
#include "walsheq/gf2.hpp"
#include "walsheq/rng.hpp"

namespace walsheq {

inline constexpr unsigned max_ordering_bits = 20;

enum class OrderingKind { named, table, linear, piecewise, composite };

enum class NamedOrdering { identity, paley, original_walsh, kaczmarz, kronecker };

inline std::string_view to_string(OrderingKind kind) {
    switch (kind) {
        case OrderingKind::named: return "named";
        case OrderingKind::table: return "table";
        case OrderingKind::linear: return "linear";
        case OrderingKind::piecewise: return "piecewise";
        case OrderingKind::composite: return "composite";
    }
    return "?";
}

inline std::string_view to_string(NamedOrdering name) {
    switch (name) {
        case NamedOrdering::identity: return "identity";
        case NamedOrdering::paley: return "paley";
        case NamedOrdering::original_walsh: return "walsh";
        case NamedOrdering::kaczmarz: return "kaczmarz";
        case NamedOrdering::kronecker: return "kronecker";
    }
    return "?";
}

inline std::optional<NamedOrdering> parse_named_ordering(std::string_view s) {
    if (s == "identity") return NamedOrdering::identity;
    if (s == "paley") return NamedOrdering::paley;
    if (s == "walsh" || s == "original_walsh") return NamedOrdering::original_walsh;
    if (s == "kaczmarz") return NamedOrdering::kaczmarz;
    if (s == "kronecker") return NamedOrdering::kronecker;
    return std::nullopt;
}

inline constexpr NamedOrdering all_named_orderings[] = {
    NamedOrdering::identity, NamedOrdering::paley, NamedOrdering::original_walsh,
    NamedOrdering::kaczmarz, NamedOrdering::kronecker};

/// Raised when an image table is not a bijection of [2^n].
class NotBijectiveError : public std::invalid_argument {
public:
    NotBijectiveError(const std::string& what, Index value)
        : std::invalid_argument(what), value_(value) {}
    /// First duplicated (or out-of-range) image value.
    Index value() const noexcept { return value_; }

private:
    Index value_;
};

/// Raised when a matrix meant to define a rearrangement is singular.
class SingularMatrixError : public std::invalid_argument {
public:
    SingularMatrixError(const std::string& what, Index kernel_vector)
        : std::invalid_argument(what), kernel_vector_(kernel_vector) {}
    /// Nonzero vector mapped to zero.
    Index kernel_vector() const noexcept { return kernel_vector_; }

private:
    Index kernel_vector_;
};

/// A bijection of [2^n], materialized as its image table.
class Ordering {
public:
    Ordering(unsigned n, std::vector<Index> images, OrderingKind kind, std::string label = {})
        : n_(n), kind_(kind), label_(std::move(label)), images_(std::move(images)) {
        if (n_ > max_ordering_bits) throw std::invalid_argument("ordering: block exponent exceeds 20");
        if (images_.size() != block_size(n_)) {
            throw std::invalid_argument("ordering: table length " + std::to_string(images_.size()) +
                                        " is not 2^" + std::to_string(n_));
        }
        std::vector<bool> seen(images_.size(), false);
        for (Index v : images_) {
            if (v >= images_.size()) {
                throw NotBijectiveError("ordering: image " + std::to_string(v) + " out of range", v);
            }
            if (seen[v]) throw NotBijectiveError("ordering: duplicated image " + std::to_string(v), v);
            seen[v] = true;
        }
    }

    unsigned bits() const noexcept { return n_; }
    Index size() const noexcept { return images_.size(); }
    OrderingKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }
    std::span<const Index> images() const noexcept { return images_; }

    Index operator()(Index k) const { return images_[k]; }
    Index at(Index k) const { return images_.at(k); }

    bool is_identity() const {
        for (Index k = 0; k < size(); ++k) {
            if (images_[k] != k) return false;
        }
        return true;
    }

    friend bool operator==(const Ordering& a, const Ordering& b) { return a.images_ == b.images_; }

private:
    unsigned n_;
    OrderingKind kind_;
    std::string label_;
    std::vector<Index> images_;
};

namespace detail {
inline void check_bits(unsigned n) {
    if (n > max_ordering_bits) {
        throw std::invalid_argument("block exponent " + std::to_string(n) + " out of range (max 20)");
    }
}
inline void check_same_bits(const Ordering& a, const Ordering& b, const char* what) {
    if (a.bits() != b.bits()) {
        throw std::invalid_argument(std::string(what) + ": orderings have different block exponents (" +
                                    std::to_string(a.bits()) + " vs " + std::to_string(b.bits()) + ")");
    }
}
}  // namespace detail

inline Ordering from_matrix(const LinearMatrix& m, OrderingKind kind = OrderingKind::linear,
                            std::string label = "matrix") {
    detail::check_bits(m.dim());
    if (auto kernel = m.kernel_witness()) {
        throw SingularMatrixError("matrix is singular; kernel contains " + std::to_string(*kernel), *kernel);
    }
    std::vector<Index> images(block_size(m.dim()));
    for (Index x = 0; x < images.size(); ++x) images[x] = m.apply(x);
    return Ordering(m.dim(), std::move(images), kind, std::move(label));
}

inline Ordering from_table(std::vector<Index> images, unsigned n) {
    detail::check_bits(n);
    return Ordering(n, std::move(images), OrderingKind::table, "table");
}

/// sigma(0) = 0 and sigma(2^k + m) = 2^k + blocks[k](m); blocks[k] has dimension k.
inline Ordering piecewise_linear_from_blocks(const std::vector<LinearMatrix>& blocks,
                                             OrderingKind kind = OrderingKind::piecewise,
                                             std::string label = "piecewise") {
    const auto n = static_cast<unsigned>(blocks.size());
    detail::check_bits(n);
    std::vector<Index> images(block_size(n));
    images[0] = 0;
    for (unsigned k = 0; k < n; ++k) {
        const LinearMatrix& block = blocks[k];
        if (block.dim() != k) {
            throw std::invalid_argument("piecewise block " + std::to_string(k) + " has dimension " +
                                        std::to_string(block.dim()));
        }
        if (auto kernel = block.kernel_witness()) {
            throw SingularMatrixError("piecewise block " + std::to_string(k) + " is singular; kernel contains " +
                                          std::to_string(*kernel),
                                      *kernel);
        }
        const Index base = block_size(k);
        for (Index m = 0; m < base; ++m) images[base + m] = base + block.apply(m);
    }
    return Ordering(n, std::move(images), kind, std::move(label));
}

inline Ordering make_named_ordering(NamedOrdering name, unsigned n) {
    detail::check_bits(n);
    const std::string label(to_string(name));
    switch (name) {
        case NamedOrdering::identity:
        case NamedOrdering::paley:
            return from_matrix(LinearMatrix::identity(n), OrderingKind::named, label);
        case NamedOrdering::original_walsh:
            return from_matrix(LinearMatrix::original_walsh(n), OrderingKind::named, label);
        case NamedOrdering::kronecker:
            return from_matrix(LinearMatrix::bit_reversal(n), OrderingKind::named, label);
        case NamedOrdering::kaczmarz: {
            std::vector<LinearMatrix> blocks;
            for (unsigned k = 0; k < n; ++k) blocks.push_back(LinearMatrix::bit_reversal(k));
            return piecewise_linear_from_blocks(blocks, OrderingKind::named, label);
        }
    }
    throw std::invalid_argument("unknown ordering name");
}

inline Ordering make_named_ordering(std::string_view name, unsigned n) {
    auto parsed = parse_named_ordering(name);
    if (!parsed) throw std::invalid_argument("unknown ordering name: " + std::string(name));
    return make_named_ordering(*parsed, n);
}

inline Ordering identity_ordering(unsigned n) { return make_named_ordering(NamedOrdering::identity, n); }

/// (outer o inner)(k) = outer(inner(k)).
inline Ordering compose(const Ordering& outer, const Ordering& inner) {
    detail::check_same_bits(outer, inner, "compose");
    std::vector<Index> images(inner.size());
    for (Index k = 0; k < inner.size(); ++k) images[k] = outer(inner(k));
    return Ordering(inner.bits(), std::move(images), OrderingKind::composite, "composite");
}

inline Ordering invert(const Ordering& o) {
    std::vector<Index> images(o.size());
    for (Index k = 0; k < o.size(); ++k) images[o(k)] = k;
    return Ordering(o.bits(), std::move(images), OrderingKind::composite, "inverse");
}

struct LinearityCheck {
    bool linear = false;
    /// Pair (x, y) with sigma(x ^ y) != sigma(x) ^ sigma(y) when not linear.
    std::optional<std::pair<Index, Index>> witness;
};

inline LinearityCheck is_dyadically_linear(const Ordering& o) {
    if (o(0) != 0) return {false, std::pair<Index, Index>{0, 0}};
    for (Index x = 1; x < o.size(); ++x) {
        // x is checked after every smaller index, so sigma(rest) already agrees
        // with the basis prediction.
        const Index low = x & (~x + 1);
        const Index rest = x ^ low;
        if (o(x) != (o(low) ^ o(rest))) return {false, std::pair<Index, Index>{low, rest}};
    }
    return {true, std::nullopt};
}

/// The matrix realizing a dyadically linear ordering (columns are basis images).
inline std::optional<LinearMatrix> linear_matrix_of(const Ordering& o) {
    if (!is_dyadically_linear(o).linear) return std::nullopt;
    LinearMatrix m(o.bits());
    for (unsigned j = 0; j < o.bits(); ++j) {
        const Index col = o(block_size(j));
        for (unsigned i = 0; i < o.bits(); ++i) m.set(i, j, (col >> i) & 1u);
    }
    return m;
}

/// sigma(0) = 0, every block {2^k, ..., 2^{k+1}-1} is invariant and acts linearly.
inline bool is_piecewise_linear(const Ordering& o) {
    if (o(0) != 0) return false;
    for (unsigned k = 0; k < o.bits(); ++k) {
        const Index base = block_size(k);
        auto local = [&](Index m) -> std::optional<Index> {
            const Index image = o(base + m);
            if (image < base || image >= 2 * base) return std::nullopt;
            return image - base;
        };
        if (local(0) != Index{0}) return false;
        for (Index m = 1; m < base; ++m) {
            const Index low = m & (~m + 1);
            const auto a = local(m), b = local(low), c = local(m ^ low);
            if (!a || !b || !c || *a != (*b ^ *c)) return false;
        }
    }
    return true;
}

enum class DeviationFlavor { xor_metric, abs_metric };

struct DeviationProfile {
    DeviationFlavor flavor;
    std::vector<Index> values;
    Index max_value = 0;

    Index max_over_block(unsigned n) const {
        const Index limit = std::min<Index>(block_size(n), values.size());
        Index best = 0;
        for (Index u = 0; u < limit; ++u) best = std::max(best, values[u]);
        return best;
    }
};

/// f(u) = pi(u) XOR sigma(u).
inline DeviationProfile xor_deviation(const Ordering& pi, const Ordering& sigma) {
    detail::check_same_bits(pi, sigma, "xor_deviation");
    DeviationProfile p{DeviationFlavor::xor_metric, std::vector<Index>(pi.size()), 0};
    for (Index u = 0; u < pi.size(); ++u) {
        p.values[u] = pi(u) ^ sigma(u);
        p.max_value = std::max(p.max_value, p.values[u]);
    }
    return p;
}

/// f^(u) = |pi(u) - sigma(u)|.
inline DeviationProfile abs_deviation(const Ordering& pi, const Ordering& sigma) {
    detail::check_same_bits(pi, sigma, "abs_deviation");
    DeviationProfile p{DeviationFlavor::abs_metric, std::vector<Index>(pi.size()), 0};
    for (Index u = 0; u < pi.size(); ++u) {
        p.values[u] = pi(u) > sigma(u) ? pi(u) - sigma(u) : sigma(u) - pi(u);
        p.max_value = std::max(p.max_value, p.values[u]);
    }
    return p;
}

namespace detail {
inline std::vector<unsigned> normalize_bit_set(std::vector<unsigned> bits, unsigned n) {
    std::sort(bits.begin(), bits.end());
    bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
    for (unsigned b : bits) {
        if (b >= n) {
            throw std::invalid_argument("bit position " + std::to_string(b) + " is not below n = " +
                                        std::to_string(n));
        }
    }
    return bits;
}

/// Scatter the low bits of `pattern` into the given positions.
inline Index deposit(Index pattern, const std::vector<unsigned>& positions) {
    Index out = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) out |= ((pattern >> i) & 1u) << positions[i];
    return out;
}

/// Gather the bits at the given positions into the low bits.
inline Index extract(Index x, const std::vector<unsigned>& positions) {
    Index out = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) out |= ((x >> positions[i]) & 1u) << i;
    return out;
}
}  // namespace detail

/// Scrambles the coordinates listed in `bit_set` and leaves the rest untouched.
/// For each pattern of the untouched coordinates, the scramble of the selected
/// coordinates is a Fisher-Yates shuffle keyed by (seed, untouched pattern).
inline Ordering subset_scramble(std::vector<unsigned> bit_set, unsigned n, std::uint64_t seed) {
    detail::check_bits(n);
    const auto selected = detail::normalize_bit_set(std::move(bit_set), n);
    const Index full = block_size(n) - 1;
    Index selected_mask = 0;
    for (unsigned b : selected) selected_mask |= Index{1} << b;
    const Index patterns = block_size(static_cast<unsigned>(selected.size()));

    std::vector<Index> images(block_size(n));
    for (Index rest = 0; rest <= full; ++rest) {
        if (rest & selected_mask) continue;
        std::vector<Index> scramble(patterns);
        for (Index i = 0; i < patterns; ++i) scramble[i] = i;
        Rng rng(mix_seed(seed, rest));
        rng.shuffle(scramble);
        for (Index p = 0; p < patterns; ++p) {
            images[rest | detail::deposit(p, selected)] = rest | detail::deposit(scramble[p], selected);
        }
    }
    return Ordering(n, std::move(images), OrderingKind::table, "subset");
}

/// Linear bit permutation sending the listed positions (ascending) to the low
/// coordinates and the remaining positions (ascending) above them:
/// result(x) = sum_i x_{k_i} 2^i.
inline Ordering low_coordinate_permutation(std::vector<unsigned> bit_set, unsigned n) {
    const auto selected = detail::normalize_bit_set(std::move(bit_set), n);
    std::vector<unsigned> source = selected;
    for (unsigned b = 0; b < n; ++b) {
        if (!std::binary_search(selected.begin(), selected.end(), b)) source.push_back(b);
    }
    return from_matrix(LinearMatrix::bit_permutation(source), OrderingKind::linear, "bit-permutation");
}

/// Uniformly random permutation of [2^n].
inline Ordering random_ordering(unsigned n, Rng& rng) {
    std::vector<Index> images(block_size(n));
    for (Index i = 0; i < images.size(); ++i) images[i] = i;
    rng.shuffle(images);
    return from_table(std::move(images), n);
}

inline Ordering random_linear_ordering(unsigned n, Rng& rng) {
    return from_matrix(LinearMatrix::random_invertible(n, rng));
}

// Permutation table files: line i holds sigma(i) in decimal.

inline std::vector<Index> parse_table(std::istream& in) {
    std::vector<Index> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            // only a trailing newline is allowed
            std::string rest;
            while (std::getline(in, rest)) {
                if (!rest.empty() && rest != "\r") {
                    throw std::invalid_argument("table file: empty line " + std::to_string(line_no));
                }
            }
            break;
        }
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(line, &used, 10);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != line.size() || line.front() == '-' || line.front() == '+') {
            throw std::invalid_argument("table file: line " + std::to_string(line_no) + " is not a decimal value");
        }
        values.push_back(v);
    }
    return values;
}

inline Ordering load_table(const std::string& path, std::optional<unsigned> expected_bits = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    auto values = parse_table(in);
    if (values.empty() || !std::has_single_bit(values.size())) {
        throw std::invalid_argument("table file " + path + ": " + std::to_string(values.size()) +
                                    " lines is not a power of two");
    }
    const auto n = static_cast<unsigned>(std::countr_zero(values.size()));
    if (expected_bits && *expected_bits != n) {
        throw std::invalid_argument("table file " + path + ": has 2^" + std::to_string(n) +
                                    " entries, expected 2^" + std::to_string(*expected_bits));
    }
    return from_table(std::move(values), n);
}

inline std::string to_table_text(const Ordering& o) {
    std::string out;
    for (Index v : o.images()) {
        out += std::to_string(v);
        out.push_back('\n');
    }
    return out;
}

}  // namespace walsheq
