#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "walsheq/dyadic.hpp"
#include "walsheq/ordering.hpp"
#include "walsheq/parallel.hpp"

namespace walsheq {

namespace detail {
inline void check_unit_point(double t, const char* name) {
    if (!(t >= 0.0 && t < 1.0)) {
        throw std::domain_error(std::string(name) + " must lie in [0, 1)");
    }
}
}  // namespace detail

/// Binary digit r (r = 0 is the first digit after the point) of t in [0, 1),
/// using the finite expansion at dyadic rationals.
inline unsigned unit_digit(double t, unsigned r) {
    return static_cast<unsigned>(std::fmod(std::floor(std::ldexp(t, static_cast<int>(r) + 1)), 2.0));
}

/// Walsh-Paley function w_k(t) = prod_i r_i(t)^{k_i}; right-continuous at dyadic rationals.
inline int walsh_eval(Index k, double t) {
    detail::check_unit_point(t, "walsh_eval: t");
    unsigned parity = 0;
    for (unsigned r = 0; k >> r; ++r) {
        if ((k >> r) & 1u) parity ^= unit_digit(t, r);
    }
    return parity ? -1 : 1;
}

/// w_k on the dyadic cell [cell / 2^bits, (cell + 1) / 2^bits); requires k < 2^bits.
constexpr int walsh_on_cell(Index k, Index cell, unsigned bits) noexcept {
    return (std::popcount(k & reverse_bits(cell, bits)) & 1) ? -1 : 1;
}

enum class KeyVariant { full, tail };

inline std::string_view to_string(KeyVariant v) { return v == KeyVariant::full ? "full" : "tail"; }

/// Data defining the key function. Full: sum over k in [2^n]. Tail: sum over
/// k in 2^n + [2^n] (the difference of the 2^{n+1} and 2^n partial kernels).
struct KeyFunctionSpec {
    unsigned n = 0;
    Ordering ordering;
    KeyVariant variant = KeyVariant::full;

    KeyFunctionSpec(unsigned n_, Ordering o, KeyVariant v = KeyVariant::full)
        : n(n_), ordering(std::move(o)), variant(v) {
        const unsigned needed = variant == KeyVariant::full ? n : n + 1;
        if (needed > ordering.bits()) {
            throw std::invalid_argument("key function: ordering on [2^" + std::to_string(ordering.bits()) +
                                        "] does not cover the indices of the " + std::string(to_string(variant)) +
                                        " variant at n = " + std::to_string(n));
        }
    }

    Index first_index() const { return variant == KeyVariant::full ? 0 : block_size(n); }
    Index term_count() const { return block_size(n); }
    Index last_index() const { return first_index() + term_count() - 1; }

    /// Binary digits needed so every Walsh index in the sum is constant on t-cells.
    unsigned walsh_bits() const {
        Index largest = 0;
        for (Index k = first_index(); k <= last_index(); ++k) largest = std::max(largest, ordering(k));
        const unsigned variant_bits = variant == KeyVariant::full ? n : n + 1;
        return std::max<unsigned>(variant_bits, static_cast<unsigned>(std::bit_width(largest)));
    }
};

/// sum_k e_k(s) w_{sigma(k)}(t) with e_k(s) = exp(2 pi i k s).
inline std::complex<double> key_function_eval(const KeyFunctionSpec& spec, double s, double t) {
    detail::check_unit_point(s, "key_function_eval: s");
    detail::check_unit_point(t, "key_function_eval: t");
    std::complex<double> sum = 0.0;
    for (Index k = spec.first_index(); k <= spec.last_index(); ++k) {
        const double angle = 2.0 * std::numbers::pi * std::fmod(static_cast<double>(k) * s, 1.0);
        sum += std::polar(1.0, angle) * static_cast<double>(walsh_eval(spec.ordering(k), t));
    }
    return sum;
}

enum class NormMethod { grid, count };

inline std::string_view to_string(NormMethod m) { return m == NormMethod::grid ? "grid" : "count"; }

struct NormResult {
    double p = 2.0;
    double value = 0.0;
    NormMethod method = NormMethod::grid;
    std::size_t grid_s_points = 0;
    std::size_t grid_t_cells = 0;
    /// True when p is even and both grids meet the exactness thresholds.
    bool exact = false;
};

struct QuadratureOptions {
    std::size_t grid_s = 0;  ///< 0 selects the default for p
    std::size_t grid_t = 0;  ///< 0 selects the default for the spec
    bool require_exact = false;
    unsigned threads = 1;
};

class GridTooCoarseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline bool is_even_exponent(double p) {
    return p >= 2.0 && std::floor(p) == p && std::fmod(p, 2.0) == 0.0;
}

namespace detail {

inline void check_exponent(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be finite and >= 1");
}

inline std::size_t default_grid_s(double p, Index max_frequency) {
    // An equispaced rule with more than p * max_frequency points integrates |F|^p
    // exactly for even p; power-of-two headroom above that.
    const auto scale = static_cast<std::size_t>(std::ceil(p));
    const std::size_t exact = scale * std::bit_ceil(static_cast<std::size_t>(max_frequency) + 1);
    if (is_even_exponent(p)) return std::max<std::size_t>(1, exact);
    return std::max<std::size_t>(64, 16 * exact);
}

inline double power_of_modulus(std::complex<double> z, double p, bool even) {
    const double norm2 = std::norm(z);
    if (even) {
        double r = 1.0;
        for (int e = static_cast<int>(p) / 2; e > 0; --e) r *= norm2;
        return r;
    }
    return std::pow(norm2, p / 2.0);
}

/// exp(2 pi i j / size) for j in [0, size).
inline std::vector<std::complex<double>> unit_roots(std::size_t size) {
    std::vector<std::complex<double>> roots(size);
    for (std::size_t j = 0; j < size; ++j) {
        roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size));
    }
    return roots;
}

}  // namespace detail

/// L_p norm of the key function over [0,1)^2 by product quadrature: equispaced
/// s-points and one representative per dyadic t-cell. The t-rule is exact (the
/// integrand is constant on cells); the s-rule is exact for even p once grid_s
/// exceeds p times the largest frequency.
inline NormResult lp_norm_key(const KeyFunctionSpec& spec, double p, const QuadratureOptions& options = {}) {
    detail::check_exponent(p);
    const unsigned bits = spec.walsh_bits();
    const std::size_t required_t = block_size(bits);
    const std::size_t grid_t = options.grid_t ? options.grid_t : std::max<std::size_t>(required_t, 1);
    if (!std::has_single_bit(grid_t) || grid_t < required_t) {
        throw GridTooCoarseError("grid_t must be a power of two >= " + std::to_string(required_t));
    }
    const Index max_index = spec.last_index();
    // default p * 2^{n+1} points: exact for both variants
    const std::size_t grid_s =
        options.grid_s ? options.grid_s : detail::default_grid_s(p, block_size(spec.n + 1) - 1);
    const bool even = is_even_exponent(p);
    const bool exact = even && static_cast<double>(grid_s) > p * static_cast<double>(max_index);
    if (options.require_exact && !exact) {
        throw GridTooCoarseError(even ? "grid_s must exceed p * " + std::to_string(max_index) + " for an exact rule"
                                      : "an exact rule needs an even exponent");
    }

    const unsigned t_bits = static_cast<unsigned>(std::countr_zero(grid_t));
    const auto roots = detail::unit_roots(grid_s);
    const Index first = spec.first_index();
    const Index terms = spec.term_count();
    std::vector<Index> images(terms);
    for (Index k = 0; k < terms; ++k) images[k] = spec.ordering(first + k);

    // One partial sum per t-cell, reduced in cell order.
    const double total = chunked_sum<double>(grid_t, grid_t, options.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> coeff(terms);
        double acc = 0.0;
        for (std::size_t cell = begin; cell < end; ++cell) {
            for (Index k = 0; k < terms; ++k) coeff[k] = walsh_on_cell(images[k], cell, t_bits);
            double cell_sum = 0.0;
            for (std::size_t q = 0; q < grid_s; ++q) {
                std::complex<double> f = 0.0;
                // index (first + k) * q mod grid_s, advanced incrementally
                std::size_t pos = static_cast<std::size_t>((static_cast<unsigned __int128>(first) * q) % grid_s);
                for (Index k = 0; k < terms; ++k) {
                    f += coeff[k] * roots[pos];
                    pos += q;
                    if (pos >= grid_s) pos %= grid_s;
                }
                cell_sum += detail::power_of_modulus(f, p, even);
            }
            acc += cell_sum;
        }
        return acc;
    });
    const double mean = total / (static_cast<double>(grid_s) * static_cast<double>(grid_t));
    return NormResult{p, std::pow(mean, 1.0 / p), NormMethod::grid, grid_s, grid_t, exact};
}

/// Whether an equispaced rule with grid_s points integrates |D_n|^p exactly.
inline bool dirichlet_rule_exact(Index n, double p, std::size_t grid_s) {
    return is_even_exponent(p) && static_cast<double>(grid_s) > p * static_cast<double>(n - 1);
}

/// L_p norm over [0,1) of the Dirichlet kernel sum_{k<n} e_k by the same
/// equispaced rule (exact for even p when grid_s > p (n - 1)).
inline double dirichlet_lp_norm(Index n, double p, std::size_t grid_s = 0, bool require_exact = false) {
    if (n < 1) throw std::invalid_argument("dirichlet_lp_norm: need at least one term");
    detail::check_exponent(p);
    if (grid_s == 0) grid_s = detail::default_grid_s(p, n - 1);
    const bool even = is_even_exponent(p);
    if (require_exact && !dirichlet_rule_exact(n, p, grid_s)) {
        throw GridTooCoarseError("grid_s too coarse for an exact Dirichlet norm");
    }
    const auto roots = detail::unit_roots(grid_s);
    double total = 0.0;
    for (std::size_t q = 0; q < grid_s; ++q) {
        std::complex<double> f = 0.0;
        std::size_t pos = 0;
        for (Index k = 0; k < n; ++k) {
            f += roots[pos];
            pos += q;
            if (pos >= grid_s) pos %= grid_s;
        }
        total += detail::power_of_modulus(f, p, even);
    }
    return std::pow(total / static_cast<double>(grid_s), 1.0 / p);
}

/// Constant-free lower bound on the equivalence constant r_p(E, W^sigma) for the
/// indices of the spec: ||Dirichlet||_p / ||F||_p. The tail variant bounds the
/// constant of the first 2^{n+1} functions.
inline double rp_lower_bound(const KeyFunctionSpec& spec, double p, unsigned threads = 1) {
    if (!(p > 1.0)) throw std::invalid_argument("rp_lower_bound: p must exceed 1");
    QuadratureOptions options;
    options.threads = threads;
    const double key = lp_norm_key(spec, p, options).value;
    return dirichlet_lp_norm(spec.term_count(), p) / key;
}

}  // namespace walsheq
