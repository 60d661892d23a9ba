#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "walsheq/dyadic.hpp"
#include "walsheq/rng.hpp"

namespace walsheq {

/// Square matrix over the two-element field acting on the binary digits of an
/// index: output bit i = sum_j t(i,j) * input bit j (mod 2). Row i is stored as
/// a bitmask whose bit j is t(i,j).
class LinearMatrix {
public:
    static constexpr unsigned max_dim = 32;

    LinearMatrix() = default;

    explicit LinearMatrix(unsigned n) : rows_(check_dim(n), 0) {}

    LinearMatrix(unsigned n, std::vector<std::uint64_t> rows) : rows_(std::move(rows)) {
        check_dim(n);
        if (rows_.size() != n) throw std::invalid_argument("LinearMatrix: expected one row per dimension");
        const std::uint64_t mask = low_mask(n);
        for (auto r : rows_) {
            if (r & ~mask) throw std::invalid_argument("LinearMatrix: row has bits beyond dimension");
        }
    }

    static LinearMatrix identity(unsigned n) {
        LinearMatrix m(n);
        for (unsigned i = 0; i < n; ++i) m.rows_[i] = std::uint64_t{1} << i;
        return m;
    }

    /// t(i,j) = 1 iff j == i or j == i+1: output bit i is x_i XOR x_{i+1}.
    static LinearMatrix original_walsh(unsigned n) {
        LinearMatrix m(n);
        for (unsigned i = 0; i < n; ++i) {
            m.rows_[i] = std::uint64_t{1} << i;
            if (i + 1 < n) m.rows_[i] |= std::uint64_t{1} << (i + 1);
        }
        return m;
    }

    static LinearMatrix bit_reversal(unsigned n) {
        LinearMatrix m(n);
        for (unsigned i = 0; i < n; ++i) m.rows_[i] = std::uint64_t{1} << (n - 1 - i);
        return m;
    }

    /// Permutation of bit positions: output bit i takes input bit source[i].
    static LinearMatrix bit_permutation(const std::vector<unsigned>& source) {
        const auto n = static_cast<unsigned>(source.size());
        LinearMatrix m(n);
        for (unsigned i = 0; i < n; ++i) {
            if (source[i] >= n) throw std::invalid_argument("bit_permutation: source out of range");
            m.rows_[i] = std::uint64_t{1} << source[i];
        }
        if (!m.is_invertible()) throw std::invalid_argument("bit_permutation: sources are not distinct");
        return m;
    }

    /// Uniformly random invertible matrix (rejection sampling).
    static LinearMatrix random_invertible(unsigned n, Rng& rng) {
        while (true) {
            LinearMatrix m(n);
            for (auto& r : m.rows_) r = n == 0 ? 0 : rng.next() & low_mask(n);
            if (m.is_invertible()) return m;
        }
    }

    unsigned dim() const noexcept { return static_cast<unsigned>(rows_.size()); }
    const std::vector<std::uint64_t>& rows() const noexcept { return rows_; }

    bool entry(unsigned i, unsigned j) const { return (rows_.at(i) >> j) & 1u; }
    void set(unsigned i, unsigned j, bool value) {
        if (j >= dim()) throw std::out_of_range("LinearMatrix::set");
        auto& r = rows_.at(i);
        r = value ? (r | (std::uint64_t{1} << j)) : (r & ~(std::uint64_t{1} << j));
    }

    Index apply(Index x) const noexcept {
        Index y = 0;
        for (unsigned i = 0; i < rows_.size(); ++i) {
            y |= static_cast<Index>(std::popcount(rows_[i] & x) & 1) << i;
        }
        return y;
    }

    /// Nonzero x with apply(x) == 0, if the matrix is singular.
    std::optional<Index> kernel_witness() const {
        const unsigned n = dim();
        // Columns as row-bitmasks, reduced with combination tracking.
        std::vector<std::uint64_t> basis;
        std::vector<std::uint64_t> combo;
        for (unsigned j = 0; j < n; ++j) {
            std::uint64_t col = 0;
            for (unsigned i = 0; i < n; ++i) col |= static_cast<std::uint64_t>(entry(i, j)) << i;
            std::uint64_t mix = std::uint64_t{1} << j;
            for (std::size_t b = 0; b < basis.size(); ++b) {
                const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(basis[b]));
                if (col & pivot) {
                    col ^= basis[b];
                    mix ^= combo[b];
                }
            }
            if (col == 0) return mix;
            basis.push_back(col);
            combo.push_back(mix);
            // keep pivots unique: reduce older vectors by the new pivot
            const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(col));
            for (std::size_t b = 0; b + 1 < basis.size(); ++b) {
                if (basis[b] & pivot) {
                    basis[b] ^= col;
                    combo[b] ^= mix;
                }
            }
        }
        return std::nullopt;
    }

    bool is_invertible() const { return !kernel_witness().has_value(); }

    unsigned rank() const {
        std::vector<std::uint64_t> rows = rows_;
        unsigned r = 0;
        for (unsigned bit = 0; bit < dim() && r < rows.size(); ++bit) {
            const std::uint64_t m = std::uint64_t{1} << bit;
            std::size_t p = r;
            while (p < rows.size() && !(rows[p] & m)) ++p;
            if (p == rows.size()) continue;
            std::swap(rows[p], rows[r]);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i != r && (rows[i] & m)) rows[i] ^= rows[r];
            }
            ++r;
        }
        return r;
    }

    LinearMatrix inverse() const {
        const unsigned n = dim();
        std::vector<std::uint64_t> a = rows_;
        std::vector<std::uint64_t> inv = identity(n).rows_;
        for (unsigned c = 0; c < n; ++c) {
            const std::uint64_t m = std::uint64_t{1} << c;
            unsigned p = c;
            while (p < n && !(a[p] & m)) ++p;
            if (p == n) throw std::domain_error("LinearMatrix::inverse: singular matrix");
            std::swap(a[p], a[c]);
            std::swap(inv[p], inv[c]);
            for (unsigned i = 0; i < n; ++i) {
                if (i != c && (a[i] & m)) {
                    a[i] ^= a[c];
                    inv[i] ^= inv[c];
                }
            }
        }
        return LinearMatrix(n, std::move(inv));
    }

    /// Matrix product: (a * b).apply(x) == a.apply(b.apply(x)).
    friend LinearMatrix operator*(const LinearMatrix& a, const LinearMatrix& b) {
        if (a.dim() != b.dim()) throw std::invalid_argument("LinearMatrix: dimension mismatch");
        LinearMatrix out(a.dim());
        for (unsigned j = 0; j < b.dim(); ++j) {
            const Index col = a.apply(b.apply(std::uint64_t{1} << j));
            for (unsigned i = 0; i < a.dim(); ++i) {
                if ((col >> i) & 1u) out.rows_[i] |= std::uint64_t{1} << j;
            }
        }
        return out;
    }

    friend bool operator==(const LinearMatrix&, const LinearMatrix&) = default;

    /// n lines of n '0'/'1' characters; line i is row i, column j is input bit j.
    std::string to_text() const {
        std::string out;
        for (unsigned i = 0; i < dim(); ++i) {
            for (unsigned j = 0; j < dim(); ++j) out.push_back(entry(i, j) ? '1' : '0');
            out.push_back('\n');
        }
        return out;
    }

    static LinearMatrix parse(std::istream& in) {
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            lines.push_back(line);
        }
        const auto n = static_cast<unsigned>(lines.size());
        LinearMatrix m(n);
        for (unsigned i = 0; i < n; ++i) {
            if (lines[i].size() != n) {
                throw std::invalid_argument("matrix file: line " + std::to_string(i + 1) + " has " +
                                            std::to_string(lines[i].size()) + " characters, expected " +
                                            std::to_string(n));
            }
            for (unsigned j = 0; j < n; ++j) {
                const char c = lines[i][j];
                if (c != '0' && c != '1') {
                    throw std::invalid_argument("matrix file: line " + std::to_string(i + 1) +
                                                " has a character other than 0/1");
                }
                m.set(i, j, c == '1');
            }
        }
        return m;
    }

    static LinearMatrix parse_text(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    static LinearMatrix load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open matrix file: " + path);
        return parse(in);
    }

private:
    static unsigned check_dim(unsigned n) {
        if (n > max_dim) throw std::invalid_argument("LinearMatrix: dimension exceeds 32");
        return n;
    }
    static constexpr std::uint64_t low_mask(unsigned n) {
        return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    }

    std::vector<std::uint64_t> rows_;
};

}  // namespace walsheq
