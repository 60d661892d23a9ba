#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "walsheq/ordering.hpp"
#include "walsheq/ordering_spec.hpp"

using namespace walsheq;

namespace {
oracle::Table table_of(const Ordering& o) { return {o.images().begin(), o.images().end()}; }

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("walsheq_" + name);
    std::ofstream(path) << content;
    return path.string();
}
}  // namespace

TEST(Orderings, NamedExamples) {
    EXPECT_EQ(make_named_ordering(NamedOrdering::original_walsh, 2)(3), 2u);
    EXPECT_EQ(make_named_ordering(NamedOrdering::kaczmarz, 3)(6), 5u);
    for (unsigned n = 0; n <= 6; ++n) {
        EXPECT_TRUE(make_named_ordering(NamedOrdering::identity, n).is_identity());
        EXPECT_TRUE(make_named_ordering(NamedOrdering::paley, n).is_identity());
    }
}

TEST(Orderings, NamedMatchOracles) {
    for (unsigned n = 0; n <= 8; ++n) {
        EXPECT_EQ(table_of(make_named_ordering(NamedOrdering::original_walsh, n)), oracle::original_walsh(n));
        EXPECT_EQ(table_of(make_named_ordering(NamedOrdering::kronecker, n)), oracle::kronecker(n));
        EXPECT_EQ(table_of(make_named_ordering(NamedOrdering::kaczmarz, n)), oracle::kaczmarz(n));
    }
}

TEST(Orderings, NamesParse) {
    EXPECT_EQ(parse_named_ordering("walsh"), NamedOrdering::original_walsh);
    EXPECT_EQ(parse_named_ordering("original_walsh"), NamedOrdering::original_walsh);
    EXPECT_FALSE(parse_named_ordering("hadamard").has_value());
    EXPECT_THROW(make_named_ordering("hadamard", 3), std::invalid_argument);
    EXPECT_THROW(make_named_ordering(NamedOrdering::identity, 21), std::invalid_argument);
}

TEST(Orderings, OriginalWalshInverseIsGrayDecode) {
    const unsigned n = 10;
    const Ordering w = make_named_ordering(NamedOrdering::original_walsh, n);
    for (Index x = 0; x < w.size(); ++x) {
        // solve the banded system from the top bit down
        Index y = w(x), decoded = 0;
        for (int i = int(n) - 1; i >= 0; --i) {
            const Index above = i + 1 < int(n) ? (decoded >> (i + 1)) & 1 : 0;
            decoded |= (((y >> i) & 1) ^ above) << i;
        }
        EXPECT_EQ(decoded, x);
    }
}

TEST(Orderings, FromMatrix) {
    EXPECT_TRUE(from_matrix(LinearMatrix::identity(3)).is_identity());
    EXPECT_EQ(from_matrix(LinearMatrix::original_walsh(4)), make_named_ordering(NamedOrdering::original_walsh, 4));
    EXPECT_EQ(from_matrix(LinearMatrix::bit_reversal(3))(1), 4u);
    const Ordering o = from_matrix(LinearMatrix::original_walsh(4));
    EXPECT_EQ(o.kind(), OrderingKind::linear);
}

TEST(Orderings, SingularMatrixHasKernelWitness) {
    LinearMatrix m(3, {0b011, 0b011, 0b100});
    try {
        from_matrix(m);
        FAIL() << "singular matrix accepted";
    } catch (const SingularMatrixError& e) {
        EXPECT_NE(e.kernel_vector(), 0u);
        EXPECT_EQ(m.apply(e.kernel_vector()), 0u);
    }
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::uint64_t> rows(5);
        for (auto& r : rows) r = rng.below(32);
        const LinearMatrix a(5, rows);
        const auto k = a.kernel_witness();
        EXPECT_EQ(k.has_value(), a.rank() < 5);
        if (k) {
            EXPECT_NE(*k, 0u);
            EXPECT_EQ(a.apply(*k), 0u);
        }
    }
}

TEST(Orderings, MatrixAlgebra) {
    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
        const auto a = LinearMatrix::random_invertible(6, rng);
        const auto b = LinearMatrix::random_invertible(6, rng);
        const auto inv = a.inverse();
        for (Index x = 0; x < 64; ++x) {
            EXPECT_EQ(inv.apply(a.apply(x)), x);
            EXPECT_EQ((a * b).apply(x), a.apply(b.apply(x)));
        }
    }
}

TEST(Orderings, MatrixTextRoundTrip) {
    Rng rng(7);
    const auto a = LinearMatrix::random_invertible(5, rng);
    std::istringstream in(a.to_text());
    EXPECT_EQ(LinearMatrix::parse(in).to_text(), a.to_text());
    std::istringstream bad("01\n1\n");
    EXPECT_THROW(LinearMatrix::parse(bad), std::invalid_argument);
    std::istringstream bad_char("0x\n10\n");
    EXPECT_THROW(LinearMatrix::parse(bad_char), std::invalid_argument);
}

TEST(Orderings, FromTable) {
    EXPECT_TRUE(from_table({0, 1, 2, 3}, 2).is_identity());
    EXPECT_EQ(from_table({0, 1, 3, 2}, 2)(2), 3u);
    try {
        from_table({0, 1, 1, 3}, 2);
        FAIL();
    } catch (const NotBijectiveError& e) {
        EXPECT_EQ(e.value(), 1u);
    }
    EXPECT_THROW(from_table({0, 1, 2}, 2), std::invalid_argument);
    EXPECT_THROW(from_table({0, 1, 2, 4}, 2), NotBijectiveError);
}

TEST(Orderings, PiecewiseBlocks) {
    std::vector<LinearMatrix> ids, revs;
    for (unsigned k = 0; k < 5; ++k) {
        ids.push_back(LinearMatrix::identity(k));
        revs.push_back(LinearMatrix::bit_reversal(k));
    }
    EXPECT_TRUE(piecewise_linear_from_blocks(ids).is_identity());
    const Ordering kacz = piecewise_linear_from_blocks(revs);
    EXPECT_EQ(kacz, make_named_ordering(NamedOrdering::kaczmarz, 5));
    EXPECT_TRUE(is_piecewise_linear(kacz));
    EXPECT_EQ(piecewise_linear_from_blocks({LinearMatrix::identity(0), LinearMatrix::identity(1)}),
              from_table({0, 1, 2, 3}, 2));
    std::vector<LinearMatrix> bad = ids;
    bad[3] = LinearMatrix(3, {1, 1, 4});
    EXPECT_THROW(piecewise_linear_from_blocks(bad), SingularMatrixError);
    std::vector<LinearMatrix> wrong_dim = {LinearMatrix::identity(0), LinearMatrix::identity(2)};
    EXPECT_THROW(piecewise_linear_from_blocks(wrong_dim), std::invalid_argument);
}

TEST(Orderings, KaczmarzBlocksInvariant) {
    const Ordering k = make_named_ordering(NamedOrdering::kaczmarz, 10);
    for (unsigned b = 0; b < 10; ++b)
        for (Index x = block_size(b); x < block_size(b + 1); ++x) {
            EXPECT_GE(k(x), block_size(b));
            EXPECT_LT(k(x), block_size(b + 1));
        }
}

TEST(Orderings, ComposeInvert) {
    const Ordering k = make_named_ordering(NamedOrdering::kaczmarz, 3);
    const Ordering id = identity_ordering(3);
    EXPECT_EQ(compose(id, k), k);
    EXPECT_TRUE(invert(id).is_identity());
    EXPECT_TRUE(compose(invert(k), k).is_identity());
    EXPECT_THROW(compose(k, identity_ordering(4)), std::invalid_argument);
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const Ordering a = random_ordering(5, rng), b = random_ordering(5, rng), c = random_ordering(5, rng);
        EXPECT_EQ(compose(compose(a, b), c), compose(a, compose(b, c)));
        EXPECT_TRUE(compose(a, invert(a)).is_identity());
        EXPECT_TRUE(compose(invert(a), a).is_identity());
        EXPECT_EQ(invert(compose(a, b)), compose(invert(b), invert(a)));
    }
}

TEST(Orderings, Linearity) {
    EXPECT_TRUE(is_dyadically_linear(make_named_ordering(NamedOrdering::original_walsh, 4)).linear);
    EXPECT_TRUE(is_dyadically_linear(identity_ordering(5)).linear);
    const auto check = is_dyadically_linear(make_named_ordering(NamedOrdering::kaczmarz, 3));
    ASSERT_FALSE(check.linear);
    ASSERT_TRUE(check.witness.has_value());
    EXPECT_EQ(*check.witness, (std::pair<Index, Index>{1, 4}));
    const Ordering k = make_named_ordering(NamedOrdering::kaczmarz, 3);
    EXPECT_EQ(k(5), 6u);
    EXPECT_EQ(k(1) ^ k(4), 5u);
}

TEST(Orderings, LinearOrderingsAreExhaustivelyLinear) {
    Rng rng(9);
    for (unsigned n = 1; n <= 8; ++n) {
        for (const Ordering& o : {random_linear_ordering(n, rng), make_named_ordering(NamedOrdering::kronecker, n),
                                  make_named_ordering(NamedOrdering::original_walsh, n)}) {
            for (Index x = 0; x < o.size(); ++x)
                for (Index y = 0; y < o.size(); ++y) ASSERT_EQ(o(x ^ y), o(x) ^ o(y));
        }
    }
    for (unsigned n : {12u, 16u}) {
        const Ordering o = random_linear_ordering(n, rng);
        for (int i = 0; i < 100000; ++i) {
            const Index x = rng.below(o.size()), y = rng.below(o.size());
            ASSERT_EQ(o(x ^ y), o(x) ^ o(y));
        }
    }
    // the linearity check agrees with the exhaustive definition
    for (int i = 0; i < 200; ++i) {
        const Ordering o = random_ordering(3, rng);
        bool linear = o(0) == 0;
        for (Index x = 0; x < 8; ++x)
            for (Index y = 0; y < 8; ++y) linear = linear && o(x ^ y) == (o(x) ^ o(y));
        const auto check = is_dyadically_linear(o);
        EXPECT_EQ(check.linear, linear);
        if (!check.linear) {
            const auto [x, y] = *check.witness;
            EXPECT_NE(o(x ^ y), o(x) ^ o(y));
        }
        EXPECT_EQ(linear_matrix_of(o).has_value(), linear);
    }
}

TEST(Orderings, Deviation) {
    Rng rng(10);
    const Ordering s = random_ordering(4, rng), p = random_ordering(4, rng);
    const auto same = xor_deviation(s, s);
    EXPECT_EQ(same.max_value, 0u);
    const auto x = xor_deviation(p, s);
    const auto a = abs_deviation(p, s);
    Index max_x = 0;
    for (Index u = 0; u < 16; ++u) {
        EXPECT_LE(a.values[u], x.values[u]);
        max_x = std::max(max_x, p(u) ^ s(u));
    }
    EXPECT_EQ(x.max_value, max_x);
    EXPECT_EQ(x.max_over_block(4), max_x);
    EXPECT_EQ(xor_deviation(identity_ordering(2), make_named_ordering(NamedOrdering::original_walsh, 2)).values[3], 1u);
    EXPECT_THROW(xor_deviation(identity_ordering(2), identity_ordering(3)), std::invalid_argument);
}

TEST(Orderings, SubsetScramble) {
    EXPECT_TRUE(subset_scramble({}, 5, 3).is_identity());
    const Ordering full = subset_scramble({0, 1, 2, 3}, 4, 17);
    EXPECT_FALSE(full.is_identity());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Ordering o = subset_scramble({0}, 2, seed);
        for (Index x = 0; x < 4; ++x) EXPECT_EQ(o(x) & ~Index{1}, x & ~Index{1});
    }
    const Ordering o = subset_scramble({1, 4}, 6, 99);
    for (Index x = 0; x < o.size(); ++x) EXPECT_EQ(o(x) & ~Index{0b10010}, x & ~Index{0b10010});
    EXPECT_EQ(o, subset_scramble({4, 1}, 6, 99));
    EXPECT_THROW(subset_scramble({6}, 6, 0), std::invalid_argument);
}

TEST(Orderings, LowCoordinatePermutation) {
    const Ordering p = low_coordinate_permutation({2, 5}, 6);
    EXPECT_TRUE(is_dyadically_linear(p).linear);
    EXPECT_EQ(p(Index{1} << 2), 1u);
    EXPECT_EQ(p(Index{1} << 5), 2u);
    EXPECT_EQ(p(1), 4u);
}

TEST(Orderings, TableFiles) {
    const Ordering k = make_named_ordering(NamedOrdering::kaczmarz, 3);
    const auto path = temp_file("kacz.txt", to_table_text(k));
    EXPECT_EQ(load_table(path, 3), k);
    EXPECT_THROW(load_table(path, 4), std::invalid_argument);
    EXPECT_EQ(load_table(temp_file("notrail.txt", "1\n0"), 1), from_table({1, 0}, 1));
    EXPECT_THROW(load_table(temp_file("dup.txt", "0\n0\n"), 1), NotBijectiveError);
    EXPECT_THROW(load_table(temp_file("bad.txt", "0\nx\n"), 1), std::invalid_argument);
    EXPECT_THROW(load_table("/nonexistent/walsheq.txt"), std::exception);
}

TEST(OrderingSpec, Examples) {
    EXPECT_EQ(parse_ordering_spec("walsh", 2)(3), 2u);
    EXPECT_TRUE(parse_ordering_spec("compose(kaczmarz,invert(kaczmarz))", 3).is_identity());
    EXPECT_THROW(parse_ordering_spec("table:missing.txt", 3), std::exception);
    EXPECT_THROW(parse_ordering_spec("matrix:missing.txt", 3), std::exception);
}

TEST(OrderingSpec, AllForms) {
    Rng rng(3);
    const auto matrix = LinearMatrix::random_invertible(4, rng);
    const auto mpath = temp_file("m.txt", matrix.to_text());
    EXPECT_EQ(parse_ordering_spec("matrix:" + mpath, 4), from_matrix(matrix));
    EXPECT_THROW(parse_ordering_spec("matrix:" + mpath, 3), std::invalid_argument);
    const auto tpath = temp_file("t.txt", "0\n2\n1\n3\n");
    EXPECT_EQ(parse_ordering_spec("table:" + tpath, 2), from_table({0, 2, 1, 3}, 2));
    EXPECT_EQ(parse_ordering_spec("subset:0,2:7", 4), subset_scramble({0, 2}, 4, 7));
    EXPECT_TRUE(parse_ordering_spec("subset::7", 4).is_identity());
    EXPECT_EQ(parse_ordering_spec("compose(table:" + tpath + ",kronecker)", 2),
              compose(from_table({0, 2, 1, 3}, 2), make_named_ordering(NamedOrdering::kronecker, 2)));
    for (const auto& name : all_named_orderings) {
        EXPECT_EQ(parse_ordering_spec(to_string(name), 5), make_named_ordering(name, 5));
    }
}

TEST(OrderingSpec, ParsePrintParseStable) {
    for (const std::string text : {"identity", "paley", "walsh", "kaczmarz", "kronecker", "table:/tmp/x.txt",
                                   "matrix:a b.txt", "subset:1,3,5:42", "subset::0",
                                   "compose(invert(kaczmarz),compose(walsh,subset:0:1))"}) {
        const OrderingSpec spec = parse_spec(text);
        EXPECT_EQ(parse_spec(spec.to_string()), spec) << text;
        EXPECT_EQ(parse_spec(spec.to_string()).to_string(), spec.to_string()) << text;
    }
}

TEST(OrderingSpec, ErrorsCarryPosition) {
    const std::vector<std::pair<std::string, std::size_t>> cases = {
        {"", 0}, {"hadamard", 0}, {"compose(identity)", 16}, {"invert(identity", 15},
        {"subset:1,x:3", 9}, {"identity)", 8}, {"table:", 6}, {"compose(walsh,bogus)", 14}};
    for (const auto& [text, position] : cases) {
        try {
            parse_spec(text);
            FAIL() << text;
        } catch (const SpecParseError& e) {
            EXPECT_EQ(e.position(), position) << text;
        }
    }
}
