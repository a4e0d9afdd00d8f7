#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "ncdiss/coding.hpp"

using namespace ncdiss;

namespace {

std::vector<Element> random_vector(Rng& rng, const FieldContext& f, std::size_t len) {
    std::vector<Element> v(len);
    for (auto& e : v) e = static_cast<Element>(rng.below(f.order()));
    return v;
}

// payload = sum_k coefficients[k] * packets[k], evaluated term by term.
std::vector<Element> combine(const FieldContext& f, const std::vector<Element>& coefficients,
                             const std::vector<InformationPacket>& packets) {
    std::vector<Element> out(packets.front().symbols.size(), 0);
    for (std::size_t k = 0; k < packets.size(); ++k) {
        for (std::size_t s = 0; s < out.size(); ++s) {
            out[s] = FieldContext::add(out[s], f.mul(coefficients[k], packets[k].symbols[s]));
        }
    }
    return out;
}

std::vector<InformationPacket> random_packets(Rng& rng, const FieldContext& f, std::size_t n, std::size_t r) {
    std::vector<InformationPacket> packets;
    for (std::size_t u = 0; u < n; ++u) packets.push_back({u, random_vector(rng, f, r)});
    return packets;
}

// Number of distinct vectors spanned by rows over GF(2), by enumeration.
std::size_t gf2_span_size(const std::vector<std::vector<Element>>& rows) {
    std::set<std::vector<Element>> span;
    const std::size_t m = rows.size();
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<Element> v(rows.front().size(), 0);
        for (std::size_t i = 0; i < m; ++i) {
            if ((mask >> i) & 1u) {
                for (std::size_t j = 0; j < v.size(); ++j) v[j] ^= rows[i][j];
            }
        }
        span.insert(v);
    }
    return span.size();
}

void expect_reduced_form(const SubspaceBuffer& b) {
    const auto pivots = b.pivot_columns();
    ASSERT_EQ(pivots.size(), b.dimension());
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        for (std::size_t other = 0; other < pivots.size(); ++other) {
            const Element expected = k == other ? 1 : 0;
            EXPECT_EQ(b.row_coefficients(other)[pivots[k]], expected);
        }
    }
}

}  // namespace

TEST(Coding, BufferInitHoldsUnitRow) {
    const FieldContext f(8);
    const InformationPacket x3{3, {10, 20, 30}};
    const auto b = SubspaceBuffer::with_packet(f, x3, 5);
    EXPECT_EQ(b.dimension(), 1u);
    const std::vector<Element> e3{0, 0, 0, 1, 0};
    EXPECT_EQ(std::vector<Element>(b.row_coefficients(0).begin(), b.row_coefficients(0).end()), e3);
    EXPECT_EQ(std::vector<Element>(b.row_payload(0).begin(), b.row_payload(0).end()), x3.symbols);
    EXPECT_FALSE(b.full());
}

TEST(Coding, BufferInitSingleNodeIsComplete) {
    const FieldContext f(8);
    const auto b = SubspaceBuffer::with_packet(f, {0, {7}}, 1);
    EXPECT_EQ(b.dimension(), 1u);
    EXPECT_TRUE(b.full());
    EXPECT_EQ(b.decode().front().symbols, std::vector<Element>{7});
}

TEST(Coding, BufferInitRejectsOriginOutOfRange) {
    const FieldContext f(8);
    EXPECT_THROW(SubspaceBuffer::with_packet(f, {5, {1}}, 5), dimension_mismatch);
}

TEST(Coding, BufferInitWithSeveralOrNoPackets) {
    const FieldContext f(8);
    const std::vector<InformationPacket> two{{0, {1, 2}}, {3, {5, 6}}};
    const auto b = SubspaceBuffer::with_packets(f, two, 4, 2);
    EXPECT_EQ(b.dimension(), 2u);
    EXPECT_TRUE(b.contains(std::vector<Element>{1, 0, 0, 0}));
    EXPECT_TRUE(b.contains(std::vector<Element>{0, 0, 0, 1}));
    EXPECT_FALSE(b.contains(std::vector<Element>{0, 1, 0, 0}));
    const auto empty = SubspaceBuffer::with_packets(f, {}, 4, 2);
    EXPECT_EQ(empty.dimension(), 0u);
    EXPECT_THROW(SubspaceBuffer::with_packets(f, two, 4, 3), dimension_mismatch);
    EXPECT_THROW(SubspaceBuffer::with_packets(f, two, 3, 2), dimension_mismatch);
}

TEST(Coding, EncodeSingleRowIsNonzeroMultiple) {
    const FieldContext f(8);
    const InformationPacket x{2, {9, 200}};
    const auto b = SubspaceBuffer::with_packet(f, x, 4);
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto m = b.encode(rng);
        const Element alpha = m.coefficients[2];
        ASSERT_NE(alpha, 0);
        EXPECT_EQ(m.coefficients, (std::vector<Element>{0, 0, alpha, 0}));
        EXPECT_EQ(m.payload, (std::vector<Element>{f.mul(alpha, 9), f.mul(alpha, 200)}));
    }
}

TEST(Coding, EncodeEmptyBufferThrows) {
    const FieldContext f(8);
    const SubspaceBuffer empty(f, 4, 2);
    Rng rng(1);
    EXPECT_THROW(empty.encode(rng), std::logic_error);
}

TEST(Coding, EncodeOutputLiesInSpanAndIsConsistent) {
    // GF(2) makes the zero combination likely, so the resampling path is exercised.
    for (unsigned q : {1u, 4u, 8u}) {
        const FieldContext f(q);
        Rng rng(100 + q);
        const std::size_t n = 6, r = 3;
        const auto packets = random_packets(rng, f, n, r);
        SubspaceBuffer b(f, n, r);
        for (int k = 0; k < 3; ++k) {
            const auto coeffs = random_vector(rng, f, n);
            b.insert(coeffs, combine(f, coeffs, packets));
        }
        ASSERT_GE(b.dimension(), 1u);
        for (int i = 0; i < 300; ++i) {
            const auto m = b.encode(rng);
            EXPECT_TRUE(std::any_of(m.coefficients.begin(), m.coefficients.end(), [](Element e) { return e != 0; }));
            EXPECT_TRUE(b.contains(m.coefficients));
            EXPECT_EQ(m.payload, combine(f, m.coefficients, packets));
            // membership by the independent route: appending must not raise the rank
            std::vector<std::vector<Element>> rows;
            for (std::size_t k = 0; k < b.dimension(); ++k) {
                rows.emplace_back(b.row_coefficients(k).begin(), b.row_coefficients(k).end());
            }
            const auto before = rank_oracle(f, rows);
            rows.push_back(m.coefficients);
            EXPECT_EQ(rank_oracle(f, rows), before);
        }
    }
}

TEST(Coding, InsertIndependentThenDuplicate) {
    const FieldContext f(8);
    auto b = SubspaceBuffer::with_packet(f, {0, {1}}, 3);
    const CodedMessage e1{{0, 1, 0}, {5}};
    EXPECT_TRUE(b.insert(e1));
    EXPECT_EQ(b.dimension(), 2u);
    EXPECT_FALSE(b.insert(e1));
    EXPECT_FALSE(b.insert(CodedMessage{{7, 9, 0}, {0}}));  // in span of e0, e1
    EXPECT_EQ(b.dimension(), 2u);
    EXPECT_FALSE(b.insert(CodedMessage{{0, 0, 0}, {0}}));
}

TEST(Coding, InsertDimensionMismatchThrows) {
    const FieldContext f(8);
    SubspaceBuffer b(f, 3, 2);
    EXPECT_THROW(b.insert(CodedMessage{{1, 0}, {1, 1}}), dimension_mismatch);
    EXPECT_THROW(b.insert(CodedMessage{{1, 0, 0}, {1}}), dimension_mismatch);
}

TEST(Coding, InsertMatchesRankOracleOnRandomSystemsGF16) {
    const FieldContext f(4);
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        SubspaceBuffer b(f, 5, 1);
        std::vector<std::vector<Element>> raw;
        for (int k = 0; k < 5; ++k) {
            // sparse-ish rows so that dependent rows actually occur
            std::vector<Element> row(5, 0);
            for (auto& e : row) e = rng.below(3) == 0 ? static_cast<Element>(rng.below(16)) : 0;
            const auto before = rank_oracle(f, raw);
            raw.push_back(row);
            const bool innovative = b.insert(row, std::vector<Element>{0});
            EXPECT_EQ(innovative, rank_oracle(f, raw) == before + 1);
        }
    }
}

TEST(Coding, DimensionEqualsRankOracleProperty) {
    Rng rng(77);
    for (unsigned q : {1u, 4u, 8u}) {
        const FieldContext f(q);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = 1 + rng.below(8);
            const std::size_t r = 1 + rng.below(3);
            SubspaceBuffer b(f, n, r);
            std::vector<std::vector<Element>> raw;
            std::size_t last = 0;
            const std::size_t inserts = rng.below(2 * n + 2);
            for (std::size_t k = 0; k < inserts; ++k) {
                std::vector<Element> row(n, 0);
                // mix dense rows with combinations of earlier rows
                if (!raw.empty() && rng.below(3) == 0) {
                    for (const auto& prev : raw) f.axpy(row, static_cast<Element>(rng.below(f.order())), prev);
                } else {
                    for (auto& e : row) e = static_cast<Element>(rng.below(f.order()));
                }
                raw.push_back(row);
                const bool innovative = b.insert(row, random_vector(rng, f, r));
                ASSERT_EQ(b.dimension(), rank_oracle(f, raw));
                ASSERT_EQ(innovative, b.dimension() == last + 1);
                ASSERT_GE(b.dimension(), last);
                ASSERT_LE(b.dimension(), n);
                last = b.dimension();
            }
            expect_reduced_form(b);
        }
    }
}

TEST(Coding, DecodeIdentityBasisReturnsPayloads) {
    const FieldContext f(8);
    SubspaceBuffer b(f, 3, 2);
    b.insert(CodedMessage{{0, 0, 1}, {5, 6}});
    b.insert(CodedMessage{{1, 0, 0}, {1, 2}});
    b.insert(CodedMessage{{0, 1, 0}, {3, 4}});
    const auto packets = b.decode();
    ASSERT_EQ(packets.size(), 3u);
    EXPECT_EQ(packets[0], (InformationPacket{0, {1, 2}}));
    EXPECT_EQ(packets[1], (InformationPacket{1, {3, 4}}));
    EXPECT_EQ(packets[2], (InformationPacket{2, {5, 6}}));
}

TEST(Coding, DecodeRoundTripThroughRandomCombinations) {
    for (unsigned q : {1u, 4u, 8u, 16u}) {
        const FieldContext f(q);
        Rng rng(5 + q);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 1 + rng.below(10), r = 1 + rng.below(6);
            const auto packets = random_packets(rng, f, n, r);
            SubspaceBuffer b(f, n, r);
            int guard = 0;
            while (!b.full() && guard++ < 10000) {
                const auto coeffs = random_vector(rng, f, n);
                b.insert(coeffs, combine(f, coeffs, packets));
            }
            ASSERT_TRUE(b.full());
            EXPECT_EQ(b.decode(), packets);
        }
    }
}

TEST(Coding, DecodeRankDeficientThrows) {
    const FieldContext f(8);
    SubspaceBuffer b(f, 3, 1);
    b.insert(CodedMessage{{1, 0, 0}, {1}});
    b.insert(CodedMessage{{0, 1, 0}, {1}});
    EXPECT_THROW(b.decode(), not_decodable);
}

TEST(Coding, RankOracleBasics) {
    const FieldContext f(8);
    std::vector<std::vector<Element>> identity(4, std::vector<Element>(4, 0));
    for (std::size_t i = 0; i < 4; ++i) identity[i][i] = 1;
    EXPECT_EQ(rank_oracle(f, identity), 4u);
    EXPECT_EQ(rank_oracle(f, std::vector<std::vector<Element>>(3, std::vector<Element>(5, 0))), 0u);
    EXPECT_EQ(rank_oracle(f, {}), 0u);
    EXPECT_THROW(rank_oracle(f, {{1, 2}, {1}}), dimension_mismatch);
}

TEST(Coding, RankOracleAgreesWithGF2SpanEnumeration) {
    const FieldContext f(1);
    // every 3x3 binary matrix, duplicates included
    for (std::uint32_t bits = 0; bits < 512; ++bits) {
        std::vector<std::vector<Element>> rows(3, std::vector<Element>(3));
        for (std::size_t i = 0; i < 9; ++i) rows[i / 3][i % 3] = (bits >> i) & 1u;
        const std::size_t rank = rank_oracle(f, rows);
        EXPECT_EQ(std::size_t{1} << rank, gf2_span_size(rows)) << bits;
    }
    EXPECT_EQ(rank_oracle(f, {{1, 0, 1}, {1, 0, 1}, {0, 1, 1}}), 2u);
}

TEST(Coding, SerializationKnownLayout) {
    const FieldContext f4(4);
    const CodedMessage m{{0x1, 0xA}, {0xF}};
    // 0001 1010 1111 -> 0x1A 0xF0
    EXPECT_EQ(serialize(f4, m), (std::vector<std::uint8_t>{0x1A, 0xF0}));
    const FieldContext f16(16);
    EXPECT_EQ(serialize(f16, CodedMessage{{0x1234}, {0xBEEF}}),
              (std::vector<std::uint8_t>{0x12, 0x34, 0xBE, 0xEF}));
    const FieldContext f1(1);
    EXPECT_EQ(serialize(f1, CodedMessage{{1, 0, 1}, {1}}), (std::vector<std::uint8_t>{0xB0}));
}

TEST(Coding, SerializationRoundTripProperty) {
    Rng rng(31);
    for (unsigned q : {1u, 4u, 8u, 16u}) {
        const FieldContext f(q);
        for (int i = 0; i < 200; ++i) {
            const std::size_t n = 1 + rng.below(20), r = 1 + rng.below(20);
            const CodedMessage m{random_vector(rng, f, n), random_vector(rng, f, r)};
            const auto bytes = serialize(f, m);
            EXPECT_EQ(bytes.size(), ((n + r) * q + 7) / 8);
            EXPECT_EQ(deserialize(f, bytes, n, r), m);
        }
    }
}

TEST(Coding, DeserializeRejectsWrongLength) {
    const FieldContext f(8);
    const std::vector<std::uint8_t> bytes{1, 2, 3};
    EXPECT_THROW(deserialize(f, bytes, 2, 2), dimension_mismatch);
}
