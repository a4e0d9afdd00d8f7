#pragma once

// Random linear network coding over GF(2^q): coded messages, per-node
// subspace buffers with incremental rank tracking, encoding and decoding.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ncdiss/errors.hpp"
#include "ncdiss/galois.hpp"
#include "ncdiss/random.hpp"

namespace ncdiss {

struct InformationPacket {
    std::size_t origin = 0;
    std::vector<Element> symbols;

    friend bool operator==(const InformationPacket&, const InformationPacket&) = default;
};

/// A linear combination of information packets together with its coding
/// coefficients: payload = sum_k coefficients[k] * x_k.
struct CodedMessage {
    std::vector<Element> coefficients;
    std::vector<Element> payload;

    friend bool operator==(const CodedMessage&, const CodedMessage&) = default;
};

/// Row-reduced basis of everything a node has received.
///
/// Each stored row is `[coefficients | payload]`. Every pivot column holds a
/// single 1 in its own row and 0 in all other rows, so reducing an incoming
/// vector takes one pass over the basis. Rows are kept in insertion order;
/// `pivot_columns()[k]` is the pivot of row k.
///
/// Holds a non-owning pointer to the field, which must outlive the buffer.
class SubspaceBuffer {
public:
    SubspaceBuffer(const FieldContext& field, std::size_t n, std::size_t r)
        : field_(&field), n_(n), r_(r), width_(n + r), row_of_pivot_(n, npos) {
        if (n == 0 || r == 0) throw dimension_mismatch("buffer needs N >= 1 and r >= 1");
        rows_.reserve(n * width_);
        pivots_.reserve(n);
        scratch_.resize(width_);
    }

    /// Buffer holding only the node's own packet: row e_origin -> symbols.
    static SubspaceBuffer with_packet(const FieldContext& field, const InformationPacket& packet,
                                      std::size_t n) {
        if (packet.origin >= n) {
            throw dimension_mismatch("packet origin " + std::to_string(packet.origin) + " >= N");
        }
        SubspaceBuffer buffer(field, n, packet.symbols.size());
        std::vector<Element> unit(n, 0);
        unit[packet.origin] = 1;
        buffer.insert(unit, packet.symbols);
        return buffer;
    }

    /// Buffer for a node that starts with any number of packets, possibly none.
    static SubspaceBuffer with_packets(const FieldContext& field, std::span<const InformationPacket> packets,
                                       std::size_t n, std::size_t r) {
        SubspaceBuffer buffer(field, n, r);
        std::vector<Element> unit(n, 0);
        for (const auto& packet : packets) {
            if (packet.origin >= n) {
                throw dimension_mismatch("packet origin " + std::to_string(packet.origin) + " >= N");
            }
            if (packet.symbols.size() != r) throw dimension_mismatch("packet length differs from r");
            unit[packet.origin] = 1;
            buffer.insert(unit, packet.symbols);
            unit[packet.origin] = 0;
        }
        return buffer;
    }

    std::size_t dimension() const noexcept { return pivots_.size(); }
    std::size_t node_count() const noexcept { return n_; }
    std::size_t payload_length() const noexcept { return r_; }
    bool full() const noexcept { return pivots_.size() == n_; }
    const FieldContext& field() const noexcept { return *field_; }
    std::span<const std::size_t> pivot_columns() const noexcept { return pivots_; }

    std::span<const Element> row_coefficients(std::size_t k) const {
        return {rows_.data() + k * width_, n_};
    }
    std::span<const Element> row_payload(std::size_t k) const {
        return {rows_.data() + k * width_ + n_, r_};
    }

    bool insert(const CodedMessage& msg) { return insert(msg.coefficients, msg.payload); }

    /// Adds the message to the basis if it is innovative. Returns whether the
    /// dimension increased; on false the buffer is unchanged.
    bool insert(std::span<const Element> coefficients, std::span<const Element> payload) {
        if (coefficients.size() != n_ || payload.size() != r_) {
            throw dimension_mismatch("coded message is " + std::to_string(coefficients.size()) + "+" +
                                     std::to_string(payload.size()) + " symbols, buffer expects " +
                                     std::to_string(n_) + "+" + std::to_string(r_));
        }
        if (full()) return false;

        std::span<Element> v(scratch_);
        std::copy(coefficients.begin(), coefficients.end(), v.begin());
        std::copy(payload.begin(), payload.end(), v.begin() + static_cast<std::ptrdiff_t>(n_));
        reduce(v);

        std::size_t pivot = npos;
        for (std::size_t c = 0; c < n_; ++c) {
            if (v[c] != 0) {
                pivot = c;
                break;
            }
        }
        if (pivot == npos) return false;

        field_->scale(v, field_->inv(v[pivot]));
        for (std::size_t k = 0; k < pivots_.size(); ++k) {
            std::span<Element> row = mutable_row(k);
            if (row[pivot] != 0) field_->axpy(row, row[pivot], v);
        }
        rows_.insert(rows_.end(), v.begin(), v.end());
        row_of_pivot_[pivot] = pivots_.size();
        pivots_.push_back(pivot);
        return true;
    }

    /// True iff the coefficient vector lies in the span of the basis.
    bool contains(std::span<const Element> coefficients) const {
        if (coefficients.size() != n_) throw dimension_mismatch("coefficient vector length != N");
        std::vector<Element> v(coefficients.begin(), coefficients.end());
        for (std::size_t c = 0; c < n_; ++c) {
            const std::size_t k = row_of_pivot_[c];
            if (k != npos && v[c] != 0) field_->axpy(v, v[c], row_coefficients(k));
        }
        return std::all_of(v.begin(), v.end(), [](Element e) { return e == 0; });
    }

    /// Random combination sum_i beta_i * row_i, beta uniform over the field
    /// and redrawn while all zero.
    CodedMessage encode(Rng& rng) const {
        CodedMessage msg;
        encode_into(rng, msg);
        return msg;
    }

    void encode_into(Rng& rng, CodedMessage& msg) const {
        const std::size_t dim = dimension();
        if (dim == 0) throw std::logic_error("encode on an empty buffer");
        std::vector<Element> beta(dim);
        bool any = false;
        while (!any) {
            for (auto& b : beta) {
                b = static_cast<Element>(rng.below(field_->order()));
                any = any || b != 0;
            }
        }
        msg.coefficients.assign(n_, 0);
        msg.payload.assign(r_, 0);
        for (std::size_t k = 0; k < dim; ++k) {
            field_->axpy(msg.coefficients, beta[k], row_coefficients(k));
            field_->axpy(msg.payload, beta[k], row_payload(k));
        }
    }

    /// The N information packets in origin order. Requires full rank.
    std::vector<InformationPacket> decode() const {
        if (!full()) throw not_decodable(dimension(), n_);
        // Full rank RREF: the row pivoting on column c is exactly e_c.
        std::vector<InformationPacket> packets(n_);
        for (std::size_t c = 0; c < n_; ++c) {
            auto payload = row_payload(row_of_pivot_[c]);
            packets[c] = InformationPacket{c, {payload.begin(), payload.end()}};
        }
        return packets;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::span<Element> mutable_row(std::size_t k) { return {rows_.data() + k * width_, width_}; }
    std::span<const Element> row(std::size_t k) const { return {rows_.data() + k * width_, width_}; }

    void reduce(std::span<Element> v) const {
        for (std::size_t k = 0; k < pivots_.size(); ++k) {
            const Element c = v[pivots_[k]];
            if (c != 0) field_->axpy(v, c, row(k));
        }
    }

    const FieldContext* field_;
    std::size_t n_;
    std::size_t r_;
    std::size_t width_;
    std::vector<Element> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> row_of_pivot_;
    std::vector<Element> scratch_;
};

/// Rank by plain Gaussian elimination on a copy of the rows. Shares nothing
/// with SubspaceBuffer beyond scalar field arithmetic; used as a test oracle.
inline std::size_t rank_oracle(const FieldContext& field, std::vector<std::vector<Element>> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    for (const auto& row : rows) {
        if (row.size() != cols) throw dimension_mismatch("rank_oracle needs a rectangular matrix");
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t sel = rank;
        while (sel < rows.size() && rows[sel][c] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        const Element inv = field.inv(rows[rank][c]);
        for (std::size_t i = rank + 1; i < rows.size(); ++i) {
            const Element f = field.mul(rows[i][c], inv);
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j) {
                rows[i][j] = FieldContext::add(rows[i][j], field.mul(f, rows[rank][j]));
            }
        }
        ++rank;
    }
    return rank;
}

// Wire format: N coefficients then r payload symbols, each q bits,
// packed big-endian (most significant bit first), zero-padded to a byte.

inline std::vector<std::uint8_t> serialize(const FieldContext& field, const CodedMessage& msg) {
    const unsigned q = field.bits();
    const std::size_t symbols = msg.coefficients.size() + msg.payload.size();
    std::vector<std::uint8_t> out((symbols * q + 7) / 8, 0);
    std::size_t bit = 0;
    auto put = [&](Element value) {
        if (!field.contains(value)) throw std::out_of_range("symbol outside the field");
        for (unsigned b = q; b-- > 0; ++bit) {
            if ((value >> b) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
        }
    };
    for (Element e : msg.coefficients) put(e);
    for (Element e : msg.payload) put(e);
    return out;
}

inline CodedMessage deserialize(const FieldContext& field, std::span<const std::uint8_t> bytes,
                                std::size_t n, std::size_t r) {
    const unsigned q = field.bits();
    if (bytes.size() != ((n + r) * q + 7) / 8) {
        throw dimension_mismatch("serialized message has " + std::to_string(bytes.size()) +
                                 " bytes, expected " + std::to_string(((n + r) * q + 7) / 8));
    }
    std::size_t bit = 0;
    auto get = [&] {
        Element value = 0;
        for (unsigned b = 0; b < q; ++b, ++bit) {
            value = static_cast<Element>((value << 1) | ((bytes[bit / 8] >> (7 - bit % 8)) & 1u));
        }
        return value;
    };
    CodedMessage msg;
    msg.coefficients.resize(n);
    msg.payload.resize(r);
    for (auto& e : msg.coefficients) e = get();
    for (auto& e : msg.payload) e = get();
    return msg;
}

}  // namespace ncdiss
