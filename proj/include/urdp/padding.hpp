#pragma once

#include <urdp/bit_string.hpp>
#include <urdp/error.hpp>
#include <urdp/random.hpp>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace urdp {

inline constexpr std::size_t ceil_div(std::size_t a, std::size_t b) {
    return (a + b - 1) / b;
}

// The k-bit selector r that drives the encoding. Its 1-positions carry
// message blocks, its 0-positions carry random filler blocks, and its
// Hamming weight h is the block count.
//
// Weight 0 and weight k are rejected outright: with h = 0 the block length
// ceil(n/h) and the decryption quotient C1/h are undefined, and with h = k
// there is no filler block slot so the filler length s = (l - h*v)/(k - h)
// divides by zero. Encryption resamples r until the weight is interior.
class SelectorVector {
public:
    explicit SelectorVector(BitString r) : r_(std::move(r)), h_(hamming_weight(r_)) {
        if (r_.empty())
            throw ParameterError("selector vector must be non-empty");
        if (h_ == 0 || h_ == r_.size())
            throw ParameterError("selector weight must satisfy 0 < h < k");
    }

    const BitString& bits() const { return r_; }
    std::size_t k() const { return r_.size(); }
    std::size_t h() const { return h_; }

    friend bool operator==(const SelectorVector&, const SelectorVector&) = default;

private:
    BitString r_;
    std::size_t h_;
};

// Sizes of one encoding: message length n, message-block length
// v = ceil(n/h), and filler-block length s >= 1.
struct EncodingParams {
    std::size_t n = 0;
    std::size_t v = 0;
    std::size_t s = 0;

    static EncodingParams derive(std::size_t n, std::size_t h, std::size_t s) {
        if (n == 0)
            throw ParameterError("message must be non-empty");
        if (h == 0)
            throw ParameterError("block count must be nonzero");
        if (s == 0)
            throw ParameterError("filler block length must be nonzero");
        return EncodingParams{n, ceil_div(n, h), s};
    }

    friend bool operator==(const EncodingParams&, const EncodingParams&) = default;
};

// The encoded message m' together with its exact bit length. The length is
// what survives the round trip through an integer, where leading zeros
// would otherwise be lost.
struct EncodedMessage {
    BitString payload;

    std::size_t length() const { return payload.size(); }

    friend bool operator==(const EncodedMessage&, const EncodedMessage&) = default;
};

// Splits m into h equal blocks of length v = ceil(n/h). When h does not
// divide n the caller supplies the tail padding rbs of length h*v - n;
// otherwise rbs must be empty. The blocks concatenate back to m || rbs.
//
// For very short messages (n < (h-1)*v) the padding spans more than the
// final block; chunking the concatenation handles that uniformly.
inline std::vector<BitString> setup_blocks(const BitString& m, std::size_t h,
                                           const BitString& rbs) {
    const std::size_t n = m.size();
    if (n == 0)
        throw ParameterError("message must be non-empty");
    if (h == 0)
        throw ParameterError("block count must be nonzero");
    const std::size_t v = ceil_div(n, h);
    if (rbs.size() != h * v - n)
        throw ParameterError("tail padding length must be h*ceil(n/h) - n");

    const BitString padded = m + rbs;
    std::vector<BitString> blocks;
    blocks.reserve(h);
    for (std::size_t i = 0; i < h; ++i)
        blocks.push_back(padded.slice(i * v, v));
    return blocks;
}

// Random encoding. Walks the selector left to right; each 1-bit emits the
// next message block in order, each 0-bit emits a fresh s-bit filler block.
//
// Draw order from pad_source is part of the contract: first the h*v - n
// tail-padding bits, then the k - h filler blocks in output order. Given
// the same source state the encoding is fully deterministic.
inline EncodedMessage encode(const BitString& m, const SelectorVector& sel,
                             const EncodingParams& params, RandomSource& pad_source) {
    if (m.size() != params.n)
        throw ParameterError("message length does not match encoding params");
    if (params.v != ceil_div(params.n, sel.h()))
        throw ParameterError("block length does not match selector weight");

    const std::size_t k = sel.k();
    const std::size_t h = sel.h();
    const BitString rbs = pad_source.take_bits(h * params.v - params.n);
    const std::vector<BitString> blocks = setup_blocks(m, h, rbs);

    BitString payload;
    payload.reserve(h * params.v + (k - h) * params.s);
    std::size_t next_block = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (sel.bits()[i])
            payload.append(blocks[next_block++]);
        else
            payload.append(pad_source.take_bits(params.s));
    }
    return EncodedMessage{std::move(payload)};
}

// Message extractor, the inverse walk. Consumes m' left to right: each
// 0-bit of the selector skips s filler bits, each 1-bit takes v bits as the
// next message block. The reassembled blocks are m || rbs, so the final
// step truncates to the leftmost n bits.
inline BitString extract(const EncodedMessage& encoded, const SelectorVector& sel,
                         const EncodingParams& params) {
    const std::size_t k = sel.k();
    const std::size_t h = sel.h();
    if (encoded.length() != h * params.v + (k - h) * params.s)
        throw ParameterError("encoded length does not match selector and params");

    BitString m;
    m.reserve(h * params.v);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (sel.bits()[i]) {
            m.append(encoded.payload.slice(cursor, params.v));
            cursor += params.v;
        } else {
            cursor += params.s;
        }
    }
    return m.msb(params.n);
}

// Decrypt-side parameter recovery. Accepts exactly when the claimed encoded
// length l is consistent with n, k and h: l >= h*ceil(n/h), the filler
// share divides evenly into k - h blocks, and the resulting block length s
// lies in [1, s_max]. Any failure means the ciphertext is malformed and
// maps to the decryption reject.
inline std::optional<EncodingParams> derive_params(std::size_t n, std::size_t k,
                                                   std::size_t h, std::size_t ell,
                                                   std::size_t s_max) {
    if (n == 0 || h == 0 || h >= k)
        return std::nullopt;
    const std::size_t v = ceil_div(n, h);
    if (ell < h * v)
        return std::nullopt;
    const std::size_t filler = ell - h * v;
    if (filler % (k - h) != 0)
        return std::nullopt;
    const std::size_t s = filler / (k - h);
    if (s < 1 || s > s_max)
        return std::nullopt;
    return EncodingParams{n, v, s};
}

} // namespace urdp
