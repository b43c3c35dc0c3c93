#pragma once

#include <urdp/bit_string.hpp>
#include <urdp/error.hpp>

#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace urdp {

// Unbounded non-negative integer. Only the narrow operation set the scheme
// needs: conversion to and from bit strings, multiplication and division by
// a machine-word factor, bit length, and a canonical big-endian byte form.
//
// Limbs are stored least significant first and kept normalized (no high
// zero limbs); zero is the empty limb vector.
class BigUint {
public:
    BigUint() = default;

    static BigUint from_u64(std::uint64_t v) {
        BigUint out;
        if (v != 0)
            out.limbs_.push_back(v);
        return out;
    }

    // Value of a big-endian bit string: bit i (from the left) of an l-bit
    // string weighs 2^(l-1-i). The empty string is zero.
    static BigUint from_bits(const BitString& a) {
        BigUint out;
        const std::size_t len = a.size();
        out.limbs_.assign((len + 63) / 64, 0);
        for (std::size_t i = 0; i < len; ++i) {
            if (a[i]) {
                const std::size_t pos = len - 1 - i;
                out.limbs_[pos >> 6] |= std::uint64_t{1} << (pos & 63);
            }
        }
        out.normalize();
        return out;
    }

    // Big-endian bit string of exactly `width` bits, left-padded with
    // zeros. Throws OverflowError if the value needs more than `width` bits.
    BitString to_bits(std::size_t width) const {
        if (bit_length() > width)
            throw OverflowError("integer does not fit in the requested bit width");
        std::vector<std::uint8_t> bits(width, 0);
        for (std::size_t i = 0; i < width; ++i) {
            const std::size_t pos = width - 1 - i;
            const std::size_t limb = pos >> 6;
            if (limb < limbs_.size())
                bits[i] = static_cast<std::uint8_t>((limbs_[limb] >> (pos & 63)) & 1);
        }
        return BitString(std::move(bits));
    }

    bool is_zero() const { return limbs_.empty(); }

    // Number of bits in the minimal binary representation; zero has length 0.
    std::size_t bit_length() const {
        if (limbs_.empty())
            return 0;
        return 64 * (limbs_.size() - 1) +
               static_cast<std::size_t>(std::bit_width(limbs_.back()));
    }

    BigUint mul_small(std::uint64_t factor) const {
        BigUint out;
        if (factor == 0 || is_zero())
            return out;
        out.limbs_.reserve(limbs_.size() + 1);
        std::uint64_t carry = 0;
        for (std::uint64_t limb : limbs_) {
            const unsigned __int128 p =
                static_cast<unsigned __int128>(limb) * factor + carry;
            out.limbs_.push_back(static_cast<std::uint64_t>(p));
            carry = static_cast<std::uint64_t>(p >> 64);
        }
        if (carry)
            out.limbs_.push_back(carry);
        return out;
    }

    // Quotient and remainder for a nonzero machine-word divisor.
    std::pair<BigUint, std::uint64_t> divmod_small(std::uint64_t divisor) const {
        if (divisor == 0)
            throw ParameterError("division by zero");
        BigUint q;
        q.limbs_.assign(limbs_.size(), 0);
        std::uint64_t rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            const unsigned __int128 cur =
                (static_cast<unsigned __int128>(rem) << 64) | limbs_[i];
            q.limbs_[i] = static_cast<std::uint64_t>(cur / divisor);
            rem = static_cast<std::uint64_t>(cur % divisor);
        }
        q.normalize();
        return {std::move(q), rem};
    }

    // Minimal big-endian byte representation; zero is the empty sequence.
    std::vector<std::uint8_t> to_bytes_be() const {
        std::vector<std::uint8_t> out;
        if (is_zero())
            return out;
        const std::size_t nbytes = (bit_length() + 7) / 8;
        out.resize(nbytes);
        for (std::size_t i = 0; i < nbytes; ++i) {
            const std::size_t byte_pos = nbytes - 1 - i; // significance of out[i]
            const std::size_t limb = byte_pos >> 3;
            out[i] = static_cast<std::uint8_t>(limbs_[limb] >> ((byte_pos & 7) * 8));
        }
        return out;
    }

    // Accepts any big-endian byte string, leading zeros included. Callers
    // that require the canonical form check minimality themselves.
    static BigUint from_bytes_be(std::span<const std::uint8_t> bytes) {
        BigUint out;
        out.limbs_.assign((bytes.size() + 7) / 8, 0);
        for (std::size_t i = 0; i < bytes.size(); ++i) {
            const std::size_t byte_pos = bytes.size() - 1 - i;
            out.limbs_[byte_pos >> 3] |=
                static_cast<std::uint64_t>(bytes[i]) << ((byte_pos & 7) * 8);
        }
        out.normalize();
        return out;
    }

    std::uint64_t to_u64() const {
        if (limbs_.size() > 1)
            throw OverflowError("integer exceeds 64 bits");
        return limbs_.empty() ? 0 : limbs_[0];
    }

    friend bool operator==(const BigUint&, const BigUint&) = default;

    friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() <=> b.limbs_.size();
        for (std::size_t i = a.limbs_.size(); i-- > 0;)
            if (a.limbs_[i] != b.limbs_[i])
                return a.limbs_[i] <=> b.limbs_[i];
        return std::strong_ordering::equal;
    }

private:
    void normalize() {
        while (!limbs_.empty() && limbs_.back() == 0)
            limbs_.pop_back();
    }

    std::vector<std::uint64_t> limbs_;
};

// The decimal-value map DV: the integer whose binary expansion is `a`.
inline BigUint to_integer(const BitString& a) { return BigUint::from_bits(a); }

// Inverse of to_integer at a known width: the exact bit length must travel
// alongside the integer, because the integer alone cannot restore leading
// zeros.
inline BitString from_integer(const BigUint& y, std::size_t width) {
    return y.to_bits(width);
}

} // namespace urdp
