#pragma once

#include <urdp/error.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace urdp {

// An ordered, finite sequence of bits. Index 0 is the leftmost (most
// significant) bit. The empty string is a valid value. Equality is bitwise
// and includes the length, so "01" != "1".
//
// Values are immutable in spirit: every operation that derives a new string
// returns one by value. Instances are safe to share between threads.
class BitString {
public:
    BitString() = default;

    explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        for (auto& b : bits_)
            b = b ? 1 : 0;
    }

    // Parses a string of '0'/'1' characters, leftmost character first.
    static BitString from_string(std::string_view text) {
        BitString out;
        out.bits_.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1')
                throw ParameterError("bit string literal may contain only '0' and '1'");
            out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return out;
    }

    // Bytes to bits, most significant bit of each byte first.
    static BitString from_bytes_msb(std::span<const std::uint8_t> bytes) {
        BitString out;
        out.bits_.reserve(bytes.size() * 8);
        for (std::uint8_t byte : bytes)
            for (int i = 7; i >= 0; --i)
                out.bits_.push_back(static_cast<std::uint8_t>((byte >> i) & 1));
        return out;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    int operator[](std::size_t i) const { return bits_[i]; }

    void push_back(int bit) { bits_.push_back(bit ? 1 : 0); }

    void append(const BitString& other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    }

    void reserve(std::size_t n) { bits_.reserve(n); }

    // The leftmost x bits. Throws if x exceeds the length.
    BitString msb(std::size_t x) const {
        if (x > size())
            throw LengthError("msb: requested more bits than available");
        return slice(0, x);
    }

    // The rightmost x bits. Throws if x exceeds the length.
    BitString lsb(std::size_t x) const {
        if (x > size())
            throw LengthError("lsb: requested more bits than available");
        return slice(size() - x, x);
    }

    BitString slice(std::size_t pos, std::size_t len) const {
        BitString out;
        out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                         bits_.begin() + static_cast<std::ptrdiff_t>(pos + len));
        return out;
    }

    std::string to_string() const {
        std::string out;
        out.reserve(size());
        for (auto b : bits_)
            out.push_back(static_cast<char>('0' + b));
        return out;
    }

    // Packs bits into bytes, most significant bit first. A final partial
    // byte, if any, is padded with zero bits on the right.
    std::vector<std::uint8_t> to_bytes_msb() const {
        std::vector<std::uint8_t> out((size() + 7) / 8, 0);
        for (std::size_t i = 0; i < size(); ++i)
            if (bits_[i])
                out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
        return out;
    }

    friend bool operator==(const BitString&, const BitString&) = default;
    friend auto operator<=>(const BitString&, const BitString&) = default;

private:
    std::vector<std::uint8_t> bits_; // one bit per element, always 0 or 1
};

inline BitString operator+(const BitString& a, const BitString& b) {
    BitString out = a;
    out.append(b);
    return out;
}

inline std::size_t hamming_weight(const BitString& v) {
    std::size_t h = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        h += static_cast<std::size_t>(v[i]);
    return h;
}

inline BitString msb(const BitString& a, std::size_t x) { return a.msb(x); }
inline BitString lsb(const BitString& a, std::size_t x) { return a.lsb(x); }

} // namespace urdp
