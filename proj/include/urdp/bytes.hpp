#pragma once

#include <urdp/error.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace urdp {

// Big-endian byte serialization helpers shared by the key and ciphertext
// formats.

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }

    void u64be(std::uint64_t v) {
        for (int i = 7; i >= 0; --i)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void raw(std::span<const std::uint8_t> bytes) {
        out_.insert(out_.end(), bytes.begin(), bytes.end());
    }

    // 8-byte big-endian length followed by the payload.
    void framed(std::span<const std::uint8_t> bytes) {
        u64be(bytes.size());
        raw(bytes);
    }

    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

// Reader over a fixed buffer. Underruns throw FormatError; a claimed frame
// length is checked against the remaining input before anything is copied,
// so a hostile length field cannot trigger a large allocation.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    std::uint64_t u64be() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v = (v << 8) | data_[pos_++];
        return v;
    }

    std::span<const std::uint8_t> take(std::size_t count) {
        need(count);
        auto out = data_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    std::span<const std::uint8_t> framed() {
        const std::uint64_t len = u64be();
        if (len > remaining())
            throw FormatError("frame length exceeds available input");
        return take(static_cast<std::size_t>(len));
    }

    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

    void expect_done() const {
        if (!done())
            throw FormatError("trailing bytes after end of structure");
    }

private:
    void need(std::size_t count) const {
        if (count > remaining())
            throw FormatError("truncated input");
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace urdp
