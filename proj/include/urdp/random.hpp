#pragma once

#include <urdp/bit_string.hpp>
#include <urdp/error.hpp>

#include <cstdint>
#include <random>

namespace urdp {

// Source of random bits and bounded integers. Every probabilistic operation
// in the library draws through this interface, so a caller who injects a
// seeded or scripted source gets fully reproducible behavior.
//
// below() is implemented here by unbiased rejection sampling rather than
// std::uniform_int_distribution, whose output is not pinned by the standard
// and differs between library implementations.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual bool next_bit() = 0;
    virtual std::uint64_t next_u64() = 0;

    // Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0)
            throw ParameterError("below: bound must be nonzero");
        if (bound == 1)
            return 0;
        const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r < limit)
                return r % bound;
        }
    }

    BitString take_bits(std::size_t count) {
        BitString out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(next_bit() ? 1 : 0);
        return out;
    }
};

// Seeded deterministic source. std::mt19937_64 has a standard-specified
// output sequence, so a given seed produces the same stream on every
// platform. Bits are taken from buffered engine words, most significant
// first.
class Mt19937Source final : public RandomSource {
public:
    explicit Mt19937Source(std::uint64_t seed) : engine_(seed) {}

    bool next_bit() override {
        if (buffered_ == 0) {
            buffer_ = engine_();
            buffered_ = 64;
        }
        --buffered_;
        return (buffer_ >> buffered_) & 1;
    }

    std::uint64_t next_u64() override { return engine_(); }

    // Independent stream for a subtask; consumes one word of this stream.
    Mt19937Source fork() { return Mt19937Source(engine_()); }

private:
    std::mt19937_64 engine_;
    std::uint64_t buffer_ = 0;
    int buffered_ = 0;
};

} // namespace urdp
