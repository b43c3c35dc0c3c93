#pragma once

#include <urdp/pke.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace urdp {

// Deterministic one-time-pad-by-reuse backend for tests: enc(x) = x XOR pad.
// It has no security whatsoever (the pad travels in the public key), which
// is the point: scheme-level tests that use it exercise the padding logic
// with an exact, noise-free primitive underneath. Never use outside tests;
// every name and serialization tag says INSECURE for that reason.
class InsecureXorBackend final : public PkeBackend {
public:
    std::uint8_t id() const override { return backend_id_insecure_xor; }
    std::string_view name() const override { return "insecure-xor"; }

    KeyPair gen(std::size_t plaintext_bits, RandomSource& rng) const override {
        if (plaintext_bits == 0)
            throw ParameterError("insecure-xor: plaintext width must be nonzero");
        const BitString pad = rng.take_bits(plaintext_bits);
        KeyPair keys;
        keys.pk.backend_id = id();
        keys.pk.role = KeyRole::public_key;
        keys.pk.fields = {pad_field(pad)};
        keys.sk.backend_id = id();
        keys.sk.role = KeyRole::secret_key;
        keys.sk.fields = {pad_field(pad)};
        return keys;
    }

    std::vector<std::uint8_t> enc(const PublicKey& pk, const BitString& plaintext,
                                  RandomSource& /*rng*/) const override {
        const BitString pad = parse_pad(pk);
        if (plaintext.size() != pad.size())
            throw ParameterError("insecure-xor: plaintext length must equal the pad length");
        return frame(xor_bits(plaintext, pad));
    }

    std::optional<BitString> dec(const SecretKey& sk,
                                 std::span<const std::uint8_t> blob) const override {
        const BitString pad = parse_pad(sk);
        const auto masked = unframe(blob);
        if (!masked || masked->size() != pad.size())
            return std::nullopt;
        return xor_bits(*masked, pad);
    }

    std::vector<std::uint8_t> sample_ciphertext_blob(const PublicKey& /*pk*/,
                                                     std::size_t plaintext_bits,
                                                     RandomSource& rng) const override {
        return frame(rng.take_bits(plaintext_bits));
    }

private:
    static BitString xor_bits(const BitString& a, const BitString& b) {
        BitString out;
        out.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            out.push_back(a[i] ^ b[i]);
        return out;
    }

    static std::vector<std::uint8_t> pad_field(const BitString& pad) {
        ByteWriter w;
        w.u64be(pad.size());
        w.raw(pad.to_bytes_msb());
        return w.take();
    }

    BitString parse_pad(const Key& key) const {
        if (key.backend_id != id() || key.fields.size() != 1)
            throw ParameterError("insecure-xor: malformed key");
        auto bits = unframe(key.fields[0]);
        if (!bits || bits->empty())
            throw ParameterError("insecure-xor: malformed key");
        return std::move(*bits);
    }

    // Bit count as 8-byte big-endian, then the bits packed MSB-first.
    static std::vector<std::uint8_t> frame(const BitString& bits) {
        ByteWriter w;
        w.u64be(bits.size());
        w.raw(bits.to_bytes_msb());
        return w.take();
    }

    // Strict inverse of frame: the byte count must match exactly and the
    // unused bits of a final partial byte must be zero.
    static std::optional<BitString> unframe(std::span<const std::uint8_t> blob) {
        if (blob.size() < 8)
            return std::nullopt;
        std::uint64_t count = 0;
        for (int i = 0; i < 8; ++i)
            count = (count << 8) | blob[i];
        const std::uint64_t available = blob.size() - 8;
        if (count > available * 8 || available != (count + 7) / 8)
            return std::nullopt;
        BitString all = BitString::from_bytes_msb(blob.subspan(8));
        for (std::size_t i = static_cast<std::size_t>(count); i < all.size(); ++i)
            if (all[i])
                return std::nullopt;
        return all.msb(static_cast<std::size_t>(count));
    }
};

} // namespace urdp
