#pragma once

#include <urdp/big_uint.hpp>
#include <urdp/bit_string.hpp>
#include <urdp/bytes.hpp>
#include <urdp/error.hpp>
#include <urdp/lwe.hpp>
#include <urdp/padding.hpp>
#include <urdp/pke.hpp>
#include <urdp/random.hpp>
#include <urdp/xor_backend.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace urdp {

// Hard ceilings on header sizes. They keep decryption and deserialization
// total: no attacker-chosen header can force an allocation beyond what a
// legitimately encrypted message of the maximum size would need.
inline constexpr std::size_t max_message_bits = std::size_t{1} << 28;
inline constexpr std::size_t max_encoded_bits = max_message_bits + (std::size_t{1} << 20);

enum class BackendKind : std::uint8_t {
    lwe = backend_id_lwe,
    insecure_xor = backend_id_insecure_xor,
};

struct SchemeConfig {
    std::size_t k = 18;     // selector length
    std::size_t s_max = 16; // filler block lengths are uniform in [1, s_max]
    BackendKind backend = BackendKind::lwe;
    LweParams lwe;
};

inline std::unique_ptr<PkeBackend> make_backend(const SchemeConfig& config) {
    switch (config.backend) {
    case BackendKind::lwe:
        return std::make_unique<LweBackend>(config.lwe);
    case BackendKind::insecure_xor:
        return std::make_unique<InsecureXorBackend>();
    }
    throw ParameterError("unknown backend");
}

// C = (C1, C2) plus the header the receiver needs before it can undo the
// encoding: the original message length n and the encoded length l. The
// integer C1 cannot carry l itself because converting m' to an integer
// erases leading zeros.
struct UrdpCiphertext {
    std::uint8_t backend_id = 0;
    std::size_t n = 0;   // original message bit length
    std::size_t ell = 0; // bit length of the encoded message
    BigUint c1;          // DV(m') * h
    std::vector<std::uint8_t> c2; // backend blob encrypting the selector

    friend bool operator==(const UrdpCiphertext&, const UrdpCiphertext&) = default;
};

// Why a decryption rejected. Internal only: callers that surface results
// externally must collapse every rejection to the single error symbol, so
// that the reason channel never becomes an oracle.
enum class RejectReason : std::uint8_t {
    none = 0,
    backend_mismatch,
    bad_header,
    backend_decrypt_failed,
    selector_length,
    selector_weight,
    c1_not_divisible,
    value_too_wide,
    length_inconsistent,
};

inline std::string_view to_string(RejectReason reason) {
    switch (reason) {
    case RejectReason::none: return "none";
    case RejectReason::backend_mismatch: return "backend_mismatch";
    case RejectReason::bad_header: return "bad_header";
    case RejectReason::backend_decrypt_failed: return "backend_decrypt_failed";
    case RejectReason::selector_length: return "selector_length";
    case RejectReason::selector_weight: return "selector_weight";
    case RejectReason::c1_not_divisible: return "c1_not_divisible";
    case RejectReason::value_too_wide: return "value_too_wide";
    case RejectReason::length_inconsistent: return "length_inconsistent";
    }
    return "unknown";
}

struct DecryptResult {
    std::optional<BitString> plaintext; // nullopt is the error symbol
    RejectReason reason = RejectReason::none;

    bool ok() const { return plaintext.has_value(); }
};

// Intermediate values of one encryption, exposed for tests and the game
// harness. Never serialized.
struct EncryptionTrace {
    BitString selector;
    std::size_t filler_len = 0;
};

// The composed scheme: encode the message under a fresh random selector r,
// bind the encoding to r by multiplying its integer value with the selector
// weight, and encrypt r itself under the backend.
class Urdp {
public:
    explicit Urdp(SchemeConfig config)
        : config_(std::move(config)), backend_(make_backend(config_)) {
        if (config_.k < 3)
            throw ParameterError("selector length k must be at least 3");
        if (config_.s_max < 1)
            throw ParameterError("s_max must be at least 1");
        if (config_.k * (config_.s_max + 1) > max_encoded_bits - max_message_bits)
            throw ParameterError("k * s_max exceeds the supported filler budget");
    }

    const SchemeConfig& config() const { return config_; }
    const PkeBackend& backend() const { return *backend_; }

    KeyPair keygen(RandomSource& rng) const { return backend_->gen(config_.k, rng); }

    // Draw order: the k selector bits (redrawn whole while the weight is 0
    // or k), one integer for the filler length s, the tail-padding and
    // filler bits in encoding order, then whatever the backend consumes.
    UrdpCiphertext encrypt(const PublicKey& pk, const BitString& m, RandomSource& rng,
                           EncryptionTrace* trace = nullptr) const {
        const std::size_t n = m.size();
        if (n == 0)
            throw ParameterError("message must be non-empty");
        if (n > max_message_bits)
            throw ParameterError("message exceeds the supported size");
        if (pk.backend_id != backend_->id())
            throw ParameterError("public key does not belong to the configured backend");

        BitString r;
        std::size_t h = 0;
        do {
            r = rng.take_bits(config_.k);
            h = hamming_weight(r);
        } while (h == 0 || h == config_.k);
        const SelectorVector sel(r);
        const std::size_t s = 1 + static_cast<std::size_t>(rng.below(config_.s_max));

        const EncodingParams params = EncodingParams::derive(n, h, s);
        const EncodedMessage encoded = encode(m, sel, params, rng);

        UrdpCiphertext ct;
        ct.backend_id = backend_->id();
        ct.n = n;
        ct.ell = encoded.length();
        ct.c1 = to_integer(encoded.payload).mul_small(h);
        ct.c2 = backend_->enc(pk, sel.bits(), rng);
        if (trace)
            *trace = EncryptionTrace{sel.bits(), s};
        return ct;
    }

    // Total over arbitrary inputs: every failure path lands on a reject,
    // never an exception, and nothing is allocated from header fields
    // before they have passed the consistency checks.
    DecryptResult decrypt(const SecretKey& sk, const UrdpCiphertext& ct) const {
        if (ct.backend_id != backend_->id())
            return reject(RejectReason::backend_mismatch);
        if (ct.n == 0 || ct.n > max_message_bits || ct.ell > max_encoded_bits)
            return reject(RejectReason::bad_header);

        const std::optional<BitString> r = backend_->dec(sk, ct.c2);
        if (!r)
            return reject(RejectReason::backend_decrypt_failed);
        if (r->size() != config_.k)
            return reject(RejectReason::selector_length);
        const std::size_t h = hamming_weight(*r);
        if (h == 0 || h == config_.k)
            return reject(RejectReason::selector_weight);

        auto [y, remainder] = ct.c1.divmod_small(h);
        if (remainder != 0)
            return reject(RejectReason::c1_not_divisible);
        if (y.bit_length() > ct.ell)
            return reject(RejectReason::value_too_wide);

        const std::optional<EncodingParams> params =
            derive_params(ct.n, config_.k, h, ct.ell, config_.s_max);
        if (!params)
            return reject(RejectReason::length_inconsistent);

        const EncodedMessage encoded{from_integer(y, ct.ell)};
        return DecryptResult{extract(encoded, SelectorVector(*r), *params),
                             RejectReason::none};
    }

private:
    static DecryptResult reject(RejectReason reason) { return DecryptResult{std::nullopt, reason}; }

    SchemeConfig config_;
    std::unique_ptr<PkeBackend> backend_;
};

// Ciphertext file format, bit exact: magic "URDP", version byte 0x01,
// backend id byte, big-endian 8-byte n and l, then C1 and C2 each framed as
// an 8-byte big-endian length plus payload. C1 is the minimal big-endian
// byte string (no leading zero byte; zero is empty).
inline constexpr std::uint8_t ciphertext_format_version = 0x01;
inline constexpr std::uint8_t ciphertext_magic[4] = {'U', 'R', 'D', 'P'};

inline std::vector<std::uint8_t> serialize_ciphertext(const UrdpCiphertext& ct) {
    ByteWriter w;
    w.raw(ciphertext_magic);
    w.u8(ciphertext_format_version);
    w.u8(ct.backend_id);
    w.u64be(ct.n);
    w.u64be(ct.ell);
    w.framed(ct.c1.to_bytes_be());
    w.framed(ct.c2);
    return w.take();
}

inline UrdpCiphertext parse_ciphertext(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    const auto magic = r.take(4);
    for (int i = 0; i < 4; ++i)
        if (magic[i] != ciphertext_magic[i])
            throw FormatError("not a ciphertext");
    if (r.u8() != ciphertext_format_version)
        throw FormatError("unsupported ciphertext format version");

    UrdpCiphertext ct;
    ct.backend_id = r.u8();
    if (ct.backend_id != backend_id_lwe && ct.backend_id != backend_id_insecure_xor)
        throw FormatError("unknown backend id");

    const std::uint64_t n = r.u64be();
    const std::uint64_t ell = r.u64be();
    if (n == 0 || n > max_message_bits)
        throw FormatError("message length out of range");
    if (ell < n || ell > max_encoded_bits)
        throw FormatError("encoded length out of range");
    ct.n = static_cast<std::size_t>(n);
    ct.ell = static_cast<std::size_t>(ell);

    const auto c1_bytes = r.framed();
    if (!c1_bytes.empty() && c1_bytes[0] == 0)
        throw FormatError("non-canonical integer encoding");
    ct.c1 = BigUint::from_bytes_be(c1_bytes);

    const auto c2_bytes = r.framed();
    ct.c2.assign(c2_bytes.begin(), c2_bytes.end());

    r.expect_done();
    return ct;
}

} // namespace urdp
