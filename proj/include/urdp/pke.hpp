#pragma once

#include <urdp/bit_string.hpp>
#include <urdp/bytes.hpp>
#include <urdp/error.hpp>
#include <urdp/random.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace urdp {

inline constexpr std::uint8_t backend_id_lwe = 1;
inline constexpr std::uint8_t backend_id_insecure_xor = 255;

enum class KeyRole : std::uint8_t { public_key = 1, secret_key = 2 };

// Key material is carried as an ordered list of opaque byte fields whose
// meaning the owning backend defines. Keeping keys in this shape makes the
// file format generic: every backend serializes the same way.
struct Key {
    std::uint8_t backend_id = 0;
    KeyRole role = KeyRole::public_key;
    std::vector<std::vector<std::uint8_t>> fields;

    friend bool operator==(const Key&, const Key&) = default;
};

struct PublicKey : Key {};
struct SecretKey : Key {};

struct KeyPair {
    PublicKey pk;
    SecretKey sk;
};

// Trapdoor public-key encryption over bit strings: the pluggable primitive
// underneath the scheme. Implementations must be complete (dec of enc
// returns the plaintext with overwhelming probability per call under their
// default parameters) and must frame their ciphertext blobs so that dec can
// recognize malformed input and return nullopt instead of failing.
//
// Keys are immutable and shareable across threads; enc and dec are pure
// apart from the caller-owned randomness source.
class PkeBackend {
public:
    virtual ~PkeBackend() = default;

    virtual std::uint8_t id() const = 0;
    virtual std::string_view name() const = 0;

    // plaintext_bits is the exact plaintext width the keys will serve.
    virtual KeyPair gen(std::size_t plaintext_bits, RandomSource& rng) const = 0;

    virtual std::vector<std::uint8_t> enc(const PublicKey& pk, const BitString& plaintext,
                                          RandomSource& rng) const = 0;

    virtual std::optional<BitString> dec(const SecretKey& sk,
                                         std::span<const std::uint8_t> blob) const = 0;

    // A uniform element of the ciphertext-blob space for plaintext_bits
    // bits, structurally valid but unrelated to any plaintext. Used by the
    // tampering experiments.
    virtual std::vector<std::uint8_t> sample_ciphertext_blob(const PublicKey& pk,
                                                             std::size_t plaintext_bits,
                                                             RandomSource& rng) const = 0;
};

// Key file format: 4-byte magic "UKEY", 1-byte backend id, version byte,
// then the fields, each framed as an 8-byte big-endian length followed by
// the payload. The key role travels as an implicit leading one-byte field
// so a secret key can never be mistaken for a public one.
inline constexpr std::uint8_t key_format_version = 0x01;
inline constexpr std::uint8_t key_magic[4] = {'U', 'K', 'E', 'Y'};

inline std::vector<std::uint8_t> serialize_key(const Key& key) {
    ByteWriter w;
    w.raw(key_magic);
    w.u8(key.backend_id);
    w.u8(key_format_version);
    const std::uint8_t role = static_cast<std::uint8_t>(key.role);
    w.framed({&role, 1});
    for (const auto& field : key.fields)
        w.framed(field);
    return w.take();
}

inline Key parse_key(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    const auto magic = r.take(4);
    for (int i = 0; i < 4; ++i)
        if (magic[i] != key_magic[i])
            throw FormatError("not a key file");
    Key key;
    key.backend_id = r.u8();
    if (r.u8() != key_format_version)
        throw FormatError("unsupported key format version");
    const auto role_field = r.framed();
    if (role_field.size() != 1 ||
        (role_field[0] != static_cast<std::uint8_t>(KeyRole::public_key) &&
         role_field[0] != static_cast<std::uint8_t>(KeyRole::secret_key)))
        throw FormatError("bad key role field");
    key.role = static_cast<KeyRole>(role_field[0]);
    while (!r.done()) {
        const auto field = r.framed();
        key.fields.emplace_back(field.begin(), field.end());
    }
    return key;
}

inline PublicKey parse_public_key(std::span<const std::uint8_t> bytes) {
    Key key = parse_key(bytes);
    if (key.role != KeyRole::public_key)
        throw FormatError("expected a public key");
    PublicKey pk;
    static_cast<Key&>(pk) = std::move(key);
    return pk;
}

inline SecretKey parse_secret_key(std::span<const std::uint8_t> bytes) {
    Key key = parse_key(bytes);
    if (key.role != KeyRole::secret_key)
        throw FormatError("expected a secret key");
    SecretKey sk;
    static_cast<Key&>(sk) = std::move(key);
    return sk;
}

// Short identifier for log lines and the CLI; not collision resistant.
inline std::string key_fingerprint(const Key& key) {
    std::uint64_t hash = 0xcbf29ce484222325ull; // FNV-1a 64
    for (std::uint8_t byte : serialize_key(key)) {
        hash ^= byte;
        hash *= 0x100000001b3ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out = "fnv1a64:";
    for (int i = 15; i >= 0; --i)
        out.push_back(digits[(hash >> (4 * i)) & 0xf]);
    return out;
}

} // namespace urdp
