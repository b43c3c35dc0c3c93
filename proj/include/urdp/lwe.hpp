#pragma once

#include <urdp/pke.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace urdp {

// Desk-scale Regev-style scheme over Z_q. One key pair encrypts bit
// strings bit by bit: the public key is `samples` LWE rows (A, b = A*s + e),
// a bit is encrypted as a random subset sum of the rows plus bit*floor(q/2),
// and decryption rounds c - <a, s> to whichever of {0, floor(q/2)} is
// closer.
//
// Parameters are chosen for exactness, not security: with
// q > 4 * samples * error_bound + 4 the accumulated error can never cross a
// rounding boundary, so decryption is correct with certainty.
struct LweParams {
    std::size_t dimension = 32;
    std::uint64_t modulus = 12289;   // odd prime
    std::uint64_t error_bound = 4;   // errors uniform in [-error_bound, error_bound]
    std::size_t samples = 32;        // public-key rows, all candidates per bit

    friend bool operator==(const LweParams&, const LweParams&) = default;
};

namespace detail {

inline bool is_odd_prime(std::uint64_t q) {
    if (q < 3 || q % 2 == 0)
        return false;
    for (std::uint64_t d = 3; d * d <= q; d += 2)
        if (q % d == 0)
            return false;
    return true;
}

inline void append_u64s(std::vector<std::uint8_t>& field, std::span<const std::uint64_t> values) {
    for (std::uint64_t v : values)
        for (int i = 7; i >= 0; --i)
            field.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::vector<std::uint64_t> parse_u64s(std::span<const std::uint8_t> field) {
    if (field.size() % 8 != 0)
        throw ParameterError("key field length is not a multiple of 8");
    std::vector<std::uint64_t> out(field.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t v = 0;
        for (int j = 0; j < 8; ++j)
            v = (v << 8) | field[i * 8 + j];
        out[i] = v;
    }
    return out;
}

} // namespace detail

inline void validate(const LweParams& p) {
    if (p.dimension == 0)
        throw ParameterError("lwe: dimension must be nonzero");
    if (p.samples == 0)
        throw ParameterError("lwe: samples must be nonzero");
    if (p.modulus >= (std::uint64_t{1} << 31))
        throw ParameterError("lwe: modulus too large for exact arithmetic");
    if (!detail::is_odd_prime(p.modulus))
        throw ParameterError("lwe: modulus must be an odd prime");
    if (p.modulus <= 4 * p.dimension * p.error_bound + 4)
        throw ParameterError("lwe: modulus must exceed 4*dimension*error_bound + 4");
    // Correctness depends on the subset size, which is the row count.
    if (p.modulus <= 4 * p.samples * p.error_bound + 4)
        throw ParameterError("lwe: modulus must exceed 4*samples*error_bound + 4");
}

class LweBackend final : public PkeBackend {
public:
    explicit LweBackend(LweParams params) : params_(params) { validate(params_); }

    std::uint8_t id() const override { return backend_id_lwe; }
    std::string_view name() const override { return "lwe"; }
    const LweParams& params() const { return params_; }

    // Draw order: secret s, then per row the dimension matrix entries
    // followed by the row's error term.
    KeyPair gen(std::size_t /*plaintext_bits*/, RandomSource& rng) const override {
        const std::uint64_t q = params_.modulus;
        std::vector<std::uint64_t> s(params_.dimension);
        for (auto& x : s)
            x = rng.below(q);

        std::vector<std::uint64_t> a(params_.samples * params_.dimension);
        std::vector<std::uint64_t> b(params_.samples);
        for (std::size_t row = 0; row < params_.samples; ++row) {
            std::uint64_t dot = 0;
            for (std::size_t j = 0; j < params_.dimension; ++j) {
                const std::uint64_t entry = rng.below(q);
                a[row * params_.dimension + j] = entry;
                dot = (dot + entry * s[j]) % q;
            }
            // error uniform in [-error_bound, error_bound], represented mod q
            const std::uint64_t offset = rng.below(2 * params_.error_bound + 1);
            const std::uint64_t e = (q - params_.error_bound + offset) % q;
            b[row] = (dot + e) % q;
        }

        KeyPair keys;
        keys.pk.backend_id = id();
        keys.pk.role = KeyRole::public_key;
        keys.pk.fields = {params_field(), u64_field(a), u64_field(b)};
        keys.sk.backend_id = id();
        keys.sk.role = KeyRole::secret_key;
        keys.sk.fields = {params_field(), u64_field(s)};
        return keys;
    }

    std::vector<std::uint8_t> enc(const PublicKey& pk, const BitString& plaintext,
                                  RandomSource& rng) const override {
        const auto [p, a, b] = parse_pk(pk);
        const std::uint64_t q = p.modulus;
        const std::uint64_t half = q / 2;

        ByteWriter w;
        w.u64be(plaintext.size());
        std::vector<std::uint64_t> acc(p.dimension);
        for (std::size_t bit = 0; bit < plaintext.size(); ++bit) {
            std::fill(acc.begin(), acc.end(), 0);
            std::uint64_t c = plaintext[bit] ? half : 0;
            for (std::size_t row = 0; row < p.samples; ++row) {
                if (!rng.next_bit())
                    continue;
                for (std::size_t j = 0; j < p.dimension; ++j)
                    acc[j] = (acc[j] + a[row * p.dimension + j]) % q;
                c = (c + b[row]) % q;
            }
            for (std::uint64_t x : acc)
                w.u64be(x);
            w.u64be(c);
        }
        return w.take();
    }

    std::optional<BitString> dec(const SecretKey& sk,
                                 std::span<const std::uint8_t> blob) const override {
        const auto [p, s] = parse_sk(sk);
        const std::uint64_t q = p.modulus;
        const std::uint64_t half = q / 2;

        try {
            ByteReader r(blob);
            const std::uint64_t count = r.u64be();
            if (count != r.remaining() / (8 * (p.dimension + 1)) ||
                r.remaining() % (8 * (p.dimension + 1)) != 0)
                return std::nullopt;

            BitString out;
            out.reserve(static_cast<std::size_t>(count));
            for (std::uint64_t bit = 0; bit < count; ++bit) {
                std::uint64_t dot = 0;
                for (std::size_t j = 0; j < p.dimension; ++j) {
                    const std::uint64_t aj = r.u64be();
                    if (aj >= q)
                        return std::nullopt;
                    dot = (dot + aj * s[j]) % q;
                }
                const std::uint64_t c = r.u64be();
                if (c >= q)
                    return std::nullopt;
                const std::uint64_t diff = (c + q - dot) % q;
                const std::uint64_t dist0 = std::min(diff, q - diff);
                const std::uint64_t away = diff > half ? diff - half : half - diff;
                const std::uint64_t dist1 = std::min(away, q - away);
                out.push_back(dist1 < dist0 ? 1 : 0);
            }
            r.expect_done();
            return out;
        } catch (const FormatError&) {
            return std::nullopt;
        }
    }

    std::vector<std::uint8_t> sample_ciphertext_blob(const PublicKey& pk,
                                                     std::size_t plaintext_bits,
                                                     RandomSource& rng) const override {
        const auto [p, a, b] = parse_pk(pk);
        ByteWriter w;
        w.u64be(plaintext_bits);
        for (std::size_t bit = 0; bit < plaintext_bits; ++bit)
            for (std::size_t j = 0; j <= p.dimension; ++j)
                w.u64be(rng.below(p.modulus));
        return w.take();
    }

private:
    struct PkView {
        LweParams params;
        std::vector<std::uint64_t> a;
        std::vector<std::uint64_t> b;
    };
    struct SkView {
        LweParams params;
        std::vector<std::uint64_t> s;
    };

    std::vector<std::uint8_t> params_field() const {
        std::vector<std::uint8_t> field;
        const std::uint64_t values[4] = {params_.dimension, params_.modulus,
                                         params_.error_bound, params_.samples};
        detail::append_u64s(field, values);
        return field;
    }

    static std::vector<std::uint8_t> u64_field(std::span<const std::uint64_t> values) {
        std::vector<std::uint8_t> field;
        field.reserve(values.size() * 8);
        detail::append_u64s(field, values);
        return field;
    }

    static LweParams parse_params_field(const std::vector<std::uint8_t>& field) {
        const auto values = detail::parse_u64s(field);
        if (values.size() != 4)
            throw ParameterError("lwe: malformed parameter field");
        LweParams p;
        p.dimension = static_cast<std::size_t>(values[0]);
        p.modulus = values[1];
        p.error_bound = values[2];
        p.samples = static_cast<std::size_t>(values[3]);
        validate(p);
        return p;
    }

    PkView parse_pk(const PublicKey& pk) const {
        if (pk.backend_id != id() || pk.fields.size() != 3)
            throw ParameterError("lwe: malformed public key");
        PkView view{parse_params_field(pk.fields[0]), detail::parse_u64s(pk.fields[1]),
                    detail::parse_u64s(pk.fields[2])};
        if (view.a.size() != view.params.samples * view.params.dimension ||
            view.b.size() != view.params.samples)
            throw ParameterError("lwe: public key field sizes disagree with parameters");
        return view;
    }

    SkView parse_sk(const SecretKey& sk) const {
        if (sk.backend_id != id() || sk.fields.size() != 2)
            throw ParameterError("lwe: malformed secret key");
        SkView view{parse_params_field(sk.fields[0]), detail::parse_u64s(sk.fields[1])};
        if (view.s.size() != view.params.dimension)
            throw ParameterError("lwe: secret key field sizes disagree with parameters");
        return view;
    }

    LweParams params_;
};

} // namespace urdp
