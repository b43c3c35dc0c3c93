#pragma once

#include <urdp/scheme.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace urdp {

// Indistinguishability experiment against adaptive chosen-ciphertext
// adversaries, plus the tampering scenarios that probe specific ways of
// mauling a challenge ciphertext. Everything here talks to the real
// decryptor; nothing is simulated.

enum class OracleOutcome : std::uint8_t {
    message,  // decryption succeeded, plaintext attached
    rejected, // the single external error symbol
    refused,  // challenge replay, distinct from rejection by contract
};

inline std::string_view to_string(OracleOutcome outcome) {
    switch (outcome) {
    case OracleOutcome::message: return "message";
    case OracleOutcome::rejected: return "rejected";
    case OracleOutcome::refused: return "refused";
    }
    return "unknown";
}

// What the adversary sees. Rejections are collapsed to the bare outcome:
// internal reason codes stay inside the decryptor, as they would across a
// real interface.
struct OracleReply {
    OracleOutcome outcome = OracleOutcome::rejected;
    std::optional<BitString> plaintext;

    friend bool operator==(const OracleReply&, const OracleReply&) = default;
};

struct QueryRecord {
    std::vector<std::uint8_t> ciphertext; // serialized bytes
    OracleReply reply;
    bool post_challenge = false;

    friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

// Decryption oracle handed to the adversary in both phases. After arm() it
// refuses exactly the armed byte string; any other ciphertext, including
// one differing from the challenge in a single bit, is answered.
class DecryptionOracle {
public:
    DecryptionOracle(const Urdp& scheme, const SecretKey& sk)
        : scheme_(&scheme), sk_(&sk) {}

    void arm(std::vector<std::uint8_t> challenge_bytes) {
        challenge_ = std::move(challenge_bytes);
        armed_ = true;
    }

    OracleReply query(const UrdpCiphertext& ct) {
        return record(serialize_ciphertext(ct), ct);
    }

    OracleReply query_bytes(std::span<const std::uint8_t> bytes) {
        std::vector<std::uint8_t> owned(bytes.begin(), bytes.end());
        UrdpCiphertext ct;
        try {
            ct = parse_ciphertext(owned);
        } catch (const FormatError&) {
            // A byte string that is not even a ciphertext gets the same
            // answer a malformed decryption would.
            QueryRecord rec{std::move(owned), OracleReply{OracleOutcome::rejected, {}}, armed_};
            log_.push_back(rec);
            return rec.reply;
        }
        return record(std::move(owned), ct);
    }

    const std::vector<QueryRecord>& log() const { return log_; }
    std::size_t refusal_count() const { return refusals_; }

private:
    OracleReply record(std::vector<std::uint8_t> bytes, const UrdpCiphertext& ct) {
        OracleReply reply;
        if (armed_ && bytes == challenge_) {
            reply.outcome = OracleOutcome::refused;
            ++refusals_;
        } else {
            DecryptResult result = scheme_->decrypt(*sk_, ct);
            if (result.ok())
                reply = OracleReply{OracleOutcome::message, std::move(result.plaintext)};
            else
                reply = OracleReply{OracleOutcome::rejected, {}};
        }
        log_.push_back(QueryRecord{std::move(bytes), reply, armed_});
        return reply;
    }

    const Urdp* scheme_;
    const SecretKey* sk_;
    std::vector<std::uint8_t> challenge_;
    bool armed_ = false;
    std::size_t refusals_ = 0;
    std::vector<QueryRecord> log_;
};

// Two-phase adversary. Cross-phase state lives in the object itself.
class Adversary {
public:
    virtual ~Adversary() = default;

    virtual std::pair<BitString, BitString>
    phase1(const PublicKey& pk, DecryptionOracle& oracle, RandomSource& rng) = 0;

    virtual int phase2(const UrdpCiphertext& challenge, DecryptionOracle& oracle,
                       RandomSource& rng) = 0;
};

struct GameTranscript {
    BitString m0;
    BitString m1;
    int b = 0;
    std::vector<std::uint8_t> c_star; // serialized challenge ciphertext
    std::vector<QueryRecord> queries;
    int b_guess = 0;
    bool win = false;

    friend bool operator==(const GameTranscript&, const GameTranscript&) = default;
};

// Out-of-band taps for tests: on_keys leaks the freshly generated key pair
// before phase 1, which is how an omniscient sanity-check adversary gets
// the secret key.
struct ExperimentHooks {
    std::function<void(const KeyPair&)> on_keys;
};

inline GameTranscript run_experiment(const Urdp& scheme, Adversary& adversary,
                                     RandomSource& rng,
                                     const ExperimentHooks& hooks = {}) {
    const KeyPair keys = scheme.keygen(rng);
    if (hooks.on_keys)
        hooks.on_keys(keys);

    DecryptionOracle oracle(scheme, keys.sk);
    auto [m0, m1] = adversary.phase1(keys.pk, oracle, rng);
    if (m0.size() != m1.size())
        throw ParameterError("adversary chose messages of different lengths");
    if (m0.empty())
        throw ParameterError("adversary chose empty messages");

    const int b = rng.next_bit();
    const UrdpCiphertext c_star = scheme.encrypt(keys.pk, b ? m1 : m0, rng);
    std::vector<std::uint8_t> c_star_bytes = serialize_ciphertext(c_star);
    oracle.arm(c_star_bytes);

    const int b_guess = adversary.phase2(c_star, oracle, rng) ? 1 : 0;

    GameTranscript t;
    t.m0 = std::move(m0);
    t.m1 = std::move(m1);
    t.b = b;
    t.c_star = std::move(c_star_bytes);
    t.queries = oracle.log();
    t.b_guess = b_guess;
    t.win = (b_guess == b);
    return t;
}

struct AdvantageEstimate {
    double advantage = 0.0;  // |win rate - 1/2|
    double half_width = 0.0; // 95% binomial confidence half-width
    std::size_t wins = 0;
    std::size_t trials = 0;
    std::size_t refusals = 0;
};

inline AdvantageEstimate estimate_advantage(const Urdp& scheme, Adversary& adversary,
                                            std::size_t trials, RandomSource& rng,
                                            const ExperimentHooks& hooks = {}) {
    if (trials < 100)
        throw ParameterError("advantage estimation needs at least 100 trials");

    AdvantageEstimate est;
    est.trials = trials;
    for (std::size_t i = 0; i < trials; ++i) {
        const GameTranscript t = run_experiment(scheme, adversary, rng, hooks);
        if (t.win)
            ++est.wins;
        for (const QueryRecord& q : t.queries)
            if (q.reply.outcome == OracleOutcome::refused)
                ++est.refusals;
    }
    const double p = static_cast<double>(est.wins) / static_cast<double>(trials);
    est.advantage = std::abs(p - 0.5);
    est.half_width = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return est;
}

// Baseline adversaries.

class CoinFlipAdversary final : public Adversary {
public:
    explicit CoinFlipAdversary(std::size_t message_bits = 128)
        : message_bits_(message_bits) {}

    std::pair<BitString, BitString> phase1(const PublicKey&, DecryptionOracle&,
                                           RandomSource& rng) override {
        return {rng.take_bits(message_bits_), rng.take_bits(message_bits_)};
    }

    int phase2(const UrdpCiphertext&, DecryptionOracle&, RandomSource& rng) override {
        return rng.next_bit();
    }

private:
    std::size_t message_bits_;
};

class AlwaysZeroAdversary final : public Adversary {
public:
    explicit AlwaysZeroAdversary(std::size_t message_bits = 128)
        : message_bits_(message_bits) {}

    std::pair<BitString, BitString> phase1(const PublicKey&, DecryptionOracle&,
                                           RandomSource& rng) override {
        return {rng.take_bits(message_bits_), rng.take_bits(message_bits_)};
    }

    int phase2(const UrdpCiphertext&, DecryptionOracle&, RandomSource&) override {
        return 0;
    }

private:
    std::size_t message_bits_;
};

// Tampering scenarios. Each trial builds an honest challenge, then derives
// a tampered ciphertext from it:
//   game1: keep C1*, re-encrypt a fresh selector r' != r* of the same
//          weight h* under the real backend.
//   game2: keep C1*, replace C2 with a uniformly sampled backend-shaped
//          blob, resampled until its bytes differ from C2* and it does not
//          decrypt back to r*.
//   game3: keep C2*, replace C1 with a uniform l*-bit integer != C1*.
// The tampered ciphertext goes to the real decryptor and the outcome is
// classified against the challenge plaintext.
enum class TamperVariant : std::uint8_t { game1, game2, game3 };

inline std::string_view to_string(TamperVariant variant) {
    switch (variant) {
    case TamperVariant::game1: return "game1";
    case TamperVariant::game2: return "game2";
    case TamperVariant::game3: return "game3";
    }
    return "unknown";
}

enum class TamperOutcome : std::uint8_t { rejected, wrong_message, recovered_mb };

inline std::string_view to_string(TamperOutcome outcome) {
    switch (outcome) {
    case TamperOutcome::rejected: return "rejected";
    case TamperOutcome::wrong_message: return "wrong_message";
    case TamperOutcome::recovered_mb: return "recovered_mb";
    }
    return "unknown";
}

struct TamperRecord {
    TamperVariant variant;
    std::size_t trial = 0;
    TamperOutcome outcome = TamperOutcome::rejected;
    RejectReason reason = RejectReason::none;
};

struct TamperStats {
    std::size_t rejected = 0;
    std::size_t wrong_message = 0;
    std::size_t recovered_mb = 0;

    std::size_t trials() const { return rejected + wrong_message + recovered_mb; }
};

struct TamperOptions {
    std::size_t message_bits = 256;
    std::function<void(const TamperRecord&)> sink; // one call per trial
};

namespace detail {

// Uniform selector of exactly weight h: partial Fisher-Yates over the k
// positions, take the first h.
inline BitString sample_selector_of_weight(std::size_t k, std::size_t h,
                                           RandomSource& rng) {
    std::vector<std::size_t> positions(k);
    for (std::size_t i = 0; i < k; ++i)
        positions[i] = i;
    std::vector<std::uint8_t> bits(k, 0);
    for (std::size_t i = 0; i < h; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(k - i));
        std::swap(positions[i], positions[j]);
        bits[positions[i]] = 1;
    }
    return BitString(std::move(bits));
}

} // namespace detail

inline TamperStats scenario_tamper(const Urdp& scheme, TamperVariant variant,
                                   std::size_t trials, RandomSource& rng,
                                   const TamperOptions& opts = {}) {
    if (trials < 1)
        throw ParameterError("tampering scenario needs at least one trial");
    if (opts.message_bits == 0)
        throw ParameterError("tampering scenario needs non-empty messages");

    const std::size_t k = scheme.config().k;
    TamperStats stats;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const KeyPair keys = scheme.keygen(rng);
        const BitString m0 = rng.take_bits(opts.message_bits);
        const BitString m1 = rng.take_bits(opts.message_bits);
        const int b = rng.next_bit();
        const BitString& m_b = b ? m1 : m0;

        EncryptionTrace trace;
        const UrdpCiphertext c_star = scheme.encrypt(keys.pk, m_b, rng, &trace);

        UrdpCiphertext tampered = c_star;
        switch (variant) {
        case TamperVariant::game1: {
            const std::size_t h_star = hamming_weight(trace.selector);
            for (;;) {
                const BitString r_prime =
                    detail::sample_selector_of_weight(k, h_star, rng);
                if (r_prime == trace.selector)
                    continue;
                tampered.c2 = scheme.backend().enc(keys.pk, r_prime, rng);
                if (tampered.c2 != c_star.c2)
                    break;
            }
            break;
        }
        case TamperVariant::game2: {
            for (;;) {
                tampered.c2 = scheme.backend().sample_ciphertext_blob(keys.pk, k, rng);
                if (tampered.c2 == c_star.c2)
                    continue;
                const std::optional<BitString> r = scheme.backend().dec(keys.sk, tampered.c2);
                if (!r || *r != trace.selector)
                    break;
            }
            break;
        }
        case TamperVariant::game3: {
            do {
                tampered.c1 = to_integer(rng.take_bits(c_star.ell));
            } while (tampered.c1 == c_star.c1);
            break;
        }
        }

        const DecryptResult result = scheme.decrypt(keys.sk, tampered);
        TamperRecord rec{variant, trial, TamperOutcome::rejected, result.reason};
        if (!result.ok()) {
            rec.outcome = TamperOutcome::rejected;
            ++stats.rejected;
        } else if (*result.plaintext == m_b) {
            rec.outcome = TamperOutcome::recovered_mb;
            ++stats.recovered_mb;
        } else {
            rec.outcome = TamperOutcome::wrong_message;
            ++stats.wrong_message;
        }
        if (opts.sink)
            opts.sink(rec);
    }
    return stats;
}

} // namespace urdp
