#include <urdp/lwe.hpp>
#include <urdp/pke.hpp>
#include <urdp/xor_backend.hpp>

#include "../support/scripted_source.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <set>
#include <vector>

using namespace urdp;
using urdp::test::bs;
using urdp::test::ScriptedSource;

namespace {

BitString bits_of(std::uint64_t v, std::size_t len) {
    std::vector<std::uint8_t> bits(len);
    for (std::size_t i = 0; i < len; ++i)
        bits[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1);
    return BitString(std::move(bits));
}

// Pulls the payload bits back out of the xor backend's framed blob.
BitString unframe_bits(std::span<const std::uint8_t> blob) {
    std::uint64_t count = 0;
    for (int i = 0; i < 8; ++i)
        count = (count << 8) | blob[i];
    return BitString::from_bytes_msb(blob.subspan(8)).msb(static_cast<std::size_t>(count));
}

TEST(XorBackend, ZeroPadEncryptsToIdentity) {
    InsecureXorBackend backend;
    ScriptedSource rng;
    rng.push_bits("000");
    const KeyPair keys = backend.gen(3, rng);
    const auto blob = backend.enc(keys.pk, bs("101"), rng);
    EXPECT_EQ(unframe_bits(blob), bs("101"));
    const std::vector<std::uint8_t> expected{0, 0, 0, 0, 0, 0, 0, 3, 0xA0};
    EXPECT_EQ(blob, expected);
}

TEST(XorBackend, MaskingTwiceIsTheIdentity) {
    InsecureXorBackend backend;
    Mt19937Source rng(41);
    const KeyPair keys = backend.gen(8, rng);
    const BitString x = bs("11010010");
    const auto once = backend.enc(keys.pk, x, rng);
    const auto twice = backend.enc(keys.pk, unframe_bits(once), rng);
    EXPECT_EQ(unframe_bits(twice), x);
}

TEST(XorBackend, ExhaustiveRoundTripShortWidths) {
    InsecureXorBackend backend;
    Mt19937Source rng(43);
    for (std::size_t k = 1; k <= 8; ++k) {
        const KeyPair keys = backend.gen(k, rng);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
            const BitString x = bits_of(v, k);
            const auto got = backend.dec(keys.sk, backend.enc(keys.pk, x, rng));
            ASSERT_TRUE(got.has_value());
            EXPECT_EQ(*got, x);
        }
    }
}

TEST(XorBackend, PlaintextWidthMustMatchPad) {
    InsecureXorBackend backend;
    Mt19937Source rng(47);
    const KeyPair keys = backend.gen(5, rng);
    EXPECT_THROW(backend.enc(keys.pk, bs("1010"), rng), ParameterError);
    EXPECT_THROW(backend.gen(0, rng), ParameterError);
}

TEST(XorBackend, MalformedBlobsDecryptToNothing) {
    InsecureXorBackend backend;
    Mt19937Source rng(53);
    const KeyPair keys = backend.gen(3, rng);
    auto blob = backend.enc(keys.pk, bs("101"), rng);

    auto truncated = blob;
    truncated.pop_back();
    EXPECT_FALSE(backend.dec(keys.sk, truncated).has_value());

    auto extended = blob;
    extended.push_back(0);
    EXPECT_FALSE(backend.dec(keys.sk, extended).has_value());

    auto wrong_width = blob;
    wrong_width[7] = 4; // claims 4 bits; dec gets a 4-bit string, pad is 3
    EXPECT_FALSE(backend.dec(keys.sk, wrong_width).has_value());

    auto dirty_padding = blob;
    dirty_padding.back() |= 0x10; // sets a bit beyond the declared count
    EXPECT_FALSE(backend.dec(keys.sk, dirty_padding).has_value());

    EXPECT_FALSE(backend.dec(keys.sk, std::vector<std::uint8_t>{}).has_value());
    // 8-byte header claiming an absurd bit count
    const std::vector<std::uint8_t> huge{0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF};
    EXPECT_FALSE(backend.dec(keys.sk, huge).has_value());
}

TEST(LweParams, Validation) {
    EXPECT_NO_THROW(validate(LweParams{}));
    EXPECT_NO_THROW(validate(LweParams{2, 17, 0, 1}));
    EXPECT_THROW(validate(LweParams{2, 6, 0, 1}), ParameterError);    // even
    EXPECT_THROW(validate(LweParams{2, 9, 0, 1}), ParameterError);    // composite
    EXPECT_THROW(validate(LweParams{2, 17, 2, 1}), ParameterError);   // 17 <= 4*2*2+4
    EXPECT_THROW(validate(LweParams{1, 17, 1, 8}), ParameterError);   // 17 <= 4*8*1+4
    EXPECT_THROW(validate(LweParams{0, 17, 0, 1}), ParameterError);   // no dimension
    EXPECT_THROW(validate(LweParams{2, 17, 0, 0}), ParameterError);   // no rows
    EXPECT_THROW(validate(LweParams{2, 2147483659ull, 0, 1}), ParameterError); // too big
    EXPECT_THROW(LweBackend(LweParams{2, 6, 0, 1}), ParameterError);
}

// Hand-checked single-row example mod 17: secret (3, 5), row a = (1, 2)
// with zero error gives b = <a, s> = 13. Including the row and bit 1:
// c = 13 + 8 = 21 = 4 (mod 17); decryption sees 4 - 13 = 8 = floor(17/2).
TEST(LweBackend, HandWorkedExampleMod17) {
    LweBackend backend(LweParams{2, 17, 0, 1});
    ScriptedSource rng;
    rng.push_words({3, 5, 1, 2}); // secret, then the row; zero error draws nothing
    const KeyPair keys = backend.gen(1, rng);
    EXPECT_TRUE(rng.exhausted());

    ScriptedSource coins1;
    coins1.push_bits("1");
    const auto blob1 = backend.enc(keys.pk, bs("1"), coins1);
    const std::vector<std::uint8_t> expected1{
        0, 0, 0, 0, 0, 0, 0, 1, // one bit
        0, 0, 0, 0, 0, 0, 0, 1, // a[0]
        0, 0, 0, 0, 0, 0, 0, 2, // a[1]
        0, 0, 0, 0, 0, 0, 0, 4, // c
    };
    EXPECT_EQ(blob1, expected1);
    EXPECT_EQ(*backend.dec(keys.sk, blob1), bs("1"));

    ScriptedSource coins0;
    coins0.push_bits("1");
    const auto blob0 = backend.enc(keys.pk, bs("0"), coins0);
    EXPECT_EQ(blob0[31], 13); // c = b with no message offset
    EXPECT_EQ(*backend.dec(keys.sk, blob0), bs("0"));
}

TEST(LweBackend, ZeroErrorPublicKeyIsExact) {
    LweBackend backend(LweParams{2, 17, 0, 1});
    ScriptedSource rng;
    rng.push_words({3, 5, 1, 2});
    const KeyPair keys = backend.gen(1, rng);
    // fields: params, A, b — with e = 0, b[0] must be exactly <a, s> = 13
    const auto& b_field = keys.pk.fields[2];
    ASSERT_EQ(b_field.size(), 8u);
    EXPECT_EQ(b_field[7], 13);
}

// Brute force over every secret, row, error and bit at q = 17: the error
// budget 4*1*1+4 < 17 guarantees rounding never crosses a boundary.
TEST(LweBackend, ExhaustiveSingleRowMod17) {
    LweBackend backend(LweParams{2, 17, 1, 1});
    for (std::uint64_t s0 = 0; s0 < 17; ++s0) {
        for (std::uint64_t s1 = 0; s1 < 17; ++s1) {
            for (std::uint64_t a0 = 0; a0 < 17; ++a0) {
                for (std::uint64_t a1 = 0; a1 < 17; ++a1) {
                    for (std::uint64_t eoff = 0; eoff < 3; ++eoff) {
                        ScriptedSource rng;
                        rng.push_words({s0, s1, a0, a1, eoff});
                        const KeyPair keys = backend.gen(1, rng);
                        for (int bit = 0; bit <= 1; ++bit) {
                            ScriptedSource coins;
                            coins.push_bits("1"); // row included
                            const auto blob =
                                backend.enc(keys.pk, bits_of(bit, 1), coins);
                            const auto got = backend.dec(keys.sk, blob);
                            ASSERT_TRUE(got.has_value());
                            ASSERT_EQ((*got)[0], bit)
                                << "s=(" << s0 << "," << s1 << ") a=(" << a0 << ","
                                << a1 << ") eoff=" << eoff << " bit=" << bit;
                        }
                    }
                }
            }
        }
    }
    // excluded-row coin: the ciphertext is (0, bit*floor(q/2)) and still decrypts
    ScriptedSource rng;
    rng.push_words({3, 5, 1, 2, 1});
    const KeyPair keys = backend.gen(1, rng);
    for (int bit = 0; bit <= 1; ++bit) {
        ScriptedSource coins;
        coins.push_bits("0");
        const auto got = backend.dec(keys.sk, backend.enc(keys.pk, bits_of(bit, 1), coins));
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ((*got)[0], bit);
    }
}

TEST(LweBackend, MalformedBlobsDecryptToNothing) {
    LweBackend backend(LweParams{});
    Mt19937Source rng(59);
    const KeyPair keys = backend.gen(4, rng);
    auto blob = backend.enc(keys.pk, bs("1010"), rng);

    auto truncated = blob;
    truncated.resize(truncated.size() - 8);
    EXPECT_FALSE(backend.dec(keys.sk, truncated).has_value());

    auto extended = blob;
    extended.push_back(1);
    EXPECT_FALSE(backend.dec(keys.sk, extended).has_value());

    auto wrong_count = blob;
    wrong_count[7] ^= 1;
    EXPECT_FALSE(backend.dec(keys.sk, wrong_count).has_value());

    auto oversize_entry = blob; // first entry becomes >= q
    oversize_entry[8] = 0xFF;
    EXPECT_FALSE(backend.dec(keys.sk, oversize_entry).has_value());

    EXPECT_FALSE(backend.dec(keys.sk, std::vector<std::uint8_t>{}).has_value());
    EXPECT_FALSE(backend.dec(keys.sk, std::vector<std::uint8_t>{1, 2, 3}).has_value());
}

TEST(Backends, CompletenessManyRandomPairs) {
    Mt19937Source rng(61);
    {
        InsecureXorBackend backend;
        for (int i = 0; i < 10000; ++i) {
            const KeyPair keys = backend.gen(18, rng);
            const BitString x = rng.take_bits(18);
            const auto got = backend.dec(keys.sk, backend.enc(keys.pk, x, rng));
            ASSERT_TRUE(got.has_value());
            ASSERT_EQ(*got, x);
        }
    }
    {
        LweBackend backend(LweParams{});
        for (int i = 0; i < 10000; ++i) {
            const KeyPair keys = backend.gen(18, rng);
            const BitString x = rng.take_bits(18);
            const auto got = backend.dec(keys.sk, backend.enc(keys.pk, x, rng));
            ASSERT_TRUE(got.has_value());
            ASSERT_EQ(*got, x);
        }
    }
}

TEST(LweBackend, EncryptionIsProbabilistic) {
    LweBackend backend(LweParams{});
    Mt19937Source rng(67);
    const KeyPair keys = backend.gen(18, rng);
    const BitString x = rng.take_bits(18);
    std::set<std::vector<std::uint8_t>> blobs;
    for (int i = 0; i < 1000; ++i) {
        const auto a = backend.enc(keys.pk, x, rng);
        const auto b = backend.enc(keys.pk, x, rng);
        EXPECT_NE(a, b);
        blobs.insert(a);
        blobs.insert(b);
    }
    EXPECT_EQ(blobs.size(), 2000u);
}

TEST(Backends, KeyGenerationIsSeedDeterministic) {
    for (int pass = 0; pass < 2; ++pass) {
        Mt19937Source rng1(71), rng2(71);
        if (pass == 0) {
            InsecureXorBackend backend;
            EXPECT_EQ(serialize_key(backend.gen(18, rng1).pk),
                      serialize_key(backend.gen(18, rng2).pk));
        } else {
            LweBackend backend(LweParams{});
            const KeyPair a = backend.gen(18, rng1);
            const KeyPair b = backend.gen(18, rng2);
            EXPECT_EQ(serialize_key(a.pk), serialize_key(b.pk));
            EXPECT_EQ(serialize_key(a.sk), serialize_key(b.sk));
        }
    }
}

TEST(KeyFormat, SerializationRoundTrip) {
    Mt19937Source rng(73);
    LweBackend lwe(LweParams{});
    InsecureXorBackend xorb;
    for (const PkeBackend* backend : {static_cast<const PkeBackend*>(&lwe),
                                      static_cast<const PkeBackend*>(&xorb)}) {
        const KeyPair keys = backend->gen(18, rng);
        const auto pk_bytes = serialize_key(keys.pk);
        const auto sk_bytes = serialize_key(keys.sk);
        EXPECT_EQ(static_cast<const Key&>(parse_public_key(pk_bytes)),
                  static_cast<const Key&>(keys.pk));
        EXPECT_EQ(static_cast<const Key&>(parse_secret_key(sk_bytes)),
                  static_cast<const Key&>(keys.sk));
        // role confusion is a format error
        EXPECT_THROW(parse_public_key(sk_bytes), FormatError);
        EXPECT_THROW(parse_secret_key(pk_bytes), FormatError);
        EXPECT_NE(key_fingerprint(keys.pk), key_fingerprint(keys.sk));
    }
}

TEST(KeyFormat, MalformedInputsRejected) {
    Mt19937Source rng(79);
    InsecureXorBackend backend;
    const auto good = serialize_key(backend.gen(8, rng).pk);

    auto bad_magic = good;
    bad_magic[0] = 'X';
    EXPECT_THROW(parse_key(bad_magic), FormatError);

    auto bad_version = good;
    bad_version[5] = 0x7F;
    EXPECT_THROW(parse_key(bad_version), FormatError);

    auto bad_role = good;
    bad_role[14] = 9; // the role field payload
    EXPECT_THROW(parse_key(bad_role), FormatError);

    auto truncated = good;
    truncated.resize(truncated.size() - 3);
    EXPECT_THROW(parse_key(truncated), FormatError);

    auto trailing = good;
    trailing.push_back(0); // a stray byte cannot form another framed field
    EXPECT_THROW(parse_key(trailing), FormatError);

    EXPECT_THROW(parse_key(std::vector<std::uint8_t>{}), FormatError);
}

TEST(Backends, SampledBlobsAreWellFormed) {
    Mt19937Source rng(83);
    {
        InsecureXorBackend backend;
        const KeyPair keys = backend.gen(18, rng);
        const auto blob = backend.sample_ciphertext_blob(keys.pk, 18, rng);
        const auto got = backend.dec(keys.sk, blob);
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ(got->size(), 18u);
    }
    {
        LweBackend backend(LweParams{});
        const KeyPair keys = backend.gen(18, rng);
        const auto blob = backend.sample_ciphertext_blob(keys.pk, 18, rng);
        const auto got = backend.dec(keys.sk, blob);
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ(got->size(), 18u);
    }
}

TEST(Backends, Identity) {
    InsecureXorBackend xorb;
    LweBackend lwe(LweParams{});
    EXPECT_EQ(xorb.id(), backend_id_insecure_xor);
    EXPECT_EQ(lwe.id(), backend_id_lwe);
    EXPECT_EQ(xorb.name(), "insecure-xor");
    EXPECT_EQ(lwe.name(), "lwe");
}

} // namespace
