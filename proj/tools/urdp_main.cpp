#include <urdp/urdp.hpp>
#include <urdp/game_report.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;  // parameter and format problems
constexpr int exit_reject = 3; // the decryptor said no
constexpr int exit_io = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path + " for reading");
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    if (in.bad())
        throw IoError("read failed on " + path);
    return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    if (!bytes.empty())
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw IoError("write failed on " + path);
}

urdp::Mt19937Source make_rng(const std::optional<std::uint64_t>& seed) {
    if (seed)
        return urdp::Mt19937Source(*seed);
    std::random_device rd;
    return urdp::Mt19937Source((std::uint64_t{rd()} << 32) ^ rd());
}

struct SchemeOptions {
    urdp::BackendKind backend = urdp::BackendKind::lwe;
    std::size_t k = 18;
    std::size_t s_max = 16;
    urdp::LweParams lwe;

    urdp::SchemeConfig to_config() const {
        urdp::SchemeConfig cfg;
        cfg.backend = backend;
        cfg.k = k;
        cfg.s_max = s_max;
        cfg.lwe = lwe;
        return cfg;
    }
};

void add_backend_flag(CLI::App* cmd, SchemeOptions& o) {
    static const std::map<std::string, urdp::BackendKind> backends{
        {"lwe", urdp::BackendKind::lwe},
        {"xor", urdp::BackendKind::insecure_xor},
    };
    cmd->add_option("--backend", o.backend, "pke backend: lwe or xor (xor is a test stub)")
        ->transform(CLI::CheckedTransformer(backends, CLI::ignore_case));
    cmd->add_option("--lwe-dim", o.lwe.dimension, "LWE secret dimension");
    cmd->add_option("--lwe-modulus", o.lwe.modulus, "LWE modulus (odd prime)");
    cmd->add_option("--lwe-error-bound", o.lwe.error_bound, "LWE error magnitude bound");
    cmd->add_option("--lwe-samples", o.lwe.samples, "LWE public-key rows");
}

void add_shape_flags(CLI::App* cmd, SchemeOptions& o) {
    cmd->add_option("--k", o.k, "selector length in bits");
    cmd->add_option("--s-max", o.s_max, "largest filler block size");
}

CLI::Option* add_seed_flag(CLI::App* cmd, std::optional<std::uint64_t>& seed) {
    return cmd->add_option("--seed", seed, "rng seed; omitted means a random run")
        ->envname("URDP_SEED");
}

urdp::BackendKind backend_of_key(const urdp::Key& key) {
    switch (key.backend_id) {
    case urdp::backend_id_lwe: return urdp::BackendKind::lwe;
    case urdp::backend_id_insecure_xor: return urdp::BackendKind::insecure_xor;
    default: throw urdp::FormatError("key file names an unknown backend");
    }
}

struct KeygenOptions {
    SchemeOptions scheme;
    std::optional<std::uint64_t> seed;
    std::string out_pk = "pk.bin";
    std::string out_sk = "sk.bin";
};

int run_keygen(const KeygenOptions& o) {
    const urdp::Urdp scheme(o.scheme.to_config());
    auto rng = make_rng(o.seed);
    const urdp::KeyPair keys = scheme.keygen(rng);
    write_file(o.out_pk, urdp::serialize_key(keys.pk));
    write_file(o.out_sk, urdp::serialize_key(keys.sk));
    std::cout << "pk " << urdp::key_fingerprint(keys.pk) << " " << o.out_pk << "\n";
    std::cout << "sk " << urdp::key_fingerprint(keys.sk) << " " << o.out_sk << "\n";
    return exit_ok;
}

struct EncryptOptions {
    SchemeOptions scheme;
    std::optional<std::uint64_t> seed;
    std::string pk_path;
    std::string in_path;
    std::string out_path;
};

int run_encrypt(const EncryptOptions& o) {
    const urdp::PublicKey pk = urdp::parse_public_key(read_file(o.pk_path));
    SchemeOptions shape = o.scheme;
    shape.backend = backend_of_key(pk);
    const urdp::Urdp scheme(shape.to_config());

    const std::vector<std::uint8_t> input = read_file(o.in_path);
    const urdp::BitString m = urdp::BitString::from_bytes_msb(input);
    auto rng = make_rng(o.seed);
    const urdp::UrdpCiphertext ct = scheme.encrypt(pk, m, rng);
    write_file(o.out_path, urdp::serialize_ciphertext(ct));
    return exit_ok;
}

struct DecryptOptions {
    SchemeOptions scheme;
    std::string sk_path;
    std::string in_path;
    std::string out_path;
};

int run_decrypt(const DecryptOptions& o) {
    const urdp::SecretKey sk = urdp::parse_secret_key(read_file(o.sk_path));
    SchemeOptions shape = o.scheme;
    shape.backend = backend_of_key(sk);
    const urdp::Urdp scheme(shape.to_config());

    const urdp::UrdpCiphertext ct = urdp::parse_ciphertext(read_file(o.in_path));
    const urdp::DecryptResult res = scheme.decrypt(sk, ct);
    if (!res.ok()) {
        std::cout << "REJECT\n";
        return exit_reject;
    }
    write_file(o.out_path, res.plaintext->to_bytes_msb());
    return exit_ok;
}

struct GameOptions {
    SchemeOptions scheme;
    std::optional<std::uint64_t> seed;
    std::string scenario;
    std::size_t trials = 0;
    std::string adversary = "coinflip";
    std::size_t message_bits = 256;
    std::string report_path; // empty means stdout
};

int run_game(const GameOptions& o) {
    const urdp::Urdp scheme(o.scheme.to_config());
    auto rng = make_rng(o.seed);

    std::ofstream report_file;
    std::ostream* report = &std::cout;
    if (!o.report_path.empty()) {
        report_file.open(o.report_path, std::ios::trunc);
        if (!report_file)
            throw IoError("cannot open " + o.report_path + " for writing");
        report = &report_file;
    }

    if (o.scenario == "cca2") {
        std::unique_ptr<urdp::Adversary> adv;
        if (o.adversary == "coinflip")
            adv = std::make_unique<urdp::CoinFlipAdversary>(o.message_bits);
        else
            adv = std::make_unique<urdp::AlwaysZeroAdversary>(o.message_bits);
        const urdp::AdvantageEstimate est =
            urdp::estimate_advantage(scheme, *adv, o.trials, rng);
        urdp::write_advantage_summary(*report, o.adversary, est);
        std::cerr << "cca2 " << o.adversary << ": trials=" << est.trials
                  << " wins=" << est.wins << " advantage=" << est.advantage
                  << " half_width_95=" << est.half_width
                  << " refusals=" << est.refusals << "\n";
    } else {
        urdp::TamperVariant variant = urdp::TamperVariant::game1;
        if (o.scenario == "game2")
            variant = urdp::TamperVariant::game2;
        else if (o.scenario == "game3")
            variant = urdp::TamperVariant::game3;
        urdp::TamperOptions topts;
        topts.message_bits = o.message_bits;
        topts.sink = [report](const urdp::TamperRecord& rec) {
            urdp::write_tamper_record(*report, rec);
        };
        const urdp::TamperStats stats =
            urdp::scenario_tamper(scheme, variant, o.trials, rng, topts);
        urdp::write_tamper_summary(*report, variant, stats);
        std::cerr << to_string(variant) << ": trials=" << stats.trials()
                  << " rejected=" << stats.rejected
                  << " wrong_message=" << stats.wrong_message
                  << " recovered_mb=" << stats.recovered_mb << "\n";
    }

    if (report_file.is_open()) {
        report_file.flush();
        if (!report_file)
            throw IoError("write failed on " + o.report_path);
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomized padding encryption toolkit"};
    app.require_subcommand(1);

    KeygenOptions keygen_opts;
    CLI::App* keygen = app.add_subcommand("keygen", "generate a key pair");
    add_backend_flag(keygen, keygen_opts.scheme);
    add_shape_flags(keygen, keygen_opts.scheme);
    add_seed_flag(keygen, keygen_opts.seed);
    keygen->add_option("--out-pk", keygen_opts.out_pk, "public key output path");
    keygen->add_option("--out-sk", keygen_opts.out_sk, "secret key output path");

    EncryptOptions encrypt_opts;
    CLI::App* encrypt = app.add_subcommand("encrypt", "encrypt a file");
    add_shape_flags(encrypt, encrypt_opts.scheme);
    add_seed_flag(encrypt, encrypt_opts.seed);
    encrypt->add_option("--pk", encrypt_opts.pk_path, "public key file")->required();
    encrypt->add_option("--in", encrypt_opts.in_path, "plaintext input file")->required();
    encrypt->add_option("--out", encrypt_opts.out_path, "ciphertext output file")->required();

    DecryptOptions decrypt_opts;
    CLI::App* decrypt = app.add_subcommand("decrypt", "decrypt a file");
    add_shape_flags(decrypt, decrypt_opts.scheme);
    decrypt->add_option("--sk", decrypt_opts.sk_path, "secret key file")->required();
    decrypt->add_option("--in", decrypt_opts.in_path, "ciphertext input file")->required();
    decrypt->add_option("--out", decrypt_opts.out_path, "plaintext output file")->required();

    GameOptions game_opts;
    CLI::App* game = app.add_subcommand("game", "run a security experiment");
    add_backend_flag(game, game_opts.scheme);
    add_shape_flags(game, game_opts.scheme);
    add_seed_flag(game, game_opts.seed);
    game->add_option("--scenario", game_opts.scenario, "cca2, game1, game2 or game3")
        ->required()
        ->check(CLI::IsMember({"cca2", "game1", "game2", "game3"}));
    game->add_option("--trials", game_opts.trials, "number of trials")->required();
    game->add_option("--adversary", game_opts.adversary, "cca2 adversary")
        ->check(CLI::IsMember({"coinflip", "alwayszero"}));
    game->add_option("--message-bits", game_opts.message_bits, "challenge message length");
    game->add_option("--report", game_opts.report_path,
                     "write the line-delimited report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (keygen->parsed())
            return run_keygen(keygen_opts);
        if (encrypt->parsed())
            return run_encrypt(encrypt_opts);
        if (decrypt->parsed())
            return run_decrypt(decrypt_opts);
        return run_game(game_opts);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const urdp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
