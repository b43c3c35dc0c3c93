#pragma once

#include <urdp/game.hpp>

#include <json.hpp>

#include <ostream>
#include <string>

namespace urdp {

// Line-delimited JSON records for scenario runs: one record per trial,
// then a summary record. Consumers split on newlines and dispatch on the
// "record" field.

inline void write_tamper_record(std::ostream& out, const TamperRecord& rec) {
    nlohmann::json j{
        {"record", "trial"},
        {"variant", to_string(rec.variant)},
        {"trial", rec.trial},
        {"outcome", to_string(rec.outcome)},
        {"reason", to_string(rec.reason)},
    };
    out << j.dump() << '\n';
}

inline void write_tamper_summary(std::ostream& out, TamperVariant variant,
                                 const TamperStats& stats) {
    nlohmann::json j{
        {"record", "summary"},
        {"variant", to_string(variant)},
        {"trials", stats.trials()},
        {"rejected", stats.rejected},
        {"wrong_message", stats.wrong_message},
        {"recovered_mb", stats.recovered_mb},
    };
    out << j.dump() << '\n';
}

inline void write_advantage_summary(std::ostream& out, const std::string& adversary,
                                    const AdvantageEstimate& est) {
    nlohmann::json j{
        {"record", "summary"},
        {"scenario", "cca2"},
        {"adversary", adversary},
        {"trials", est.trials},
        {"wins", est.wins},
        {"refusals", est.refusals},
        {"advantage", est.advantage},
        {"half_width_95", est.half_width},
    };
    out << j.dump() << '\n';
}

} // namespace urdp
