#include "apspgemm/profile_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace apspgemm {

namespace {

struct Binding {
    ProfileKey key;
    Cycles CostProfile::*cycles = nullptr;
    unsigned CostProfile::*bits = nullptr;
    double EnergyCoefficients::*energy = nullptr;
    double CostProfile::*real = nullptr;
};

const std::vector<Binding>& bindings() {
    static const std::vector<Binding> b = {
        {{"t_mult_float", "cycles", "associative float multiply, per invocation"}, &CostProfile::t_mult_float},
        {{"t_mult_binary", "cycles", "associative Boolean multiply, per invocation"}, &CostProfile::t_mult_binary},
        {{"t_red", "cycles", "reduction tree drain, per processed row"}, &CostProfile::t_red},
        {{"wordlength_float", "bits", "bit-serial read per accumulation pass, float data"}, nullptr,
         &CostProfile::wordlength_float},
        {{"wordlength_binary", "bits", "bit-serial read per accumulation pass, binary data"}, nullptr,
         &CostProfile::wordlength_binary},
        {{"t_compare", "cycles", "parallel compare"}, &CostProfile::t_compare},
        {{"t_tagged_write", "cycles", "parallel write to tagged words"}, &CostProfile::t_tagged_write},
        {{"pipeline_fill", "cycles", "host pipeline fill, per serial loop entry"}, &CostProfile::pipeline_fill},
        {{"t_row_reset", "cycles", "clear of alignment fields, per row"}, &CostProfile::t_row_reset},
        {{"cpu_mult_pass", "cycles", "host read-multiply-write pass"}, &CostProfile::cpu_mult_pass},
        {{"cpu_acc_pass", "cycles", "host read-accumulate pass"}, &CostProfile::cpu_acc_pass},
        {{"cpu_lookup", "cycles", "baseline: locate B row, per A nonzero"}, &CostProfile::cpu_lookup},
        {{"cpu_mem", "cycles", "baseline: memory access, per matched B element"}, &CostProfile::cpu_mem},
        {{"cpu_alu_op", "cycles", "baseline: one FP multiply or add"}, &CostProfile::cpu_alu_op},
        {{"energy_match_pj", "pJ", "per matching word in a compare"}, nullptr, nullptr, &EnergyCoefficients::match_pj},
        {{"energy_mismatch_pj", "pJ", "per mismatching word in a compare"}, nullptr, nullptr,
         &EnergyCoefficients::mismatch_pj},
        {{"energy_write_pj", "pJ", "per written word"}, nullptr, nullptr, &EnergyCoefficients::write_pj},
        {{"energy_miswrite_pj", "pJ", "per untagged word in a write"}, nullptr, nullptr,
         &EnergyCoefficients::miswrite_pj},
        {{"energy_reduction_pj", "pJ", "per word entering the reduction tree"}, nullptr, nullptr,
         &EnergyCoefficients::reduction_pj},
        {{"cpu_frequency_hz", "Hz", "clock used to convert cycles to seconds"}, nullptr, nullptr, nullptr,
         &CostProfile::cpu_frequency_hz},
    };
    return b;
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename T>
T number(std::string_view tok, std::size_t line, std::string_view key) {
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ProfileError("profile line " + std::to_string(line) + ": bad value '" + std::string(tok) + "' for " +
                           std::string(key));
    }
    return v;
}

}  // namespace

const std::vector<ProfileKey>& profile_keys() {
    static const std::vector<ProfileKey> keys = [] {
        std::vector<ProfileKey> k;
        for (const auto& b : bindings()) k.push_back(b.key);
        return k;
    }();
    return keys;
}

CostProfile parse_profile(std::istream& in) {
    CostProfile p;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ProfileError("profile line " + std::to_string(line) + ": expected 'key = value'");
        }
        const auto key = trim(s.substr(0, eq));
        const auto val = trim(s.substr(eq + 1));
        const Binding* hit = nullptr;
        for (const auto& b : bindings()) {
            if (b.key.name == key) hit = &b;
        }
        if (!hit) {
            throw ProfileError("profile line " + std::to_string(line) + ": unknown key '" + std::string(key) + "'");
        }
        if (hit->cycles) {
            p.*(hit->cycles) = number<Cycles>(val, line, key);
        } else if (hit->bits) {
            p.*(hit->bits) = number<unsigned>(val, line, key);
        } else if (hit->energy) {
            p.energy.*(hit->energy) = number<double>(val, line, key);
        } else {
            p.*(hit->real) = number<double>(val, line, key);
        }
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ProfileError(std::string("profile: ") + e.what());
    }
    return p;
}

CostProfile parse_profile(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_profile(in);
}

CostProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProfileError("cannot open profile '" + path + "'");
    return parse_profile(in);
}

std::string format_profile(const CostProfile& p) {
    std::ostringstream out;
    for (const auto& b : bindings()) {
        out << b.key.name << " = ";
        if (b.cycles) out << p.*(b.cycles);
        else if (b.bits) out << p.*(b.bits);
        else if (b.energy) out << p.energy.*(b.energy);
        else out << p.*(b.real);
        out << "  # " << b.key.unit << ", " << b.key.description << '\n';
    }
    return out.str();
}

}  // namespace apspgemm
