// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/io.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <ostream>
#include <sstream>

#include "cteaoa/errors.hpp"

namespace cteaoa {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool parse_manifest_line(const std::string& line, KeyValues& kv) {
    if (line.rfind("# ", 0) != 0) {
        return false;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
        return false;
    }
    kv.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
    return true;
}

}  // namespace

std::string format_fixed6(double v) {
    std::string s = fmt::format("{:.6f}", v);
    if (s == "-0.000000") {
        s = "0.000000";
    }
    return s;
}

std::optional<std::string> PacketDump::manifest_value(const std::string& key) const {
    for (const auto& [k, v] : manifest) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

RunConfig PacketDump::config() const {
    try {
        return apply_key_values(RunConfig{}, manifest, true);
    } catch (const ConfigError& e) {
        throw FormatError(std::string("dump manifest: ") + e.what());
    }
}

KeyValues dump_manifest(const RunConfig& cfg, const KeyValues& extra) {
    KeyValues kv = to_key_values(cfg);
    kv.emplace_back("config_hash", config_hash(kv));
    kv.insert(kv.end(), extra.begin(), extra.end());
    return kv;
}

void write_dump(std::ostream& out, const PacketDump& dump) {
    out << kDumpMagic << '\n';
    for (const auto& [k, v] : dump.manifest) {
        out << "# " << k << '=' << v << '\n';
    }
    out << kDumpColumns << '\n';
    for (const auto& pkt : dump.packets) {
        out << pkt.meta.counter << ',' << pkt.meta.transmitter << ',';
        if (pkt.meta.true_aoa_deg) {
            out << fmt::format("{}", *pkt.meta.true_aoa_deg);
        }
        for (auto v : pkt.flatten()) {
            out << ',' << v;
        }
        out << '\n';
    }
}

DumpReadResult read_dump(std::istream& in, const ReadOptions& opts) {
    DumpReadResult result;
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) {
        throw FormatError("dump: empty input");
    }
    ++lineno;
    strip_cr(line);
    if (line != kDumpMagic) {
        throw FormatError("dump: line 1: unknown version tag '" + line + "'");
    }

    bool saw_columns = false;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (parse_manifest_line(line, result.dump.manifest)) {
            continue;
        }
        if (line != kDumpColumns) {
            throw FormatError(fmt::format("dump: line {}: expected column header '{}'", lineno,
                                          kDumpColumns));
        }
        saw_columns = true;
        break;
    }
    if (!saw_columns) {
        throw FormatError("dump: missing column header");
    }

    const RunConfig cfg = result.dump.config();
    const auto& s = cfg.sampling;
    const int nref = s.reference_samples();
    const int sps = s.samples_per_slot();
    const auto expected = static_cast<std::size_t>(s.samples_per_packet());
    const auto sequence = circular_antenna_sequence(cfg.geometry.antenna_count(), s.switched_slots);

    auto reject = [&](const std::string& msg) {
        const auto diag = fmt::format("line {}: {}", lineno, msg);
        if (opts.strict) {
            throw FormatError("dump: " + diag);
        }
        result.diagnostics.push_back(diag);
    };

    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) {
            reject("empty record");
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() < 3 || fields.size() - 3 != expected) {
            reject(fmt::format("record has {} samples, manifest declares {}",
                               fields.size() < 3 ? 0 : fields.size() - 3, expected));
            continue;
        }
        PacketSamples pkt;
        if (!parse_number(fields[0], pkt.meta.counter)) {
            reject("bad packet counter '" + fields[0] + "'");
            continue;
        }
        pkt.meta.transmitter = fields[1];
        if (!fields[2].empty()) {
            double aoa = 0.0;
            if (!parse_number(fields[2], aoa)) {
                reject("bad true_aoa '" + fields[2] + "'");
                continue;
            }
            pkt.meta.true_aoa_deg = aoa;
        }
        std::vector<std::int16_t> samples;
        samples.reserve(expected);
        bool ok = true;
        for (std::size_t i = 3; i < fields.size(); ++i) {
            int v = 0;
            if (!parse_number(fields[i], v)) {
                reject(fmt::format("sample {} is not an integer: '{}'", i - 3, fields[i]));
                ok = false;
                break;
            }
            if (v > s.fixed_point_halfscale || v < -s.fixed_point_halfscale) {
                reject(fmt::format("sample {} = {} exceeds fixed-point bound +/-{}", i - 3, v,
                                   s.fixed_point_halfscale));
                ok = false;
                break;
            }
            samples.push_back(static_cast<std::int16_t>(v));
        }
        if (!ok) {
            continue;
        }
        pkt.reference.assign(samples.begin(), samples.begin() + nref);
        for (int slot = 0; slot < s.switched_slots; ++slot) {
            const auto first = samples.begin() + nref + slot * sps;
            pkt.slots.emplace_back(first, first + sps);
        }
        pkt.antenna_sequence = sequence;
        result.dump.packets.push_back(std::move(pkt));
    }
    return result;
}

std::optional<std::size_t> ProfileTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

ProfileTable make_profile_table(std::span<const DiffProfile> profiles, const DiffProfile* mean,
                                KeyValues manifest) {
    ProfileTable t;
    t.manifest = std::move(manifest);
    std::size_t rows = 0;
    if (!profiles.empty()) {
        rows = profiles.front().size();
    } else if (mean != nullptr) {
        rows = mean->size();
    }
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        if (profiles[k].size() != rows) {
            throw ConfigError("profile table: profiles differ in length");
        }
        t.names.push_back(fmt::format("s{}", k + 1));
        t.columns.push_back(profiles[k].values);
    }
    if (mean != nullptr) {
        if (mean->size() != rows) {
            throw ConfigError("profile table: mean length differs from profiles");
        }
        t.names.emplace_back("mean");
        t.columns.push_back(mean->values);
    }
    if (!t.columns.empty()) {
        for (std::size_t r = 0; r < rows; ++r) {
            t.index.push_back(static_cast<long>(r));
        }
    }
    return t;
}

void write_profile_table(std::ostream& out, const ProfileTable& table) {
    for (const auto& [k, v] : table.manifest) {
        out << "# " << k << '=' << v << '\n';
    }
    out << 'd';
    for (const auto& n : table.names) {
        out << ',' << n;
    }
    out << '\n';
    for (std::size_t r = 0; r < table.index.size(); ++r) {
        out << table.index[r];
        for (const auto& col : table.columns) {
            out << ',' << format_fixed6(col[r]);
        }
        out << '\n';
    }
}

ProfileTable read_profile_table(std::istream& in) {
    ProfileTable t;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (!header) {
            if (parse_manifest_line(line, t.manifest)) {
                continue;
            }
            const auto names = split_csv(line);
            if (names.empty() || names.front() != "d") {
                throw FormatError(fmt::format("profile table: line {}: header must start with 'd'",
                                              lineno));
            }
            t.names.assign(names.begin() + 1, names.end());
            t.columns.resize(t.names.size());
            header = true;
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != t.names.size() + 1) {
            throw FormatError(fmt::format("profile table: line {}: {} fields, header has {}", lineno,
                                          fields.size(), t.names.size() + 1));
        }
        long d = 0;
        if (!parse_number(fields[0], d)) {
            throw FormatError(fmt::format("profile table: line {}: bad index '{}'", lineno, fields[0]));
        }
        t.index.push_back(d);
        for (std::size_t c = 0; c < t.names.size(); ++c) {
            double v = 0.0;
            if (!parse_number(fields[c + 1], v) || !std::isfinite(v)) {
                throw FormatError(fmt::format("profile table: line {}: column {} is not a number: '{}'",
                                              lineno, t.names[c], fields[c + 1]));
            }
            t.columns[c].push_back(v);
        }
    }
    if (!header) {
        throw FormatError("profile table: missing header");
    }
    return t;
}

TableProfiles profiles_from_table(const ProfileTable& table, ProfileKind kind, int antenna_count) {
    TableProfiles out;
    std::vector<int> pairs;
    for (std::size_t r = 0; r < table.index.size(); ++r) {
        pairs.push_back(static_cast<int>(r % static_cast<std::size_t>(antenna_count)) + 1);
    }
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        DiffProfile p;
        p.kind = kind;
        p.values = table.columns[c];
        p.pairs = pairs;
        p.provenance = {table.names[c]};
        if (table.names[c] == "mean") {
            out.mean = std::move(p);
        } else {
            out.packets.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace cteaoa
