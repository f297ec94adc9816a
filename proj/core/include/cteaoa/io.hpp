// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cteaoa/config.hpp"
#include "cteaoa/pipeline.hpp"
#include "cteaoa/sampling.hpp"

namespace cteaoa {

// Packet dump (CSV):
//
//   # cteaoa-dump v1
//   # geometry.antenna_count=8
//   # ...                       every resolved config key, then dump.* keys
//   counter,transmitter,true_aoa,samples
//   0,1,30,<reference samples...>,<slot 0 samples...>,...
//
// Each record carries reference_samples + switched_slots * samples_per_slot
// integers as declared by the manifest's sampling keys. true_aoa is empty
// when unknown.
inline constexpr const char* kDumpMagic = "# cteaoa-dump v1";
inline constexpr const char* kDumpColumns = "counter,transmitter,true_aoa,samples";

struct PacketDump {
    KeyValues manifest;
    std::vector<PacketSamples> packets;

    /// Config reconstructed from the manifest; throws FormatError when the
    /// manifest does not describe a valid configuration.
    RunConfig config() const;
    std::optional<std::string> manifest_value(const std::string& key) const;
};

struct ReadOptions {
    bool strict = true;  // false: skip malformed records with a diagnostic
};

struct DumpReadResult {
    PacketDump dump;
    std::vector<std::string> diagnostics;  // "line N: ..." for every skipped record
};

/// Manifest for a dump: the resolved config followed by `extra` keys.
KeyValues dump_manifest(const RunConfig& cfg, const KeyValues& extra = {});

void write_dump(std::ostream& out, const PacketDump& dump);
DumpReadResult read_dump(std::istream& in, const ReadOptions& opts = {});

// Profile table (CSV): optional "# key=value" lines, then
//
//   d,s1,s2,...,sK,mean
//   0,12.345678,...
//
// one row per difference index, six decimal places.
struct ProfileTable {
    KeyValues manifest;
    std::vector<long> index;
    std::vector<std::string> names;            // column names after d
    std::vector<std::vector<double>> columns;  // columns[c][row]

    std::optional<std::size_t> column(const std::string& name) const;
};

/// Columns s1..sK from `profiles`, plus "mean" when given. Throws
/// ConfigError on unequal lengths.
ProfileTable make_profile_table(std::span<const DiffProfile> profiles,
                                const DiffProfile* mean = nullptr, KeyValues manifest = {});

void write_profile_table(std::ostream& out, const ProfileTable& table);
ProfileTable read_profile_table(std::istream& in);

/// Profiles held in the s* columns (and the mean column, if present).
struct TableProfiles {
    std::vector<DiffProfile> packets;
    std::optional<DiffProfile> mean;
};
TableProfiles profiles_from_table(const ProfileTable& table, ProfileKind kind, int antenna_count);

/// Fixed six-decimal rendering used by every table, with -0 printed as 0.
std::string format_fixed6(double v);

}  // namespace cteaoa
