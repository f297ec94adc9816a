// SPDX-License-Identifier: Apache-2.0

#include "cteaoa/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "cteaoa/errors.hpp"

namespace cteaoa {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(fmt::format("config: {} expects a number, got '{}'", key, v));
    }
    return out;
}

long long to_integer(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(fmt::format("config: {} expects an integer, got '{}'", key, v));
    }
    return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(fmt::format("config: {} expects an unsigned integer, got '{}'", key, v));
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "on" || t == "yes") {
        return true;
    }
    if (t == "false" || t == "0" || t == "off" || t == "no") {
        return false;
    }
    throw ConfigError(fmt::format("config: {} expects a boolean, got '{}'", key, v));
}

Point2 to_point(const std::string& key, const std::string& v) {
    const auto parts = split_list(v);
    if (parts.size() != 2) {
        throw ConfigError(fmt::format("config: {} expects 'x,y', got '{}'", key, v));
    }
    return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::string join_ints(const std::vector<int>& v) {
    return fmt::format("{}", fmt::join(v, ","));
}

struct Pending {
    int antenna_count;
    double radius_mm;
    double offset_deg;
    std::vector<Beacon> beacons;
    std::optional<AreaBounds> area;
    bool beacons_given = false;
};

bool apply_one(RunConfig& cfg, Pending& pending, const std::string& key, const std::string& value) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        return false;
    }
    const std::string section = key.substr(0, dot);
    const std::string name = key.substr(dot + 1);

    if (section == "geometry") {
        if (name == "antenna_count") {
            pending.antenna_count = static_cast<int>(to_integer(key, value));
        } else if (name == "radius_mm") {
            pending.radius_mm = to_double(key, value);
        } else if (name == "orientation_offset_deg") {
            pending.offset_deg = to_double(key, value);
        } else {
            return false;
        }
    } else if (section == "carrier") {
        if (name == "frequency_hz") {
            cfg.carrier.frequency_hz = to_double(key, value);
        } else if (name == "propagation_speed") {
            cfg.carrier.propagation_speed = to_double(key, value);
        } else {
            return false;
        }
    } else if (section == "sampling") {
        auto& s = cfg.sampling;
        if (name == "cte_length_us") {
            s.cte_length_us = to_double(key, value);
        } else if (name == "guard_us") {
            s.guard_us = to_double(key, value);
        } else if (name == "reference_us") {
            s.reference_us = to_double(key, value);
        } else if (name == "slot_us") {
            s.slot_us = to_double(key, value);
        } else if (name == "sample_period_ns") {
            s.sample_period_ns = to_double(key, value);
        } else if (name == "tone_rate_deg_per_us") {
            s.tone_rate_deg_per_us = to_double(key, value);
        } else if (name == "fixed_point_halfscale") {
            s.fixed_point_halfscale = static_cast<int>(to_integer(key, value));
        } else if (name == "retained_indices") {
            s.retained_indices.clear();
            for (const auto& item : split_list(value)) {
                s.retained_indices.push_back(static_cast<int>(to_integer(key, item)));
            }
        } else if (name == "rotations") {
            s.rotations = static_cast<int>(to_integer(key, value));
        } else if (name == "switched_slots") {
            s.switched_slots = static_cast<int>(to_integer(key, value));
        } else {
            return false;
        }
    } else if (section == "noise") {
        if (name == "sigma_deg") {
            cfg.noise.sigma_deg = to_double(key, value);
        } else if (name == "transient_corruption") {
            cfg.noise.transient_corruption = to_bool(key, value);
        } else if (name == "corruption_deg") {
            cfg.noise.corruption_deg = to_double(key, value);
        } else if (name == "seed") {
            cfg.noise.seed = to_unsigned(key, value);
        } else {
            return false;
        }
    } else if (section == "estimator") {
        if (name == "method") {
            cfg.estimator.method = parse_method(trim(value));
        } else if (name == "strategy") {
            cfg.estimator.strategy = parse_strategy(trim(value));
        } else if (name == "grid_step_deg") {
            cfg.estimator.grid_step_deg = to_double(key, value);
        } else if (name == "mean") {
            const auto t = trim(value);
            if (t == "circular") {
                cfg.estimator.mean = MeanKind::circular;
            } else if (t == "arithmetic") {
                cfg.estimator.mean = MeanKind::arithmetic;
            } else {
                throw ConfigError("config: estimator.mean must be circular or arithmetic");
            }
        } else {
            return false;
        }
    } else if (section == "locator") {
        if (name == "heading_deg") {
            cfg.locator.heading_deg = to_double(key, value);
        } else if (name == "grid_step_m") {
            cfg.locator.grid_step_m = to_double(key, value);
        } else if (name == "convention") {
            const auto t = trim(value);
            if (t == "propagation_cw") {
                cfg.locator.convention = BearingConvention::propagation_clockwise;
            } else if (t == "bearing_ccw") {
                cfg.locator.convention = BearingConvention::bearing_ccw;
            } else {
                throw ConfigError("config: locator.convention must be propagation_cw or bearing_ccw");
            }
        } else if (name == "area") {
            const auto parts = split_list(value);
            if (parts.size() != 4) {
                throw ConfigError("config: locator.area expects 'xmin,ymin,xmax,ymax'");
            }
            pending.area = AreaBounds{{to_double(key, parts[0]), to_double(key, parts[1])},
                                      {to_double(key, parts[2]), to_double(key, parts[3])}};
        } else {
            return false;
        }
    } else if (section == "beacons") {
        pending.beacons.push_back({name, to_point(key, value)});
        pending.beacons_given = true;
    } else {
        return false;
    }
    return true;
}

}  // namespace

void RunConfig::validate() const {
    cteaoa::validate(geometry, carrier);
    sampling.validate(geometry);
    if (!(noise.sigma_deg >= 0.0)) {
        throw ConfigError("noise: sigma must be >= 0");
    }
    if (!(estimator.grid_step_deg > 0.0)) {
        throw ConfigError("estimator: grid_step_deg must be > 0");
    }
    if (!(locator.grid_step_m > 0.0)) {
        throw ConfigError("locator: grid_step_m must be > 0");
    }
}

RunConfig apply_key_values(RunConfig base, const KeyValues& kv, bool ignore_unknown) {
    Pending pending{base.geometry.antenna_count(), base.geometry.radius_mm(),
                    base.geometry.orientation_offset_deg(), {}, std::nullopt, false};
    for (const auto& [key, value] : kv) {
        if (!apply_one(base, pending, key, value) && !ignore_unknown) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    base.geometry = ArrayGeometry(pending.antenna_count, pending.radius_mm, pending.offset_deg);
    if (pending.beacons_given) {
        base.beacons = BeaconMap(pending.beacons, pending.area);
    } else if (pending.area) {
        base.beacons = BeaconMap(base.beacons.beacons(), pending.area);
    }
    base.validate();
    return base;
}

RunConfig parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    KeyValues kv;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigError("config: key '" + section + "' outside a section");
        }
        for (const auto& [name, leaf] : body) {
            kv.emplace_back(section + "." + name, leaf.data());
        }
    }
    return apply_key_values(RunConfig{}, kv);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    return parse_config(in);
}

KeyValues to_key_values(const RunConfig& cfg) {
    KeyValues kv;
    auto put = [&kv](std::string key, std::string value) {
        kv.emplace_back(std::move(key), std::move(value));
    };
    put("geometry.antenna_count", fmt::format("{}", cfg.geometry.antenna_count()));
    put("geometry.radius_mm", fmt::format("{}", cfg.geometry.radius_mm()));
    put("geometry.orientation_offset_deg", fmt::format("{}", cfg.geometry.orientation_offset_deg()));
    put("carrier.frequency_hz", fmt::format("{}", cfg.carrier.frequency_hz));
    put("carrier.propagation_speed", fmt::format("{}", cfg.carrier.propagation_speed));
    const auto& s = cfg.sampling;
    put("sampling.cte_length_us", fmt::format("{}", s.cte_length_us));
    put("sampling.guard_us", fmt::format("{}", s.guard_us));
    put("sampling.reference_us", fmt::format("{}", s.reference_us));
    put("sampling.slot_us", fmt::format("{}", s.slot_us));
    put("sampling.sample_period_ns", fmt::format("{}", s.sample_period_ns));
    put("sampling.tone_rate_deg_per_us", fmt::format("{}", s.tone_rate_deg_per_us));
    put("sampling.fixed_point_halfscale", fmt::format("{}", s.fixed_point_halfscale));
    put("sampling.retained_indices", join_ints(s.retained_indices));
    put("sampling.rotations", fmt::format("{}", s.rotations));
    put("sampling.switched_slots", fmt::format("{}", s.switched_slots));
    put("noise.sigma_deg", fmt::format("{}", cfg.noise.sigma_deg));
    put("noise.transient_corruption", cfg.noise.transient_corruption ? "true" : "false");
    put("noise.corruption_deg", fmt::format("{}", cfg.noise.corruption_deg));
    put("noise.seed", fmt::format("{}", cfg.noise.seed));
    put("estimator.method", to_string(cfg.estimator.method));
    put("estimator.strategy", to_string(cfg.estimator.strategy));
    put("estimator.grid_step_deg", fmt::format("{}", cfg.estimator.grid_step_deg));
    put("estimator.mean", cfg.estimator.mean == MeanKind::circular ? "circular" : "arithmetic");
    put("locator.heading_deg", fmt::format("{}", cfg.locator.heading_deg));
    put("locator.grid_step_m", fmt::format("{}", cfg.locator.grid_step_m));
    put("locator.convention", cfg.locator.convention == BearingConvention::propagation_clockwise
                                  ? "propagation_cw"
                                  : "bearing_ccw");
    const auto& area = cfg.beacons.bounds();
    put("locator.area", fmt::format("{},{},{},{}", area.min.x, area.min.y, area.max.x, area.max.y));
    for (const auto& b : cfg.beacons.beacons()) {
        put("beacons." + b.id, fmt::format("{},{}", b.position.x, b.position.y));
    }
    return kv;
}

std::string config_hash(const KeyValues& kv) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [k, v] : kv) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return fmt::format("{:016x}", h);
}

}  // namespace cteaoa
