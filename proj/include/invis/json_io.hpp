#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "invis/construction.hpp"
#include "invis/verify.hpp"

namespace invis {

// Everything a command run needs: the construction plus the probe knobs.
struct RunConfig {
    ConstructionParams params;
    std::uint64_t seed = 1;
    int n_rays = 10000;
    // [theta0, theta1] meridian sweep of exported meshes
    std::array<double, 2> angular_range{0.0, 2.0 * kPi};
};

// Strict parse: unknown keys, malformed shapes and out-of-range knobs are
// collected into InvalidConfiguration::violations (all of them, not just the
// first).
RunConfig parse_config(const std::string& text);

// Reads the file and parses it; throws Error when unreadable.
RunConfig load_config(const std::string& path);

// Serialization that round-trips through parse_config.
std::string config_json(const RunConfig& cfg);

// Machine-readable reports, deliberately free of wall-clock data so that
// identical runs serialize byte-identically.
std::string sweep_report_json(const SweepReport& rep);
std::string audit_report_json(const AuditReport& rep);

// Combined certificate: configuration echo, configuration validation,
// construction audit, handled cones and one sweep per viewpoint.
std::string verify_report_json(const Body2D& body, const RunConfig& cfg, const AuditReport& audit,
                               const std::vector<HandledCone>& cones,
                               const std::vector<SweepReport>& sweeps);

} // namespace invis
