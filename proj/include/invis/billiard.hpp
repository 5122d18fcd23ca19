#pragma once

#include <optional>
#include <vector>

#include "invis/construction.hpp"

namespace invis {

enum class TraceStatus { Exited, MaxBounces, DegenerateHit };

// First boundary piece a ray meets.
struct PieceHit {
    int piece = -1;        // index into Body2D::pieces
    double t = 0.0;        // ray parameter at the hit
    Point2 p;
    Dir2 normal;           // boundary normal at p (sign is irrelevant here)
    bool near_end = false; // within kEpsEnd of a piece endpoint
};

struct Bounce {
    PieceHit hit;
    Dir2 incoming;
    Dir2 outgoing;
};

// How far an exit ray is from continuing the entry ray's line.
struct ExitDeviation {
    double angle = 0.0;         // signed angle from entry to exit direction
    double offset = 0.0;        // distance from the entry origin to the exit line
    double line_residual = 0.0; // sine at the entry origin between +dir and the exit origin
    double total() const;       // max of the three magnitudes
};

struct TraceResult {
    TraceStatus status = TraceStatus::MaxBounces;
    std::vector<Bounce> bounces;
    Ray2 exit;               // valid iff status == Exited
    ExitDeviation deviation; // valid iff status == Exited
    bool hit_segment = false;

    int bounce_count() const { return static_cast<int>(bounces.size()); }
};

// Nearest forward intersection (t >= tmin) of the ray with any boundary
// piece; empty when the ray clears the body.
std::optional<PieceHit> first_hit(const Body2D& body, const Ray2& ray, double tmin = kEpsT);

ExitDeviation exit_deviation(const Ray2& entry, const Ray2& exit);

// Specular billiard outside the body. Throws InsideBody when the origin is
// interior. A hit within kEpsEnd of a piece end stops the trace with
// DegenerateHit (the normal there is not trustworthy); a trace still finding
// boundary after max_bounces reflections stops with MaxBounces.
TraceResult trace_ray(const Body2D& body, const Ray2& ray, int max_bounces = kDefaultMaxBounces);

} // namespace invis
