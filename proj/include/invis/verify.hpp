#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invis/billiard.hpp"

namespace invis {

// Angular interval of directions out of a viewpoint, claimed by one arc.
struct Wedge {
    int seq = -1;
    int arc = -1;
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

// Directions out of one viewpoint that the body certifiably handles: one
// wedge per first-hit ellipse arc, shrunk by kConeGuard on each side.
// Coverage compares against the full vertex-to-accumulation opening of the
// two ellipse fans, which the wedges only exhaust in the infinite-depth
// limit.
struct HandledCone {
    int source_index = 0;
    std::vector<Wedge> wedges;
    double total_width = 0.0;
    double full_width = 0.0;
    double coverage = 0.0;
};

HandledCone handled_cone(const Body2D& body, int source_index);

struct SweepParams {
    int n_rays = 10000;
    uint64_t seed = 1;
    int max_bounces = kDefaultMaxBounces;
    double tau = kTauInvisible;
};

// Outcome of firing random handled rays from one viewpoint. pass holds when
// every non-degenerate ray exits along its entry line within tau and nothing
// ever lands on a straight side.
struct SweepReport {
    int source_index = 0;
    int n_rays = 0;
    uint64_t seed = 0;
    double tau = 0.0;
    int exited = 0;
    int degenerate = 0;
    int capped = 0; // rays that hit the bounce limit
    int segment_hits = 0;
    std::vector<int> bounce_histogram; // index = bounce count of exited rays
    double max_deviation = 0.0;
    double mean_deviation = 0.0;
    double coverage = 0.0;
    bool pass = false;
};

SweepReport invisibility_sweep(const Body2D& body, int source_index, const SweepParams& params);

struct AuditCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Structural identities of the finished construction, as measured residuals:
//   pair_collinear  inner points of source-aligned sequences line up with it
//   homothety       dilation at the source carries each hyperbola piece onto
//                   the confocal curve at the ellipse accumulation point
//   tangent         the two base arcs at each vertex share their tangent
//   rail            every outer point sits on its vertex-accumulation segment
//   contract        successive arc lengths shrink
//   exterior        deeper arcs stay clear of the solid slivers
struct AuditReport {
    std::vector<AuditCheck> checks;
    bool all_pass() const;
    double max_residual() const; // over the exactly-zero identity classes
};

AuditReport construction_audit(const Body2D& body);

} // namespace invis
