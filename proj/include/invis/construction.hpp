#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "invis/conic.hpp"
#include "invis/geom.hpp"

namespace invis {

// Similarity between caller coordinates and the normalized frame where the
// viewpoints sit at (-1,0), (+1,0) and the construction occupies the upper
// half plane. All body geometry is stored normalized.
struct Frame {
    Point2 origin;     // caller image of normalized (0,0)
    Vec2 ex{1.0, 0.0}; // caller image of the normalized x unit vector
    Vec2 ey{0.0, 1.0};

    Point2 to_caller(Point2 p) const { return origin + p.x * ex + p.y * ey; }
    Point2 to_normalized(Point2 q) const {
        Vec2 w = q - origin;
        double s2 = norm2(ex);
        return {dot(w, ex) / s2, dot(w, ey) / s2};
    }
    double scale() const { return norm(ex); }
};

// Deliberate defect injected into one arc after generation (negative-control
// configurations): scales that arc's focal constant, extents kept.
struct PerturbSpec {
    int sequence = -1; // 0..7, -1 disables
    int arc = 0;
    double k_scale = 1.0;
};

struct ConstructionParams {
    Point2 A1{-1.0, 0.0};
    Point2 A2{1.0, 0.0};
    Point2 L{0.0, 1.0};
    Point2 K{0.0, 3.0};
    Point2 O{0.0, 2.0};
    // Optional: H1 defaults to the midpoint of the angle-bisector chord of
    // quadrangle B1 C1 D1 O; H2 to the mirror of H1; M, N to the cross-line
    // intersections M = A1H1 x A2H2, N = A1H2 x A2H1. Supplying them
    // explicitly allows asymmetric configurations.
    std::optional<Point2> H1, H2, M, N;
    int depth = kDefaultDepth;
    PerturbSpec perturb;
};

struct DerivedPoints {
    Point2 C1, C2; // A1K x A2L and mirror
    Point2 D1, D2; // A1K x A2O and mirror
    Point2 B1, B2; // A1O x A2L and mirror
    Point2 H1, H2; // free points near C1, C2 (defaulted or supplied)
    Point2 M, N;   // free points near K, L
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0; // positive = satisfied with room; meaning per check, see detail
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// One of the 8 arc families. Arc i runs between outer[i] (on the rail from
// the vertex to the accumulation focus) and inner[i] (on the ray of angle
// theta_inner out of the accumulation focus). All arcs pivot at acc.
struct ArcSequence {
    int id = 0;
    std::string label;
    ConicKind kind = ConicKind::Ellipse;
    int source_index = 0; // 0 = A1, 1 = A2
    Point2 source;
    Point2 acc;
    Point2 vertex;
    Point2 corner; // N, H1, H2 or M: endpoint of the clip segment from source
    double theta_inner = 0.0;
    std::vector<ConicArc> arcs;
    std::vector<Point2> outer;
    std::vector<Point2> inner;
};

// Solid sliver at one of the vertices L, C1, C2, K: bounded by the two base
// arcs there plus two straight sides meeting at the corner point.
struct Quadrangle {
    std::string label;
    Point2 vertex;
    Point2 corner;
    int seq_a = 0, seq_b = 0; // sequences whose base arcs bound it
    Segment2 seg_a, seg_b;    // inner_a -> corner and corner -> inner_b
    std::vector<Point2> poly; // closed sampled outline, for parity tests
};

enum class PieceType { Arc, Segment };

struct BoundaryPiece {
    PieceType type = PieceType::Arc;
    ConicArc arc;
    Segment2 seg;
    int seq = -1;       // owning sequence (arcs)
    int arc_index = -1; // position within the sequence (arcs)
    int quad = -1;      // owning quadrangle (segments)
    std::string label;
};

struct Body2D {
    ConstructionParams params; // normalized, with defaults resolved
    Frame frame;               // normalized -> original caller coordinates
    DerivedPoints pts;
    ValidationReport validation;
    std::array<ArcSequence, 8> sequences;
    std::array<Quadrangle, 4> quads;
    std::vector<BoundaryPiece> pieces;

    // Inside any of the four solid quadrangles (normalized coordinates).
    bool point_in_solid(Point2 p) const;
};

// Sequence table indices.
inline constexpr int kSeqL1 = 0;  // ellipse at L, source A1
inline constexpr int kSeqL2 = 1;  // ellipse at L, source A2
inline constexpr int kSeqEC1 = 2; // ellipse at C1, source A1
inline constexpr int kSeqEC2 = 3; // ellipse at C2, source A2
inline constexpr int kSeqHC1 = 4; // hyperbola at C1, source A2
inline constexpr int kSeqHC2 = 5; // hyperbola at C2, source A1
inline constexpr int kSeqHK1 = 6; // hyperbola at K, source A2
inline constexpr int kSeqHK2 = 7; // hyperbola at K, source A1

// Frame in which A1 -> (-1,0), A2 -> (1,0) and up is the half plane of up_hint.
Frame normalizing_frame(Point2 A1, Point2 A2, Point2 up_hint);

// Checks raw invariants (L, K on the bisector axis, ordered; O interior to
// LK; depth >= 0) and throws InvalidConfiguration listing the violations.
// Works in the caller frame; returns the normalized copy and its frame.
ConstructionParams normalize_params(const ConstructionParams& raw, Frame* frame_out = nullptr);

// Line-intersection derivations plus resolution of the optional free points.
// Accepts params in any frame; results are in that same frame.
DerivedPoints derive_points(const ConstructionParams& p);

// Positional constraints on the free points: quadrangle containment,
// exterior-of-curves, cross-line collinearity, angle-bisector membership
// (advisory for asymmetric configurations), clip placement of the base-arc
// inner endpoints, and the one-curve-per-clip-segment crossing conditions.
ValidationReport validate_configuration(const ConstructionParams& p, const DerivedPoints& d);

// One arc family, generated to the given depth. Exposed for tests; build_body
// assembles all eight.
ArcSequence make_sequence(int id, std::string label, ConicKind kind, int source_index,
                          Point2 source, Point2 acc, Point2 vertex, Point2 corner, int depth);

// Full pipeline: normalize, derive, validate (throws InvalidConfiguration on
// any failed check), generate the 8 sequences, assemble quadrangles and the
// flat reflecting-piece list.
Body2D build_body(const ConstructionParams& raw);

} // namespace invis
