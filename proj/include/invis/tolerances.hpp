#pragma once

// Central numeric thresholds. Everything assumes coordinates normalized so
// that the two viewpoints are 2 apart (|A1A2| = 2); the construction code
// performs that normalization before any of these are applied.
namespace invis {

inline constexpr double kEpsGeom = 1e-9;      // on-curve / containment residuals
inline constexpr double kEpsParallel = 1e-12; // cross product of unit directions
inline constexpr double kEpsT = 1e-9;         // minimal forward ray advance per bounce
inline constexpr double kEpsEnd = 1e-7;       // endpoint-proximity degeneracy for hits
inline constexpr double kConeGuard = 1e-6;    // angular shrink of handled-cone wedges (rad)
inline constexpr double kTauInvisible = 1e-8; // max admissible exit deviation for a PASS
inline constexpr double kDiscMerge = 1e-14;   // normalized discriminant below which a
                                              // near-tangent quadratic is treated as one root
inline constexpr double kLemmaAngleTol = 1e-12; // bisection tolerance for curve intersections

inline constexpr int kDefaultDepth = 12;
inline constexpr int kDefaultMaxBounces = 16;

} // namespace invis
