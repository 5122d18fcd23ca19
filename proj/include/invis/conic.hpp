#pragma once

#include <vector>

#include "invis/geom.hpp"

namespace invis {

enum class ConicKind { Ellipse, HyperbolaBranch };

// Confocal-form conic: two foci plus the focal constant k.
//   Ellipse:          d(p,f1) + d(p,f2) = k,  k > |f1 f2|
//   HyperbolaBranch:  d(p,far) - d(p,near) = k,  0 < k < |f1 f2|,
// where "near" is the focus the branch bends around (index branch_focus).
struct Conic {
    ConicKind kind = ConicKind::Ellipse;
    Point2 f1;
    Point2 f2;
    double k = 0.0;
    int branch_focus = 0; // 0 or 1; meaningful for HyperbolaBranch only

    Point2 focus(int i) const { return i == 0 ? f1 : f2; }
    Point2 near_focus() const { return focus(branch_focus); }
    Point2 far_focus() const { return focus(1 - branch_focus); }
    double focal_dist() const { return dist(f1, f2); }
};

// Conic of the given kind and foci through p. For a hyperbola the branch is
// the one containing p (near focus = closer focus). Throws DegenerateConic
// when p sits on the focal segment/line so that no proper conic exists.
Conic conic_through(ConicKind kind, Point2 f1, Point2 f2, Point2 p);

// |d1 + d2 - k| for ellipses; |(d_far - d_near) - k| for hyperbola branches
// (large, about 2k, when p lies on the other branch).
double focal_residual(const Conic& c, Point2 p);

// Signed exterior margin: positive outside the convex region bounded by the
// curve, negative inside, zero on the curve.
//   Ellipse:          d1 + d2 - k
//   HyperbolaBranch:  k - (d_far - d_near)
double exterior_margin(const Conic& c, Point2 p);

// Outward unit normal (away from the bounded/convex side) at an on-curve
// point. Throws OffCurve when focal_residual(c,p) >= kEpsGeom.
Dir2 normal_at(const Conic& c, Point2 p);
Dir2 tangent_at(const Conic& c, Point2 p);

// Focal polar form about the pivot focus (0 -> f1, 1 -> f2): radius of the
// curve point in world direction theta. Throws DomainError when no curve
// point lies in that direction (hyperbola outside its asymptotic cone).
double polar_radius(const Conic& c, int pivot, double theta);
double polar_radius_deriv(const Conic& c, int pivot, double theta); // dr/dtheta
Point2 polar_point(const Conic& c, int pivot, double theta);

// Arc of a conic delimited by polar angles about one focus. theta_min/max are
// plain (unwrapped) world angles with theta_max - theta_min in (0, pi); a
// span >= 2pi - eps denotes the full curve.
struct ConicArc {
    Conic conic;
    int pivot = 0;
    double theta_min = 0.0;
    double theta_max = 0.0;

    bool full() const { return theta_max - theta_min >= 2.0 * kPi - 1e-12; }
    bool contains_angle(double theta) const;
    Point2 point_at(double theta) const; // throws OutOfExtent outside the span
    Point2 endpoint_min() const { return point_at(theta_min); }
    Point2 endpoint_max() const { return point_at(theta_max); }
};

// Arc between two on-curve endpoints (order-insensitive), pivoting at the
// given focus.
ConicArc make_arc(const Conic& c, int pivot, Point2 e0, Point2 e1);

ConicArc full_arc(const Conic& c, int pivot = 0);

struct ConicHit {
    double t;
    Point2 p;
    double theta; // polar angle about the arc pivot
};

// Forward intersections (t >= tmin) of a ray with an arc, ascending in t.
// Implicit-quadratic solve, then branch filtering by focal residual, then a
// Newton polish on the exact focal equation, then extent filtering.
// Near-tangent root pairs are merged when the normalized discriminant is
// below kDiscMerge.
std::vector<ConicHit> ray_conic_hits(const Ray2& r, const ConicArc& arc, double tmin = kEpsT);

// Numerically integrated arc length (composite Simpson on the polar form).
double arc_length(const ConicArc& arc, int intervals = 512);

} // namespace invis
