#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "invis/tolerances.hpp"

namespace invis {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

using Point2 = Vec2;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; } // counterclockwise
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }

inline Vec2 normalize(Vec2 a) {
    double n = norm(a);
    return {a.x / n, a.y / n};
}

// Unit direction. Constructed through from()/of_angle() so the unit-norm
// invariant (|1 - ||d||| < 1e-12) holds everywhere downstream.
struct Dir2 {
    double x = 1.0;
    double y = 0.0;

    static Dir2 from(Vec2 v) {
        Vec2 u = normalize(v);
        return {u.x, u.y};
    }
    static Dir2 of_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }
    Vec2 vec() const { return {x, y}; }
    double angle() const { return std::atan2(y, x); }
    Dir2 flipped() const { return {-x, -y}; }
};

struct Ray2 {
    Point2 origin;
    Dir2 dir;
    Point2 at(double t) const { return origin + t * dir.vec(); }
};

struct Line2 {
    Point2 p;
    Dir2 d;
    static Line2 through(Point2 a, Point2 b) { return {a, Dir2::from(b - a)}; }
};

struct Segment2 {
    Point2 a;
    Point2 b;
    double length() const { return dist(a, b); }
    Point2 at(double t) const { return a + t * (b - a); }
};

// Intersection point of two lines; empty when the unit directions are
// parallel within kEpsParallel.
inline std::optional<Point2> intersect_lines(const Line2& l1, const Line2& l2) {
    double den = cross(l1.d.vec(), l2.d.vec());
    if (std::fabs(den) < kEpsParallel) return std::nullopt;
    double t = cross(l2.p - l1.p, l2.d.vec()) / den;
    return l1.p + t * l1.d.vec();
}

// Specular reflection d' = d - 2 (d.n) n. n must be unit; either sign of n
// yields the same reflection.
inline Dir2 reflect_dir(Dir2 d, Dir2 n) {
    double k = 2.0 * (d.x * n.x + d.y * n.y);
    return Dir2::from(Vec2{d.x - k * n.x, d.y - k * n.y});
}

inline Point2 homothety(Point2 center, double ratio, Point2 p) {
    return center + ratio * (p - center);
}

// Scale-invariant collinearity residual of the triple (p, q, r): the sine of
// the angle at p between q and r. Zero iff collinear; invariant under rigid
// motions and uniform scaling about p.
inline double collinearity_residual(Point2 p, Point2 q, Point2 r) {
    double denom = norm(q - p) * norm(r - p);
    if (denom < 1e-300) denom = 1e-300;
    return std::fabs(cross(q - p, r - p)) / denom;
}

inline double point_line_distance(Point2 p, const Line2& l) {
    return std::fabs(cross(l.d.vec(), p - l.p));
}

// Parameter of the orthogonal projection of p onto the segment's line
// (0 at a, 1 at b).
inline double segment_param(const Segment2& s, Point2 p) {
    Vec2 ab = s.b - s.a;
    return dot(p - s.a, ab) / norm2(ab);
}

inline double point_segment_distance(Point2 p, const Segment2& s) {
    double t = segment_param(s, p);
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    return dist(p, s.at(t));
}

// Unsigned angle between two unit directions in [0, pi].
inline double angle_between(Dir2 a, Dir2 b) {
    return std::atan2(std::fabs(cross(a.vec(), b.vec())), dot(a.vec(), b.vec()));
}

// Forward intersection of a ray with a segment: returns ray parameter t and
// segment parameter u in [0,1] (within tol) when they cross.
struct RaySegHit {
    double t;
    double u;
    Point2 p;
};
inline std::optional<RaySegHit> ray_segment_hit(const Ray2& r, const Segment2& s,
                                                double tmin = kEpsT, double tol = 1e-12) {
    Vec2 d = r.dir.vec();
    Vec2 e = s.b - s.a;
    double den = cross(d, e);
    if (std::fabs(den) < 1e-300) return std::nullopt;
    Vec2 w = s.a - r.origin;
    double t = cross(w, e) / den;
    double u = cross(w, d) / den;
    if (t < tmin) return std::nullopt;
    if (u < -tol || u > 1.0 + tol) return std::nullopt;
    return RaySegHit{t, u, r.at(t)};
}

} // namespace invis
