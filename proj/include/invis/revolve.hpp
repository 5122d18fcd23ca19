#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "invis/billiard.hpp"

namespace invis {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize3(Vec3 v) {
    double n = norm(v);
    return {v.x / n, v.y / n, v.z / n};
}

struct Ray3 {
    Vec3 origin;
    Vec3 dir;
    Vec3 at(double t) const { return origin + t * dir; }
};

struct RevolveParams {
    int n_theta = 96; // azimuthal steps for a full turn
    int n_curve = 24; // samples along each generating arc
    double phi0 = 0.0;
    double phi1 = 2.0 * kPi;
};

// Triangulated sweep of one generating boundary piece about the x-axis.
struct MeshPatch {
    int piece = -1;
    std::string label;
    int rows = 0;               // samples along the generating curve
    int cols = 0;               // azimuth samples
    std::vector<Vec3> vertices; // rows x cols, row-major
    std::vector<std::array<int, 3>> tris;
};

struct RevolvedBody {
    double phi0 = 0.0;
    double phi1 = 2.0 * kPi;
    std::vector<MeshPatch> patches;
};

// Sweeps every boundary piece about the x-axis. The generating section must
// stay strictly above the axis (throws OutsideRevolvedRange otherwise).
RevolvedBody revolve_body(const Body2D& body, const RevolveParams& params = {});

// Wavefront export, one object per boundary piece; plain-text and
// byte-deterministic for identical input.
void write_obj(std::ostream& os, const RevolvedBody& rb);

struct Bounce3 {
    Vec3 p;
    int piece = -1;
    bool mirror_copy = false; // hit the far half of the meridian plane
};

struct TraceResult3 {
    TraceStatus status = TraceStatus::MaxBounces;
    std::vector<Bounce3> bounces;
    Ray3 exit;               // valid iff status == Exited
    ExitDeviation deviation; // valid iff status == Exited; angle is unsigned
    double phi = 0.0;        // azimuth of the ray's meridian plane
    bool hit_segment = false;

    int bounce_count() const { return static_cast<int>(bounces.size()); }
};

ExitDeviation exit_deviation_3d(const Ray3& entry, const Ray3& exit);

// Billiard in the solid of revolution for rays coplanar with the axis (the
// only rays relevant to viewpoints on it). The ray's meridian plane cuts the
// solid in two mirror copies of the section; the trace reduces to that plane
// and reflects off whichever copy is hit first. Throws OutsideRevolvedRange
// when the ray's line is skew to the axis.
TraceResult3 trace_ray_3d(const Body2D& body, const Ray3& ray,
                          int max_bounces = kDefaultMaxBounces);

} // namespace invis
