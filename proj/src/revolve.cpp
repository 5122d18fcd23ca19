#include "invis/revolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "invis/errors.hpp"
#include "invis/tolerances.hpp"

namespace invis {

namespace {

std::vector<Point2> sample_piece(const BoundaryPiece& piece, int n_curve) {
    if (piece.type == PieceType::Segment) return {piece.seg.a, piece.seg.b};
    const ConicArc& a = piece.arc;
    int n = std::max(1, n_curve);
    std::vector<Point2> pts;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        double th = a.theta_min + (a.theta_max - a.theta_min) * i / n;
        pts.push_back(a.point_at(th));
    }
    return pts;
}

Ray2 flip_ray(const Ray2& r) {
    Vec2 v = r.dir.vec();
    return {{r.origin.x, -r.origin.y}, Dir2::from({v.x, -v.y})};
}

} // namespace

RevolvedBody revolve_body(const Body2D& body, const RevolveParams& params) {
    double span = params.phi1 - params.phi0;
    if (!(span > 0.0) || span > 2.0 * kPi + kEpsGeom)
        throw DomainError("revolution span must lie in (0, 2*pi]");
    int m = std::max(3, static_cast<int>(std::llround(params.n_theta * span / (2.0 * kPi))));

    RevolvedBody rb;
    rb.phi0 = params.phi0;
    rb.phi1 = params.phi1;
    rb.patches.reserve(body.pieces.size());
    for (size_t pi = 0; pi < body.pieces.size(); ++pi) {
        const BoundaryPiece& piece = body.pieces[pi];
        std::vector<Point2> gen = sample_piece(piece, params.n_curve);

        MeshPatch patch;
        patch.piece = static_cast<int>(pi);
        patch.label = piece.label;
        patch.rows = static_cast<int>(gen.size());
        patch.cols = m + 1;
        patch.vertices.reserve(gen.size() * static_cast<size_t>(m + 1));
        for (const Point2& p : gen) {
            if (!(p.y > 0.0))
                throw OutsideRevolvedRange("generating section touches the axis of revolution");
            for (int j = 0; j <= m; ++j) {
                double phi = params.phi0 + span * j / m;
                patch.vertices.push_back({p.x, p.y * std::cos(phi), p.y * std::sin(phi)});
            }
        }
        for (int r = 0; r + 1 < patch.rows; ++r) {
            for (int c = 0; c < m; ++c) {
                int v00 = r * patch.cols + c;
                int v10 = (r + 1) * patch.cols + c;
                patch.tris.push_back({v00, v10, v10 + 1});
                patch.tris.push_back({v00, v10 + 1, v00 + 1});
            }
        }
        rb.patches.push_back(std::move(patch));
    }
    return rb;
}

void write_obj(std::ostream& os, const RevolvedBody& rb) {
    char buf[128];
    long base = 1; // obj indices are global and 1-based
    for (const MeshPatch& patch : rb.patches) {
        os << "o " << patch.label << "\n";
        for (const Vec3& v : patch.vertices) {
            std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
            os << buf;
        }
        for (const auto& t : patch.tris)
            os << "f " << base + t[0] << " " << base + t[1] << " " << base + t[2] << "\n";
        base += static_cast<long>(patch.vertices.size());
    }
}

ExitDeviation exit_deviation_3d(const Ray3& entry, const Ray3& exit) {
    Vec3 di = normalize3(entry.dir);
    Vec3 de = normalize3(exit.dir);
    ExitDeviation dv;
    dv.angle = std::atan2(norm(cross(di, de)), dot(di, de));
    dv.offset = norm(cross(de, entry.origin - exit.origin));
    Vec3 w = exit.origin - entry.origin;
    double n = norm(w);
    dv.line_residual = n > 1e-300 ? norm(cross(di, w)) / n : 0.0;
    return dv;
}

TraceResult3 trace_ray_3d(const Body2D& body, const Ray3& ray, int max_bounces) {
    Vec3 d3 = normalize3(ray.dir);
    Vec2 oyz{ray.origin.y, ray.origin.z};
    Vec2 dyz{d3.y, d3.z};
    // The line is coplanar with the x-axis iff its yz projection passes
    // through the origin; only those rays reduce to a meridian plane.
    if (std::fabs(cross(oyz, dyz)) > kEpsGeom * std::max(1.0, norm(oyz)))
        throw OutsideRevolvedRange("ray line is skew to the axis of revolution");

    double phi = 0.0;
    if (norm(dyz) > kEpsParallel)
        phi = std::atan2(dyz.y, dyz.x);
    else if (norm(oyz) > kEpsParallel)
        phi = std::atan2(oyz.y, oyz.x);
    Vec2 mer{std::cos(phi), std::sin(phi)};

    auto lift_pt = [&](Point2 p) { return Vec3{p.x, p.y * mer.x, p.y * mer.y}; };
    auto lift_dir = [&](Dir2 d) {
        Vec2 v = d.vec();
        return Vec3{v.x, v.y * mer.x, v.y * mer.y};
    };

    // Meridian coordinates (x, r) with r signed along azimuth phi. The plane
    // cuts the solid in the section (r > 0) and its mirror image (r < 0), so
    // the reduced billiard plays against both copies.
    Ray2 cur{{ray.origin.x, dot(oyz, mer)}, Dir2::from({d3.x, dot(dyz, mer)})};
    Point2 mirrored_origin{cur.origin.x, -cur.origin.y};
    if (body.point_in_solid(cur.origin) || body.point_in_solid(mirrored_origin))
        throw InsideBody("trace origin is inside the solid of revolution");

    TraceResult3 out;
    out.phi = phi;
    while (true) {
        std::optional<PieceHit> hp = first_hit(body, cur);
        Ray2 curm = flip_ray(cur);
        std::optional<PieceHit> hm = first_hit(body, curm);
        bool use_mirror = hm && (!hp || hm->t < hp->t);
        const std::optional<PieceHit>& h = use_mirror ? hm : hp;
        if (!h) {
            out.status = TraceStatus::Exited;
            out.exit = {lift_pt(cur.origin), lift_dir(cur.dir)};
            out.deviation = exit_deviation_3d({ray.origin, d3}, out.exit);
            return out;
        }
        if (out.bounce_count() >= max_bounces) {
            out.status = TraceStatus::MaxBounces;
            return out;
        }
        const Ray2& side = use_mirror ? curm : cur;
        Ray2 next{h->p, reflect_dir(side.dir, h->normal)};
        if (use_mirror) next = flip_ray(next);
        out.bounces.push_back({lift_pt(next.origin), h->piece, use_mirror});
        if (body.pieces[h->piece].type == PieceType::Segment) out.hit_segment = true;
        if (h->near_end) {
            out.status = TraceStatus::DegenerateHit;
            return out;
        }
        cur = next;
    }
}

} // namespace invis
