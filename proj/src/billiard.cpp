#include "invis/billiard.hpp"

#include <algorithm>
#include <cmath>

#include "invis/errors.hpp"

namespace invis {

double ExitDeviation::total() const {
    return std::max({std::fabs(angle), offset, line_residual});
}

std::optional<PieceHit> first_hit(const Body2D& body, const Ray2& ray, double tmin) {
    std::optional<PieceHit> best;
    for (int i = 0; i < static_cast<int>(body.pieces.size()); ++i) {
        const BoundaryPiece& piece = body.pieces[i];
        if (piece.type == PieceType::Arc) {
            std::vector<ConicHit> hits = ray_conic_hits(ray, piece.arc, tmin);
            if (hits.empty()) continue;
            const ConicHit& h = hits.front();
            if (best && h.t >= best->t) continue;
            PieceHit ph;
            ph.piece = i;
            ph.t = h.t;
            ph.p = h.p;
            ph.normal = normal_at(piece.arc.conic, h.p);
            ph.near_end = dist(h.p, piece.arc.endpoint_min()) < kEpsEnd ||
                          dist(h.p, piece.arc.endpoint_max()) < kEpsEnd;
            best = ph;
        } else {
            std::optional<RaySegHit> h = ray_segment_hit(ray, piece.seg, tmin);
            if (!h) continue;
            if (best && h->t >= best->t) continue;
            PieceHit ph;
            ph.piece = i;
            ph.t = h->t;
            ph.p = h->p;
            ph.normal = Dir2::from(rot90(piece.seg.b - piece.seg.a));
            ph.near_end = dist(h->p, piece.seg.a) < kEpsEnd || dist(h->p, piece.seg.b) < kEpsEnd;
            best = ph;
        }
    }
    return best;
}

ExitDeviation exit_deviation(const Ray2& entry, const Ray2& exit) {
    ExitDeviation d;
    Vec2 di = entry.dir.vec();
    Vec2 de = exit.dir.vec();
    d.angle = std::atan2(cross(di, de), dot(di, de));
    d.offset = point_line_distance(entry.origin, Line2{exit.origin, exit.dir});
    d.line_residual = collinearity_residual(entry.origin, entry.origin + di, exit.origin);
    return d;
}

TraceResult trace_ray(const Body2D& body, const Ray2& ray, int max_bounces) {
    if (body.point_in_solid(ray.origin)) throw InsideBody("trace origin lies inside the body");
    TraceResult out;
    Ray2 cur = ray;
    while (true) {
        std::optional<PieceHit> hit = first_hit(body, cur);
        if (!hit) {
            out.status = TraceStatus::Exited;
            out.exit = cur;
            out.deviation = exit_deviation(ray, cur);
            return out;
        }
        if (out.bounce_count() >= max_bounces) {
            out.status = TraceStatus::MaxBounces;
            return out;
        }
        Bounce b;
        b.hit = *hit;
        b.incoming = cur.dir;
        b.outgoing = reflect_dir(cur.dir, hit->normal);
        out.bounces.push_back(b);
        if (body.pieces[hit->piece].type == PieceType::Segment) out.hit_segment = true;
        if (hit->near_end) {
            out.status = TraceStatus::DegenerateHit;
            return out;
        }
        cur = Ray2{hit->p, b.outgoing};
    }
}

} // namespace invis
