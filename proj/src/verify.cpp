#include "invis/verify.hpp"

#include <algorithm>
#include <cmath>

#include "invis/rng.hpp"

namespace invis {

namespace {

// first-hit ellipse fans per viewpoint
void fan_ids(int source_index, int out[2]) {
    if (source_index == 0) {
        out[0] = kSeqL1;
        out[1] = kSeqEC1;
    } else {
        out[0] = kSeqL2;
        out[1] = kSeqEC2;
    }
}

struct SeqPair {
    int ellipse;
    int hyperbola;
};

// source-aligned sequence pairs (same source, inner points collinear with it)
constexpr SeqPair kPairs[4] = {
    {kSeqL2, kSeqHC1},
    {kSeqEC2, kSeqHK1},
    {kSeqL1, kSeqHC2},
    {kSeqEC1, kSeqHK2},
};

} // namespace

HandledCone handled_cone(const Body2D& body, int source_index) {
    HandledCone cone;
    cone.source_index = source_index;
    int ids[2];
    fan_ids(source_index, ids);
    for (int id : ids) {
        const ArcSequence& s = body.sequences[id];
        int depth = static_cast<int>(s.arcs.size()) - 1;
        cone.full_width += std::fabs(angle_of(s.acc - s.source) - angle_of(s.vertex - s.source));
        for (int j = 0; j < depth; ++j) {
            double a = angle_of(s.inner[j] - s.source);
            double b = angle_of(s.outer[j] - s.source);
            Wedge w;
            w.seq = id;
            w.arc = j;
            w.lo = std::min(a, b) + kConeGuard;
            w.hi = std::max(a, b) - kConeGuard;
            if (w.width() <= 0.0) continue;
            cone.wedges.push_back(w);
            cone.total_width += w.width();
        }
    }
    cone.coverage = cone.full_width > 0.0 ? cone.total_width / cone.full_width : 0.0;
    return cone;
}

SweepReport invisibility_sweep(const Body2D& body, int source_index, const SweepParams& params) {
    SweepReport rep;
    rep.source_index = source_index;
    rep.n_rays = params.n_rays;
    rep.seed = params.seed;
    rep.tau = params.tau;

    HandledCone cone = handled_cone(body, source_index);
    rep.coverage = cone.coverage;
    if (cone.wedges.empty() || params.n_rays <= 0) return rep;

    Point2 src = source_index == 0 ? body.params.A1 : body.params.A2;
    Rng rng(params.seed);
    double dev_sum = 0.0;
    bool all_clean = true;
    for (int i = 0; i < params.n_rays; ++i) {
        double x = rng.uniform(0.0, cone.total_width);
        double theta = cone.wedges.back().hi;
        for (const Wedge& w : cone.wedges) {
            if (x <= w.width()) {
                theta = w.lo + x;
                break;
            }
            x -= w.width();
        }
        TraceResult tr = trace_ray(body, Ray2{src, Dir2::of_angle(theta)}, params.max_bounces);
        if (tr.hit_segment) ++rep.segment_hits;
        switch (tr.status) {
        case TraceStatus::DegenerateHit:
            ++rep.degenerate;
            break;
        case TraceStatus::MaxBounces:
            ++rep.capped;
            all_clean = false;
            break;
        case TraceStatus::Exited: {
            ++rep.exited;
            int n = tr.bounce_count();
            if (static_cast<int>(rep.bounce_histogram.size()) <= n)
                rep.bounce_histogram.resize(n + 1, 0);
            ++rep.bounce_histogram[n];
            double dev = tr.deviation.total();
            rep.max_deviation = std::max(rep.max_deviation, dev);
            dev_sum += dev;
            break;
        }
        }
    }
    if (rep.exited > 0) rep.mean_deviation = dev_sum / rep.exited;
    rep.pass = all_clean && rep.segment_hits == 0 && rep.exited > 0 &&
               rep.max_deviation < params.tau;
    return rep;
}

namespace {

void push_check(AuditReport& rep, std::string name, double residual, double tol) {
    rep.checks.push_back({std::move(name), residual, tol, residual < tol});
}

} // namespace

bool AuditReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

double AuditReport::max_residual() const {
    double m = 0.0;
    for (const AuditCheck& c : checks)
        if (c.name.rfind("contract", 0) != 0 && c.name.rfind("exterior", 0) != 0)
            m = std::max(m, c.residual);
    return m;
}

AuditReport construction_audit(const Body2D& body) {
    AuditReport rep;

    for (const SeqPair& pr : kPairs) {
        const ArcSequence& e = body.sequences[pr.ellipse];
        const ArcSequence& h = body.sequences[pr.hyperbola];
        std::string tag = "[" + e.label + "/" + h.label + "]";

        double coll = 0.0;
        for (size_t i = 0; i < e.inner.size(); ++i)
            coll = std::max(coll, collinearity_residual(e.source, e.inner[i], h.inner[i]));
        push_check(rep, "pair_collinear" + tag, coll, 1e-9);

        // dilation at the shared source maps the hyperbola family with the
        // far accumulation point onto the one with the near accumulation
        // point, scaling each focal constant by the same ratio
        double rho = dist(e.source, e.acc) / dist(h.source, h.acc);
        double homo = 0.0;
        for (const ConicArc& arc : h.arcs) {
            Conic mapped = arc.conic;
            mapped.f2 = homothety(e.source, rho, arc.conic.f2);
            mapped.k = rho * arc.conic.k;
            for (int s = 0; s <= 8; ++s) {
                double th = arc.theta_min + (arc.theta_max - arc.theta_min) * s / 8.0;
                Point2 p = homothety(e.source, rho, arc.point_at(th));
                homo = std::max(homo, focal_residual(mapped, p));
            }
            homo = std::max(homo, dist(mapped.f2, e.acc));
        }
        push_check(rep, "homothety" + tag, homo, 1e-9);
    }

    for (const Quadrangle& q : body.quads) {
        const ArcSequence& sa = body.sequences[q.seq_a];
        const ArcSequence& sb = body.sequences[q.seq_b];
        Vec2 ta = tangent_at(sa.arcs[0].conic, q.vertex).vec();
        Vec2 tb = tangent_at(sb.arcs[0].conic, q.vertex).vec();
        push_check(rep, "tangent[" + q.label + "]", std::fabs(cross(ta, tb)), 1e-9);
    }

    for (const ArcSequence& s : body.sequences) {
        Segment2 rail{s.vertex, s.acc};
        double off = 0.0;
        for (const Point2& p : s.outer) off = std::max(off, point_segment_distance(p, rail));
        push_check(rep, "rail[" + s.label + "]", off, 1e-9);

        double worst_ratio = 0.0;
        double prev = arc_length(s.arcs[0]);
        for (size_t i = 1; i < s.arcs.size(); ++i) {
            double cur = arc_length(s.arcs[i]);
            worst_ratio = std::max(worst_ratio, cur / prev);
            prev = cur;
        }
        push_check(rep, "contract[" + s.label + "]", std::max(0.0, worst_ratio - 1.0), 1e-9);

        int inside = 0, sampled = 0;
        for (size_t i = 1; i < s.arcs.size(); ++i) {
            const ConicArc& arc = s.arcs[i];
            for (int k = 1; k <= 3; ++k) {
                double th = arc.theta_min + (arc.theta_max - arc.theta_min) * k / 4.0;
                ++sampled;
                if (body.point_in_solid(arc.point_at(th))) ++inside;
            }
        }
        double frac = sampled > 0 ? static_cast<double>(inside) / sampled : 0.0;
        push_check(rep, "exterior[" + s.label + "]", frac, 1e-12);
    }

    return rep;
}

} // namespace invis
