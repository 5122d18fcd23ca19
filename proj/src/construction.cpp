#include "invis/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invis/errors.hpp"

namespace invis {

namespace {

Point2 line_x(Point2 a1, Point2 a2, Point2 b1, Point2 b2, const char* what) {
    auto p = intersect_lines(Line2::through(a1, a2), Line2::through(b1, b2));
    if (!p) throw InvalidConfiguration({std::string(what) + "_lines_parallel"});
    return *p;
}

Point2 mirror_across_axis(const Frame& f, Point2 q) {
    Point2 n = f.to_normalized(q);
    return f.to_caller({-n.x, n.y});
}

// Midpoint of the chord that the internal bisector of angle B1-C1-D1 cuts
// out of quadrangle B1 C1 D1 O. The stock choice when H1 is not supplied.
Point2 default_h1(Point2 B1, Point2 C1, Point2 D1, Point2 O) {
    Vec2 bis = normalize(B1 - C1) + normalize(D1 - C1);
    if (norm(bis) < 1e-12) throw InvalidConfiguration({"H1_default_degenerate_bisector"});
    Ray2 ray{C1, Dir2::from(bis)};
    double t_exit = -1.0;
    const Segment2 edges[] = {{D1, O}, {O, B1}, {B1, C1}, {C1, D1}};
    for (const Segment2& e : edges) {
        auto h = ray_segment_hit(ray, e, 1e-9);
        if (h && (t_exit < 0.0 || h->t < t_exit)) t_exit = h->t;
    }
    if (t_exit <= 0.0) throw InvalidConfiguration({"H1_default_no_exit_from_quadrangle"});
    return ray.at(0.5 * t_exit);
}

// Positive inside the polygon, negative outside: minimum signed distance to
// the edge lines, oriented by the polygon's signed area.
double convex_poly_margin(Point2 p, const std::vector<Point2>& poly) {
    double area2 = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        Point2 a = poly[i], b = poly[(i + 1) % poly.size()];
        area2 += cross(a, b);
    }
    double orient = area2 >= 0.0 ? 1.0 : -1.0;
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < poly.size(); ++i) {
        Point2 a = poly[i], b = poly[(i + 1) % poly.size()];
        m = std::min(m, orient * cross(b - a, p - a) / dist(a, b));
    }
    return m;
}

int segment_conic_crossings(Point2 a, Point2 b, const Conic& c) {
    Ray2 ray{a, Dir2::from(b - a)};
    double len = dist(a, b);
    int n = 0;
    for (const ConicHit& h : ray_conic_hits(ray, full_arc(c), 1e-12))
        if (h.t < len - 1e-12) ++n;
    return n;
}

struct SeqSpec {
    int id;
    const char* label;
    ConicKind kind;
    int source_index;
};

constexpr SeqSpec kSeqTable[8] = {
    {kSeqL1, "l1", ConicKind::Ellipse, 0},
    {kSeqL2, "l2", ConicKind::Ellipse, 1},
    {kSeqEC1, "eC1", ConicKind::Ellipse, 0},
    {kSeqEC2, "eC2", ConicKind::Ellipse, 1},
    {kSeqHC1, "hC1", ConicKind::HyperbolaBranch, 1},
    {kSeqHC2, "hC2", ConicKind::HyperbolaBranch, 0},
    {kSeqHK1, "hK1", ConicKind::HyperbolaBranch, 1},
    {kSeqHK2, "hK2", ConicKind::HyperbolaBranch, 0},
};

// acc / vertex / corner for each table entry, given the derived points.
void seq_geometry(const SeqSpec& s, const ConstructionParams& p, const DerivedPoints& d,
                  Point2& source, Point2& acc, Point2& vertex, Point2& corner) {
    source = s.source_index == 0 ? p.A1 : p.A2;
    switch (s.id) {
        case kSeqL1: acc = d.B1; vertex = p.L; corner = d.N; break;
        case kSeqL2: acc = d.B2; vertex = p.L; corner = d.N; break;
        case kSeqEC1: acc = d.B1; vertex = d.C1; corner = d.H1; break;
        case kSeqEC2: acc = d.B2; vertex = d.C2; corner = d.H2; break;
        case kSeqHC1: acc = d.D1; vertex = d.C1; corner = d.H1; break;
        case kSeqHC2: acc = d.D2; vertex = d.C2; corner = d.H2; break;
        case kSeqHK1: acc = d.D1; vertex = p.K; corner = d.M; break;
        default: acc = d.D2; vertex = p.K; corner = d.M; break;
    }
}

// poly samples of an arc walked from the angle of `from` to the angle of `to`
// (both on the arc), endpoints excluded.
void append_arc_samples(std::vector<Point2>& out, const ConicArc& arc, Point2 from, Point2 to,
                        int n) {
    Point2 pv = arc.conic.focus(arc.pivot);
    double t0 = angle_of(from - pv);
    double t1 = t0 + std::remainder(angle_of(to - pv) - t0, 2.0 * kPi);
    for (int i = 1; i < n; ++i) {
        double th = t0 + (t1 - t0) * i / n;
        out.push_back(polar_point(arc.conic, arc.pivot, th));
    }
}

bool point_in_poly(Point2 p, const std::vector<Point2>& poly) {
    bool in = false;
    for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        Point2 a = poly[j], b = poly[i];
        if ((b.y > p.y) != (a.y > p.y)) {
            double x = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (p.x < x) in = !in;
        }
    }
    return in;
}

} // namespace

Frame normalizing_frame(Point2 A1, Point2 A2, Point2 up_hint) {
    Point2 origin = 0.5 * (A1 + A2);
    Vec2 ex = 0.5 * (A2 - A1);
    Vec2 ey = rot90(ex);
    if (dot(up_hint - origin, ey) < 0.0) ey = -ey;
    return {origin, ex, ey};
}

ConstructionParams normalize_params(const ConstructionParams& raw, Frame* frame_out) {
    std::vector<std::string> bad;
    if (dist(raw.A1, raw.A2) < 1e-12) throw InvalidConfiguration({"A1_A2_distinct"});
    Frame f = normalizing_frame(raw.A1, raw.A2, raw.L);
    Point2 L = f.to_normalized(raw.L);
    Point2 K = f.to_normalized(raw.K);
    Point2 O = f.to_normalized(raw.O);
    if (std::fabs(L.x) > kEpsGeom) bad.push_back("L_on_axis");
    if (std::fabs(K.x) > kEpsGeom) bad.push_back("K_on_axis");
    if (std::fabs(O.x) > kEpsGeom) bad.push_back("O_on_axis");
    if (!(L.y > kEpsGeom)) bad.push_back("L_off_viewline");
    if (!(K.y - L.y > kEpsGeom)) bad.push_back("L_strictly_below_K");
    if (!(O.y > L.y + kEpsGeom && O.y < K.y - kEpsGeom)) bad.push_back("O_interior_to_LK");
    if (raw.depth < 0) bad.push_back("depth_nonnegative");
    if (raw.perturb.sequence < -1 || raw.perturb.sequence > 7 || raw.perturb.arc < 0 ||
        (raw.perturb.sequence >= 0 && raw.perturb.arc > raw.depth) ||
        !(raw.perturb.k_scale > 0.0))
        bad.push_back("perturb_in_range");
    if (!bad.empty()) throw InvalidConfiguration(std::move(bad));

    ConstructionParams p = raw;
    p.A1 = {-1.0, 0.0};
    p.A2 = {1.0, 0.0};
    p.L = {0.0, L.y};
    p.K = {0.0, K.y};
    p.O = {0.0, O.y};
    if (raw.H1) p.H1 = f.to_normalized(*raw.H1);
    if (raw.H2) p.H2 = f.to_normalized(*raw.H2);
    if (raw.M) p.M = f.to_normalized(*raw.M);
    if (raw.N) p.N = f.to_normalized(*raw.N);
    if (frame_out) *frame_out = f;
    return p;
}

DerivedPoints derive_points(const ConstructionParams& p) {
    DerivedPoints d;
    d.C1 = line_x(p.A1, p.K, p.A2, p.L, "C1");
    d.C2 = line_x(p.A2, p.K, p.A1, p.L, "C2");
    d.D1 = line_x(p.A1, p.K, p.A2, p.O, "D1");
    d.D2 = line_x(p.A2, p.K, p.A1, p.O, "D2");
    d.B1 = line_x(p.A1, p.O, p.A2, p.L, "B1");
    d.B2 = line_x(p.A2, p.O, p.A1, p.L, "B2");
    d.H1 = p.H1 ? *p.H1 : default_h1(d.B1, d.C1, d.D1, p.O);
    if (p.H2) {
        d.H2 = *p.H2;
    } else {
        Frame f = normalizing_frame(p.A1, p.A2, p.L);
        d.H2 = mirror_across_axis(f, d.H1);
    }
    d.M = p.M ? *p.M : line_x(p.A1, d.H1, p.A2, d.H2, "M");
    d.N = p.N ? *p.N : line_x(p.A1, d.H2, p.A2, d.H1, "N");
    return d;
}

ValidationReport validate_configuration(const ConstructionParams& p, const DerivedPoints& d) {
    ValidationReport rep;
    auto add = [&](std::string name, bool pass, double margin, std::string detail) {
        rep.checks.push_back({std::move(name), pass, margin, std::move(detail)});
    };

    Conic cs[8];
    try {
        for (const SeqSpec& s : kSeqTable) {
            Point2 src, acc, vx, corner;
            seq_geometry(s, p, d, src, acc, vx, corner);
            cs[s.id] = conic_through(s.kind, src, acc, vx);
        }
    } catch (const DegenerateConic& e) {
        add("conics_constructible", false, 0.0, e.what());
        return rep;
    }
    add("conics_constructible", true, 1.0, "all eight vertex conics exist");

    // Containment of the free points in their quadrangles.
    struct QuadCheck {
        const char* name;
        Point2 pt;
        std::vector<Point2> poly;
    };
    const QuadCheck qchecks[] = {
        {"H1_inside_B1C1D1O", d.H1, {d.B1, d.C1, d.D1, p.O}},
        {"H2_inside_OD2C2B2", d.H2, {p.O, d.D2, d.C2, d.B2}},
        {"M_inside_OD1KD2", d.M, {p.O, d.D1, p.K, d.D2}},
        {"N_inside_OB2LB1", d.N, {p.O, d.B2, p.L, d.B1}},
    };
    for (const auto& q : qchecks) {
        double m = convex_poly_margin(q.pt, q.poly);
        add(q.name, m > 0.0, m, "distance to the quadrangle boundary");
    }

    // H1 on the internal bisector of angle B1-C1-D1. Advisory for asymmetric
    // configurations (explicit H2/M/N), where only the line and containment
    // conditions below are structural.
    {
        Vec2 bis = normalize(d.B1 - d.C1) + normalize(d.D1 - d.C1);
        double res = collinearity_residual(d.C1, d.C1 + bis, d.H1);
        bool asym = p.H2 || p.M || p.N;
        add("H1_on_angle_bisector", asym || res < 1e-6, res,
            asym ? "advisory only for explicit H2/M/N" : "sine of the deviation angle");
    }

    // The free points must be exterior to both curves at their vertex.
    const struct {
        const char* name;
        Point2 pt;
        int c0, c1;
    } ext[] = {
        {"N_exterior", d.N, kSeqL1, kSeqL2},
        {"H1_exterior", d.H1, kSeqEC1, kSeqHC1},
        {"H2_exterior", d.H2, kSeqEC2, kSeqHC2},
        {"M_exterior", d.M, kSeqHK1, kSeqHK2},
    };
    for (const auto& e : ext) {
        double m0 = exterior_margin(cs[e.c0], e.pt);
        double m1 = exterior_margin(cs[e.c1], e.pt);
        add(std::string(e.name) + "_" + kSeqTable[e.c0].label, m0 > 0.0, m0, "focal margin");
        add(std::string(e.name) + "_" + kSeqTable[e.c1].label, m1 > 0.0, m1, "focal margin");
    }

    // The defining line incidences of M and N (exact when M, N are derived).
    const struct {
        const char* name;
        Point2 a, b, c;
    } col[] = {
        {"M_on_line_A1H1", p.A1, d.H1, d.M},
        {"M_on_line_A2H2", p.A2, d.H2, d.M},
        {"N_on_line_A1H2", p.A1, d.H2, d.N},
        {"N_on_line_A2H1", p.A2, d.H1, d.N},
    };
    for (const auto& c : col) {
        double res = collinearity_residual(c.a, c.b, c.c);
        add(c.name, res < kEpsGeom, kEpsGeom - res, "collinearity residual");
    }

    // Clip placement: where each vertex conic meets the ray from its source
    // through the corner point. Ellipse arcs must end strictly inside the
    // segment, hyperbola arcs strictly beyond the corner.
    for (const SeqSpec& s : kSeqTable) {
        Point2 src, acc, vx, corner;
        seq_geometry(s, p, d, src, acc, vx, corner);
        std::string name = std::string("clip_") + s.label;
        try {
            double r = polar_radius(cs[s.id], 0, angle_of(corner - src));
            double span = dist(src, corner);
            double m = s.kind == ConicKind::Ellipse ? span - r : r - span;
            add(name, m > 0.0, m,
                s.kind == ConicKind::Ellipse ? "arc end inside the clip segment"
                                             : "arc end beyond the corner point");
        } catch (const DomainError&) {
            add(name, false, 0.0, "clip ray misses the curve");
        }
    }

    // Each clip segment may meet at most one of the two curves through its
    // vertex (it may meet that one curve more than once).
    const struct {
        const char* name;
        Point2 a, b;
        int c0, c1;
    } onecurve[] = {
        {"one_curve_L_from_A1", p.A1, d.N, kSeqL1, kSeqL2},
        {"one_curve_L_from_A2", p.A2, d.N, kSeqL1, kSeqL2},
        {"one_curve_C1_from_A1", p.A1, d.H1, kSeqEC1, kSeqHC1},
        {"one_curve_C1_from_A2", p.A2, d.H1, kSeqEC1, kSeqHC1},
        {"one_curve_C2_from_A2", p.A2, d.H2, kSeqEC2, kSeqHC2},
        {"one_curve_C2_from_A1", p.A1, d.H2, kSeqEC2, kSeqHC2},
        {"one_curve_K_from_A2", p.A2, d.M, kSeqHK1, kSeqHK2},
        {"one_curve_K_from_A1", p.A1, d.M, kSeqHK1, kSeqHK2},
    };
    for (const auto& oc : onecurve) {
        int curves = (segment_conic_crossings(oc.a, oc.b, cs[oc.c0]) > 0 ? 1 : 0) +
                     (segment_conic_crossings(oc.a, oc.b, cs[oc.c1]) > 0 ? 1 : 0);
        add(oc.name, curves <= 1, 1.0 - curves, "number of distinct curves crossed");
    }

    return rep;
}

ArcSequence make_sequence(int id, std::string label, ConicKind kind, int source_index,
                          Point2 source, Point2 acc, Point2 vertex, Point2 corner, int depth) {
    ArcSequence seq;
    seq.id = id;
    seq.label = std::move(label);
    seq.kind = kind;
    seq.source_index = source_index;
    seq.source = source;
    seq.acc = acc;
    seq.vertex = vertex;
    seq.corner = corner;

    Conic c0 = conic_through(kind, source, acc, vertex);
    double theta_clip = angle_of(corner - source);
    double r0;
    try {
        r0 = polar_radius(c0, 0, theta_clip);
    } catch (const DomainError&) {
        throw ArcClippingFailed(seq.label + ": clip ray misses the base curve");
    }
    double span = dist(source, corner);
    if (kind == ConicKind::Ellipse ? !(r0 < span) : !(r0 > span))
        throw ArcClippingFailed(seq.label + ": base arc end misplaced on the clip ray");
    Point2 inner0 = source + r0 * Dir2::of_angle(theta_clip).vec();
    seq.theta_inner = angle_of(inner0 - acc);

    Segment2 rail{vertex, acc};
    seq.outer.push_back(vertex);
    seq.inner.push_back(inner0);
    seq.arcs.push_back(make_arc(c0, 1, vertex, inner0));

    for (int i = 0; i < depth; ++i) {
        auto next = intersect_lines(Line2::through(source, seq.inner[i]), Line2::through(vertex, acc));
        if (!next) throw RailExhausted(seq.label + ": transfer line parallel to the rail");
        double s_prev = segment_param(rail, seq.outer[i]);
        double s_next = segment_param(rail, *next);
        if (!(s_next > s_prev && s_next < 1.0))
            throw RailExhausted(seq.label + ": endpoint left the rail at step " +
                                std::to_string(i + 1));
        Conic ci = conic_through(kind, source, acc, *next);
        Point2 inner_i;
        try {
            inner_i = polar_point(ci, 1, seq.theta_inner);
        } catch (const DomainError&) {
            throw RailExhausted(seq.label + ": inner ray left the curve family at step " +
                                std::to_string(i + 1));
        }
        if (!(dist(inner_i, acc) < dist(seq.inner[i], acc)))
            throw RailExhausted(seq.label + ": inner endpoints stopped contracting at step " +
                                std::to_string(i + 1));
        seq.outer.push_back(*next);
        seq.inner.push_back(inner_i);
        seq.arcs.push_back(make_arc(ci, 1, *next, inner_i));
    }
    return seq;
}

bool Body2D::point_in_solid(Point2 p) const {
    for (const Quadrangle& q : quads)
        if (point_in_poly(p, q.poly)) return true;
    return false;
}

Body2D build_body(const ConstructionParams& raw) {
    Body2D body;
    body.params = normalize_params(raw, &body.frame);
    body.pts = derive_points(body.params);
    body.validation = validate_configuration(body.params, body.pts);
    if (!body.validation.all_pass()) {
        std::vector<std::string> bad;
        for (const auto& c : body.validation.checks)
            if (!c.pass) bad.push_back(c.name);
        throw InvalidConfiguration(std::move(bad));
    }

    for (const SeqSpec& s : kSeqTable) {
        Point2 src, acc, vx, corner;
        seq_geometry(s, body.params, body.pts, src, acc, vx, corner);
        body.sequences[s.id] =
            make_sequence(s.id, s.label, s.kind, s.source_index, src, acc, vx, corner,
                          body.params.depth);
    }

    const PerturbSpec& pert = body.params.perturb;
    if (pert.sequence >= 0)
        body.sequences[pert.sequence].arcs[pert.arc].conic.k *= pert.k_scale;

    const struct {
        const char* label;
        int a, b;
    } quad_table[4] = {
        {"QL", kSeqL1, kSeqL2},
        {"QC1", kSeqEC1, kSeqHC1},
        {"QC2", kSeqEC2, kSeqHC2},
        {"QK", kSeqHK1, kSeqHK2},
    };
    for (int qi = 0; qi < 4; ++qi) {
        const ArcSequence& sa = body.sequences[quad_table[qi].a];
        const ArcSequence& sb = body.sequences[quad_table[qi].b];
        Quadrangle q;
        q.label = quad_table[qi].label;
        q.vertex = sa.vertex;
        q.corner = sa.corner;
        q.seq_a = quad_table[qi].a;
        q.seq_b = quad_table[qi].b;
        q.seg_a = {sa.inner[0], sa.corner};
        q.seg_b = {sb.corner, sb.inner[0]};
        q.poly.push_back(q.vertex);
        append_arc_samples(q.poly, sa.arcs[0], sa.vertex, sa.inner[0], 64);
        q.poly.push_back(sa.inner[0]);
        q.poly.push_back(q.corner);
        q.poly.push_back(sb.inner[0]);
        append_arc_samples(q.poly, sb.arcs[0], sb.inner[0], sb.vertex, 64);
        body.quads[qi] = std::move(q);
    }

    for (const ArcSequence& s : body.sequences)
        for (size_t i = 0; i < s.arcs.size(); ++i) {
            BoundaryPiece piece;
            piece.type = PieceType::Arc;
            piece.arc = s.arcs[i];
            piece.seq = s.id;
            piece.arc_index = static_cast<int>(i);
            piece.label = s.label + "[" + std::to_string(i) + "]";
            body.pieces.push_back(std::move(piece));
        }
    for (int qi = 0; qi < 4; ++qi) {
        for (int side = 0; side < 2; ++side) {
            BoundaryPiece piece;
            piece.type = PieceType::Segment;
            piece.seg = side == 0 ? body.quads[qi].seg_a : body.quads[qi].seg_b;
            piece.quad = qi;
            piece.label = body.quads[qi].label + (side == 0 ? ".segA" : ".segB");
            body.pieces.push_back(std::move(piece));
        }
    }
    return body;
}

} // namespace invis
