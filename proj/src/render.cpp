#include "invis/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace invis {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void flatten_rec(const ConicArc& arc, double ta, Point2 pa, double tb, Point2 pb, double tol,
                 int depth, std::vector<Point2>& out) {
    double tm = 0.5 * (ta + tb);
    Point2 pm = arc.point_at(tm);
    if (depth <= 0 || point_segment_distance(pm, {pa, pb}) <= tol) {
        out.push_back(pb);
        return;
    }
    flatten_rec(arc, ta, pa, tm, pm, tol, depth - 1, out);
    flatten_rec(arc, tm, pm, tb, pb, tol, depth - 1, out);
}

struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    void grow(Point2 p) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
};

// Largest forward parameter at which the ray is still inside the box; the
// callers' rays all start inside it.
double clip_to_box(const Ray2& r, const Box& b) {
    Vec2 d = r.dir.vec();
    double best = 0.0;
    auto consider = [&](double t) {
        if (t <= 0.0) return;
        Point2 p = r.at(t);
        if (p.x < b.x0 - 1e-9 || p.x > b.x1 + 1e-9 || p.y < b.y0 - 1e-9 || p.y > b.y1 + 1e-9)
            return;
        best = std::max(best, t);
    };
    if (std::fabs(d.x) > 1e-15) {
        consider((b.x0 - r.origin.x) / d.x);
        consider((b.x1 - r.origin.x) / d.x);
    }
    if (std::fabs(d.y) > 1e-15) {
        consider((b.y0 - r.origin.y) / d.y);
        consider((b.y1 - r.origin.y) / d.y);
    }
    return best;
}

const char* sequence_color(int seq) {
    switch (seq) {
    case kSeqL1:
    case kSeqL2:
        return "#2b6cb0";
    case kSeqEC1:
    case kSeqEC2:
        return "#2c7a7b";
    case kSeqHC1:
    case kSeqHC2:
        return "#c05621";
    default:
        return "#9b2c2c";
    }
}

} // namespace

std::vector<Point2> flatten_arc(const ConicArc& arc, double tol) {
    Point2 a = arc.endpoint_min();
    Point2 b = arc.endpoint_max();
    std::vector<Point2> out;
    out.push_back(a);
    flatten_rec(arc, arc.theta_min, a, arc.theta_max, b, tol, 24, out);
    return out;
}

std::string render_svg(const Body2D& body, const std::vector<TraceView>& traces,
                       const RenderOptions& opts) {
    const ConstructionParams& pr = body.params;
    const DerivedPoints& dp = body.pts;
    const std::pair<const char*, Point2> named[] = {
        {"A1", pr.A1}, {"A2", pr.A2}, {"L", pr.L},   {"K", pr.K},   {"O", pr.O},
        {"C1", dp.C1}, {"C2", dp.C2}, {"D1", dp.D1}, {"D2", dp.D2}, {"B1", dp.B1},
        {"B2", dp.B2}, {"H1", dp.H1}, {"H2", dp.H2}, {"M", dp.M},   {"N", dp.N},
    };

    Box box{pr.A1.x, pr.A1.y, pr.A1.x, pr.A1.y};
    for (const auto& [name, p] : named) box.grow(p);
    for (const ArcSequence& s : body.sequences) {
        for (const ConicArc& a : s.arcs) {
            box.grow(a.endpoint_min());
            box.grow(a.endpoint_max());
        }
    }
    for (const TraceView& tv : traces) {
        box.grow(tv.entry.origin);
        for (const Bounce& b : tv.trace.bounces) box.grow(b.hit.p);
    }
    double pad = opts.margin * std::max(box.x1 - box.x0, box.y1 - box.y0);
    box = {box.x0 - pad, box.y0 - pad, box.x1 + pad, box.y1 + pad};

    double s = opts.width / (box.x1 - box.x0);
    double height = (box.y1 - box.y0) * s;
    double tol = opts.sagitta_frac * std::hypot(box.x1 - box.x0, box.y1 - box.y0);
    auto sx = [&](double x) { return (x - box.x0) * s; };
    auto sy = [&](double y) { return (box.y1 - y) * s; };
    auto xy = [&](Point2 p) { return num(sx(p.x)) + "," + num(sy(p.y)); };

    std::string out;
    out.reserve(1 << 20);
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(opts.width) +
           "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(opts.width) + " " +
           num(height) + "\">\n";
    out += "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\""
           " markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">"
           "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#38a169\"/></marker></defs>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    if (opts.fill_quads) {
        out += "<g id=\"quads\" fill=\"#cbd5e0\" fill-opacity=\"0.55\" stroke=\"none\">\n";
        for (const Quadrangle& q : body.quads) {
            out += "<polygon points=\"";
            for (size_t i = 0; i < q.poly.size(); ++i) {
                if (i) out += " ";
                out += xy(q.poly[i]);
            }
            out += "\"/>\n";
        }
        out += "</g>\n";
    }

    out += "<g id=\"body\" fill=\"none\" stroke-width=\"1.5\">\n";
    for (const BoundaryPiece& piece : body.pieces) {
        if (piece.type == PieceType::Arc) {
            out += "<polyline stroke=\"";
            out += sequence_color(piece.seq);
            out += "\" points=\"";
            std::vector<Point2> pts = flatten_arc(piece.arc, tol);
            for (size_t i = 0; i < pts.size(); ++i) {
                if (i) out += " ";
                out += xy(pts[i]);
            }
            out += "\"/>\n";
        } else {
            out += "<line stroke=\"#718096\" stroke-dasharray=\"4 3\" x1=\"" +
                   num(sx(piece.seg.a.x)) + "\" y1=\"" + num(sy(piece.seg.a.y)) + "\" x2=\"" +
                   num(sx(piece.seg.b.x)) + "\" y2=\"" + num(sy(piece.seg.b.y)) + "\"/>\n";
        }
    }
    out += "</g>\n";

    out += "<g id=\"traces\" fill=\"none\" stroke-width=\"1\">\n";
    for (const TraceView& tv : traces) {
        bool exited = tv.trace.status == TraceStatus::Exited;
        out += "<polyline stroke=\"";
        out += exited ? "#38a169" : "#e53e3e";
        out += "\"";
        if (exited) out += " marker-end=\"url(#arrow)\"";
        out += " points=\"";
        out += xy(tv.entry.origin);
        for (const Bounce& b : tv.trace.bounces) {
            out += " ";
            out += xy(b.hit.p);
        }
        if (exited) {
            out += " ";
            out += xy(tv.trace.exit.at(clip_to_box(tv.trace.exit, box)));
        }
        out += "\"/>\n";
    }
    out += "</g>\n";

    if (opts.labels) {
        out += "<g id=\"points\" font-family=\"monospace\" font-size=\"12\" fill=\"#1a202c\">\n";
        for (const auto& [name, p] : named) {
            out += "<circle r=\"2.5\" cx=\"" + num(sx(p.x)) + "\" cy=\"" + num(sy(p.y)) +
                   "\"/>\n";
            out += "<text x=\"" + num(sx(p.x) + 4.0) + "\" y=\"" + num(sy(p.y) - 4.0) + "\">";
            out += name;
            out += "</text>\n";
        }
        out += "</g>\n";
    }

    out += "</svg>\n";
    return out;
}

} // namespace invis
