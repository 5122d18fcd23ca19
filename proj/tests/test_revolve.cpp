#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "invis/errors.hpp"
#include "invis/revolve.hpp"
#include "invis/rng.hpp"

using namespace invis;

namespace {

const Body2D& canonical_body() {
    static Body2D body = build_body(ConstructionParams{});
    return body;
}

Ray2 ray_in_wedge(const ArcSequence& s, int j, double u) {
    double a = angle_of(s.inner[j] - s.source);
    double b = angle_of(s.outer[j] - s.source);
    double lo = std::min(a, b), hi = std::max(a, b);
    double guard = 1e-5;
    return {s.source, Dir2::of_angle(lo + guard + (hi - lo - 2.0 * guard) * u)};
}

Vec3 rot_x(Vec3 v, double a) {
    double c = std::cos(a), s = std::sin(a);
    return {v.x, v.y * c - v.z * s, v.y * s + v.z * c};
}

// Lift a planar ray from an on-axis origin into the meridian plane of
// azimuth phi.
Ray3 lift(const Ray2& r, double phi) {
    Vec2 d = r.dir.vec();
    return {rot_x({r.origin.x, r.origin.y, 0.0}, phi), rot_x({d.x, d.y, 0.0}, phi)};
}

} // namespace

TEST_CASE("mesh vertices stay on their generating curves") {
    ConstructionParams p;
    p.depth = 3;
    Body2D body = build_body(p);
    RevolveParams rp;
    rp.n_theta = 24;
    rp.n_curve = 8;
    RevolvedBody rb = revolve_body(body, rp);

    REQUIRE(rb.patches.size() == body.pieces.size());
    double worst = 0.0;
    for (const MeshPatch& patch : rb.patches) {
        const BoundaryPiece& piece = body.pieces[patch.piece];
        CHECK(patch.label == piece.label);
        CHECK(patch.cols == 25);
        CHECK(patch.rows == (piece.type == PieceType::Arc ? 9 : 2));
        CHECK(static_cast<int>(patch.vertices.size()) == patch.rows * patch.cols);
        for (const Vec3& v : patch.vertices) {
            Point2 q{v.x, std::hypot(v.y, v.z)};
            if (piece.type == PieceType::Arc)
                worst = std::max(worst, focal_residual(piece.arc.conic, q));
            else
                worst = std::max(worst, point_segment_distance(q, piece.seg));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("mesh grids are closed and indexed in range") {
    ConstructionParams p;
    p.depth = 1;
    Body2D body = build_body(p);

    RevolveParams rp;
    rp.n_theta = 96;
    SUBCASE("full turn") {}
    SUBCASE("half turn") {
        rp.phi1 = kPi;
    }

    RevolvedBody rb = revolve_body(body, rp);
    int m = rp.phi1 == kPi ? 48 : 96;
    for (const MeshPatch& patch : rb.patches) {
        CHECK(patch.cols == m + 1);
        CHECK(static_cast<int>(patch.tris.size()) == (patch.rows - 1) * m * 2);
        for (const auto& t : patch.tris)
            for (int idx : t) {
                CHECK(idx >= 0);
                CHECK(idx < static_cast<int>(patch.vertices.size()));
            }
        // seam columns of a full turn coincide
        if (rp.phi1 > kPi)
            for (int r = 0; r < patch.rows; ++r) {
                Vec3 a = patch.vertices[r * patch.cols];
                Vec3 b = patch.vertices[r * patch.cols + m];
                CHECK(norm(a - b) < 1e-12);
            }
    }

    RevolveParams bad;
    bad.phi1 = bad.phi0;
    CHECK_THROWS_AS(revolve_body(body, bad), DomainError);
}

TEST_CASE("obj export is deterministic and well formed") {
    ConstructionParams p;
    p.depth = 1;
    Body2D body = build_body(p);
    RevolveParams rp;
    rp.n_theta = 12;
    rp.n_curve = 4;
    RevolvedBody rb = revolve_body(body, rp);

    std::ostringstream s1, s2;
    write_obj(s1, rb);
    write_obj(s2, rb);
    std::string obj = s1.str();
    CHECK(obj == s2.str());
    CHECK(obj.rfind("o ", 0) == 0);

    size_t total_verts = 0, total_tris = 0;
    for (const MeshPatch& patch : rb.patches) {
        total_verts += patch.vertices.size();
        total_tris += patch.tris.size();
    }
    size_t nv = 0, nf = 0, no = 0;
    std::istringstream in(obj);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) {
            ++nv;
            double x, y, z;
            REQUIRE(std::sscanf(line.c_str(), "v %lf %lf %lf", &x, &y, &z) == 3);
            CHECK(std::isfinite(x + y + z));
        } else if (line.rfind("f ", 0) == 0) {
            ++nf;
            long a, b, c;
            REQUIRE(std::sscanf(line.c_str(), "f %ld %ld %ld", &a, &b, &c) == 3);
            CHECK(std::min({a, b, c}) >= 1);
            CHECK(std::max({a, b, c}) <= static_cast<long>(total_verts));
        } else if (line.rfind("o ", 0) == 0) {
            ++no;
        }
    }
    CHECK(nv == total_verts);
    CHECK(nf == total_tris);
    CHECK(no == rb.patches.size());
}

TEST_CASE("rays from the axis viewpoints vanish in three dimensions") {
    const Body2D& body = canonical_body();
    Rng rng(77);
    int fan_seqs[2][2] = {{kSeqL1, kSeqEC1}, {kSeqL2, kSeqEC2}};
    for (int source = 0; source < 2; ++source) {
        for (int i = 0; i < 50; ++i) {
            const ArcSequence& s = body.sequences[fan_seqs[source][i % 2]];
            int depth = static_cast<int>(s.arcs.size()) - 1;
            int j = std::min(static_cast<int>(rng.uniform(0.0, depth)), depth - 1);
            Ray2 r2 = ray_in_wedge(s, j, rng.uniform());
            double phi = rng.uniform(-kPi, kPi);
            Ray3 r3 = lift(r2, phi);

            TraceResult3 tr = trace_ray_3d(body, r3);
            REQUIRE(tr.status == TraceStatus::Exited);
            REQUIRE(tr.bounce_count() == 4);
            CHECK_FALSE(tr.hit_segment);
            CHECK(std::fabs(tr.phi - phi) < 1e-12);
            CHECK(tr.deviation.total() < 1e-8);
            for (const Bounce3& b : tr.bounces) {
                CHECK_FALSE(b.mirror_copy);
                // bounce points stay in the ray's meridian half-plane
                CHECK(std::fabs(b.p.y * std::sin(phi) - b.p.z * std::cos(phi)) < 1e-9);
            }
        }
    }
}

TEST_CASE("rotating a ray about the axis rotates the whole trace") {
    const Body2D& body = canonical_body();
    const ArcSequence& l2 = body.sequences[kSeqL2];
    Ray2 base2 = ray_in_wedge(l2, 2, 0.37);
    Ray3 base = lift(base2, 0.0);
    TraceResult3 t0 = trace_ray_3d(body, base);
    REQUIRE(t0.status == TraceStatus::Exited);

    for (double a : {0.3, 2.0, -1.2, kPi}) {
        Ray3 rot{rot_x(base.origin, a), rot_x(base.dir, a)};
        TraceResult3 tr = trace_ray_3d(body, rot);
        REQUIRE(tr.status == TraceStatus::Exited);
        REQUIRE(tr.bounce_count() == t0.bounce_count());
        for (int i = 0; i < t0.bounce_count(); ++i) {
            CHECK(norm(tr.bounces[i].p - rot_x(t0.bounces[i].p, a)) < 1e-10);
            CHECK(tr.bounces[i].piece == t0.bounces[i].piece);
        }
        CHECK(norm(tr.exit.origin - rot_x(t0.exit.origin, a)) < 1e-10);
        CHECK(norm(normalize3(tr.exit.dir) - normalize3(rot_x(t0.exit.dir, a))) < 1e-10);
        CHECK(std::fabs(tr.deviation.total() - t0.deviation.total()) < 1e-10);
    }
}

TEST_CASE("the zero-azimuth trace matches the flat billiard") {
    const Body2D& body = canonical_body();
    const ArcSequence& ec2 = body.sequences[kSeqEC2];
    Ray2 r2 = ray_in_wedge(ec2, 1, 0.62);
    TraceResult flat = trace_ray(body, r2);
    REQUIRE(flat.status == TraceStatus::Exited);

    TraceResult3 tr = trace_ray_3d(body, lift(r2, 0.0));
    REQUIRE(tr.status == TraceStatus::Exited);
    REQUIRE(tr.bounce_count() == flat.bounce_count());
    for (int i = 0; i < tr.bounce_count(); ++i) {
        CHECK(std::fabs(tr.bounces[i].p.x - flat.bounces[i].hit.p.x) < 1e-12);
        CHECK(std::fabs(tr.bounces[i].p.y - flat.bounces[i].hit.p.y) < 1e-12);
        CHECK(std::fabs(tr.bounces[i].p.z) < 1e-12);
        CHECK(tr.bounces[i].piece == flat.bounces[i].hit.piece);
    }
    CHECK(std::fabs(tr.deviation.angle - std::fabs(flat.deviation.angle)) < 1e-12);
    CHECK(std::fabs(tr.deviation.offset - flat.deviation.offset) < 1e-12);
}

TEST_CASE("rays crossing the axis meet the far copy of the section") {
    const Body2D& body = canonical_body();
    const ConicArc& a0 = body.sequences[kSeqL2].arcs[0];
    Point2 q = a0.point_at(0.5 * (a0.theta_min + a0.theta_max));

    // A vertical drop through a boundary point's abscissa: every piece it can
    // meet lies at y > 0, i.e. behind the axis for a ray reduced at azimuth pi.
    TraceResult3 down = trace_ray_3d(body, {{q.x, 5.0, 0.0}, {0.0, -1.0, 0.0}});
    REQUIRE(down.bounce_count() >= 1);
    CHECK(down.bounces[0].mirror_copy);
    CHECK(down.bounces[0].p.y > 0.5);
    CHECK(std::fabs(down.bounces[0].p.z) < 1e-12);

    // Same line from below: the first material met sits at y < 0.
    TraceResult3 up = trace_ray_3d(body, {{q.x, -5.0, 0.0}, {0.0, 1.0, 0.0}});
    REQUIRE(up.bounce_count() >= 1);
    CHECK(up.bounces[0].mirror_copy);
    CHECK(up.bounces[0].p.y < -0.5);
    CHECK(norm(up.bounces[0].p - Vec3{down.bounces[0].p.x, -down.bounces[0].p.y, 0.0}) < 1e-9);
}

TEST_CASE("skew and interior rays are rejected") {
    const Body2D& body = canonical_body();
    CHECK_THROWS_AS(trace_ray_3d(body, {{1.0, 0.5, 0.0}, {-1.0, 0.2, 0.3}}),
                    OutsideRevolvedRange);

    // off-axis but coplanar is fine
    CHECK_NOTHROW(trace_ray_3d(body, {{2.0, 0.3, 0.4}, {-1.0, 0.3, 0.4}}));

    const Quadrangle& ql = body.quads[0];
    Point2 in2 = ql.vertex + 0.2 * (ql.corner - ql.vertex);
    double c = std::cos(1.0), s = std::sin(1.0);
    Ray3 inside{{in2.x, in2.y * c, in2.y * s}, {-0.2, -c, -s}};
    CHECK_THROWS_AS(trace_ray_3d(body, inside), InsideBody);

    // an axial ray outside the solid just passes through
    TraceResult3 axial = trace_ray_3d(body, {{-5.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
    CHECK(axial.status == TraceStatus::Exited);
    CHECK(axial.bounce_count() == 0);
    CHECK(axial.deviation.total() < 1e-15);
}
