#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invis/errors.hpp"
#include "invis/json_io.hpp"
#include "invis/lemma.hpp"
#include "invis/render.hpp"
#include "invis/revolve.hpp"
#include "invis/rng.hpp"

using namespace invis;
using nlohmann::ordered_json;

namespace {

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + path);
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing output file: " + path);
}

ordered_json point_json(Point2 p) { return ordered_json::array({p.x, p.y}); }

int run_construct(const RunConfig& cfg, const std::string& out_path) {
    Body2D body = build_body(cfg.params);
    ordered_json checks = ordered_json::array();
    for (const ValidationCheck& c : body.validation.checks)
        checks.push_back(
            {{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"detail", c.detail}});
    ordered_json seqs = ordered_json::array();
    for (const ArcSequence& s : body.sequences)
        seqs.push_back({{"label", s.label},
                        {"kind", s.kind == ConicKind::Ellipse ? "ellipse" : "hyperbola"},
                        {"source_index", s.source_index},
                        {"arcs", s.arcs.size()}});
    const DerivedPoints& dp = body.pts;
    ordered_json j{{"config", nlohmann::ordered_json::parse(config_json(cfg))},
                   {"validation", {{"all_pass", body.validation.all_pass()}, {"checks", checks}}},
                   {"points",
                    {{"C1", point_json(dp.C1)},
                     {"C2", point_json(dp.C2)},
                     {"D1", point_json(dp.D1)},
                     {"D2", point_json(dp.D2)},
                     {"B1", point_json(dp.B1)},
                     {"B2", point_json(dp.B2)},
                     {"H1", point_json(dp.H1)},
                     {"H2", point_json(dp.H2)},
                     {"M", point_json(dp.M)},
                     {"N", point_json(dp.N)}}},
                   {"sequences", seqs},
                   {"pieces", body.pieces.size()}};
    write_output(out_path, j.dump(2) + "\n");
    return body.validation.all_pass() ? 0 : 1;
}

int run_audit(const RunConfig& cfg, const std::string& out_path) {
    Body2D body = build_body(cfg.params);
    AuditReport rep = construction_audit(body);
    write_output(out_path, audit_report_json(rep));
    return rep.all_pass() ? 0 : 1;
}

int run_verify(const RunConfig& cfg, const std::string& source, const std::string& out_path) {
    Body2D body = build_body(cfg.params);
    AuditReport audit = construction_audit(body);
    std::vector<int> sources;
    if (source == "A1" || source == "both") sources.push_back(0);
    if (source == "A2" || source == "both") sources.push_back(1);
    SweepParams sp;
    sp.n_rays = cfg.n_rays;
    sp.seed = cfg.seed;
    std::vector<HandledCone> cones;
    std::vector<SweepReport> sweeps;
    bool pass = body.validation.all_pass() && audit.all_pass();
    for (int s : sources) {
        cones.push_back(handled_cone(body, s));
        sweeps.push_back(invisibility_sweep(body, s, sp));
        pass = pass && sweeps.back().pass;
    }
    write_output(out_path, verify_report_json(body, cfg, audit, cones, sweeps));
    return pass ? 0 : 1;
}

int run_lemma(int samples, std::uint64_t seed, const std::string& out_path) {
    Rng rng(seed);
    double max_phi = 0.0, max_eq1 = 0.0, max_eq2 = 0.0, max_sine = 0.0;
    double max_a = 0.0, max_b = 0.0;
    int skipped_b = 0;

    for (int i = 0; i < samples; ++i) {
        LemmaConfig lc;
        lc.F2 = {rng.uniform(1.2, 3.0), 0.0};
        lc.alpha = rng.uniform(0.3, 1.1);
        lc.beta = rng.uniform(0.05, lc.alpha - 0.1);
        lc.gamma = rng.uniform(0.2, 1.3);
        AppendixData ad = appendix_check(lc);
        max_phi = std::max(max_phi, std::fabs(ad.phi_constructed - ad.phi_closed));
        max_eq1 = std::max(max_eq1, ad.eq1_residual);
        max_eq2 = std::max(max_eq2, ad.eq2_residual);
        max_sine = std::max(max_sine, ad.sine_law_residual);

        double g2 = rng.uniform(0.2, 1.3);
        max_a = std::max(max_a, check_lemma_a(lc.F1, lc.F2, lc.gamma, g2, lc.alpha, lc.beta));

        double delta = rng.uniform(0.5, 2.0);
        double r1 = rng.uniform(0.5, 1.5);
        Point2 u1 = lc.F2 + r1 * Dir2::of_angle(delta).vec();
        Point2 u2 = lc.F2 + (r1 + rng.uniform(0.3, 1.5)) * Dir2::of_angle(delta).vec();
        try {
            max_b = std::max(max_b, check_lemma_b(lc.F1, lc.F2, u1, u2, rng.uniform(0.2, 0.6)));
        } catch (const NoIntersection&) {
            ++skipped_b; // the gamma-ray cleared this branch; geometry, not failure
        }
    }

    bool pass = std::max({max_phi, max_eq1, max_eq2, max_sine, max_a, max_b}) < 1e-9 &&
                skipped_b < samples;
    ordered_json j{{"samples", samples},
                   {"seed", seed},
                   {"max_phi_difference", max_phi},
                   {"max_eq1_residual", max_eq1},
                   {"max_eq2_residual", max_eq2},
                   {"max_sine_law_residual", max_sine},
                   {"max_alignment_a", max_a},
                   {"max_alignment_b", max_b},
                   {"skipped_b", skipped_b},
                   {"pass", pass}};
    write_output(out_path, j.dump(2) + "\n");
    return pass ? 0 : 1;
}

const char* status_name(TraceStatus s) {
    switch (s) {
    case TraceStatus::Exited:
        return "exited";
    case TraceStatus::MaxBounces:
        return "max_bounces";
    default:
        return "degenerate_hit";
    }
}

ordered_json trace_json(const Body2D& body, const Ray2& ray, const TraceResult& tr) {
    ordered_json bounces = ordered_json::array();
    for (const Bounce& b : tr.bounces)
        bounces.push_back({{"piece", b.hit.piece},
                           {"label", body.pieces[b.hit.piece].label},
                           {"point", point_json(b.hit.p)},
                           {"t", b.hit.t}});
    bool invisible = tr.status == TraceStatus::Exited && tr.deviation.total() < kTauInvisible;
    ordered_json j{{"ray", {{"origin", point_json(ray.origin)}, {"theta", ray.dir.angle()}}},
                   {"status", status_name(tr.status)},
                   {"bounces", bounces},
                   {"invisible", invisible}};
    if (tr.status == TraceStatus::Exited) {
        j["exit"] = {{"origin", point_json(tr.exit.origin)}, {"theta", tr.exit.dir.angle()}};
        j["deviation"] = {{"angle", tr.deviation.angle},
                          {"offset", tr.deviation.offset},
                          {"line_residual", tr.deviation.line_residual},
                          {"total", tr.deviation.total()}};
    }
    return j;
}

int run_trace(const RunConfig& cfg, const std::string& source, double angle,
              std::vector<double> origin, std::vector<double> dir, const std::string& out_path) {
    Body2D body = build_body(cfg.params);
    Ray2 ray{source == "A1" ? body.params.A1 : body.params.A2, Dir2::of_angle(angle)};
    if (origin.size() == 2) ray.origin = {origin[0], origin[1]};
    if (dir.size() == 2) ray.dir = Dir2::from({dir[0], dir[1]});
    TraceResult tr = trace_ray(body, ray);
    ordered_json j = trace_json(body, ray, tr);
    write_output(out_path, j.dump() + "\n"); // one trace per line
    return j["invisible"].get<bool>() ? 0 : 1;
}

std::vector<TraceView> traces_from_file(const Body2D& body, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read traces file: " + path);
    std::vector<TraceView> tvs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("ray"))
            throw IoError("traces file line " + std::to_string(lineno) + " is not a trace record");
        const ordered_json& r = j["ray"];
        Ray2 ray{{r["origin"][0].get<double>(), r["origin"][1].get<double>()},
                 Dir2::of_angle(r["theta"].get<double>())};
        tvs.push_back({ray, trace_ray(body, ray)});
    }
    return tvs;
}

std::vector<TraceView> sample_traces(const Body2D& body, int rays, std::uint64_t seed) {
    std::vector<TraceView> tvs;
    Rng rng(seed);
    for (int source = 0; source < 2; ++source) {
        HandledCone cone = handled_cone(body, source);
        if (cone.wedges.empty()) continue;
        for (int i = 0; i < rays / 2; ++i) {
            double x = rng.uniform(0.0, cone.total_width);
            double theta = cone.wedges.back().hi;
            for (const Wedge& w : cone.wedges) {
                if (x <= w.width()) {
                    theta = w.lo + x;
                    break;
                }
                x -= w.width();
            }
            Point2 src = source == 0 ? body.params.A1 : body.params.A2;
            Ray2 r{src, Dir2::of_angle(theta)};
            tvs.push_back({r, trace_ray(body, r)});
        }
    }
    return tvs;
}

int run_render(const RunConfig& cfg, int rays, double width, const std::string& traces_path,
               const std::string& out_path) {
    Body2D body = build_body(cfg.params);
    std::vector<TraceView> tvs = traces_path.empty() ? sample_traces(body, rays, cfg.seed)
                                                     : traces_from_file(body, traces_path);
    RenderOptions opts;
    opts.width = width;
    write_output(out_path, render_svg(body, tvs, opts));
    return 0;
}

int run_mesh(const RunConfig& cfg, int n_theta, int n_curve, const std::string& out_path) {
    Body2D body = build_body(cfg.params);
    RevolveParams rp;
    rp.n_theta = n_theta;
    rp.n_curve = n_curve;
    rp.phi0 = cfg.angular_range[0];
    rp.phi1 = cfg.angular_range[1];
    RevolvedBody rb = revolve_body(body, rp);
    std::ostringstream ss;
    write_obj(ss, rb);
    write_output(out_path, ss.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    auto t0 = std::chrono::steady_clock::now();

    CLI::App app{"two-viewpoint billiard invisibility: construction, certification, export"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_path = "-";
    app.add_option("-c,--config", config_path, "json configuration file (defaults built in)");
    app.add_option("-o,--output", out_path, "output path, '-' for stdout");

    app.add_subcommand("construct", "build the construction and echo its validated anatomy");
    app.add_subcommand("audit", "measure the structural identities of the built body");

    CLI::App* verify = app.add_subcommand("verify", "full certificate: validation, audit, sweeps");
    std::string verify_source = "both";
    int verify_n = 0;
    std::uint64_t verify_seed = 0;
    verify->add_option("--source", verify_source, "which viewpoint to sweep")
        ->check(CLI::IsMember({"A1", "A2", "both"}));
    verify->add_option("--n", verify_n, "rays per sweep (overrides config)")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "sweep rng seed (overrides config)");

    CLI::App* lemma = app.add_subcommand("lemma", "randomized check of the angle identities");
    int samples = 1000;
    std::uint64_t lemma_seed = 1;
    lemma->add_option("--samples", samples, "random figures per identity")
        ->check(CLI::PositiveNumber);
    lemma->add_option("--seed", lemma_seed, "rng seed");

    CLI::App* trace = app.add_subcommand("trace", "trace one ray, one json record per line");
    std::string trace_source = "A2";
    double angle = 2.0;
    std::vector<double> origin, dir;
    trace->add_option("--source", trace_source, "viewpoint the ray starts from")
        ->check(CLI::IsMember({"A1", "A2"}));
    trace->add_option("--angle", angle, "direction angle in radians");
    trace->add_option("--origin", origin, "override origin x y")->expected(2);
    trace->add_option("--dir", dir, "override direction x y")->expected(2);

    CLI::App* render = app.add_subcommand("render", "svg of the construction with sample traces");
    int rays = 12;
    double width = 900.0;
    std::string traces_path;
    render->add_option("--rays", rays, "traced rays split over both viewpoints")
        ->check(CLI::NonNegativeNumber);
    render->add_option("--width", width, "svg width in pixels")->check(CLI::PositiveNumber);
    render->add_option("--traces", traces_path, "render the rays from this trace-record file");

    CLI::App* mesh = app.add_subcommand("mesh", "wavefront obj of the solid of revolution");
    int n_theta = 96, n_curve = 24;
    mesh->add_option("--ntheta", n_theta, "azimuth steps per full turn")->check(CLI::Range(3, 4096));
    mesh->add_option("--ncurve", n_curve, "samples along each arc")->check(CLI::Range(1, 4096));

    // -c/-o stay valid after the subcommand name
    for (const auto& sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        ordered_json err{{"error", "invalid_arguments"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }

    int code = 0;
    try {
        RunConfig cfg = config_path.empty() ? parse_config("{}") : load_config(config_path);
        if (verify->count("--n")) cfg.n_rays = verify_n;
        if (verify->count("--seed")) cfg.seed = verify_seed;
        if (app.got_subcommand("construct")) code = run_construct(cfg, out_path);
        else if (app.got_subcommand("audit")) code = run_audit(cfg, out_path);
        else if (app.got_subcommand("verify")) code = run_verify(cfg, verify_source, out_path);
        else if (app.got_subcommand("lemma")) code = run_lemma(samples, lemma_seed, out_path);
        else if (app.got_subcommand("trace"))
            code = run_trace(cfg, trace_source, angle, origin, dir, out_path);
        else if (app.got_subcommand("render"))
            code = run_render(cfg, rays, width, traces_path, out_path);
        else if (app.got_subcommand("mesh")) code = run_mesh(cfg, n_theta, n_curve, out_path);
    } catch (const InvalidConfiguration& e) {
        ordered_json err{{"error", "invalid_configuration"}, {"violations", e.violations}};
        std::cerr << err.dump() << "\n";
        code = 2;
    } catch (const IoError& e) {
        ordered_json err{{"error", "io"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        code = 3;
    } catch (const Error& e) {
        ordered_json err{{"error", "construction"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        code = 2;
    } catch (const std::exception& e) {
        ordered_json err{{"error", "internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        code = 3;
    }

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "wall_time_seconds=%.3f\n", secs);
    return code;
}
