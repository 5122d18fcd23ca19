#include "invis/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "invis/errors.hpp"

namespace invis {

using nlohmann::ordered_json;

namespace {

ordered_json point_json(Point2 p) { return ordered_json::array({p.x, p.y}); }

struct ConfigReader {
    const ordered_json& j;
    std::vector<std::string> bad;

    Point2 point(const char* key, Point2 fallback) {
        const ordered_json& v = j.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            bad.push_back(std::string(key) + " must be an [x, y] pair of numbers");
            return fallback;
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }

    template <typename T, typename Pred>
    void number(const char* key, T& dst, Pred ok, const char* what) {
        const ordered_json& v = j.at(key);
        bool integral = std::is_integral_v<T>;
        if ((integral && !v.is_number_integer()) || (!integral && !v.is_number())) {
            bad.push_back(std::string(key) + " must be " + what);
            return;
        }
        T got = v.get<T>();
        if (!ok(got)) {
            bad.push_back(std::string(key) + " must be " + what);
            return;
        }
        dst = got;
    }
};

void check_keys(const ordered_json& j, std::initializer_list<const char*> known,
                const char* scope, std::vector<std::string>& bad) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = std::any_of(known.begin(), known.end(),
                              [&](const char* k) { return it.key() == k; });
        if (!ok) bad.push_back(std::string("unknown key ") + scope + it.key());
    }
}

ordered_json audit_json(const AuditReport& rep) {
    ordered_json checks = ordered_json::array();
    for (const AuditCheck& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"residual", c.residual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    return {{"all_pass", rep.all_pass()},
            {"max_residual", rep.max_residual()},
            {"checks", std::move(checks)}};
}

ordered_json sweep_json(const SweepReport& r) {
    return {{"source_index", r.source_index},
            {"n_rays", r.n_rays},
            {"seed", r.seed},
            {"tau", r.tau},
            {"exited", r.exited},
            {"degenerate", r.degenerate},
            {"capped", r.capped},
            {"segment_hits", r.segment_hits},
            {"bounce_histogram", r.bounce_histogram},
            {"max_deviation", r.max_deviation},
            {"mean_deviation", r.mean_deviation},
            {"coverage", r.coverage},
            {"pass", r.pass}};
}

ordered_json config_tree(const RunConfig& cfg) {
    const ConstructionParams& p = cfg.params;
    ordered_json j{{"A1", point_json(p.A1)},
                   {"A2", point_json(p.A2)},
                   {"L", point_json(p.L)},
                   {"K", point_json(p.K)},
                   {"O", point_json(p.O)}};
    if (p.H1) j["H1"] = point_json(*p.H1);
    if (p.H2) j["H2"] = point_json(*p.H2);
    if (p.M) j["M"] = point_json(*p.M);
    if (p.N) j["N"] = point_json(*p.N);
    j["depth"] = p.depth;
    j["seed"] = cfg.seed;
    j["n_rays"] = cfg.n_rays;
    j["angular_range"] = ordered_json::array({cfg.angular_range[0], cfg.angular_range[1]});
    if (p.perturb.sequence >= 0)
        j["perturb"] = {{"sequence", p.perturb.sequence},
                        {"arc", p.perturb.arc},
                        {"k_scale", p.perturb.k_scale}};
    return j;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw InvalidConfiguration({std::string("not valid json: ") + e.what()});
    }
    if (!j.is_object()) throw InvalidConfiguration({"top level must be an object"});

    RunConfig cfg;
    ConfigReader r{j, {}};
    check_keys(j,
               {"A1", "A2", "L", "K", "O", "H1", "H2", "M", "N", "depth", "seed", "n_rays",
                "angular_range", "perturb"},
               "", r.bad);

    ConstructionParams& p = cfg.params;
    if (j.contains("A1")) p.A1 = r.point("A1", p.A1);
    if (j.contains("A2")) p.A2 = r.point("A2", p.A2);
    if (j.contains("L")) p.L = r.point("L", p.L);
    if (j.contains("K")) p.K = r.point("K", p.K);
    if (j.contains("O")) p.O = r.point("O", p.O);
    if (j.contains("H1")) p.H1 = r.point("H1", {});
    if (j.contains("H2")) p.H2 = r.point("H2", {});
    if (j.contains("M")) p.M = r.point("M", {});
    if (j.contains("N")) p.N = r.point("N", {});
    if (j.contains("depth"))
        r.number("depth", p.depth, [](int v) { return v >= 0 && v <= 64; },
                 "an integer in [0, 64]");
    if (j.contains("seed"))
        r.number("seed", cfg.seed, [](std::uint64_t) { return true; },
                 "a non-negative integer");
    if (j.contains("n_rays"))
        r.number("n_rays", cfg.n_rays, [](int v) { return v >= 1; }, "a positive integer");
    if (j.contains("angular_range")) {
        Point2 range = r.point("angular_range", {0.0, 2.0 * kPi});
        if (!(range.y > range.x) || range.y - range.x > 2.0 * kPi + 1e-12)
            r.bad.push_back("angular_range must span (theta0, theta1] with 0 < theta1 - theta0 <= 2*pi");
        else
            cfg.angular_range = {range.x, range.y};
    }
    if (j.contains("perturb")) {
        const ordered_json& q = j["perturb"];
        if (!q.is_object()) {
            r.bad.push_back("perturb must be an object");
        } else {
            check_keys(q, {"sequence", "arc", "k_scale"}, "perturb.", r.bad);
            ConfigReader rq{q, {}};
            if (q.contains("sequence"))
                rq.number("sequence", p.perturb.sequence,
                          [](int v) { return v >= -1 && v <= 7; }, "an integer in [-1, 7]");
            if (q.contains("arc"))
                rq.number("arc", p.perturb.arc, [](int v) { return v >= 0; },
                          "a non-negative integer");
            if (q.contains("k_scale"))
                rq.number("k_scale", p.perturb.k_scale,
                          [](double v) { return v > 0.0 && std::isfinite(v); },
                          "a positive number");
            r.bad.insert(r.bad.end(), rq.bad.begin(), rq.bad.end());
        }
    }

    if (!r.bad.empty()) throw InvalidConfiguration(std::move(r.bad));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string config_json(const RunConfig& cfg) { return config_tree(cfg).dump(2) + "\n"; }

std::string sweep_report_json(const SweepReport& rep) { return sweep_json(rep).dump(2) + "\n"; }

std::string audit_report_json(const AuditReport& rep) { return audit_json(rep).dump(2) + "\n"; }

std::string verify_report_json(const Body2D& body, const RunConfig& cfg, const AuditReport& audit,
                               const std::vector<HandledCone>& cones,
                               const std::vector<SweepReport>& sweeps) {
    ordered_json validation = ordered_json::array();
    for (const ValidationCheck& c : body.validation.checks)
        validation.push_back(
            {{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"detail", c.detail}});

    const DerivedPoints& dp = body.pts;
    ordered_json points{{"C1", point_json(dp.C1)}, {"C2", point_json(dp.C2)},
                        {"D1", point_json(dp.D1)}, {"D2", point_json(dp.D2)},
                        {"B1", point_json(dp.B1)}, {"B2", point_json(dp.B2)},
                        {"H1", point_json(dp.H1)}, {"H2", point_json(dp.H2)},
                        {"M", point_json(dp.M)},   {"N", point_json(dp.N)}};

    ordered_json jcones = ordered_json::array();
    for (const HandledCone& c : cones) {
        ordered_json wedges = ordered_json::array();
        for (const Wedge& w : c.wedges)
            wedges.push_back({{"seq", w.seq}, {"arc", w.arc}, {"lo", w.lo}, {"hi", w.hi}});
        jcones.push_back({{"source_index", c.source_index},
                          {"total_width", c.total_width},
                          {"full_width", c.full_width},
                          {"coverage", c.coverage},
                          {"wedges", std::move(wedges)}});
    }

    ordered_json jsweeps = ordered_json::array();
    bool sweeps_pass = !sweeps.empty();
    for (const SweepReport& s : sweeps) {
        jsweeps.push_back(sweep_json(s));
        sweeps_pass = sweeps_pass && s.pass;
    }

    ordered_json out{{"config", config_tree(cfg)},
                     {"validation",
                      {{"all_pass", body.validation.all_pass()}, {"checks", std::move(validation)}}},
                     {"points", std::move(points)},
                     {"audit", audit_json(audit)},
                     {"cones", std::move(jcones)},
                     {"sweeps", std::move(jsweeps)},
                     {"pass", body.validation.all_pass() && audit.all_pass() && sweeps_pass}};
    return out.dump(2) + "\n";
}

} // namespace invis
