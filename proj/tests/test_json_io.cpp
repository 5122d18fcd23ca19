#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include <json.hpp>

#include "invis/errors.hpp"
#include "invis/json_io.hpp"

using namespace invis;

TEST_CASE("an empty object parses to the default configuration") {
    RunConfig cfg = parse_config("{}");
    CHECK(cfg.params.A1.x == -1.0);
    CHECK(cfg.params.A2.x == 1.0);
    CHECK(cfg.params.L.y == 1.0);
    CHECK(cfg.params.K.y == 3.0);
    CHECK(cfg.params.O.y == 2.0);
    CHECK_FALSE(cfg.params.H1.has_value());
    CHECK(cfg.params.depth == kDefaultDepth);
    CHECK(cfg.params.perturb.sequence == -1);
    CHECK(cfg.seed == 1);
    CHECK(cfg.n_rays == 10000);
    CHECK(cfg.angular_range[0] == 0.0);
    CHECK(cfg.angular_range[1] == doctest::Approx(2.0 * kPi));
}

TEST_CASE("serialization round-trips through the parser") {
    RunConfig cfg;
    cfg.params.L = {0.1, 1.2};
    cfg.params.H1 = Point2{-0.3, 1.5};
    cfg.params.depth = 7;
    cfg.params.perturb = {3, 2, 1.01};
    cfg.seed = 99;
    cfg.n_rays = 1234;
    cfg.angular_range = {0.5, 2.0};

    RunConfig back = parse_config(config_json(cfg));
    CHECK(back.params.L.x == cfg.params.L.x);
    CHECK(back.params.L.y == cfg.params.L.y);
    REQUIRE(back.params.H1.has_value());
    CHECK(back.params.H1->y == 1.5);
    CHECK_FALSE(back.params.H2.has_value());
    CHECK(back.params.depth == 7);
    CHECK(back.params.perturb.sequence == 3);
    CHECK(back.params.perturb.arc == 2);
    CHECK(back.params.perturb.k_scale == 1.01);
    CHECK(back.seed == 99);
    CHECK(back.n_rays == 1234);
    CHECK(back.angular_range[0] == 0.5);
    CHECK(back.angular_range[1] == 2.0);

    CHECK(config_json(back) == config_json(cfg));
}

TEST_CASE("every violation is reported, not just the first") {
    std::string text = R"({
        "foo": 1,
        "A1": [1, 2, 3],
        "depth": -4,
        "n_rays": 0,
        "perturb": {"k_scale": 0.0, "mystery": true}
    })";
    try {
        parse_config(text);
        FAIL("expected InvalidConfiguration");
    } catch (const InvalidConfiguration& e) {
        REQUIRE(e.violations.size() == 6);
        std::string all;
        for (const std::string& v : e.violations) all += v + "\n";
        CHECK(all.find("foo") != std::string::npos);
        CHECK(all.find("A1") != std::string::npos);
        CHECK(all.find("depth") != std::string::npos);
        CHECK(all.find("n_rays") != std::string::npos);
        CHECK(all.find("k_scale") != std::string::npos);
        CHECK(all.find("perturb.mystery") != std::string::npos);
    }
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(parse_config("{"), InvalidConfiguration);
    CHECK_THROWS_AS(parse_config("[1, 2]"), InvalidConfiguration);
    CHECK_THROWS_AS(parse_config("{\"depth\": 2.5}"), InvalidConfiguration);
    CHECK_THROWS_AS(parse_config("{\"angular_range\": 7.0}"), InvalidConfiguration);
    CHECK_THROWS_AS(parse_config("{\"angular_range\": [2.0, 1.0]}"), InvalidConfiguration);
    CHECK_THROWS_AS(parse_config("{\"angular_range\": [0.0, 7.0]}"), InvalidConfiguration);
    CHECK_THROWS_AS(load_config("/nonexistent/path.json"), Error);
}

TEST_CASE("reports are valid json, deterministic, and carry no timings") {
    RunConfig cfg;
    cfg.params.depth = 4;
    cfg.n_rays = 200;
    cfg.seed = 11;
    Body2D body = build_body(cfg.params);

    AuditReport audit = construction_audit(body);
    std::vector<HandledCone> cones{handled_cone(body, 0), handled_cone(body, 1)};
    SweepParams sp;
    sp.n_rays = cfg.n_rays;
    sp.seed = cfg.seed;
    std::vector<SweepReport> sweeps{invisibility_sweep(body, 0, sp),
                                    invisibility_sweep(body, 1, sp)};

    std::string text = verify_report_json(body, cfg, audit, cones, sweeps);
    CHECK(text == verify_report_json(body, cfg, audit, cones, sweeps));
    CHECK(audit_report_json(audit) == audit_report_json(audit));
    CHECK(sweep_report_json(sweeps[0]) == sweep_report_json(sweeps[0]));

    nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["pass"] == true);
    CHECK(j["validation"]["all_pass"] == true);
    CHECK(j["audit"]["all_pass"] == true);
    CHECK(j["audit"]["checks"].size() == audit.checks.size());
    CHECK(j["cones"].size() == 2);
    CHECK(j["cones"][0]["wedges"].size() == 8);
    CHECK(j["sweeps"][1]["exited"] == 200);
    CHECK(j["config"]["depth"] == 4);
    CHECK(text.find("time") == std::string::npos);
    CHECK(text.find("date") == std::string::npos);

    // a failing sweep flips the certificate
    SweepReport broken = sweeps[0];
    broken.pass = false;
    std::string text2 = verify_report_json(body, cfg, audit, cones, {broken, sweeps[1]});
    CHECK(nlohmann::json::parse(text2)["pass"] == false);
}
