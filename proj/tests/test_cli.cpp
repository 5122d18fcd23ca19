#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#ifndef INVIS_CLI_PATH
#error "INVIS_CLI_PATH must point at the command line binary"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

RunResult run(const std::string& args) {
    std::string cmd =
        std::string(INVIS_CLI_PATH) + " " + args + " >cli_stdout.tmp 2>cli_stderr.tmp";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp("cli_stdout.tmp");
    r.err = slurp("cli_stderr.tmp");
    return r;
}

nlohmann::json first_stderr_json(const std::string& err) {
    return nlohmann::json::parse(err.substr(0, err.find('\n')));
}

} // namespace

TEST_CASE("construct reports the canonical anatomy") {
    RunResult r = run("construct");
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["validation"]["all_pass"] == true);
    CHECK(j["sequences"].size() == 8);
    CHECK(j["pieces"] == 8 * 13 + 8);
    CHECK(j["config"]["depth"] == 12);
}

TEST_CASE("verify certifies the canonical config and rejects the perturbed one") {
    spit("cli_cfg.json", R"({"depth": 8, "n_rays": 400, "seed": 9})");
    RunResult r1 = run("-c cli_cfg.json verify -o cli_v1.json");
    CHECK(r1.code == 0);
    RunResult r2 = run("verify -c cli_cfg.json -o cli_v2.json");
    CHECK(r2.code == 0);
    CHECK(slurp("cli_v1.json") == slurp("cli_v2.json"));
    nlohmann::json j = nlohmann::json::parse(slurp("cli_v1.json"));
    CHECK(j["pass"] == true);
    CHECK(j["sweeps"][0]["exited"] == 400);

    spit("cli_pert.json",
         R"({"depth": 8, "n_rays": 400, "seed": 9,
             "perturb": {"sequence": 1, "arc": 1, "k_scale": 1.01}})");
    RunResult rp = run("-c cli_pert.json verify -o cli_vp.json");
    CHECK(rp.code == 1);
    nlohmann::json jp = nlohmann::json::parse(slurp("cli_vp.json"));
    CHECK(jp["pass"] == false);
    CHECK(jp["sweeps"][1]["max_deviation"].get<double>() > 1e-3);
}

TEST_CASE("configuration problems exit two with machine readable detail") {
    spit("cli_bad.json", R"({"foo": 1, "depth": -3})");
    RunResult r = run("-c cli_bad.json verify");
    CHECK(r.code == 2);
    nlohmann::json e = first_stderr_json(r.err);
    CHECK(e["error"] == "invalid_configuration");
    CHECK(e["violations"].size() == 2);

    spit("cli_geo.json", R"({"L": [5.0, -1.0]})");
    CHECK(run("-c cli_geo.json construct").code == 2);

    RunResult args = run("trace --source 7");
    CHECK(args.code == 2);
    CHECK(first_stderr_json(args.err)["error"] == "invalid_arguments");
    CHECK(run("verify --source neither").code == 2);
}

TEST_CASE("io problems exit three") {
    RunResult miss = run("-c cli_does_not_exist.json audit");
    CHECK(miss.code == 3);
    CHECK(first_stderr_json(miss.err)["error"] == "io");

    RunResult bad = run("audit -o /nonexistent_dir/out.json");
    CHECK(bad.code == 3);
    CHECK(first_stderr_json(bad.err)["error"] == "io");
}

TEST_CASE("lemma and trace subcommands succeed on handled inputs") {
    RunResult lem = run("lemma --samples 50 --seed 3");
    REQUIRE(lem.code == 0);
    nlohmann::json j = nlohmann::json::parse(lem.out);
    CHECK(j["pass"] == true);
    CHECK(j["max_alignment_a"].get<double>() < 1e-9);

    RunResult tr = run("trace --source A1 --angle 1.0");
    REQUIRE(tr.code == 0);
    nlohmann::json t = nlohmann::json::parse(tr.out);
    CHECK(t["status"] == "exited");
    CHECK(t["bounces"].size() == 4);
    CHECK(t["invisible"] == true);
    // one record per line: a single trace is exactly one newline-terminated line
    CHECK(tr.out.find('\n') == tr.out.size() - 1);

    RunResult clear = run("trace --source A1 --angle -0.5");
    CHECK(clear.code == 0);
    CHECK(nlohmann::json::parse(clear.out)["bounces"].size() == 0);
}

TEST_CASE("verify both is the conjunction of the single-source runs") {
    spit("cli_cfg1.json", R"({"depth": 8, "n_rays": 300})");
    RunResult a1 = run("-c cli_cfg1.json verify --source A1 --seed 5 -o cli_sa1.json");
    RunResult a2 = run("-c cli_cfg1.json verify --source A2 --seed 5 -o cli_sa2.json");
    RunResult both = run("-c cli_cfg1.json verify --source both --seed 5 -o cli_sb.json");
    CHECK(a1.code == 0);
    CHECK(a2.code == 0);
    CHECK(both.code == ((a1.code || a2.code) ? 1 : 0));

    nlohmann::json j1 = nlohmann::json::parse(slurp("cli_sa1.json"));
    nlohmann::json jb = nlohmann::json::parse(slurp("cli_sb.json"));
    REQUIRE(j1["sweeps"].size() == 1);
    REQUIRE(jb["sweeps"].size() == 2);
    CHECK(j1["sweeps"][0] == jb["sweeps"][0]); // same seed, same single-source record

    RunResult n = run("-c cli_cfg1.json verify --source A2 --n 37 --seed 5 -o cli_sn.json");
    CHECK(n.code == 0);
    CHECK(nlohmann::json::parse(slurp("cli_sn.json"))["sweeps"][0]["n_rays"] == 37);

    spit("cli_pert1.json",
         R"({"depth": 8, "n_rays": 300,
             "perturb": {"sequence": 1, "arc": 1, "k_scale": 1.01}})");
    int pa1 = run("-c cli_pert1.json verify --source A1").code;
    int pa2 = run("-c cli_pert1.json verify --source A2").code;
    int pboth = run("-c cli_pert1.json verify --source both").code;
    CHECK(pboth == ((pa1 || pa2) ? 1 : 0));
    CHECK(pboth == 1);
}

TEST_CASE("render and mesh write deterministic artifacts") {
    spit("cli_small.json", R"({"depth": 2})");
    RunResult r1 = run("-c cli_small.json render --rays 6 -o cli_r1.svg");
    RunResult r2 = run("-c cli_small.json render --rays 6 -o cli_r2.svg");
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);
    std::string svg = slurp("cli_r1.svg");
    CHECK(svg == slurp("cli_r2.svg"));
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    RunResult m = run("-c cli_small.json mesh --ntheta 12 --ncurve 4 -o cli_m.obj");
    CHECK(m.code == 0);
    std::string obj = slurp("cli_m.obj");
    CHECK(obj.rfind("o ", 0) == 0);
    CHECK(obj.find("\nv ") != std::string::npos);
    CHECK(obj.find("\nf ") != std::string::npos);
}

TEST_CASE("render draws the rays recorded by trace") {
    run("trace --source A1 --angle 1.0 -o cli_t.jsonl");
    RunResult t2 = run("trace --source A2 --angle 2.2");
    std::ofstream(std::string("cli_t.jsonl"), std::ios::app) << t2.out;

    RunResult r = run("render --traces cli_t.jsonl -o cli_rt.svg");
    REQUIRE(r.code == 0);
    std::string svg = slurp("cli_rt.svg");
    std::size_t exited = 0;
    for (std::size_t at = svg.find("marker-end"); at != std::string::npos;
         at = svg.find("marker-end", at + 1))
        ++exited;
    CHECK(exited == 2); // one arrow-tipped exit polyline per recorded ray

    RunResult again = run("render --traces cli_t.jsonl -o cli_rt2.svg");
    CHECK(again.code == 0);
    CHECK(svg == slurp("cli_rt2.svg"));

    spit("cli_garbage.jsonl", "this is not a trace\n");
    RunResult bad = run("render --traces cli_garbage.jsonl -o cli_bad.svg");
    CHECK(bad.code == 3);
    CHECK(first_stderr_json(bad.err)["error"] == "io");
    CHECK(run("render --traces cli_no_such.jsonl").code == 3);
}

TEST_CASE("wall clock goes to stderr, never into the artifact") {
    RunResult r = run("audit");
    CHECK(r.code == 0);
    CHECK(r.err.find("wall_time_seconds=") != std::string::npos);
    CHECK(r.out.find("wall_time") == std::string::npos);

    CHECK(run("--help").code == 0);
}
