#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bpx/cli.hpp"
#include "bpx/report.hpp"

using bpx::report::Json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
    std::vector<Json> records() const {
        std::vector<Json> r;
        std::istringstream is(out);
        for (std::string line; std::getline(is, line);) r.push_back(Json::parse(line));
        return r;
    }
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Outcome o;
    o.code = bpx::cli::run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

}  // namespace

TEST_CASE("cli: density") {
    const auto o = run({"density", "AP(0,2)", "--exact"});
    CHECK(o.code == 0);
    const auto r = o.records();
    REQUIRE(r.size() == 1);
    const auto& rep = r[0]["report"];
    for (const char* k : {"lower_density", "upper_density", "lower_banach", "upper_banach"}) {
        CHECK(rep[k].get<double>() == 0.5);
        CHECK(rep["exact"][k].get<bool>());
    }
    CHECK(r[0]["config"]["horizon"] == 16384);

    const auto est = run({"density", "GEO(2,1) | AP(1,3)", "--horizon", "4096"});
    CHECK(est.code == 0);
    CHECK(est.records()[0]["report"]["schedule"].back() == 1024);
    CHECK(run({"density", "EP(0; 0; 1)"}).code == 2);
    CHECK(run({"density", "GEO(2,1)", "--exact"}).code == 2);
}

TEST_CASE("cli: classify and scramble examples") {
    const auto alt = run({"classify", "--x", "0|zero", "--y", "01|per:01", "--grid", "1,2"});
    CHECK(alt.code == 1);
    CHECK(alt.records()[0]["profile"]["verdicts"]["proximal"]["status"] == "refuted");

    const auto geo = run({"classify", "--x", "|zero", "--y", "|supp:GEO(2,1)", "--power", "2"});
    CHECK(geo.code == 0);
    const auto recs = geo.records();
    REQUIRE(recs.size() == 2);
    CHECK(recs[1]["report"]["agree"] == true);

    const auto sc = run({"scramble", "--family", "symbolic", "--m", "8", "--seed", "7"});
    CHECK(sc.code == 0);
    const auto s = sc.records();
    REQUIRE(s.size() == 29);
    CHECK(s.back()["kind"] == "scramble-summary");
    CHECK(s.back()["qualifying"] == 28);
    for (std::size_t i = 0; i < 28; ++i) CHECK(s[i]["qualifies"] == true);

    const auto tent = run({"scramble", "--family", "tent", "--m", "3", "--horizon", "2048", "--lambda", "0.9",
                           "--grid", "1,2,4"});
    CHECK(tent.code == 0);
    CHECK(tent.records().back()["symbolic_agreement"] == 3);
    CHECK(run({"scramble", "--family", "cubic"}).code == 2);
}

TEST_CASE("cli: subshift, support and interval subcommands") {
    const auto lang = run({"subshift", "lang", "--spec", "hereditary-mixing", "--k", "3"});
    CHECK(lang.code == 0);
    CHECK(lang.records()[2]["count"] == 5);
    CHECK(run({"subshift", "lang", "--spec", "full", "--k", "25"}).code == 3);

    const auto gen = run({"subshift", "gen", "--spec", "hereditary-mixing", "--strategy", "random", "--len", "200"});
    CHECK(gen.code == 0);
    CHECK(gen.records()[0]["membership"]["status"] == "yes");

    CHECK(run({"subshift", "qn", "--p", "THICK(4^n, n)", "--n", "4"}).code == 0);

    const auto sup = run({"support", "--x", "|per:01", "--wordlen", "2"});
    CHECK(sup.code == 0);
    CHECK(sup.records()[0]["estimate"]["surviving"] == Json({"01", "10"}));
    const auto full = run({"support", "--spec", "full", "--samples", "2", "--horizon", "4096"});
    CHECK(full.code == 1);
    CHECK(full.records()[0]["evidence"]["witness"] == "1");
    CHECK(run({"support", "--wordlen", "2"}).code == 2);

    const auto enc = run({"interval", "encode", "--word", "10"});
    CHECK(enc.records()[0]["cylinder"]["lo"] == "3/4");
    const auto it = run({"interval", "itinerary", "--x0", "3/10", "--n", "4"});
    CHECK(it.records()[0]["itinerary"]["word"] == "0110");
    const auto orb = run({"interval", "orbit", "--map", "logistic:4", "--x0", "0.5", "--n", "3"});
    CHECK(orb.records()[0]["values"] == Json({0.5, 1.0, 0.0, 0.0}));
    const auto diam = run({"interval", "diam", "--map", "pl:0,0;1,0.5", "--n", "40"});
    CHECK(diam.records()[0]["report"]["uniformly_proximal"] == true);
    CHECK(run({"interval", "orbit", "--x0", "seven"}).code == 2);
}

TEST_CASE("cli: usage errors and config validation") {
    const auto unknown = run({"frobnicate"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(run({"density", "AP(0,2)", "--bogus"}).code == 2);
    CHECK(run({"--lambda", "1.5", "density", "AP(0,2)"}).code == 2);
    CHECK(run({"--theta", "0", "density", "AP(0,2)"}).code == 2);
    CHECK(run({"--horizon", "100", "--schedule", "16,256", "density", "AP(0,2)"}).code == 2);
    CHECK(run({"--format", "xml", "density", "AP(0,2)"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: formats and config files") {
    const auto csv = run({"--format", "csv", "--horizon", "1024", "density", "AP(0,3)"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("kind,path,length,min_count,max_count,min_ratio,max_ratio\n", 0) == 0);
    CHECK(csv.out.find("density,report,16,5,6,") != std::string::npos);

    const auto pretty = run({"--format", "pretty", "interval", "encode", "--word", "1"});
    CHECK(pretty.out.find("== encode ==") == 0);
    CHECK(pretty.out.find("lo: \"1/2\"") != std::string::npos);

    const std::string path = "bpx_cli_test_config.toml";
    {
        std::ofstream f(path);
        f << "horizon=4096\nlambda=0.9\nseed=11\n";
    }
    const auto cfg = run({"--config", path, "density", "AP(0,2)"});
    std::remove(path.c_str());
    CHECK(cfg.code == 0);
    const auto c = cfg.records()[0]["config"];
    CHECK(c["horizon"] == 4096);
    CHECK(c["lambda"] == 0.9);
    CHECK(c["seed"] == 11);
}

TEST_CASE("cli: every record carries its config and output is deterministic") {
    const std::vector<std::vector<std::string>> matrix{
        {"density", "GEO(2,1) | AP(0,5)", "--horizon", "4096"},
        {"classify", "--x", "|supp:GEO(3,1)", "--y", "|zero", "--horizon", "4096"},
        {"subshift", "gen", "--spec", "hereditary-mixing", "--strategy", "random", "--len", "300", "--seed", "5"},
        {"support", "--spec", "hereditary-mixing", "--samples", "2", "--horizon", "4096", "--seed", "3"},
        {"scramble", "--family", "symbolic", "--m", "4", "--seed", "9", "--horizon", "4096"},
    };
    for (const auto& args : matrix) {
        const auto a = run(args), b = run(args);
        CHECK(a.out == b.out);
        CHECK(a.code == b.code);
        for (const auto& r : a.records()) CHECK(r.contains("config"));
    }
}
