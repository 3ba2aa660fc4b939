#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "json.hpp"
#include "leosim/analytic.hpp"
#include "leosim/cli.hpp"

using namespace leosim;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("leosim-cli-" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream s(line);
        for (std::string cell; std::getline(s, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("simulate without control matches the closed form", "[cli]") {
    const fs::path dir = scratch("sim");
    const Run r = cli({"simulate", "--gamma0", "1", "--Gamma", "5", "--pulse", "none", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "alpha.csv");
    REQUIRE(rows.size() == 10001);
    const BathKernel k(1.0, 5.0);
    double worst = 0.0;
    for (const auto& row : rows) {
        const complex exact = analytic_no_control(complex{5, 0}, 1.0, k, row[0]);
        worst = std::max(worst, std::abs(complex{row[1], row[2]} - exact));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("simulate with Gamma = 0 keeps |alpha| constant", "[cli]") {
    const fs::path dir = scratch("free");
    const Run r = cli({"simulate", "--Gamma", "0", "--pulse", "rect", "--omega1", "8", "--T", "0.05", "--Delta-over-T",
                       "0.7", "--out", dir.string(), "--name", "free"});
    REQUIRE(r.code == 0);
    for (const auto& row : read_csv(dir / "free.csv")) REQUIRE(std::abs(row[3] - 5.0) < 1e-10);
}

TEST_CASE("simulate flag validation", "[cli]") {
    auto expect_2 = [](std::vector<std::string> args, const std::string& flag) {
        const Run r = cli(args);
        INFO(r.err);
        CHECK(r.code == 2);
        CHECK(r.err.find(flag) != std::string::npos);
    };
    expect_2({"simulate", "--dt", "-1"}, "--dt");
    expect_2({"simulate", "--dt", "0.003"}, "--dt");
    expect_2({"simulate", "--gamma0", "0"}, "--gamma0");
    expect_2({"simulate", "--Gamma", "-1"}, "--Gamma");
    expect_2({"simulate", "--t-max", "0"}, "--t-max");
    expect_2({"simulate", "--pulse", "triangle"}, "--pulse");
    expect_2({"simulate", "--pulse", "rect", "--omega1", "8"}, "--T");
    expect_2({"simulate", "--pulse", "rect", "--omega1", "8", "--T", "0.05", "--Delta-over-T", "1.5"}, "--Delta-over-T");
    expect_2({"simulate", "--omega1", "8"}, "--omega1");
    expect_2({"simulate", "--pulse", "zero", "--omega3", "25", "--T3", "0.5", "--T", "0.05"}, "--T");
    expect_2({"simulate", "--seed", "3"}, "--seed");
    expect_2({"simulate", "--W", "1"}, "--W");
    expect_2({"simulate", "--markov", "--gamma0", "2"}, "--markov");
    expect_2({"simulate", "--method", "euler"}, "--method");
    expect_2({"simulate", "--format", "xml"}, "--format");
    expect_2({"simulate", "--dt", "abc"}, "--dt");
    expect_2({"simulate", "--bogus"}, "--bogus");
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("simulate accepts scientific notation, noise, methods and JSON", "[cli]") {
    const fs::path dir = scratch("misc");
    const std::vector<std::string> base = {"simulate", "--pulse", "rect", "--omega1", "1.5e1", "--T", "5e-2",
                                           "--Delta-over-T", "0.5", "--t-max", "2", "--out", dir.string()};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return cli(args);
    };
    REQUIRE(with({"--name", "ode"}).code == 0);
    REQUIRE(with({"--name", "quad", "--method", "quadrature"}).code == 0);
    REQUIRE(with({"--name", "an", "--method", "analytic"}).code == 0);
    const auto o = read_csv(dir / "ode.csv"), q = read_csv(dir / "quad.csv"), a = read_csv(dir / "an.csv");
    CHECK(std::abs(o.back()[3] - q.back()[3]) < 1e-7);
    CHECK(std::abs(o.back()[3] - a.back()[3]) < 1e-9);

    REQUIRE(with({"--name", "n1", "--W", "1", "--seed", "5"}).code == 0);
    REQUIRE(with({"--name", "n2", "--W", "1", "--seed", "5"}).code == 0);
    std::ifstream f1(dir / "n1.csv"), f2(dir / "n2.csv");
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str().substr(s1.str().find('\n')) == s2.str().substr(s2.str().find('\n')));

    REQUIRE(with({"--name", "j", "--format", "json"}).code == 0);
    std::ifstream jf(dir / "j.json");
    const auto doc = nlohmann::json::parse(jf);
    CHECK(doc["curves"][0]["name"] == "j");

    const Run m = cli({"simulate", "--markov", "--out", dir.string(), "--name", "m"});
    REQUIRE(m.code == 0);
    CHECK(std::abs(read_csv(dir / "m.csv").back()[3] - 5.0 * std::exp(-25.0)) < 1e-20);
}

TEST_CASE("figure subcommand", "[cli]") {
    const fs::path dir = scratch("figure");
    const Run r = cli({"figure", "fig1a", "fig3c", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "fig1a.csv"));
    CHECK(fs::exists(dir / "fig1a.report.json"));
    std::ifstream in(dir / "fig3c.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,none.re,none.im,none.abs,rect.re,rect.im,rect.abs,sine.re,sine.im,sine.abs");

    const Run bad = cli({"figure", "nosuch", "--out", dir.string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("fig1a") != std::string::npos);

    const Run alias = cli({"figure", "fig4", "--out", dir.string(), "--format", "json"});
    CHECK(alias.code == 0);
    CHECK(fs::exists(dir / "fig4a.json"));
    CHECK(fs::exists(dir / "fig4b.json"));
}

TEST_CASE("output directory comes from the environment when --out is absent", "[cli]") {
    const fs::path env_dir = scratch("env");
    const fs::path flag_dir = scratch("flag");
    ::setenv(out_dir_env, env_dir.c_str(), 1);
    CHECK(cli({"figure", "fig2d"}).code == 0);
    CHECK(fs::exists(env_dir / "fig2d.csv"));
    CHECK(cli({"figure", "fig2d", "--out", flag_dir.string()}).code == 0);
    CHECK(fs::exists(flag_dir / "fig2d.csv"));
    ::unsetenv(out_dir_env);
}

TEST_CASE("sweep subcommand", "[cli]") {
    const fs::path dir = scratch("sweep");
    const Run r = cli({"sweep", "--scenario", "fig2a", "--param", "omega1", "--values", "8,15,50", "--expect",
                       "increasing", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "fig2a-sweep-omega1.csv"));
    CHECK(fs::exists(dir / "fig2a-sweep-omega1.report.json"));

    // an expectation that does not hold
    const Run wrong = cli({"sweep", "--scenario", "fig2a", "--param", "omega1", "--values", "8,15,50", "--expect",
                           "decreasing", "--out", dir.string()});
    CHECK(wrong.code == 1);
    CHECK(cli({"sweep", "--scenario", "fig2a", "--param", "nope", "--values", "1"}).code == 2);
    CHECK(cli({"sweep", "--scenario", "fig2a", "--param", "omega1"}).code == 2);
}

TEST_CASE("list subcommand and user catalogs", "[cli]") {
    const Run r = cli({"list"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("fig4b") != std::string::npos);

    const Run j = cli({"list", "--json"});
    REQUIRE(j.code == 0);
    const fs::path dir = scratch("catalog");
    fs::create_directories(dir);
    auto doc = nlohmann::json::parse(j.out);
    doc["scenarios"] = nlohmann::json::array({doc["scenarios"][11]});
    doc["scenarios"][0]["name"] = "custom";
    std::ofstream(dir / "c.json") << doc.dump();
    const Run custom = cli({"figure", "custom", "--catalog", (dir / "c.json").string(), "--out", dir.string()});
    CHECK(custom.code == 0);
    CHECK(fs::exists(dir / "custom.csv"));
    CHECK(cli({"list", "--catalog", (dir / "missing.json").string()}).code == 2);
}

TEST_CASE("validate subcommand", "[cli]") {
    const fs::path dir = scratch("validate");
    const Run roots = cli({"validate", "--only", "roots", "--out", dir.string()});
    REQUIRE(roots.code == 0);
    const auto doc = nlohmann::json::parse(roots.out);
    CHECK(doc["passed"] == true);
    for (const auto& c : doc["checks"]) CHECK(c["group"] == "roots");

    const Run frame = cli({"validate", "--only", "boundary-frame", "--out", dir.string()});
    REQUIRE(frame.code == 0);
    CHECK(fs::exists(dir / "boundary_frame_discrepancy.json"));

    const Run injected = cli({"validate", "--only", "ode-vs-quadrature", "--inject", "kernel-sign", "--out", dir.string()});
    CHECK(injected.code == 1);
    CHECK(injected.err.find("ode-vs-quadrature") != std::string::npos);
    CHECK(nlohmann::json::parse(injected.out)["first_failure"].get<std::string>().starts_with("ode-vs-quadrature"));

    CHECK(cli({"validate", "--only", "bogus"}).code == 2);
    CHECK(cli({"validate", "--inject", "everything"}).code == 2);
}
