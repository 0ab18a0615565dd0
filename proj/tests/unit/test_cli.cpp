#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ladder/cli.hpp"
#include "ladder/io.hpp"
#include "ladder/oracle.hpp"

using namespace ladder;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(std::string_view name) {
    const fs::path dir = fs::temp_directory_path() / "ladder_test_cli";
    fs::create_directories(dir);
    return dir / name;
}

cplx as_complex(const io::json& j) { return {j["re"].get<double>(), j["im"].get<double>()}; }

}  // namespace

TEST_CASE("scatter prints the four amplitudes as JSON") {
    const Run r = run({"scatter", "--eps", "-0.7", "--kc", "2", "--phi", "pi", "--kl", "0.25pi"});
    REQUIRE(r.code == cli::exit_ok);
    const io::json j = io::json::parse(r.out);
    const ScatteringResult o = oracle_scatter({-0.7, 1.0, 1.0, 2.0, pi}, pi / 4);
    CHECK(std::abs(as_complex(j["t_ll"]) - o.t_ll) < 1e-10);
    CHECK(std::abs(as_complex(j["r_ll"]) - o.r_ll) < 1e-10);
    CHECK(std::abs(as_complex(j["t_rl"]) - o.t_rl) < 1e-10);
    CHECK(std::abs(as_complex(j["r_rl"]) - o.r_rl) < 1e-10);
    CHECK(j["derived"]["xi"].get<double>() == doctest::Approx(4.0));
    CHECK(j["flows"]["t_flow_ll"].is_number());
}

TEST_CASE("scatter output feeds back through --config") {
    const Run first = run({"scatter", "--eps", "0.3", "--xi", "1.5", "--phi", "0.5", "--kl", "1.1"});
    REQUIRE(first.code == cli::exit_ok);
    const fs::path cfg = scratch("scatter.json");
    io::write_file(cfg, first.out);
    const Run second = run({"scatter", "--config", cfg.string()});
    CHECK(second.code == cli::exit_ok);
    CHECK(second.out == first.out);

    const fs::path kv = scratch("scatter.cfg");
    io::write_file(kv, "eps = 0.3\nxi = 1.5\nphi = 0.5\nkl = 1.1\n");
    const Run third = run({"scatter", "--config", kv.string()});
    CHECK(third.code == cli::exit_ok);
    CHECK(third.out == first.out);

    const Run overridden = run({"scatter", "--config", kv.string(), "--eps", "0.4"});
    CHECK(overridden.code == cli::exit_ok);
    CHECK(io::json::parse(overridden.out)["params"]["eps"].get<double>() == 0.4);
}

TEST_CASE("routing command") {
    const Run r = run({"conditions", "routing", "--phi", "0", "--jl", "1", "--jr", "1"});
    REQUIRE(r.code == cli::exit_ok);
    const io::json j = io::json::parse(r.out);
    CHECK(j["xi"].get<double>() == doctest::Approx(2.0));
    CHECK(j["eps"].get<double>() == 0.0);
    CHECK(j["k_l"].get<double>() == doctest::Approx(pi / 2));
    CHECK(j["k_r"].get<double>() == doctest::Approx(pi / 2));
    CHECK(std::abs(j["flows"]["t_flow_rl"].get<double>() - 0.5) < 1e-12);
    CHECK(std::abs(j["flows"]["r_flow_rl"].get<double>() - 0.5) < 1e-12);
    CHECK(std::abs(j["flows"]["t_flow_ll"].get<double>()) < 1e-12);
}

TEST_CASE("blockade and transparency commands") {
    const Run b = run({"conditions", "blockade", "--kl", "0.25pi", "--xi", "4"});
    REQUIRE(b.code == cli::exit_ok);
    const io::json jb = io::json::parse(b.out);
    CHECK(jb["eps"].get<double>() == doctest::Approx(-0.634534).epsilon(1e-6));
    CHECK(jb["abs_t_ll"].get<double>() < 1e-12);

    const Run t = run({"conditions", "transparency", "--gamma", "-1.6", "--eps", "1.7"});
    REQUIRE(t.code == cli::exit_ok);
    const io::json jt = io::json::parse(t.out);
    CHECK(jt["count"] == 2);
    CHECK(jt["two_point_criterion"] == true);
    for (const auto& p : jt["points"]) CHECK(p["abs_r_ll"].get<double>() < 1e-10);
}

TEST_CASE("oracle command") {
    const Run r = run({"oracle", "--eps", "0.2", "--kc", "1", "--phi", "1", "--kl", "1"});
    CHECK(r.code == cli::exit_ok);
    CHECK_FALSE(r.out.empty());
}

TEST_CASE("sweep command writes CSV") {
    const fs::path out = scratch("sweep.csv");
    const Run r = run({"sweep", "--swept", "eps", "--start", "-3", "--stop", "3", "--points", "7", "--kc", "2",
                       "--phi", "pi", "--outputs", "flows", "-o", out.string()});
    REQUIRE(r.code == cli::exit_ok);
    const io::CsvFile f = io::read_csv(out);
    CHECK(f.rows.size() == 7);
    CHECK(f.header.front() == "eps");
    CHECK(f.meta("k_l") == "0.78539816339744828");

    const Run skips = run({"sweep", "--swept", "k_l", "--start", "0", "--stop", "pi", "--points", "3"});
    CHECK(skips.code == cli::exit_ok);
    CHECK(skips.out.find("InvalidArgument") != std::string::npos);
    CHECK(skips.err.find("skipped") != std::string::npos);
}

TEST_CASE("figures command writes one CSV per panel") {
    const fs::path dir = scratch("figs");
    fs::remove_all(dir);
    const Run r = run({"figures", "fig4", "--out-dir", dir.string()});
    REQUIRE(r.code == cli::exit_ok);
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".csv") ++files;
    }
    CHECK(files == 10);
    const io::CsvFile f = io::read_csv(dir / "fig4a.csv");
    CHECK(f.meta("eps") == "-2.02");
    CHECK(f.rows.size() == 512);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == cli::exit_usage);
    CHECK(run({"--help"}).code == cli::exit_ok);
    CHECK(run({"--version"}).code == cli::exit_ok);
    CHECK(run({"scatter", "--bogus", "1"}).code == cli::exit_usage);
    CHECK(run({"figures", "fig9"}).code == cli::exit_usage);

    const Run missing = run({"scatter", "--eps", "0"});
    CHECK(missing.code == cli::exit_usage);
    CHECK(missing.err.find("--kl") != std::string::npos);

    const Run both = run({"scatter", "--kc", "1", "--xi", "1", "--kl", "1"});
    CHECK(both.code == cli::exit_usage);

    const Run bad_angle = run({"scatter", "--kl", "quarter"});
    CHECK(bad_angle.code == cli::exit_usage);
    CHECK(bad_angle.err.find("--kl") != std::string::npos);

    const Run edge = run({"scatter", "--kl", "0"});
    CHECK(edge.code == cli::exit_computation);
    CHECK(edge.err.find("InvalidArgument") != std::string::npos);

    const Run band = run({"scatter", "--eps", "1", "--kc", "1", "--kl", "0.5pi"});
    CHECK(band.code == cli::exit_computation);
    CHECK(band.err.find("BandEdge") != std::string::npos);

    const Run domain = run({"conditions", "routing", "--phi", "0.5pi"});
    CHECK(domain.code == cli::exit_computation);
    CHECK(domain.err.find("RoutingDomain") != std::string::npos);

    const Run gamma = run({"conditions", "transparency", "--gamma", "0", "--eps", "1"});
    CHECK(gamma.code == cli::exit_computation);
    CHECK(gamma.err.find("GammaSingular") != std::string::npos);

    const Run spec = run({"sweep", "--swept", "eps", "--start", "1", "--stop", "0"});
    CHECK(spec.code == cli::exit_computation);
    CHECK(spec.err.find("SpecInvalid") != std::string::npos);

    const fs::path cfg = scratch("unknown.cfg");
    io::write_file(cfg, "foo = 1\n");
    const Run unknown = run({"scatter", "--config", cfg.string(), "--kl", "1"});
    CHECK(unknown.code == cli::exit_usage);
    CHECK(unknown.err.find("foo") != std::string::npos);
}
