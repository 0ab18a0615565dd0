#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ladder/errors.hpp"
#include "ladder/io.hpp"
#include "ladder/sweep.hpp"

using namespace ladder;
namespace fs = std::filesystem;

namespace {

fs::path scratch(std::string_view name) {
    const fs::path dir = fs::temp_directory_path() / "ladder_test_io";
    fs::create_directories(dir);
    return dir / name;
}

void write_text(const fs::path& p, std::string_view text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

bool throws_kind(auto&& fn, ErrorKind kind) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

}  // namespace

TEST_CASE("angles and numbers") {
    CHECK(io::parse_angle("0.25pi") == doctest::Approx(pi / 4).epsilon(1e-16));
    CHECK(io::parse_angle("pi") == pi);
    CHECK(io::parse_angle("-pi") == -pi);
    CHECK(io::parse_angle("1*pi") == pi);
    CHECK(io::parse_angle("-0.5*pi") == -pi / 2);
    CHECK(io::parse_angle(" 1.5 ") == 1.5);
    CHECK(io::parse_number("+2.5") == 2.5);
    CHECK(io::parse_number("1e-3") == 1e-3);
    CHECK(throws_kind([] { io::parse_number("1.5x"); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([] { io::parse_number(""); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([] { io::parse_angle("xpi"); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([] { io::parse_angle("half"); }, ErrorKind::InvalidArgument));
}

TEST_CASE("numbers keep 17 significant digits") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
    const io::json j{{"x", 0.1}, {"n", 3}, {"s", "a"}, {"z", nullptr}};
    const std::string text = io::dump(j);
    CHECK(text.find("0.10000000000000001") != std::string::npos);
    CHECK(io::json::parse(text)["x"].get<double>() == 0.1);
    CHECK(io::json::parse(text)["n"].get<int>() == 3);
    CHECK(io::number(std::nan("")).is_null());
    CHECK(io::dump(io::json::array(), 2) == "[]");
}

TEST_CASE("csv round trip") {
    SweepSpec s;
    s.range = {0.0, pi, 6, GridKind::Closed};
    s.fixed = {-0.7, 1.0, 1.0, 2.0, pi};
    s.outputs = output::flows | output::regime;
    const SweepTable t = run_sweep(s);
    REQUIRE(t.skips.size() == 2);

    const std::string text = io::to_csv(t);
    CHECK(text.find('\r') == std::string::npos);
    const fs::path path = scratch("round_trip.csv");
    io::write_file(path, text);
    const io::CsvFile f = io::read_csv(path);
    CHECK(f.meta("swept") == "k_l");
    CHECK(f.meta("rows") == "4");
    CHECK(f.meta("skipped") == "2");
    CHECK(f.header.back() == "skip_reason");
    CHECK(f.header.front() == "k_l");
    REQUIRE(f.rows.size() == 6);
    CHECK(f.rows.front().back() == "InvalidArgument");
    CHECK(f.rows.back().back() == "InvalidArgument");
    CHECK(f.rows.front()[f.column("flow_sum")].empty());

    const std::size_t col = f.column("flow_t_ll");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CHECK(f.rows[r + 1].back().empty());
        CHECK(std::stod(f.rows[r + 1][col]) == t.rows[r][t.column("flow_t_ll")]);
    }
    CHECK(throws_kind([&] { (void)f.column("nope"); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([] { io::read_csv(scratch("missing.csv")); }, ErrorKind::IoError));
}

TEST_CASE("json table") {
    SweepSpec s;
    s.range = {0.5, 1.5, 3, GridKind::Closed};
    s.outputs = output::k_r;
    const io::json j = io::table(run_sweep(s));
    CHECK(j["schema"].size() == 3);
    CHECK(j["rows"].size() == 3);
    CHECK(j["skips"].empty());
    CHECK(j["metadata"]["outputs"] == "k_R");
}

TEST_CASE("config files") {
    const fs::path kv = scratch("params.cfg");
    write_text(kv, "# comment\n\neps = -0.7\nkc = 2\nphi = pi\n");
    const io::ConfigFile a = io::load_config(kv);
    CHECK_FALSE(a.from_json);
    CHECK(a.entries.at("eps") == "-0.7");
    CHECK(a.entries.at("kc") == "2");
    CHECK(a.entries.at("phi") == "pi");

    const fs::path js = scratch("params.json");
    write_text(js, R"({"k_l": 0.5, "params": {"eps": 1.25, "phi": 0.0}, "flows": {"t_ll": 1}})");
    const io::ConfigFile b = io::load_config(js);
    CHECK(b.from_json);
    CHECK(io::parse_number(b.entries.at("k_l")) == 0.5);
    CHECK(io::parse_number(b.entries.at("eps")) == 1.25);
    CHECK(b.entries.count("t_ll") == 0);

    const fs::path bad = scratch("bad.cfg");
    write_text(bad, "eps 0.3\n");
    CHECK(throws_kind([&] { io::load_config(bad); }, ErrorKind::InvalidArgument));
    write_text(bad, "{ broken");
    CHECK(throws_kind([&] { io::load_config(bad); }, ErrorKind::InvalidArgument));
    CHECK(throws_kind([] { io::load_config(scratch("absent.cfg")); }, ErrorKind::IoError));
}

TEST_CASE("write_file creates parent directories") {
    const fs::path nested = scratch("deep") / "er" / "file.txt";
    fs::remove_all(scratch("deep"));
    io::write_file(nested, "hello\n");
    std::ifstream in(nested);
    std::string line;
    std::getline(in, line);
    CHECK(line == "hello");
}
