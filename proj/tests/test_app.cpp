#include "oracles/oracles.hpp"

#include "zmw/app/commands.hpp"
#include "zmw/app/config.hpp"
#include "zmw/app/csv.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

using namespace zmw;
using namespace zmw::app;
namespace fs = std::filesystem;

namespace
{
struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "zmw");
    std::vector<const char *> argv;
    for (auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / ("zmw_test_app_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path &path, const std::string &text)
{
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

std::string slurp(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// "key: value" lines of a command summary.
std::map<std::string, std::string> report(const std::string &text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (const auto colon = line.find(": "); colon != std::string::npos)
            kv[line.substr(0, colon)] = line.substr(colon + 2);
    return kv;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path &path)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line))
    {
        std::vector<std::string> cells;
        std::istringstream l(line);
        std::string cell;
        while (std::getline(l, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

int line_of_error(const std::string &text, const std::string &key)
{
    std::istringstream in(text);
    try
    {
        parse_run_config(in, "t.conf");
    }
    catch (const ConfigError &e)
    {
        CHECK(std::string(e.what()).find(key) != std::string::npos);
        return e.line();
    }
    return -1;
}
} // namespace

TEST_CASE("config defaults and overrides")
{
    std::istringstream in("# comment\ngeometry.radius_nm = 40\n\natom.kind = two_level   # trailing\n"
                          "atom.resonance_wavelength_nm = 600\nmodel.kind = pec_deep\nscan.points=11\n");
    const auto c = parse_run_config(in, "t.conf");
    CHECK(c.radius_nm == 40.0);
    CHECK(c.depth_nm == 100.0);
    CHECK(c.atom == AtomKind::TwoLevel);
    CHECK(c.model == ModelKind::PecDeep);
    CHECK(c.points == 11);
    CHECK(c.lambda_min_nm == 599.5);
    CHECK(c.lambda_max_nm == 601.0);
    CHECK(c.atom_z_nm == 50.0);
    CHECK(c.xibar == 2.0);
    CHECK(c.green_re == 0.0);
    CHECK(c.line_of("geometry.radius_nm") == 2);
    CHECK(c.line_of("atom.kind") == 4);
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("config errors carry line numbers")
{
    CHECK(line_of_error("geometry.radius_nm = 50\nbogus.key = 1\n", "bogus.key") == 2);
    CHECK(line_of_error("geometry.radius_nm = 50\n\ngeometry.radius_nm = 40\n", "duplicate") == 3);
    CHECK(line_of_error("geometry.radius_nm 50\n", "key = value") == 1);
    CHECK(line_of_error("#\ngeometry.depth_nm = abc\n", "geometry.depth_nm") == 2);
    CHECK(line_of_error("model.kind = fano_eq\n", "model.kind") == 1);
    CHECK(line_of_error("scan.points = -3\n", "scan.points") == 1);
    CHECK(line_of_error("output.format = json\n", "csv") == 1);

    std::istringstream in("geometry.radius_nm = 50\nscan.lambda_min_nm = 533\nscan.lambda_max_nm = 532\n");
    const auto c = parse_run_config(in, "t.conf");
    try
    {
        validate(c);
        FAIL("expected a validation error");
    }
    catch (const ConfigError &e)
    {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).rfind("t.conf:2:", 0) == 0);
    }
}

TEST_CASE("schema text is itself a valid config")
{
    std::istringstream in(config_schema());
    const auto c = parse_run_config(in, "schema");
    CHECK_NOTHROW(validate(c));
    CHECK(c.radius_nm == RunConfig{}.radius_nm);
    CHECK(c.points == RunConfig{}.points);
    CHECK(c.xibar == RunConfig{}.xibar);
}

TEST_CASE("CSV round trip is exact")
{
    Spectrum s;
    for (int i = 0; i < 50; ++i)
        s.points.push_back({531.0 + i * 0.0123456789, std::exp(0.37 * i) / 7.0});
    std::ostringstream out;
    write_spectrum_csv(out, s);
    CHECK(out.str().rfind(std::string(kSpectrumHeader) + "\n", 0) == 0);
    CHECK(out.str().find('\r') == std::string::npos);
    std::istringstream in(out.str());
    const auto back = read_spectrum_csv(in);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        CHECK(back.points[i].wavelength_nm == s.points[i].wavelength_nm);
        CHECK(back.points[i].value == s.points[i].value);
    }
    CHECK(format_summary(55.04) == "5.50400000e+01");
    CHECK(format_exact(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV errors name the line")
{
    auto line_of = [](const std::string &text) {
        std::istringstream in(text);
        try
        {
            read_spectrum_csv(in, "x.csv");
        }
        catch (const ConfigError &e)
        {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("wavelength_nm,transmission\n1,1\n2,oops\n") == 3);
    CHECK(line_of("1,1\n2\n") == 2);
    CHECK(line_of("1,1\n1,2\n") == 2);
    CHECK(line_of("1,1\n2,-2\n") == 2);
    CHECK(line_of("wavelength_nm,transmission\n") == 0);
    CHECK_THROWS_AS(read_spectrum_csv(fs::path("/nonexistent/file.csv")), ConfigError);
}

TEST_CASE("spectrum command: cardinality, determinism, errors")
{
    const auto dir = scratch("spectrum");
    const auto conf = write_file(dir / "run.conf", "geometry.radius_nm = 50\nscan.points = 501\noutput.path = " +
                                                       (dir / "a.csv").string() + "\n");
    const auto first = cli({"spectrum", conf.string()});
    REQUIRE(first.code == 0);
    const auto rows = csv_rows(dir / "a.csv");
    CHECK(rows.size() == 502);
    CHECK(rows.front() == std::vector<std::string>{"wavelength_nm", "transmission"});
    const std::string bytes = slurp(dir / "a.csv");
    CHECK(cli({"spectrum", conf.string(), "--threads", "4"}).code == 0);
    CHECK(slurp(dir / "a.csv") == bytes);
    CHECK(cli({"spectrum", conf.string(), "-o", (dir / "b.csv").string()}).code == 0);
    CHECK(slurp(dir / "b.csv") == bytes);
    const auto kv = report(first.out);
    CHECK(kv.at("zero_mode") == "yes");
    CHECK(kv.count("peak"));

    const auto bad = write_file(dir / "bad.conf", "scan.lambda_min_nm = 533\nscan.lambda_max_nm = 531\noutput.path = " +
                                                      (dir / "bad.csv").string() + "\n");
    const auto r = cli({"spectrum", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.conf:1:") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "bad.csv"));

    const auto regime = write_file(dir / "regime.conf", "geometry.radius_nm = 200\nmodel.kind = pec_deep\noutput.path = " +
                                                            (dir / "regime.csv").string() + "\n");
    const auto rr = cli({"spectrum", regime.string()});
    CHECK(rr.code == 2);
    CHECK(rr.err.find("zero-mode") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "regime.csv"));

    CHECK(cli({"spectrum", (dir / "missing.conf").string()}).code == 2);
}

TEST_CASE("off-axis atoms report the wall shifts")
{
    const auto dir = scratch("offaxis");
    const auto conf = write_file(dir / "run.conf", "atom.x_nm = 25\nscan.points = 50\noutput.path = " +
                                                       (dir / "s.csv").string() + "\n");
    const auto r = cli({"spectrum", conf.string()});
    REQUIRE(r.code == 0);
    const auto kv = report(r.out);
    CHECK(std::stod(kv.at("off_axis_shift_perpendicular")) == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(std::stod(kv.at("off_axis_shift_parallel")) == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("tabulated wall material resolves next to the config")
{
    const auto dir = scratch("tabulated");
    write_file(dir / "al.csv", "# aluminium-like\n500, -40, 10\n560, -45, 12\n");
    const auto conf = write_file(dir / "run.conf", "material.kind = tabulated\nmaterial.table = al.csv\natom.x_nm = 10\n"
                                                   "scan.points = 20\noutput.path = " +
                                                       (dir / "s.csv").string() + "\n");
    const auto r = cli({"spectrum", conf.string()});
    CHECK(r.code == 0);
    CHECK(report(r.out).count("off_axis_shift_parallel"));
    const auto outside = write_file(dir / "out.conf", "material.kind = tabulated\nmaterial.table = al.csv\n"
                                                      "atom.x_nm = 10\natom.resonance_wavelength_nm = 600\n"
                                                      "output.path = " +
                                                          (dir / "t.csv").string() + "\n");
    CHECK(cli({"spectrum", outside.string()}).code == 2);
}

TEST_CASE("sweep command")
{
    const auto dir = scratch("sweep");
    const auto conf = write_file(dir / "run.conf", "model.kind = fano\nmodel.xibar = 2\nscan.points = 301\noutput.path = " +
                                                       (dir / "s.csv").string() + "\n");
    CHECK(cli({"sweep", conf.string(), "--axis", "radius", "--values", ""}).code == 2);
    CHECK(cli({"sweep", conf.string(), "--axis", "width", "--values", "1"}).code == 2);
    CHECK(cli({"sweep", conf.string(), "--axis", "radius", "--values", "40,x"}).code == 2);

    const auto r = cli({"sweep", conf.string(), "--axis", "radius", "--values", "50,40,45", "--threads", "3"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(dir / "s_radius_summary.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][0] == "radius");
    CHECK(rows[1][0] == "50");
    CHECK(rows[2][0] == "40");
    CHECK(rows[3][0] == "45");
    for (int i = 1; i <= 3; ++i)
        CHECK(rows[i].back() == "ok");
    const std::string summary = slurp(dir / "s_radius_summary.csv");
    const std::string spectrum40 = slurp(dir / "s_radius_40.csv");
    CHECK(cli({"sweep", conf.string(), "--axis", "radius", "--values", "50,40,45", "--threads", "1"}).code == 0);
    CHECK(slurp(dir / "s_radius_summary.csv") == summary);
    CHECK(slurp(dir / "s_radius_40.csv") == spectrum40);
}

TEST_CASE("sweep keeps going after a failing value")
{
    const auto dir = scratch("sweep_fail");
    const auto conf = write_file(dir / "run.conf", "scan.points = 50\noutput.path = " + (dir / "s.csv").string() + "\n");
    const auto r = cli({"sweep", conf.string(), "--axis", "radius", "--values", "50,-5,40"});
    CHECK(r.code == 3);
    const auto rows = csv_rows(dir / "s_radius_summary.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].back() == "ok");
    CHECK(rows[2].back().rfind("error:", 0) == 0);
    CHECK(rows[3].back() == "ok");
    CHECK(fs::exists(dir / "s_radius_50.csv"));
    CHECK(fs::exists(dir / "s_radius_40.csv"));
    CHECK_FALSE(fs::exists(dir / "s_radius_-5.csv"));
}

TEST_CASE("deep PEC depth sweep has one peak value")
{
    const auto dir = scratch("depth");
    const auto conf = write_file(dir / "run.conf", "model.kind = pec_deep\nscan.points = 401\noutput.path = " +
                                                       (dir / "s.csv").string() + "\n");
    REQUIRE(cli({"sweep", conf.string(), "--axis", "depth", "--values", "50,100,400"}).code == 0);
    const auto rows = csv_rows(dir / "s_depth_summary.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][1] == rows[2][1]);
    CHECK(rows[1][1] == rows[3][1]);
    CHECK(slurp(dir / "s_depth_50.csv") == slurp(dir / "s_depth_400.csv"));
}

namespace
{
std::vector<double> radius_sweep_peaks(const std::string &name)
{
    const auto dir = scratch(name);
    const auto conf = write_file(dir / "run.conf", "model.kind = fano\nmodel.xibar = 1\natom.kind = two_level\n"
                                                   "scan.lambda_min_nm = 531.99\nscan.lambda_max_nm = 532.01\n"
                                                   "scan.points = 4001\noutput.path = " +
                                                       (dir / "s.csv").string() + "\n");
    REQUIRE(cli({"sweep", conf.string(), "--axis", "radius", "--values", "40,45,50"}).code == 0);
    const auto rows = csv_rows(dir / "s_radius_summary.csv");
    return {std::stod(rows[1][1]), std::stod(rows[2][1]), std::stod(rows[3][1])};
}
} // namespace

TEST_CASE("radius sweep peaks follow the cube law")
{
    const auto peaks = radius_sweep_peaks("cube");
    const double radii[] = {40.0, 45.0, 50.0};
    for (int i = 0; i < 3; ++i)
    {
        const auto A = oracle::fano_coupling(1.0L, 532.0L, radii[i]);
        const auto [smax, smin] = oracle::fano_extremum_locations(A);
        CHECK(peaks[i] == doctest::Approx(double(oracle::fano(A, smax))).epsilon(1e-5));
    }
}

// With xibar held fixed the coupling scales as R^-3, so the peaks for
// R = 40, 45, 50 nm are about 204, 102 and 55: they do not agree within 15%.
TEST_CASE("radius sweep peaks agree within 15%" * doctest::should_fail())
{
    const auto peaks = radius_sweep_peaks("weak");
    const auto [lo, hi] = std::minmax_element(peaks.begin(), peaks.end());
    CHECK(*hi <= 1.15 * *lo);
}

TEST_CASE("fit command recovers xibar from a generated spectrum")
{
    const auto dir = scratch("fit");
    const auto conf = write_file(dir / "run.conf", "model.kind = fano\nmodel.xibar = 1\noutput.path = " +
                                                       (dir / "s.csv").string() + "\n");
    REQUIRE(cli({"spectrum", conf.string()}).code == 0);
    const auto r = cli({"fit", (dir / "s.csv").string(), "--lambda0", "532", "--radius", "50"});
    REQUIRE(r.code == 0);
    const auto kv = report(r.out);
    CHECK(kv.at("status") == "converged");
    CHECK(std::abs(std::stod(kv.at("xibar_re")) - 1.0) < 0.001);
    CHECK(std::abs(std::stod(kv.at("xibar_im"))) < 0.001);
    CHECK(std::abs(std::stod(kv.at("lambda_tilde_nm")) - 532.0) < 1e-6);

    std::string flat = "wavelength_nm,transmission\n";
    for (int i = 0; i < 20; ++i)
        flat += std::to_string(530 + i) + ",1\n";
    write_file(dir / "flat.csv", flat);
    const auto f = cli({"fit", (dir / "flat.csv").string()});
    CHECK(f.code == 0);
    CHECK(std::abs(std::stod(report(f.out).at("coupling_abs"))) < 1e-10);

    CHECK(cli({"fit", (dir / "none.csv").string()}).code == 2);
    write_file(dir / "bad.csv", "wavelength_nm,transmission\n1,1\n2,1\nthree,1\n");
    const auto b = cli({"fit", (dir / "bad.csv").string()});
    CHECK(b.code == 2);
    CHECK(b.err.find("bad.csv:4:") != std::string::npos);
}

TEST_CASE("modes, feasibility, schema and usage")
{
    const auto m = cli({"modes", "--radius", "50", "--lambda", "532"});
    CHECK(m.code == 0);
    CHECK(m.out.find("TE,1,1,1.84118378e+00") != std::string::npos);
    CHECK(report(m.out).at("zero_mode") == "yes");
    CHECK(report(cli({"modes", "--radius", "200", "--lambda", "532"}).out).at("zero_mode") == "no");
    CHECK(cli({"modes", "--radius", "-1", "--lambda", "532"}).code == 2);

    const auto f = cli({"feasibility", "--depth", "100", "--speed", "1", "--lifetime", "26e-9", "--mass", "1.443e-25"});
    CHECK(f.code == 0);
    CHECK(report(f.out).at("dwell_time_s") == "1.00000000e-07");
    CHECK(std::abs(std::stod(report(f.out).at("de_broglie_nm")) - 4.59) < 0.01);

    CHECK(cli({"schema"}).out == config_schema());
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"modes", "--radius", "50"}).code == 2);
}

TEST_CASE("installed binary exit codes")
{
    auto status = [](const std::string &args) {
        const int raw = std::system((std::string(ZMW_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("--help") == 0);
    CHECK(status("spectrum /nonexistent/run.conf") == 2);
    CHECK(status("modes --radius 50 --lambda 532") == 0);
}
