#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

// End-to-end checks of the installed command surface: every assertion runs
// the real binary named by CAVITYTRIO_BIN.

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string binary() {
    const char* bin = std::getenv("CAVITYTRIO_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "CAVITYTRIO_BIN must point at the CLI binary");
    return bin;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("cavitytrio_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string command = binary() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json slurp_json(const fs::path& path) { return json::parse(slurp(path)); }

struct Csv {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return i;
        }
        REQUIRE_MESSAGE(false, "no column " << name);
        return 0;
    }
};

Csv read_csv(const fs::path& path) {
    Csv csv;
    std::istringstream in(slurp(path));
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (header) {
            csv.columns = cells;
            header = false;
        } else {
            csv.rows.push_back(cells);
        }
    }
    return csv;
}

}  // namespace

TEST_CASE("spectrum of the tuned preset transmits fully at the center") {
    const auto dir = fresh_dir("spectrum");
    REQUIRE(run("spectrum --preset Fig1-inset --points 101 --x-range -1:1 --out " +
                dir.string()) == 0);
    const auto csv = read_csv(dir / "spectrum.csv");
    REQUIRE(csv.rows.size() == 101);
    const auto& center = csv.rows[50];
    CHECK(std::stod(center[csv.column("x_mhz")]) == 0.0);
    CHECK(std::stod(center[csv.column("abs_t")]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::stod(center[csv.column("re_eps")]) == 0.0);
}

TEST_CASE("repeated runs are byte identical") {
    const auto dir_a = fresh_dir("det_a");
    const auto dir_b = fresh_dir("det_b");
    const std::string args = "spectrum --preset Fig3a --points 51 --out ";
    REQUIRE(run(args + dir_a.string()) == 0);
    REQUIRE(run(args + dir_b.string()) == 0);
    CHECK(slurp(dir_a / "spectrum.csv") == slurp(dir_b / "spectrum.csv"));
    CHECK(slurp(dir_a / "spectrum.json") == slurp(dir_b / "spectrum.json"));
}

TEST_CASE("single-point grid emits a single row") {
    const auto dir = fresh_dir("single");
    REQUIRE(run("spectrum --preset Fig1-inset --points 1 --x-range 0:0 --out " + dir.string()) ==
            0);
    CHECK(read_csv(dir / "spectrum.csv").rows.size() == 1);
}

TEST_CASE("evolve reports the saturated gain in the sidecar") {
    const auto dir = fresh_dir("evolve");
    REQUIRE(run("evolve --preset Fig1b --svg --out " + dir.string()) == 0);
    const auto report = slurp_json(dir / "evolve.json");
    CHECK(report.at("saturated_gain_mhz").get<double>() ==
          doctest::Approx(0.195).epsilon(0.005 / 0.195));
    CHECK_FALSE(report.at("stabilized_at_us").is_null());
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "evolve.svg"));
    CHECK(fs::exists(dir / "gain.svg"));
}

TEST_CASE("a stronger first coupling suppresses the settled residual field") {
    double previous = 1e300;
    for (const std::string j1 : {"2.0", "4.0", "8.0"}) {
        const auto dir = fresh_dir("figs1c_" + j1);
        REQUIRE(run("evolve --preset FigS1c --override /couplings_mhz/0=" + j1 + " --out " +
                    dir.string()) == 0);
        const auto report = slurp_json(dir / "evolve.json");
        REQUIRE_FALSE(report.at("stabilized_at_us").is_null());
        const double n1 = report.at("final_photon_numbers")[0].get<double>();
        CHECK(n1 < previous);
        previous = n1;
    }
}

TEST_CASE("zero horizon emits the initial row only") {
    const auto dir = fresh_dir("t0");
    REQUIRE(run("evolve --preset Fig1b --t-end 0 --out " + dir.string()) == 0);
    CHECK(read_csv(dir / "trajectory.csv").rows.size() == 1);
}

TEST_CASE("lab frame rotates the recorded amplitudes") {
    const auto rot_dir = fresh_dir("frame_rot");
    const auto lab_dir = fresh_dir("frame_lab");
    const std::string overrides =
        " --override /resonators/0/omega_mhz=3.0 --override /resonators/1/omega_mhz=3.0"
        " --override /resonators/2/omega_mhz=3.0 --override /pump/detuning_mhz=0.0";
    REQUIRE(run("evolve --preset Fig1b --t-end 2.0" + overrides + " --out " + rot_dir.string()) ==
            0);
    REQUIRE(run("evolve --preset Fig1b --t-end 2.0 --frame lab" + overrides + " --out " +
                lab_dir.string()) == 0);
    const auto rot = read_csv(rot_dir / "trajectory.csv");
    const auto lab = read_csv(lab_dir / "trajectory.csv");
    REQUIRE(rot.rows.size() == lab.rows.size());
    const auto& last_rot = rot.rows.back();
    const auto& last_lab = lab.rows.back();
    const double t = std::stod(last_rot[rot.column("t_us")]);
    const std::complex<double> a_rot(std::stod(last_rot[rot.column("re_a2")]),
                                     std::stod(last_rot[rot.column("im_a2")]));
    const std::complex<double> a_lab(std::stod(last_lab[lab.column("re_a2")]),
                                     std::stod(last_lab[lab.column("im_a2")]));
    const std::complex<double> expected =
        a_rot * std::exp(std::complex<double>(0.0, -3.0 * t));
    CHECK(std::abs(a_lab - expected) <= 1e-9 * std::abs(a_rot));
}

TEST_CASE("stability map annotates the reference couplings") {
    const auto dir = fresh_dir("map");
    REQUIRE(run("stability-map --preset FigS2a --j1-grid 0.02:0.4:12 --j2-grid 0.02:0.2:12 "
                "--svg --out " +
                dir.string()) == 0);
    const auto report = slurp_json(dir / "stability_map.json");
    CHECK(report.at("sqrt_k1k2_mhz").get<double>() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(report.at("sqrt_k2k3_mhz").get<double>() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(report.at("unstable_cells").get<int>() > 0);
    CHECK(fs::exists(dir / "stability_map.svg"));
    const auto csv = read_csv(dir / "stability_map.csv");
    CHECK(csv.rows.size() == 144);
}

TEST_CASE("the scan labels the band below the stability boundary unstable") {
    const auto dir = fresh_dir("scan");
    REQUIRE(run("scan --preset Fig4 --j2-grid 0.2:0.7:26 --out " + dir.string()) == 0);
    const auto csv = read_csv(dir / "scan.csv");
    const auto j2_col = csv.column("j2_mhz");
    const auto label_col = csv.column("label");
    const auto t_col = csv.column("t0_sq");
    for (const auto& row : csv.rows) {
        const double j2 = std::stod(row[j2_col]);
        if (j2 < 0.2449 - 1e-3) {
            CHECK(row[label_col] == "unstable");
            CHECK(row[t_col].empty());
        } else if (j2 > 0.2449 + 1e-3) {
            CHECK(row[label_col] != "unstable");
            CHECK(std::stod(row[t_col]) > 0.0);
        }
    }
}

TEST_CASE("tune locates the saturation-shifted and marginal couplings") {
    SUBCASE("saturation-aware transparency coupling") {
        const auto dir = fresh_dir("tune_j2");
        REQUIRE(run("tune --preset AppendixA-tuning --out " + dir.string()) == 0);
        const auto report = slurp_json(dir / "tune.json");
        CHECK(report.at("value_mhz").get<double>() ==
              doctest::Approx(0.099).epsilon(0.001 / 0.099));
    }
    SUBCASE("constant-gain transparency coupling is exact") {
        const auto dir = fresh_dir("tune_const");
        REQUIRE(run("tune --preset Fig1-inset --bracket 0.5:2 --out " + dir.string()) == 0);
        const auto report = slurp_json(dir / "tune.json");
        CHECK(report.at("value_mhz").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("marginal first coupling") {
        const auto dir = fresh_dir("tune_j1");
        REQUIRE(run("tune --preset FigS2b --parameter j1-marginal --out " + dir.string()) == 0);
        const auto report = slurp_json(dir / "tune.json");
        CHECK(report.at("value_mhz").get<double>() == doctest::Approx(3.017).epsilon(0.01));
    }
}

TEST_CASE("noise report carries the per-mode table and floor power") {
    const auto dir = fresh_dir("noise");
    REQUIRE(run("noise --preset Fig1b --gamma2 5.0 --out " + dir.string()) == 0);
    const auto report = slurp_json(dir / "noise.json");
    CHECK(report.at("g2s_mhz").get<double>() == doctest::Approx(5.195).epsilon(0.002));
    CHECK(report.at("selected").get<double>() == doctest::Approx(3.6e-2).epsilon(0.15));
    CHECK(report.at("per_mode").size() == 3);
    CHECK(report.at("floor_power_w").get<double>() == doctest::Approx(1.28e-19).epsilon(0.01));
}

TEST_CASE("exit codes") {
    SUBCASE("unknown config keys exit 2") {
        const auto dir = fresh_dir("exit2");
        std::ofstream(dir / "bad.json") << "{\"bogus\": 1}";
        CHECK(run("spectrum --config " + (dir / "bad.json").string() + " --out " +
                  dir.string()) == 2);
    }
    SUBCASE("bad grids exit 2") {
        const auto dir = fresh_dir("exit2b");
        CHECK(run("stability-map --preset FigS2a --j1-grid nonsense --out " + dir.string()) == 2);
    }
    SUBCASE("unstable spectra exit 3 and name the violated threshold") {
        const auto dir = fresh_dir("exit3");
        const std::string command = binary() +
                                    " spectrum --preset Fig4 --override /couplings_mhz/1=0.2 "
                                    "--out " +
                                    dir.string() + " 2> " + (dir / "err.txt").string();
        const int status = std::system(command.c_str());
        CHECK(WEXITSTATUS(status) == 3);
        const std::string message = slurp(dir / "err.txt");
        CHECK(message.find("minimum stable J2") != std::string::npos);
    }
    SUBCASE("brackets without a root exit 4") {
        const auto dir = fresh_dir("exit4");
        CHECK(run("tune --preset FigS2b --parameter j1-marginal --bracket 8:9 --out " +
                  dir.string()) == 4);
    }
}
