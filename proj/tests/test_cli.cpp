// End-to-end checks of the command-line front end. argv[1] is the path to the
// CLI binary; everything runs in a scratch directory under the system temp
// path. Prints one line per check and exits nonzero on any failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include <nlohmann/json.hpp>

#include "lpm/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_cli;
std::string g_dir;
int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

int run(const std::string& args) {
    const std::string cmd = "\"" + g_cli + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load_json(const std::string& path) { return json::parse(lpm::read_text_file(path)); }

// Data rows of a CRLF/LF CSV, header excluded.
std::vector<std::string> data_rows(const std::string& path, bool header) {
    std::istringstream in(lpm::read_text_file(path));
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) rows.push_back(line);
    }
    if (header && !rows.empty()) rows.erase(rows.begin());
    return rows;
}

int columns(const std::string& row) {
    int n = 1;
    for (char c : row)
        if (c == ',') ++n;
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
        return 2;
    }
    g_cli = argv[1];
    const fs::path dir = fs::temp_directory_path() / "lpm_cli_tests";
    fs::remove_all(dir);
    fs::create_directories(dir);
    g_dir = dir.string();

    // generate: row/column counts, determinism, usage errors.
    check(run("generate --kind swissroll --n 1600 --rng-seed 7 --out " + g_dir + "/X.csv --truth " +
              g_dir + "/Z.csv") == 0,
          "generate exits 0");
    const auto xrows = data_rows(g_dir + "/X.csv", false);
    check(xrows.size() == 1600 && columns(xrows[0]) == 3, "generate writes 1600x3 CSV");
    check(data_rows(g_dir + "/Z.csv", false).size() == 1600, "generate writes the truth chart");
    check(run("generate --kind swissroll --n 1600 --rng-seed 7 --out " + g_dir + "/X2.csv") == 0 &&
              lpm::read_text_file(g_dir + "/X.csv") == lpm::read_text_file(g_dir + "/X2.csv"),
          "same seed twice is byte-identical");
    check(run("generate --kind torus --n 10 --out " + g_dir + "/T.csv") == 2,
          "unknown kind exits 2");

    // embed: shape, report quality, paired --refine comparison.
    check(run("embed --algo gp --input " + g_dir + "/X.csv --k 12 --rng-seed 3 --out " + g_dir +
              "/Y.csv --report " + g_dir + "/R.json") == 0,
          "embed gp exits 0");
    const auto yrows = data_rows(g_dir + "/Y.csv", false);
    check(yrows.size() == 1600 && columns(yrows[0]) == 2, "embed writes 1600x2 CSV");
    const json rep = load_json(g_dir + "/R.json");
    check(rep.contains("config") && rep.contains("measures") && rep.contains("timings") &&
              rep.contains("warnings"),
          "report carries config/measures/timings/warnings");
    for (const char* key : {"R", "R_N", "R_PCA", "R_C", "lower_bound_N", "skipped"})
        check(rep["measures"].contains(key), std::string("report measure field ") + key);
    check(rep["config"]["rng_seed"] == 3, "report echoes the resolved seed");
    check(rep["measures"]["R_N"].get<double>() <= 0.02, "GP swissroll report R_N <= 0.02");
    check(run("embed --algo gp --input " + g_dir + "/X.csv --k 12 --rng-seed 3 --refine --out " +
              g_dir + "/Yr.csv --report " + g_dir + "/Rr.json") == 0,
          "embed gp --refine exits 0");
    const json rep_refined = load_json(g_dir + "/Rr.json");
    check(rep_refined["measures"]["R_N"].get<double>() <=
              rep["measures"]["R_N"].get<double>() + 1e-12,
          "--refine never increases R_N vs the paired run");

    // score: truth quality, collapsed embedding, row mismatch.
    check(run("score --input " + g_dir + "/X.csv --embedding " + g_dir + "/Z.csv --k 12 --report " +
              g_dir + "/S.json") == 0,
          "score exits 0");
    const json score = load_json(g_dir + "/S.json");
    check(score["reports"].size() == 1 && score["reports"][0]["k"] == 12,
          "score emits one report per k");
    check(score["reports"][0]["measures"]["R_N"].get<double>() <= 0.01,
          "truth chart scores R_N <= 0.01 at k=12");
    {
        std::ofstream zeros(g_dir + "/Y0.csv");
        for (int i = 0; i < 1600; ++i) zeros << "0,0\r\n";
    }
    check(run("score --input " + g_dir + "/X.csv --embedding " + g_dir + "/Y0.csv --k 12"
              " --report " + g_dir + "/S0.json") == 0,
          "score accepts a collapsed embedding");
    check(load_json(g_dir + "/S0.json")["reports"][0]["measures"]["R_N"].get<double>() == 1.0,
          "collapsed embedding scores R_N = 1");
    {
        std::ofstream bad(g_dir + "/Ybad.csv");
        for (int i = 0; i < 7; ++i) bad << "0,0\r\n";
    }
    check(run("score --input " + g_dir + "/X.csv --embedding " + g_dir + "/Ybad.csv --k 12") == 2,
          "row mismatch exits 2");

    // sweep: row count, argmin mark, lower bound column, minimum quality.
    check(run("sweep --algo gp --input " + g_dir + "/X.csv --k 6,9,12,15,18 --rng-seed 3 --out " +
              g_dir + "/sweep.csv") == 0,
          "sweep exits 0");
    const auto srows = data_rows(g_dir + "/sweep.csv", true);
    check(srows.size() == 5, "sweep emits one row per k");
    double min_rn = 1e300;
    int min_marks = 0;
    bool lb_ok = true, argmin_ok = true;
    std::vector<std::array<double, 2>> parsed;  // (R_N, is_min)
    for (const auto& row : srows) {
        double rn, rc, lb, rt;
        int k, is_min;
        if (std::sscanf(row.c_str(), "%d,%lf,%lf,%lf,%lf,%d", &k, &rn, &rc, &lb, &rt, &is_min) != 6)
            argmin_ok = false;
        if (lb > rn + 1e-12) lb_ok = false;
        min_rn = std::min(min_rn, rn);
        min_marks += is_min;
        parsed.push_back({rn, static_cast<double>(is_min)});
    }
    for (const auto& p : parsed)
        if (p[1] == 1.0 && p[0] != min_rn) argmin_ok = false;
    check(min_marks == 1 && argmin_ok, "sweep marks exactly the argmin row");
    check(lb_ok, "sweep lower-bound column <= R_N row-wise");
    check(min_rn <= 0.02, "sweep minimum R_N <= 0.02");

    // refine subcommand: output + trace.
    check(run("refine --input " + g_dir + "/X.csv --embedding " + g_dir + "/Y.csv --k 12 --out " +
              g_dir + "/Yref.csv --trace " + g_dir + "/trace.csv") == 0,
          "refine exits 0");
    check(data_rows(g_dir + "/Yref.csv", false).size() == 1600, "refine writes 1600 rows");
    const auto trows = data_rows(g_dir + "/trace.csv", true);
    check(!trows.empty() && trows[0].rfind("0,", 0) == 0, "trace starts at iteration 0");

    if (g_failures) {
        std::printf("%d CLI check(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all CLI checks passed\n");
    return 0;
}
