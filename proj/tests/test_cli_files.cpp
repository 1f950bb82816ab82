// End-to-end checks of the command-line front end: exit codes, report schema,
// byte-level reproducibility, CSV column order and SVG output.
//
// Usage: test_cli_files <path-to-cli> <data-dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: test_cli_files <cli> <data-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path data = argv[2];
    const fs::path work = fs::temp_directory_path() / "kerlab_cli_test";
    fs::remove_all(work);
    fs::create_directories(work);

    // 1. theorem run writes a schema-complete report and exits 0
    const fs::path out1 = work / "thm";
    check(run(cli + " theorem --id thm1.3 --domain disc --c one --out " + out1.string()) == 0,
          "theorem thm1.3 exits 0");
    {
        const ojson rep = ojson::parse(slurp(out1 / "report.json"));
        bool schema = rep.is_array() && rep.size() == 1;
        if (schema) {
            const ojson& o = rep[0];
            for (const char* key : {"id", "lhs", "rhs", "ratio", "constant_used", "sizes", "refinement_delta",
                                    "verdict"})
                schema = schema && o.contains(key);
            schema = schema && o.at("verdict").get<std::string>() == "equality";
        }
        check(schema, "report.json has the full field set and equality verdict");
        check(fs::exists(out1 / "run_meta.json"), "timestamps live in run_meta.json, not the report");
    }

    // 2. byte-identical reports for the same config and seed
    const fs::path outA = work / "runA", outB = work / "runB";
    const std::string verify_cmd = " verify --identity 3:E8 --seed 42 --samples 3 --basis 3 --out ";
    check(run(cli + verify_cmd + outA.string()) == 0, "verify 3:E8 exits 0");
    check(run(cli + verify_cmd + outB.string()) == 0, "verify 3:E8 rerun exits 0");
    check(slurp(outA / "report.json") == slurp(outB / "report.json"),
          "same config + seed give byte-identical report.json");

    // 3. sweep: CSV column order and SVG plot
    const fs::path out3 = work / "sweep";
    check(run(cli + " sweep --id thm1.8 --axis p1 --from 2 --to 3 --count 3 --basis 4 --quad 64"
                    " --format json --format csv --format svg --out " + out3.string()) == 0,
          "sweep exits 0");
    {
        const std::string csv = slurp(out3 / "sweep.csv");
        check(csv.rfind("parameter,lhs,rhs,ratio,refinement_delta\n", 0) == 0, "CSV column order is fixed");
        const std::string svg = slurp(out3 / "plot.svg");
        check(svg.find("<svg") != std::string::npos && svg.find("polyline") != std::string::npos,
              "SVG line plot written");
    }

    // 4. malformed / unknown-key config: exit 2, no artifacts
    const fs::path out4 = work / "bad";
    const int bad_rc = run(cli + " --config " + (data / "bad_config.json").string() + " 2>/dev/null");
    check(bad_rc == 2, "unknown config key exits 2");
    check(!fs::exists(out4), "no artifacts on config error");

    const int nocmd_rc = run(cli + " 2>/dev/null");
    check(nocmd_rc == 2, "missing command exits 2");

    // 5. config-file driven run equals the flag-driven run
    const fs::path cfg_path = work / "run.json";
    {
        std::ofstream os(cfg_path);
        os << R"({"command":"theorem","id":"thm1.3","domain":{"kind":"disc","radius":1.0},)"
           << R"("weights":{"c":{"kind":"one"}},"out":")" << (work / "cfgrun").string() << R"("})";
    }
    check(run(cli + " --config " + cfg_path.string()) == 0, "config-file run exits 0");
    {
        const ojson a = ojson::parse(slurp(out1 / "report.json"));
        const ojson b = ojson::parse(slurp(work / "cfgrun" / "report.json"));
        check(a == b, "flag-driven and config-driven reports agree");
    }

    std::printf("cli file checks: %d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
