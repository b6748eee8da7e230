#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "interax/dataset.hpp"
#include "support/dot_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* cli = INTERAX_CLI_BIN;

struct run_result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("interax_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

run_result run(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(cli) + " " + args + " > " + out.string() + " 2> " +
                            err.string();
    const int status = std::system(cmd.c_str());
    run_result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("synthesized parity data round-trips through the csv loader") {
    auto dir = work_dir("synth");
    auto r = run("synth --kind parity -k 2 -n 64 --seed 1 --out " + dir.string(), dir);
    REQUIRE(r.exit_code == 0);
    auto ds = interax::load_csv((dir / "parity.csv").string());
    REQUIRE(ds.n_rows() == 64);
    REQUIRE(ds.n_attributes() == 3);
    for (std::size_t row = 0; row < ds.n_rows(); ++row) {
        int a = std::stoi(ds.value_name(row, 0));
        int b = std::stoi(ds.value_name(row, 1));
        int c = std::stoi(ds.value_name(row, 2));
        REQUIRE(c == (a ^ b));
    }
}

TEST_CASE("measure reports the subset and its constituent conditionals") {
    auto dir = work_dir("measure");
    REQUIRE(run("synth --kind parity -k 2 -n 64 --seed 1 --out " + dir.string(), dir)
                .exit_code == 0);
    auto r = run("measure --in " + (dir / "parity.csv").string() + " --subset a,b,c", dir);
    REQUIRE(r.exit_code == 0);
    auto report = json::parse(r.out);
    REQUIRE(report["measures"].size() == 3);
    const auto& triple = report["measures"][0];
    REQUIRE(triple["subset"] == json::array({"a", "b", "c"}));
    REQUIRE(triple["bits"].get<double>() == 1.0);
    REQUIRE(triple["g"].is_null());  // no chi-square null for a signed 3-way value
    const auto& given = report["measures"][1];
    REQUIRE(given["subset"] == json::array({"a", "b"}));
    REQUIRE(given["context"] == json::array({"c"}));
    REQUIRE(given["bits"].get<double>() == 1.0);
    REQUIRE(given["p"].get<double>() < 1e-6);
    const auto& plain = report["measures"][2];
    REQUIRE(plain["subset"] == json::array({"a", "b"}));
    REQUIRE(plain["context"] == json::array());
    REQUIRE(plain["bits"].get<double>() == 0.0);
    REQUIRE(plain["p"].get<double>() > 0.9);
}

TEST_CASE("measure honors an explicit context") {
    auto dir = work_dir("measure_ctx");
    REQUIRE(run("synth --kind parity -k 2 -n 64 --seed 1 --out " + dir.string(), dir)
                .exit_code == 0);
    auto r = run("measure --in " + (dir / "parity.csv").string() +
                     " --subset a,b --context c",
                 dir);
    REQUIRE(r.exit_code == 0);
    auto report = json::parse(r.out);
    REQUIRE(report["measures"].size() == 1);
    const auto& row = report["measures"][0];
    REQUIRE(row["context"] == json::array({"c"}));
    REQUIRE(row["bits"].get<double>() == 1.0);
    REQUIRE(row["df"].get<int>() == 2);
    REQUIRE(row["normed"].get<double>() == 1.0);
}

TEST_CASE("analyze writes the full artifact set") {
    auto dir = work_dir("analyze");
    REQUIRE(run("synth --kind naive-bayes -m 3 -n 400 --seed 5 --out " + dir.string(), dir)
                .exit_code == 0);
    auto out = dir / "result";
    auto r = run("analyze --in " + (dir / "naive-bayes.csv").string() +
                     " --label y --out " + out.string(),
                 dir);
    REQUIRE(r.exit_code == 0);
    REQUIRE_THAT(r.err, Catch::Matchers::ContainsSubstring("pairs significant at alpha=0.05"));

    auto report = json::parse(slurp(out / "report.json"));
    REQUIRE(report.contains("attributes"));
    REQUIRE(report.contains("measures"));
    REQUIRE(report.contains("diagrams"));
    REQUIRE(report["attributes"] == json::array({"x1", "x2", "x3", "y"}));
    REQUIRE(report["diagrams"].size() == 3);
    for (const auto& m : report["measures"]) {
        REQUIRE(m.contains("subset"));
        REQUIRE(m.contains("context"));
        REQUIRE(m.contains("bits"));
        REQUIRE(m.contains("normed"));
        REQUIRE(m.contains("relative_pct"));
        REQUIRE(m.contains("g"));
        REQUIRE(m.contains("df"));
        REQUIRE(m.contains("p"));
        // analyze always scans through the label
        bool has_label = false;
        for (const auto& name : m["subset"]) {
            if (name == "y") has_label = true;
        }
        REQUIRE(has_label);
        REQUIRE_FALSE(m["relative_pct"].is_null());
    }
    // stdout carries the same report
    REQUIRE(json::parse(r.out) == report);

    auto dot = slurp(out / "interactions.dot");
    REQUIRE(dotcheck::check(dot) == "");
    REQUIRE(dotcheck::check(slurp(out / "dendrogram.dot")) == "");
    auto nwk = slurp(out / "dendrogram.nwk");
    REQUIRE_THAT(nwk, Catch::Matchers::EndsWith(");\n"));
}

TEST_CASE("repeat runs produce identical bytes whatever the thread count") {
    auto dir = work_dir("determinism");
    REQUIRE(run("synth --kind mixture --p1 0.7 -n 500 --seed 7 --out " + dir.string(), dir)
                .exit_code == 0);
    auto out = dir / "o";
    auto base_cmd = "analyze --in " + (dir / "mixture.csv").string() + " --label a --out " +
                    out.string();
    auto r1 = run(base_cmd + " --threads 1", dir);
    REQUIRE(r1.exit_code == 0);
    auto report1 = slurp(out / "report.json");
    auto dot1 = slurp(out / "interactions.dot");
    auto nwk1 = slurp(out / "dendrogram.nwk");
    auto r2 = run(base_cmd + " --threads 8", dir);
    REQUIRE(r2.exit_code == 0);
    REQUIRE(slurp(out / "report.json") == report1);
    REQUIRE(slurp(out / "interactions.dot") == dot1);
    REQUIRE(slurp(out / "dendrogram.nwk") == nwk1);
    REQUIRE(r1.out == r2.out);
}

TEST_CASE("infograph writes the diagram and a sidecar of its numbers") {
    auto dir = work_dir("infograph");
    REQUIRE(run("synth --kind polysemy -n 500 --seed 3 --out " + dir.string(), dir)
                .exit_code == 0);
    auto r = run("infograph --in " + (dir / "polysemy.csv").string() +
                     " --attrs f,c1,c2 --out " + dir.string(),
                 dir);
    REQUIRE(r.exit_code == 0);
    REQUIRE(dotcheck::check(slurp(dir / "information.dot")) == "");
    auto report = json::parse(slurp(dir / "report.json"));
    // three entropies, three pairs, one triple
    REQUIRE(report["measures"].size() == 7);
    const auto& h = report["measures"][0];
    REQUIRE(h["subset"].size() == 1);
    REQUIRE(h["bits"].get<double>() > 0.0);
    REQUIRE(h["normed"].is_null());
}

TEST_CASE("condgraph emits a conditional diagram") {
    auto dir = work_dir("condgraph");
    REQUIRE(run("synth --kind parity -k 3 -n 64 --seed 2 --out " + dir.string(), dir)
                .exit_code == 0);
    auto r = run("condgraph --in " + (dir / "parity.csv").string() +
                     " --label d --threshold 1 --out " + dir.string(),
                 dir);
    REQUIRE(r.exit_code == 0);
    auto dot = slurp(dir / "conditional.dot");
    REQUIRE(dotcheck::check(dot) == "");
    REQUIRE_THAT(dot, Catch::Matchers::ContainsSubstring("j_0_1_2"));
}

TEST_CASE("dropping rows with missing cells changes the numbers") {
    auto dir = work_dir("missing");
    {
        std::ofstream csv(dir / "gaps.csv");
        csv << "a,b\n0,0\n1,1\n?,0\n?,1\n0,0\n1,1\n";
    }
    auto kept = run("measure --in " + (dir / "gaps.csv").string() +
                        " --subset a,b --missing category",
                    dir);
    REQUIRE(kept.exit_code == 0);
    double with_marker = json::parse(kept.out)["measures"][0]["bits"].get<double>();
    REQUIRE(with_marker < 1.0);
    auto dropped = run("measure --in " + (dir / "gaps.csv").string() +
                           " --subset a,b --missing drop",
                       dir);
    REQUIRE(dropped.exit_code == 0);
    REQUIRE(json::parse(dropped.out)["measures"][0]["bits"].get<double>() == 1.0);
}

TEST_CASE("numeric binning is driven from the command line") {
    auto dir = work_dir("binning");
    {
        std::ofstream csv(dir / "nums.csv");
        csv << "x,y\n";
        for (int i = 1; i <= 10; ++i) {
            csv << i << "," << (i <= 5 ? "lo" : "hi") << "\n";
        }
    }
    auto r = run("measure --in " + (dir / "nums.csv").string() +
                     " --subset x,y --bin x:2",
                 dir);
    REQUIRE(r.exit_code == 0);
    // two equal-frequency bins align exactly with the lo/hi split
    REQUIRE(json::parse(r.out)["measures"][0]["bits"].get<double>() == 1.0);
}

TEST_CASE("usage problems exit with one") {
    auto dir = work_dir("usage");
    REQUIRE(run("synth --kind parity -k 2 -n 16 --seed 1 --out " + dir.string(), dir)
                .exit_code == 0);
    const std::string in = (dir / "parity.csv").string();
    REQUIRE(run("analyze --in " + in, dir).exit_code == 1);          // label required
    REQUIRE(run("measure --in " + in + " --subset a", dir).exit_code == 1);
    REQUIRE(run("measure --in " + in + " --subset a,a", dir).exit_code == 1);
    REQUIRE(run("measure --in " + in + " --subset a,b --estimator bogus", dir).exit_code ==
            1);
    REQUIRE(run("synth --kind unheard-of --out " + dir.string(), dir).exit_code == 1);
    REQUIRE(run("bogus-subcommand", dir).exit_code == 1);
    REQUIRE(run("measure --in " + in + " --subset a,b --bin a:1", dir).exit_code == 1);
}

TEST_CASE("data problems exit with two") {
    auto dir = work_dir("data_err");
    REQUIRE(run("analyze --in /no/such/file.csv --label y", dir).exit_code == 2);
    REQUIRE(run("synth --kind parity -k 2 -n 16 --seed 1 --out " + dir.string(), dir)
                .exit_code == 0);
    const std::string in = (dir / "parity.csv").string();
    REQUIRE(run("measure --in " + in + " --subset a,nope", dir).exit_code == 2);
    REQUIRE(run("analyze --in " + in + " --label zz", dir).exit_code == 2);
}

TEST_CASE("help and version exit cleanly") {
    auto dir = work_dir("help");
    REQUIRE(run("--help", dir).exit_code == 0);
    REQUIRE(run("--version", dir).exit_code == 0);
    auto r = run("measure --help", dir);
    REQUIRE(r.exit_code == 0);
    REQUIRE_THAT(r.out, Catch::Matchers::ContainsSubstring("--subset"));
}
