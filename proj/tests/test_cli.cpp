#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <specht/cli.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace specht;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

// temp directory populated with the worked example's graphs and job files
struct Fixture {
    std::filesystem::path dir;

    Fixture() {
        static int counter = 0;
        dir = std::filesystem::temp_directory_path() / ("specht_cli_" + std::to_string(++counter));
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);

        write_edge_list(from_edge_pairs(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}}), p("h.txt"));
        write_edge_list(complete(4), p("k4.txt"));
        write_edge_list(circulant(4, {2}), p("matching.txt"));
        write_edge_list(cycle(4), p("c4.txt"));
        write_edge_list(empty_graph(2), p("empty2.txt"));
        write_edge_list(complete(3), p("k3.txt"));
        write_edge_list(path(3), p("p3.txt"));
        write_edge_list(from_edge_pairs(6, {{0, 1}, {2, 3}, {4, 5}}), p("m1.txt"));
        write_edge_list(from_edge_pairs(6, {{0, 5}, {1, 2}, {3, 4}}), p("m2.txt"));
        write_edge_list(path(2), p("p2.txt"));

        write(p("job.json"), R"({
  "h": "h.txt",
  "factors": ["k4.txt", "matching.txt", "c4.txt", "k4.txt"],
  "matrix": "universal",
  "params": [2, 1, 2, 1],
  "tolerance": 1e-8,
  "oracle": true
})");
        write(p("job_adjacency.json"), R"({
  "h": "h.txt",
  "factors": ["k4.txt", "matching.txt", "c4.txt", "k4.txt"],
  "matrix": "adjacency"
})");
    }

    ~Fixture() {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }

    std::string p(const std::string& name) const { return (dir / name).string(); }

    void write(const std::string& file, const std::string& text) const {
        std::ofstream out(file, std::ios::binary);
        out << text;
    }
};

}  // namespace

TEST_CASE("format_double: 12 significant digits, canonical zero") {
    CHECK(cli::format_double(0.0) == "0");
    CHECK(cli::format_double(-0.0) == "0");
    CHECK(cli::format_double(1.0) == "1");
    CHECK(cli::format_double(-2.5) == "-2.5");
    CHECK(cli::format_double(31.0088) == "31.0088");
    CHECK(cli::format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(cli::format_double(1e-15) == "1e-15");
    CHECK(cli::format_double(12345678901234.0) == "1.23456789012e+13");
}

TEST_CASE("spectrum: worked-example universal job") {
    Fixture fx;
    auto res = run_cli({"spectrum", "--job", fx.p("job.json")});
    REQUIRE(res.code == 0);
    CHECK(res.err.empty());

    json rep = json::parse(res.out);
    REQUIRE(rep["eigenvalues"].size() == 16);
    CHECK(std::abs(rep["eigenvalues"][0].get<double>() - 31.0088) <= 1e-3);
    for (std::size_t i = 1; i < 16; ++i)
        CHECK(rep["eigenvalues"][i - 1].get<double>() >= rep["eigenvalues"][i].get<double>());

    // exact integer first reduced matrix
    auto& rm = rep["reduced_matrices"];
    REQUIRE(rm.size() == 4);
    CHECK(rm[0]["t"] == 0);
    json c1 = json::array({json::array({17, 6, 6, 4}), json::array({6, 11, 6, 4}),
                           json::array({6, 6, 15, 6}), json::array({4, 4, 6, 16})});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(rm[0]["matrix"][i][j].get<double>() == c1[i][j].get<double>());
    REQUIRE(rm[0]["eigenvalues"].size() == 4);

    Index fives = 0;
    for (const auto& entry : rep["grouped"])
        if (std::abs(entry["value"].get<double>() - 5.0) <= 1e-3)
            fives += entry["multiplicity"].get<Index>();
    CHECK(fives == 3);

    REQUIRE(rep.contains("oracle_eigenvalues"));
    CHECK(rep["oracle_eigenvalues"].size() == 16);
    CHECK(rep["max_abs_diff"].get<double>() <= 1e-8);
    CHECK(rep["timings_ms"].contains("structured"));
    CHECK(rep["timings_ms"].contains("oracle"));

    // stable key order in the emitted text
    auto pos = [&](const std::string& key) { return res.out.find("\"" + key + "\""); };
    CHECK(pos("eigenvalues") < pos("grouped"));
    CHECK(pos("grouped") < pos("reduced_matrices"));
    CHECK(pos("reduced_matrices") < pos("oracle_eigenvalues"));
    CHECK(pos("oracle_eigenvalues") < pos("max_abs_diff"));
    CHECK(pos("max_abs_diff") < pos("timings_ms"));
}

TEST_CASE("spectrum: --no-oracle omits oracle fields; output deterministic") {
    Fixture fx;
    auto a = run_cli({"spectrum", "--job", fx.p("job.json"), "--no-oracle"});
    auto b = run_cli({"spectrum", "--job", fx.p("job.json"), "--no-oracle"});
    REQUIRE(a.code == 0);

    json ra = json::parse(a.out);
    CHECK(!ra.contains("oracle_eigenvalues"));
    CHECK(!ra.contains("max_abs_diff"));
    CHECK(!ra["timings_ms"].contains("oracle"));

    // identical apart from wall-clock timings
    json rb = json::parse(b.out);
    ra.erase("timings_ms");
    rb.erase("timings_ms");
    CHECK(ra.dump() == rb.dump());
}

TEST_CASE("spectrum: empty H pools the factor spectra") {
    Fixture fx;
    fx.write(fx.p("pool.json"), R"({
  "h": "empty2.txt",
  "factors": ["k4.txt", "matching.txt"],
  "matrix": "adjacency"
})");
    auto res = run_cli({"spectrum", "--job", fx.p("pool.json")});
    REQUIRE(res.code == 0);
    json rep = json::parse(res.out);
    std::vector<double> expect{3, 1, 1, -1, -1, -1, -1, -1};  // K4 and 2K2 eigenvalues pooled
    REQUIRE(rep["eigenvalues"].size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i)
        CHECK(std::abs(rep["eigenvalues"][i].get<double>() - expect[i]) <= 1e-9);
}

TEST_CASE("spectrum: config and file errors exit 1 with parse/io prefixes") {
    Fixture fx;

    auto missing = run_cli({"spectrum", "--job", fx.p("nope.json")});
    CHECK(missing.code == 1);
    CHECK(starts_with(missing.err, "error:io:"));

    fx.write(fx.p("broken.json"), "{ not json");
    auto broken = run_cli({"spectrum", "--job", fx.p("broken.json")});
    CHECK(broken.code == 1);
    CHECK(starts_with(broken.err, "error:parse:"));
    CHECK(broken.err.find("broken.json") != std::string::npos);

    fx.write(fx.p("unknown_key.json"),
             R"({"h": "h.txt", "factors": ["k4.txt"], "matrix": "adjacency", "bogus": 1})");
    auto unknown = run_cli({"spectrum", "--job", fx.p("unknown_key.json")});
    CHECK(unknown.code == 1);
    CHECK(starts_with(unknown.err, "error:parse:"));
    CHECK(unknown.err.find("bogus") != std::string::npos);

    fx.write(fx.p("no_matrix.json"), R"({"h": "h.txt", "factors": ["k4.txt"]})");
    CHECK(run_cli({"spectrum", "--job", fx.p("no_matrix.json")}).code == 1);

    fx.write(fx.p("bad_kind.json"),
             R"({"h": "h.txt", "factors": ["k4.txt"], "matrix": "weighted"})");
    auto bad_kind = run_cli({"spectrum", "--job", fx.p("bad_kind.json")});
    CHECK(bad_kind.code == 1);
    CHECK(bad_kind.err.find("weighted") != std::string::npos);

    fx.write(fx.p("universal_no_params.json"),
             R"({"h": "h.txt", "factors": ["k4.txt", "matching.txt", "c4.txt", "k4.txt"], "matrix": "universal"})");
    CHECK(run_cli({"spectrum", "--job", fx.p("universal_no_params.json")}).code == 1);

    fx.write(fx.p("stray_params.json"),
             R"({"h": "h.txt", "factors": ["k4.txt", "matching.txt", "c4.txt", "k4.txt"], "matrix": "adjacency", "params": [1, 0, 0, 0]})");
    CHECK(run_cli({"spectrum", "--job", fx.p("stray_params.json")}).code == 1);

    fx.write(fx.p("short_params.json"),
             R"({"h": "h.txt", "factors": ["k4.txt", "matching.txt", "c4.txt", "k4.txt"], "matrix": "universal", "params": [2, 1]})");
    CHECK(run_cli({"spectrum", "--job", fx.p("short_params.json")}).code == 1);

    fx.write(fx.p("bad_tol.json"),
             R"({"h": "h.txt", "factors": ["k4.txt", "matching.txt", "c4.txt", "k4.txt"], "matrix": "adjacency", "tolerance": -1})");
    CHECK(run_cli({"spectrum", "--job", fx.p("bad_tol.json")}).code == 1);

    // bad edge inside a factor file: parse error names file and line
    fx.write(fx.p("badfactor.txt"), "4\n0 9\n");
    fx.write(fx.p("badfactor.json"),
             R"({"h": "empty2.txt", "factors": ["k4.txt", "badfactor.txt"], "matrix": "adjacency"})");
    auto bad_edge = run_cli({"spectrum", "--job", fx.p("badfactor.json")});
    CHECK(bad_edge.code == 1);
    CHECK(starts_with(bad_edge.err, "error:parse:"));
    CHECK(bad_edge.err.find("badfactor.txt:2") != std::string::npos);
}

TEST_CASE("spectrum: violated computation preconditions exit 2 with diagnostic") {
    Fixture fx;

    fx.write(fx.p("count.json"),
             R"({"h": "p2.txt", "factors": ["k4.txt"], "matrix": "adjacency"})");
    auto count = run_cli({"spectrum", "--job", fx.p("count.json")});
    CHECK(count.code == 2);
    CHECK(starts_with(count.err, "error:factor_count_mismatch:"));

    fx.write(fx.p("orders.json"),
             R"({"h": "p2.txt", "factors": ["k4.txt", "k3.txt"], "matrix": "adjacency"})");
    auto orders = run_cli({"spectrum", "--job", fx.p("orders.json")});
    CHECK(orders.code == 2);
    CHECK(starts_with(orders.err, "error:order_mismatch:"));

    fx.write(fx.p("noncommuting.json"),
             R"({"h": "p2.txt", "factors": ["m1.txt", "m2.txt"], "matrix": "adjacency"})");
    auto nc = run_cli({"spectrum", "--job", fx.p("noncommuting.json")});
    CHECK(nc.code == 2);
    CHECK(starts_with(nc.err, "error:not_commuting:"));
    CHECK(nc.err.find("0") != std::string::npos);  // the offending pair indices
    CHECK(nc.err.find("1") != std::string::npos);

    fx.write(fx.p("irregular.json"),
             R"({"h": "p2.txt", "factors": ["k3.txt", "p3.txt"], "matrix": "laplacian"})");
    auto irr = run_cli({"spectrum", "--job", fx.p("irregular.json")});
    CHECK(irr.code == 2);
    CHECK(starts_with(irr.err, "error:not_regular:"));

    fx.write(fx.p("alpha0.json"),
             R"({"h": "h.txt", "factors": ["k4.txt", "matching.txt", "c4.txt", "k4.txt"], "matrix": "universal", "params": [0, 1, 0, 0]})");
    auto a0 = run_cli({"spectrum", "--job", fx.p("alpha0.json")});
    CHECK(a0.code == 2);
    CHECK(starts_with(a0.err, "error:alpha_zero:"));
}

TEST_CASE("verify: clean pass, and the corrupt hook forces a mismatch") {
    Fixture fx;
    auto ok = run_cli({"verify", "--job", fx.p("job.json")});
    CHECK(ok.code == 0);
    CHECK(starts_with(ok.out, "max_abs_diff "));

    auto bad = run_cli({"verify", "--job", fx.p("job.json"), "--corrupt"});
    CHECK(bad.code == 3);
    CHECK(starts_with(bad.err, "error:mismatch:"));
}

TEST_CASE("product: writes the block-major product of the example files") {
    Fixture fx;
    std::string out_file = fx.p("prod.txt");
    auto res = run_cli({"product", "--H", fx.p("h.txt"), "--factors",
                        fx.p("k4.txt") + "," + fx.p("matching.txt") + "," + fx.p("c4.txt") + "," +
                            fx.p("k4.txt"),
                        "--out", out_file});
    REQUIRE(res.code == 0);

    Graph parsed = read_edge_list(out_file);
    Graph expect = h_product(from_edge_pairs(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}}),
                             {complete(4), circulant(4, {2}), cycle(4), complete(4)});
    CHECK(parsed == expect);
    CHECK(parsed.order() == 16);
    CHECK(parsed.edge_count() == 34);
}

TEST_CASE("product: error paths") {
    Fixture fx;
    auto missing = run_cli({"product", "--H", fx.p("h.txt"), "--factors", fx.p("gone.txt"),
                            "--out", fx.p("x.txt")});
    CHECK(missing.code == 1);
    CHECK(starts_with(missing.err, "error:io:"));

    auto mismatch = run_cli({"product", "--H", fx.p("p2.txt"), "--factors",
                             fx.p("k4.txt") + "," + fx.p("k3.txt"), "--out", fx.p("x.txt")});
    CHECK(mismatch.code == 2);
    CHECK(starts_with(mismatch.err, "error:order_mismatch:"));

    auto unwritable = run_cli({"product", "--H", fx.p("p2.txt"), "--factors",
                               fx.p("k4.txt") + "," + fx.p("k4.txt"), "--out",
                               (fx.dir / "no_such_dir" / "out.txt").string()});
    CHECK(unwritable.code == 1);
    CHECK(starts_with(unwritable.err, "error:io:"));
}

TEST_CASE("bench: small deterministic run") {
    auto res = run_cli({"bench", "--n", "4", "--l", "3", "--trials", "2", "--seed", "7"});
    REQUIRE(res.code == 0);
    json rep = json::parse(res.out);
    CHECK(rep["n"] == 4);
    CHECK(rep["l"] == 3);
    CHECK(rep["trials"] == 2);
    CHECK(rep["seed"] == 7);
    CHECK(rep["structured_ms"].get<double>() >= 0.0);
    CHECK(rep["oracle_ms"].get<double>() >= 0.0);
    CHECK(rep["ratio"].get<double>() > 0.0);
    CHECK(rep["max_abs_diff"].get<double>() <= 1e-7);
    CHECK(rep["trials_detail"].size() == 2);

    // same seed, same spectra: the agreement figure is reproducible
    auto again = run_cli({"bench", "--n", "4", "--l", "3", "--trials", "2", "--seed", "7"});
    json rep2 = json::parse(again.out);
    CHECK(rep["max_abs_diff"].get<double>() == rep2["max_abs_diff"].get<double>());
}

TEST_CASE("bench: size validation") {
    CHECK(run_cli({"bench", "--n", "4", "--l", "3", "--trials", "0"}).code == 1);
    CHECK(run_cli({"bench", "--n", "1", "--l", "3"}).code == 1);
    CHECK(run_cli({"bench", "--n", "1024", "--l", "8"}).code == 1);  // over the dimension cap
    auto bad = run_cli({"bench", "--n", "0", "--l", "0"});
    CHECK(bad.code == 1);
    CHECK(starts_with(bad.err, "error:usage:"));
}

TEST_CASE("usage errors and help") {
    CHECK(run_cli({}).code == 1);
    CHECK(starts_with(run_cli({}).err, "error:usage:"));
    CHECK(run_cli({"frobnicate"}).code == 1);
    CHECK(run_cli({"spectrum"}).code == 1);  // --job is required

    auto help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("spectrum") != std::string::npos);
    CHECK(help.out.find("bench") != std::string::npos);
}
