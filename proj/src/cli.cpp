#include "specht/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace specht::cli {

std::string format_double(double x) {
    if (x == 0.0) return "0";  // also folds -0.0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

using nlohmann::json;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse:
        case ErrorKind::Io:
        case ErrorKind::Usage:
            return 1;
        default:
            return 2;
    }
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

// ---- report rendering ----
// Hand-rolled writer: fixed key order and fixed number format, so that equal
// results produce byte-equal reports (timings are the one wall-clock field).

void append_vector(std::string& s, const Vector& v) {
    s += '[';
    for (Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_double(v(i));
    }
    s += ']';
}

void append_matrix(std::string& s, const Matrix& m) {
    s += '[';
    for (Index i = 0; i < m.rows(); ++i) {
        if (i) s += ", ";
        s += '[';
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) s += ", ";
            s += format_double(m(i, j));
        }
        s += ']';
    }
    s += ']';
}

std::string render_report(const SpectrumReport& report) {
    std::string s = "{\n  \"eigenvalues\": ";
    append_vector(s, report.structured.values());

    s += ",\n  \"grouped\": [";
    const std::vector<SpectrumEntry>& grouped = report.structured.grouped();
    for (std::size_t i = 0; i < grouped.size(); ++i) {
        if (i) s += ", ";
        s += "{\"value\": " + format_double(grouped[i].value) +
             ", \"multiplicity\": " + std::to_string(grouped[i].multiplicity) + "}";
    }

    s += "],\n  \"reduced_matrices\": [\n";
    for (std::size_t i = 0; i < report.reduced.size(); ++i) {
        const ReducedMatrixInfo& info = report.reduced[i];
        s += "    {\"t\": " + std::to_string(info.t) + ", \"matrix\": ";
        append_matrix(s, info.matrix);
        s += ", \"eigenvalues\": ";
        append_vector(s, info.values);
        s += (i + 1 < report.reduced.size()) ? "},\n" : "}\n";
    }
    s += "  ]";

    if (report.oracle) {
        s += ",\n  \"oracle_eigenvalues\": ";
        append_vector(s, report.oracle->values());
        s += ",\n  \"max_abs_diff\": " + format_double(report.max_abs_diff.value_or(0.0));
    }

    s += ",\n  \"timings_ms\": {\"structured\": " + format_double(report.structured_ms);
    if (report.oracle) s += ", \"oracle\": " + format_double(report.oracle_ms);
    s += "}\n}\n";
    return s;
}

std::string render_bench(const BenchResult& r) {
    std::string s = "{\n";
    s += "  \"n\": " + std::to_string(r.n) + ",\n";
    s += "  \"l\": " + std::to_string(r.l) + ",\n";
    s += "  \"trials\": " + std::to_string(r.trials) + ",\n";
    s += "  \"seed\": " + std::to_string(r.seed) + ",\n";
    s += "  \"structured_ms\": " + format_double(r.structured_ms) + ",\n";
    s += "  \"oracle_ms\": " + format_double(r.oracle_ms) + ",\n";
    s += "  \"ratio\": " + format_double(r.ratio) + ",\n";
    s += "  \"max_abs_diff\": " + format_double(r.max_abs_diff) + ",\n";
    s += "  \"trials_detail\": [";
    for (std::size_t i = 0; i < r.detail.size(); ++i) {
        if (i) s += ", ";
        s += "{\"structured_ms\": " + format_double(r.detail[i].structured_ms) +
             ", \"oracle_ms\": " + format_double(r.detail[i].oracle_ms) + "}";
    }
    s += "]\n}\n";
    return s;
}

// ---- job config ----

MatrixKind parse_kind(const std::string& name, const std::string& file) {
    if (name == "adjacency") return MatrixKind::Adjacency;
    if (name == "laplacian") return MatrixKind::Laplacian;
    if (name == "signless_laplacian") return MatrixKind::SignlessLaplacian;
    if (name == "seidel") return MatrixKind::Seidel;
    if (name == "universal") return MatrixKind::Universal;
    fail(ErrorKind::Parse, file + ": unknown matrix kind \"" + name +
                               "\" (expected adjacency, laplacian, signless_laplacian, seidel "
                               "or universal)");
}

std::string resolve(const std::filesystem::path& base, const std::string& name) {
    std::filesystem::path p(name);
    if (p.is_absolute()) return name;
    return (base / p).string();
}

HProductJob load_job_impl(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open job config " + file);
    std::ostringstream text;
    text << in.rdbuf();

    json config;
    try {
        config = json::parse(text.str());
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, file + ": " + e.what());
    }
    if (!config.is_object()) fail(ErrorKind::Parse, file + ": job config must be a JSON object");

    static constexpr const char* kKnown[] = {"h", "factors", "matrix", "params", "tolerance",
                                             "oracle"};
    for (const auto& item : config.items()) {
        bool known = std::any_of(std::begin(kKnown), std::end(kKnown),
                                 [&](const char* k) { return item.key() == k; });
        if (!known) fail(ErrorKind::Parse, file + ": unknown key \"" + item.key() + "\"");
    }
    for (const char* key : {"h", "factors", "matrix"})
        if (!config.contains(key))
            fail(ErrorKind::Parse, file + ": missing required key \"" + std::string(key) + "\"");

    if (!config["h"].is_string()) fail(ErrorKind::Parse, file + ": \"h\" must be a file path");
    if (!config["factors"].is_array() || config["factors"].empty())
        fail(ErrorKind::Parse, file + ": \"factors\" must be a non-empty array of file paths");
    for (const json& f : config["factors"])
        if (!f.is_string())
            fail(ErrorKind::Parse, file + ": every \"factors\" entry must be a file path");
    if (!config["matrix"].is_string())
        fail(ErrorKind::Parse, file + ": \"matrix\" must be a string");

    const MatrixKind kind = parse_kind(config["matrix"].get<std::string>(), file);
    UniversalParams params = kAdjacencyParams;
    double tolerance = 1e-8;
    bool run_oracle = true;

    if (kind == MatrixKind::Universal) {
        if (!config.contains("params"))
            fail(ErrorKind::Parse,
                 file + ": matrix \"universal\" needs \"params\": [alpha, beta, gamma, eta]");
        const json& raw = config["params"];
        bool valid = raw.is_array() && raw.size() == 4 &&
                     std::all_of(raw.begin(), raw.end(),
                                 [](const json& x) { return x.is_number(); });
        if (!valid) fail(ErrorKind::Parse, file + ": \"params\" must be an array of 4 numbers");
        params = {raw[0].get<double>(), raw[1].get<double>(), raw[2].get<double>(),
                  raw[3].get<double>()};
    } else if (config.contains("params")) {
        fail(ErrorKind::Parse, file + ": \"params\" applies only to matrix \"universal\" (" +
                                   config["matrix"].get<std::string>() +
                                   " has fixed coefficients)");
    }

    if (config.contains("tolerance")) {
        if (!config["tolerance"].is_number())
            fail(ErrorKind::Parse, file + ": \"tolerance\" must be a number");
        tolerance = config["tolerance"].get<double>();
        if (!(std::isfinite(tolerance) && tolerance > 0.0))
            fail(ErrorKind::Parse, file + ": \"tolerance\" must be finite and positive");
    }
    if (config.contains("oracle")) {
        if (!config["oracle"].is_boolean())
            fail(ErrorKind::Parse, file + ": \"oracle\" must be true or false");
        run_oracle = config["oracle"].get<bool>();
    }

    const std::filesystem::path base = std::filesystem::path(file).parent_path();
    Graph h = read_edge_list(resolve(base, config["h"].get<std::string>()));
    std::vector<Graph> factors;
    factors.reserve(config["factors"].size());
    for (const json& f : config["factors"])
        factors.push_back(read_edge_list(resolve(base, f.get<std::string>())));
    return HProductJob{std::move(h), std::move(factors), kind, params, tolerance, run_oracle};
}

// ---- commands ----

int report_mismatch(std::ostream& err, double diff, double tolerance) {
    err << "error:mismatch: structured and oracle spectra differ by " << format_double(diff)
        << " (tolerance " << format_double(tolerance) << ")\n";
    return 3;
}

int cmd_spectrum(const std::string& job_file, bool no_oracle, std::ostream& out,
                 std::ostream& err) {
    HProductJob job = load_job_impl(job_file);
    if (no_oracle) job.run_oracle = false;
    SpectrumReport report = run_job(job);
    out << render_report(report);
    if (report.max_abs_diff && *report.max_abs_diff > job.tolerance)
        return report_mismatch(err, *report.max_abs_diff, job.tolerance);
    return 0;
}

int cmd_verify(const std::string& job_file, bool corrupt, std::ostream& out, std::ostream& err) {
    HProductJob job = load_job_impl(job_file);
    job.run_oracle = false;
    Spectrum structured = structured_spectrum(job).structured;
    if (corrupt) {
        // negative control: shift the top eigenvalue and insist we notice
        std::vector<RawValue> raw = structured.raw();
        raw.front().value += 1.0;
        structured = Spectrum(std::move(raw), structured.group_tol());
    }
    SpectrumComparison cmp = compare_spectra(structured, dense_oracle_spectrum(job), job.tolerance);
    out << "max_abs_diff " << format_double(cmp.max_abs_diff) << "\n";
    if (!cmp.matched) return report_mismatch(err, cmp.max_abs_diff, job.tolerance);
    return 0;
}

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        std::string::size_type comma = csv.find(',', start);
        parts.push_back(csv.substr(start, comma == std::string::npos ? comma : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

int cmd_product(const std::string& h_file, const std::string& factors_csv,
                const std::string& out_file, std::ostream& out) {
    Graph h = read_edge_list(h_file);
    std::vector<Graph> factors;
    for (const std::string& name : split_csv(factors_csv)) {
        if (name.empty()) fail(ErrorKind::Usage, "product: empty path in --factors list");
        factors.push_back(read_edge_list(name));
    }
    Graph product = h_product(h, factors);
    write_edge_list(product, out_file);
    out << "wrote " << out_file << " (order " << product.order() << ", " << product.edge_count()
        << " edges)\n";
    return 0;
}

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// ---- dispatch ----

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"eigenvalue spectra of H-products of commuting graphs"};
    app.name("specht");
    app.require_subcommand(1);

    std::string spectrum_job;
    bool no_oracle = false;
    CLI::App* spectrum = app.add_subcommand("spectrum", "compute a job's spectrum, JSON on stdout");
    spectrum->add_option("--job", spectrum_job, "job config file (JSON)")->required();
    spectrum->add_flag("--no-oracle", no_oracle, "skip the dense cross-check");

    std::string verify_job;
    bool corrupt = false;
    CLI::App* verify = app.add_subcommand("verify", "recompute both ways, exit 0 iff they agree");
    verify->add_option("--job", verify_job, "job config file (JSON)")->required();
    verify->add_flag("--corrupt", corrupt, "perturb the structured result first (self-test hook)");

    std::string h_file;
    std::string factors_csv;
    std::string out_file;
    CLI::App* product = app.add_subcommand("product", "write an H-product edge list");
    product->add_option("--H", h_file, "pattern graph edge list")->required();
    product->add_option("--factors", factors_csv, "comma-separated factor edge lists")->required();
    product->add_option("--out", out_file, "output edge list path")->required();

    std::int64_t bench_n = 0;
    std::int64_t bench_l = 0;
    std::int64_t bench_trials = 3;
    std::uint64_t bench_seed = 1;
    CLI::App* bench =
        app.add_subcommand("bench", "time structured vs dense on a seed-determined circulant job");
    bench->add_option("--n", bench_n, "factor order")->required();
    bench->add_option("--l", bench_l, "number of factors")->required();
    bench->add_option("--trials", bench_trials, "timing repetitions (best-of)");
    bench->add_option("--seed", bench_seed, "job generator seed");

    try {
        // CLI11 consumes a reversed argument vector (argv order, back to front).
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        fail(ErrorKind::Usage, e.what());
    }

    if (spectrum->parsed()) return cmd_spectrum(spectrum_job, no_oracle, out, err);
    if (verify->parsed()) return cmd_verify(verify_job, corrupt, out, err);
    if (product->parsed()) return cmd_product(h_file, factors_csv, out_file, out);
    if (bench->parsed()) {
        out << render_bench(run_bench(bench_n, bench_l, bench_trials, bench_seed));
        return 0;
    }
    fail(ErrorKind::Usage, "no subcommand given");  // unreachable: require_subcommand(1)
}

}  // namespace

HProductJob load_job(const std::string& file) { return load_job_impl(file); }

BenchResult run_bench(Index n, Index l, Index trials, std::uint64_t seed) {
    if (n < 2 || l < 1 || trials < 1)
        fail(ErrorKind::Usage, "bench: need --n >= 2, --l >= 1, --trials >= 1");
    if (n * l > 4096)
        fail(ErrorKind::Usage, "bench: product order n*l = " + std::to_string(n * l) +
                                   " exceeds the 4096 dense-oracle cap");

    SplitMix64 rng{seed};
    Graph h(l);
    for (Index u = 0; u < l; ++u)
        for (Index v = u + 1; v < l; ++v)
            if (rng.uniform() < 0.5) h.add_edge(u, v);

    std::vector<Graph> factors;
    factors.reserve(static_cast<std::size_t>(l));
    for (Index j = 0; j < l; ++j) {
        std::vector<Index> steps;
        for (Index s = 1; 2 * s <= n; ++s)
            if (rng.uniform() < 0.5) steps.push_back(s);
        if (steps.empty())
            steps.push_back(1 + static_cast<Index>(rng.next() % static_cast<std::uint64_t>(n / 2)));
        factors.push_back(circulant(n, steps));
    }

    HProductJob job{std::move(h), std::move(factors)};

    BenchResult result{n, l, trials, seed, 0.0, 0.0, 0.0, 0.0, {}};
    result.detail.reserve(static_cast<std::size_t>(trials));
    for (Index t = 0; t < trials; ++t) {
        detail::Timer structured_timer;
        SpectrumReport structured = adjacency_spectrum_hproduct(job.h, job.factors);
        double structured_ms = structured_timer.ms();

        detail::Timer oracle_timer;
        Spectrum oracle = dense_oracle_spectrum(job);
        double oracle_ms = oracle_timer.ms();

        result.detail.push_back({structured_ms, oracle_ms});
        if (t == 0)
            result.max_abs_diff = compare_spectra(structured.structured, oracle, 1.0).max_abs_diff;
    }
    result.structured_ms = result.detail.front().structured_ms;
    result.oracle_ms = result.detail.front().oracle_ms;
    for (const BenchTrial& trial : result.detail) {
        result.structured_ms = std::min(result.structured_ms, trial.structured_ms);
        result.oracle_ms = std::min(result.oracle_ms, trial.oracle_ms);
    }
    result.ratio = result.oracle_ms / std::max(result.structured_ms, 1e-9);
    return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const Error& e) {
        err << "error:" << to_string(e.kind()) << ": " << one_line(e.what()) << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error:solver_failure: " << one_line(e.what()) << "\n";
        return 2;
    }
}

}  // namespace specht::cli
