#include "macregion/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "macregion/mc_validator.hpp"
#include "macregion/regions.hpp"
#include "macregion/serialize.hpp"

namespace macregion::cli {

namespace {

using io::Json;

struct BudgetFlags {
    std::optional<double> p1;
    std::optional<double> p2;
    std::optional<double> sum_power;
    bool db = false;
};

struct CommonFlags {
    double noise = 1.0;
    double bandwidth = 1.0;
    std::string format = "json";
    std::string out_path;
    std::string manifest_path;
    bool no_timestamp = false;
};

double from_db(double v, bool db) { return db ? std::pow(10.0, v / 10.0) : v; }

void add_budget(CLI::App* cmd, BudgetFlags& b)
{
    auto* p1 = cmd->add_option("--p1", b.p1, "user-1 power (linear)");
    auto* p2 = cmd->add_option("--p2", b.p2, "user-2 power (linear)");
    auto* sum = cmd->add_option("--sum-power", b.sum_power, "shared power budget (linear)");
    p1->needs(p2);
    p2->needs(p1);
    sum->excludes(p1)->excludes(p2);
    cmd->add_flag("--db", b.db, "read powers and noise in dB instead of linear units");
}

void add_common(CLI::App* cmd, CommonFlags& c, const std::string& default_format)
{
    c.format = default_format;
    cmd->add_option("--noise", c.noise, "noise power N (linear)")->capture_default_str();
    cmd->add_option("--bandwidth", c.bandwidth, "total bandwidth B")->capture_default_str();
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--out", c.out_path, "write the document to this file instead of stdout");
    cmd->add_option("--manifest", c.manifest_path, "write the run manifest of a CSV document to this file");
    cmd->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from the manifest");
}

PowerBudget<double> make_budget(const BudgetFlags& b)
{
    if (b.sum_power)
        return SumPower<double>(from_db(*b.sum_power, b.db));
    if (b.p1 && b.p2)
        return PerUser<double>(from_db(*b.p1, b.db), from_db(*b.p2, b.db));
    throw CLI::RequiredError("either --p1/--p2 or --sum-power");
}

Json budget_json(const BudgetFlags& b)
{
    Json j;
    if (b.sum_power) {
        j["sum_power"] = *b.sum_power;
    } else {
        j["p1"] = b.p1.value_or(0.0);
        j["p2"] = b.p2.value_or(0.0);
    }
    j["db"] = b.db;
    return j;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json manifest(const std::string& command, Json parameters, const CommonFlags& c)
{
    parameters["noise"] = c.noise;
    parameters["bandwidth"] = c.bandwidth;
    parameters["format"] = c.format;
    Json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = command;
    m["parameters"] = std::move(parameters);
    if (!c.no_timestamp)
        m["timestamp"] = utc_timestamp();
    return m;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot open output file: " + path);
    f << text;
}

// JSON documents embed the manifest; CSV documents are accompanied by it.
void emit(const CommonFlags& c, const Json& man, const Json& json_doc, const std::string& csv_doc, std::ostream& out,
          std::ostream& err)
{
    if (io::parse_format(c.format) == io::OutputFormat::json) {
        const std::string text = json_doc.dump(2) + "\n";
        if (c.out_path.empty())
            out << text;
        else
            write_file(c.out_path, text);
        return;
    }
    const std::string man_text = man.dump(2) + "\n";
    if (c.out_path.empty())
        out << csv_doc;
    else
        write_file(c.out_path, csv_doc);
    if (!c.manifest_path.empty())
        write_file(c.manifest_path, man_text);
    else if (!c.out_path.empty())
        write_file(c.out_path + ".manifest.json", man_text);
    else
        err << man_text;
}

Scheme parse_scheme(const std::string& s)
{
    if (s == "sc")
        return Scheme::superposition;
    if (s == "td")
        return Scheme::td;
    return Scheme::fd;
}

ChannelConfig<double> channel(const CommonFlags& c, bool db)
{
    return ChannelConfig<double>(from_db(c.noise, db), c.bandwidth);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Two-user multiple access channel rate regions: superposition coding, TD and FD", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    BudgetFlags region_budget;
    CommonFlags region_common;
    auto* region = app.add_subcommand("region", "print the superposition capacity region");
    add_budget(region, region_budget);
    add_common(region, region_common, "json");

    BudgetFlags frontier_budget;
    CommonFlags frontier_common;
    std::string frontier_scheme;
    int frontier_resolution = kDefaultResolution;
    auto* frontier = app.add_subcommand("frontier", "export a sampled Pareto frontier");
    frontier->add_option("--scheme", frontier_scheme, "sc, td or fd")
        ->required()
        ->check(CLI::IsMember({"sc", "td", "fd"}));
    add_budget(frontier, frontier_budget);
    frontier->add_option("--resolution", frontier_resolution, "split grid size")
        ->check(CLI::Range(2, 1 << 24))
        ->capture_default_str();
    add_common(frontier, frontier_common, "csv");

    double compare_power = 0.0;
    bool compare_db = false;
    int compare_resolution = kDefaultResolution;
    double compare_tol = kDefaultTolerance;
    CommonFlags compare_common;
    auto* compare = app.add_subcommand("compare", "check that SC, TD and FD regions coincide under a sum power");
    compare->add_option("--sum-power", compare_power, "shared power budget (linear)")->required();
    compare->add_flag("--db", compare_db, "read powers and noise in dB");
    compare->add_option("--resolution", compare_resolution, "split grid size")
        ->check(CLI::Range(2, 1 << 24))
        ->capture_default_str();
    compare->add_option("--tol", compare_tol, "Hausdorff tolerance in bits")->capture_default_str();
    add_common(compare, compare_common, "json");

    double v_p1 = 0.0, v_p2 = 0.0, v_tol = mc::kDefaultTolerance;
    bool v_db = false;
    std::int64_t v_samples = mc::kDefaultSamples;
    std::uint64_t v_seed = 0, v_stream = 0;
    int v_knn = mc::kDefaultNeighbors;
    unsigned v_workers = 1;
    CommonFlags validate_common;
    auto* validate = app.add_subcommand("validate", "Monte Carlo check of the SIC rate chain");
    validate->add_option("--p1", v_p1, "user-1 power (linear)")->required();
    validate->add_option("--p2", v_p2, "user-2 power (linear)")->required();
    validate->add_flag("--db", v_db, "read powers and noise in dB");
    validate->add_option("--samples", v_samples, "sample count m")->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40))->capture_default_str();
    validate->add_option("--seed", v_seed, "RNG seed")->capture_default_str();
    validate->add_option("--stream", v_stream, "RNG substream id")->capture_default_str();
    validate->add_option("--tol", v_tol, "rate tolerance in bits")->capture_default_str();
    validate->add_option("--knn", v_knn, "k for the k-NN cross-check (0 disables it)")
        ->check(CLI::Range(0, 64))
        ->capture_default_str();
    validate->add_option("--workers", v_workers, "sample generation threads (output is identical)")
        ->check(CLI::Range(1u, 64u))
        ->capture_default_str();
    add_common(validate, validate_common, "json");

    BudgetFlags sweep_budget;
    CommonFlags sweep_common;
    std::string sweep_scheme = "sc";
    double noise_min = 1.0, noise_max = 1.0;
    int steps = 1;
    auto* sweep = app.add_subcommand("sweep", "best sum rate over a log-spaced noise grid");
    sweep->add_option("--scheme", sweep_scheme, "sc, td or fd")
        ->check(CLI::IsMember({"sc", "td", "fd"}))
        ->capture_default_str();
    add_budget(sweep, sweep_budget);
    sweep->add_option("--noise-min", noise_min, "smallest noise power")->required();
    sweep->add_option("--noise-max", noise_max, "largest noise power")->required();
    sweep->add_option("--steps", steps, "grid size")->check(CLI::Range(1, 1 << 20))->capture_default_str();
    add_common(sweep, sweep_common, "csv");

    std::vector<const char*> argv{kToolName};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (sweep->parsed()) {
            if (!(noise_min > 0.0) || !(noise_min <= noise_max))
                throw CLI::ValidationError("--noise-min/--noise-max", "need 0 < noise-min <= noise-max");
        }
        const std::pair<CLI::App*, const BudgetFlags*> budgeted[] = {
            {region, &region_budget}, {frontier, &frontier_budget}, {sweep, &sweep_budget}};
        for (const auto& [cmd, b] : budgeted) {
            if (cmd->parsed() && !b->p1 && !b->sum_power)
                throw CLI::RequiredError("either --p1/--p2 or --sum-power");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (region->parsed()) {
            const auto budget = make_budget(region_budget);
            const auto r = superposition_region<double>(budget, channel(region_common, region_budget.db));
            const Json man = manifest("region", budget_json(region_budget), region_common);
            emit(region_common, man, io::region_json(man, r), io::region_csv(r), out, err);
            return kExitOk;
        }
        if (frontier->parsed()) {
            const auto budget = make_budget(frontier_budget);
            const auto ch = channel(frontier_common, frontier_budget.db);
            const Scheme scheme = parse_scheme(frontier_scheme);
            const Frontier<double> f = scheme == Scheme::td   ? td_frontier<double>(budget, ch, frontier_resolution)
                                       : scheme == Scheme::fd ? fd_frontier<double>(budget, ch, frontier_resolution)
                                                              : superposition_frontier<double>(budget, ch, frontier_resolution);
            Json params = budget_json(frontier_budget);
            params["scheme"] = frontier_scheme;
            params["resolution"] = frontier_resolution;
            const Json man = manifest("frontier", params, frontier_common);
            emit(frontier_common, man, io::frontier_json(man, frontier_scheme, f), io::frontier_csv(f), out, err);
            return kExitOk;
        }
        if (compare->parsed()) {
            const auto ch = channel(compare_common, compare_db);
            const auto report =
                verify_equivalence<double>(from_db(compare_power, compare_db), ch, compare_resolution, compare_tol);
            Json params;
            params["sum_power"] = compare_power;
            params["db"] = compare_db;
            params["resolution"] = compare_resolution;
            params["tol"] = compare_tol;
            const Json man = manifest("compare", params, compare_common);
            emit(compare_common, man, io::equivalence_json(man, report), io::equivalence_csv(report), out, err);
            return report.verdict ? kExitOk : kExitVerification;
        }
        if (validate->parsed()) {
            const auto ch = channel(validate_common, v_db);
            const mc::SampleConfig cfg(v_seed, v_stream, v_samples);
            const auto report =
                mc::validate_sic_chain(from_db(v_p1, v_db), from_db(v_p2, v_db), ch, cfg, v_tol, v_knn, v_workers);
            Json params;
            params["p1"] = v_p1;
            params["p2"] = v_p2;
            params["db"] = v_db;
            params["samples"] = v_samples;
            params["seed"] = v_seed;
            params["stream"] = v_stream;
            params["tol"] = v_tol;
            params["knn"] = v_knn;
            const Json man = manifest("validate", params, validate_common);
            emit(validate_common, man, io::validation_json(man, report), io::validation_csv(report), out, err);
            return report.passed ? kExitOk : kExitVerification;
        }
        if (sweep->parsed()) {
            const auto budget = make_budget(sweep_budget);
            const Scheme scheme = parse_scheme(sweep_scheme);
            std::string csv = "noise,sum_rate\n";
            Json rows = Json::array();
            const double lo = from_db(noise_min, sweep_budget.db);
            const double hi = from_db(noise_max, sweep_budget.db);
            for (int j = 0; j < steps; ++j) {
                double noise = lo;
                if (j == steps - 1)
                    noise = hi;
                else if (j > 0)
                    noise = lo * std::pow(hi / lo, static_cast<double>(j) / (steps - 1));
                const double rate = best_sum_rate<double>(scheme, budget, ChannelConfig<double>(noise, sweep_common.bandwidth));
                csv += io::format_number(noise) + "," + io::format_number(rate) + "\n";
                rows.push_back({noise, rate});
            }
            Json params = budget_json(sweep_budget);
            params["scheme"] = sweep_scheme;
            params["noise_min"] = noise_min;
            params["noise_max"] = noise_max;
            params["steps"] = steps;
            const Json man = manifest("sweep", params, sweep_common);
            Json doc;
            doc["manifest"] = man;
            doc["scheme"] = sweep_scheme;
            doc["rows"] = std::move(rows);
            emit(sweep_common, man, doc, csv, out, err);
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}

} // namespace macregion::cli
