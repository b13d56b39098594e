#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "macregion/cli.hpp"
#include "macregion/serialize.hpp"

using namespace macregion;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("format_number is exact and locale free")
{
    CHECK(io::format_number(0.5) == "0.5");
    CHECK(io::format_number(1.0) == "1");
    CHECK(io::format_number(0.1) == "0.10000000000000001");
    for (double v : {0.58496250072115618, 1e-300, 123456.789, 2.2250738585072014e-308})
        CHECK(io::parse_number(io::format_number(v)) == v);
    CHECK_THROWS_AS(io::parse_number("1,5"), DomainError);
}

TEST_CASE("region subcommand")
{
    const auto r = run({"region", "--p1", "1", "--p2", "1", "--noise", "1", "--format", "json"});
    REQUIRE(r.code == cli::kExitOk);
    const auto doc = io::Json::parse(r.out);
    REQUIRE(doc.at("vertices").size() == 5);
    CHECK(doc["vertices"][2][0].get<double>() == doctest::Approx(1.0));
    CHECK(doc["vertices"][2][1].get<double>() == doctest::Approx(0.5849625007));
    CHECK(doc.begin().key() == "manifest");
    CHECK(doc["manifest"]["parameters"]["p1"].get<double>() == 1.0);

    const auto tri = run({"region", "--sum-power", "2", "--noise", "1", "--format", "json"});
    REQUIRE(tri.code == cli::kExitOk);
    CHECK(io::Json::parse(tri.out).at("vertices").size() == 3);

    const auto csv = run({"region", "--sum-power", "2", "--format", "csv", "--no-timestamp"});
    REQUIRE(csv.code == cli::kExitOk);
    CHECK(csv.out.rfind("kind,x,y,b\n", 0) == 0);
    CHECK(io::Json::parse(csv.err).at("command") == "region");
}

TEST_CASE("exit code discipline")
{
    const auto bad_power = run({"region", "--p1", "-1", "--p2", "1", "--noise", "1"});
    CHECK(bad_power.code == cli::kExitDomain);
    CHECK(bad_power.err.find("power must be nonnegative") != std::string::npos);

    CHECK(run({"region", "--p1", "1"}).code == cli::kExitUsage);
    CHECK(run({"region", "--p1", "1", "--p2", "1", "--sum-power", "2"}).code == cli::kExitUsage);
    CHECK(run({"region"}).code == cli::kExitUsage);
    CHECK(run({"frontier", "--scheme", "cdma", "--p1", "1", "--p2", "1"}).code == cli::kExitUsage);
    CHECK(run({"frontier", "--scheme", "td", "--p1", "1", "--p2", "1", "--resolution", "1"}).code == cli::kExitUsage);
    CHECK(run({"frontier", "--scheme", "td", "--p1", "0", "--p2", "0"}).code == cli::kExitDomain);
    CHECK(run({"compare", "--sum-power", "0", "--noise", "1"}).code == cli::kExitDomain);
    CHECK(run({"region", "--p1", "1", "--p2", "1", "--noise", "0"}).code == cli::kExitDomain);
    CHECK(run({"sweep", "--sum-power", "1", "--noise-min", "2", "--noise-max", "1"}).code == cli::kExitUsage);
    CHECK(run({"bogus"}).code == cli::kExitUsage);
    CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("frontier subcommand CSV")
{
    const auto fd = run({"frontier", "--scheme", "fd", "--p1", "1", "--p2", "1", "--noise", "1", "--resolution", "3",
                         "--format", "csv"});
    REQUIRE(fd.code == cli::kExitOk);
    CHECK(fd.out == "r1,r2\n0,1\n0.79248125036057804,0.79248125036057804\n1,0\n");

    const auto td = run({"frontier", "--scheme", "td", "--p1", "1", "--p2", "1", "--noise", "1", "--resolution", "3"});
    REQUIRE(td.code == cli::kExitOk);
    CHECK(td.out == "r1,r2\n0,1\n0.5,0.5\n1,0\n");

    const auto sc = run({"frontier", "--scheme", "sc", "--sum-power", "2", "--noise", "1", "--resolution", "3"});
    REQUIRE(sc.code == cli::kExitOk);
    const auto f = io::parse_frontier_csv(sc.out);
    REQUIRE(f.size() == 3);
    for (Eigen::Index i = 0; i < f.size(); ++i)
        CHECK(f[i].sum() == doctest::Approx(1.5849625007211562).epsilon(1e-12));
}

TEST_CASE("frontier files round-trip exactly with a manifest alongside")
{
    const auto dir = std::filesystem::temp_directory_path() / "macregion_cli_test";
    std::filesystem::create_directories(dir);
    const auto csv_path = (dir / "fd.csv").string();
    const auto json_path = (dir / "fd.json").string();
    const std::vector<std::string> base = {"frontier", "--scheme", "fd", "--p1", "0.3", "--p2", "7.1", "--noise", "0.9",
                                           "--resolution", "257"};
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv", "--out", csv_path});
    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "json", "--out", json_path});
    REQUIRE(run(csv_args).code == cli::kExitOk);
    REQUIRE(run(json_args).code == cli::kExitOk);

    const auto expected = fd_frontier<double>(PerUser<double>(0.3, 7.1), ChannelConfig<double>(0.9), 257);
    CHECK(io::parse_frontier_csv(slurp(csv_path)).points() == expected.points());
    CHECK(io::parse_frontier_json(slurp(json_path)).points() == expected.points());
    const auto manifest = io::Json::parse(slurp(csv_path + ".manifest.json"));
    CHECK(manifest.at("parameters").at("resolution") == 257);
    CHECK(manifest.at("parameters").at("scheme") == "fd");
    std::filesystem::remove_all(dir);
}

TEST_CASE("compare subcommand")
{
    const auto ok = run({"compare", "--sum-power", "2", "--noise", "1", "--resolution", "4097", "--tol", "1e-6"});
    REQUIRE(ok.code == cli::kExitOk);
    const auto doc = io::Json::parse(ok.out);
    CHECK(doc.at("verdict") == true);
    CHECK(doc.at("sum_capacity").get<double>() == doctest::Approx(1.5849625007211562));

    CHECK(run({"compare", "--sum-power", "2", "--noise", "1", "--resolution", "2", "--tol", "0"}).code == cli::kExitOk);

    // Rounding leaves sub-ulp gaps between the samples, so a zero tolerance at
    // a fine grid is a verification failure rather than a usage error.
    const auto strict = run({"compare", "--sum-power", "2", "--noise", "1", "--resolution", "4097", "--tol", "0"});
    CHECK(strict.code == cli::kExitVerification);
}

TEST_CASE("validate subcommand is byte-reproducible")
{
    const std::vector<std::string> args = {"validate", "--p1", "1", "--p2", "1", "--noise", "1", "--samples", "200000",
                                           "--seed", "42", "--no-timestamp"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == cli::kExitOk);
    CHECK(a.out == b.out);
    const auto doc = io::Json::parse(a.out);
    CHECK(doc.at("passed") == true);
    CHECK(doc.at("manifest").at("parameters").at("seed") == 42);

    auto threaded = args;
    threaded.insert(threaded.end(), {"--workers", "3"});
    CHECK(run(threaded).out == a.out);

    const auto single = run({"validate", "--p1", "1", "--p2", "0", "--noise", "1", "--samples", "200000", "--seed", "7",
                             "--format", "csv", "--no-timestamp"});
    REQUIRE(single.code == cli::kExitOk);
    CHECK(single.out.find("user2_with_interference,0,0,0,") != std::string::npos);
}

TEST_CASE("sweep subcommand")
{
    const auto one = run({"sweep", "--sum-power", "2", "--noise-min", "1", "--noise-max", "1", "--steps", "1"});
    REQUIRE(one.code == cli::kExitOk);
    CHECK(one.out == "noise,sum_rate\n1,1.5849625007211561\n");

    const auto zero = run({"sweep", "--sum-power", "0", "--noise-min", "0.1", "--noise-max", "10", "--steps", "5"});
    REQUIRE(zero.code == cli::kExitOk);
    const auto rows = zero.out.substr(zero.out.find('\n') + 1);
    std::istringstream lines(rows);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        CHECK(line.substr(line.find(',') + 1) == "0");
        ++count;
    }
    CHECK(count == 5);

    const auto td = run({"sweep", "--scheme", "td", "--p1", "1", "--p2", "3", "--noise-min", "1", "--noise-max", "1",
                         "--steps", "1", "--format", "json", "--no-timestamp"});
    REQUIRE(td.code == cli::kExitOk);
    CHECK(io::Json::parse(td.out)["rows"][0][1].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("db flag converts powers at parse time")
{
    const auto r = run({"region", "--sum-power", "0", "--db", "--noise", "0", "--no-timestamp"});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(io::Json::parse(r.out)["vertices"][1][0].get<double>() == doctest::Approx(1.0));
}
