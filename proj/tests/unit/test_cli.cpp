#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kFixture = std::string(URBOOT_TEST_DATA) + "/macro_panel.csv";

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "urboot");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    // Keep the test log readable: results go to stdout of the test binary.
    return urboot::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "urboot_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("usage errors") {
        CHECK(run({}) == urboot::cli::kUsage);
        CHECK(run({"adf", kFixture, "--col", "GDP_A", "--no-such-flag"}) == urboot::cli::kUsage);
        CHECK(run({"adf", "/nonexistent/file.csv"}) == urboot::cli::kUsage);
        CHECK(run({"iadf", kFixture, "--time-column", "--boot", "XYZ"}) == urboot::cli::kUsage);
        CHECK(run({"--help"}) == urboot::cli::kSuccess);
    }

    TEST_CASE("validation and degenerate input") {
        CHECK(run({"check", kFixture, "--time-column"}) == urboot::cli::kSuccess);
        CHECK(run({"panel", kFixture, "--time-column", "--boot", "MBB", "--B", "19"}) == urboot::cli::kValidation);
        CHECK(run({"adf", kFixture, "--time-column", "--col", "NOPE", "--B", "19"}) == urboot::cli::kValidation);

        const fs::path flat = scratch("flat.csv");
        {
            std::ofstream out(flat);
            out << "x\n";
            for (int t = 0; t < 40; ++t) out << "3.5\n";
        }
        CHECK(run({"adf", flat.string(), "--B", "19"}) == urboot::cli::kDegenerate);
    }

    TEST_CASE("json output and replay") {
        const fs::path first = scratch("iadf.json");
        const fs::path second = scratch("iadf_replay.json");
        REQUIRE(run({"iadf", kFixture, "--time-column", "--boot", "MBB", "--B", "19", "--seed", "3", "--json",
                     first.string()}) == urboot::cli::kSuccess);
        const auto doc = nlohmann::json::parse(slurp(first));
        CHECK(doc.contains("manifest"));
        CHECK(doc["manifest"]["subcommand"] == "iadf");
        CHECK(doc["results"].size() == 5);
        REQUIRE_FALSE(doc["diagnostics"].empty());
        CHECK(doc["diagnostics"][0]["level"] == "warning");
        CHECK_FALSE(doc["manifest"]["options"].contains("workers"));

        REQUIRE(run({"replay", first.string(), "--json", second.string(), "--workers", "2"}) ==
                urboot::cli::kSuccess);
        CHECK(slurp(first) == slurp(second));
    }

    TEST_CASE("orders with csv and svg output") {
        const fs::path csv = scratch("orders.csv");
        const fs::path svg = scratch("orders.svg");
        CHECK(run({"orders", kFixture, "--time-column", "--col", "GDP_A,GDP_E", "--B", "19", "--csv", csv.string(),
                   "--svg", svg.string()}) == urboot::cli::kSuccess);
        CHECK(slurp(svg).find("<svg") == 0);
        CHECK(slurp(csv).find("GDP_E") != std::string::npos);
    }
}
