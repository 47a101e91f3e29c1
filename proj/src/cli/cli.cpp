#include "cli.hpp"

#include "report.hpp"
#include "urboot/errors.hpp"
#include "urboot/order.hpp"
#include "urboot/plot.hpp"
#include "urboot/unit_root_tests.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef URBOOT_VERSION
#define URBOOT_VERSION "0.0.0"
#endif

namespace urboot::cli {

namespace {

using report::json;

/// Every option of a run after defaults are applied.
struct Settings {
    std::string command;
    std::string input;
    std::vector<std::string> columns;
    bool time_column = false;
    std::vector<std::string> missing_tokens{"NA", ""};

    double level = 0.05;
    std::string boot = "AWB";
    std::size_t B = 1999;
    std::optional<std::size_t> l;
    std::optional<double> ar_awb;
    std::size_t p_min = 0;
    std::optional<std::size_t> p_max;
    std::string ic = "MAIC";
    std::vector<std::string> dc;
    std::vector<std::string> detr;
    bool ic_scale = true;
    bool union_test = true;
    std::vector<double> q;
    std::size_t max_order = 2;
    std::string test = "iadf";
    std::uint64_t seed = 0;

    // Output and execution only; not part of the manifest.
    std::optional<std::size_t> workers;
    std::string json_path;
    std::string csv_path;
    std::string svg_path;
    std::string timestamp;
};

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

json manifest_json(const Settings& s) {
    json options{
        {"columns", s.columns},       {"time_column", s.time_column}, {"missing_tokens", s.missing_tokens},
        {"level", s.level},           {"boot", s.boot},               {"B", s.B},
        {"l", optional_json(s.l)},    {"ar_awb", optional_json(s.ar_awb)}, {"p_min", s.p_min},
        {"p_max", optional_json(s.p_max)}, {"ic", s.ic},              {"dc", s.dc},
        {"detr", s.detr},             {"ic_scale", s.ic_scale},       {"union", s.union_test},
        {"q", s.q},                   {"max_order", s.max_order},     {"test", s.test},
    };
    return {{"tool", "urboot"},      {"version", URBOOT_VERSION}, {"subcommand", s.command},
            {"input", s.input},      {"seed", s.seed},            {"timestamp", s.timestamp},
            {"options", options}};
}

Settings settings_from_manifest(const json& m) {
    Settings s;
    s.command = m.at("subcommand").get<std::string>();
    s.input = m.at("input").get<std::string>();
    s.seed = m.at("seed").get<std::uint64_t>();
    s.timestamp = m.at("timestamp").get<std::string>();
    const json& o = m.at("options");
    s.columns = o.at("columns").get<std::vector<std::string>>();
    s.time_column = o.at("time_column").get<bool>();
    s.missing_tokens = o.at("missing_tokens").get<std::vector<std::string>>();
    s.level = o.at("level").get<double>();
    s.boot = o.at("boot").get<std::string>();
    s.B = o.at("B").get<std::size_t>();
    s.l = optional_from<std::size_t>(o, "l");
    s.ar_awb = optional_from<double>(o, "ar_awb");
    s.p_min = o.at("p_min").get<std::size_t>();
    s.p_max = optional_from<std::size_t>(o, "p_max");
    s.ic = o.at("ic").get<std::string>();
    s.dc = o.at("dc").get<std::vector<std::string>>();
    s.detr = o.at("detr").get<std::vector<std::string>>();
    s.ic_scale = o.at("ic_scale").get<bool>();
    s.union_test = o.at("union").get<bool>();
    s.q = o.at("q").get<std::vector<double>>();
    s.max_order = o.at("max_order").get<std::size_t>();
    s.test = o.at("test").get<std::string>();
    return s;
}

std::string current_timestamp() {
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) now = static_cast<std::time_t>(std::atoll(epoch));
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------
// Option translation

BootMethod parse_boot(const std::string& name) {
    static const std::map<std::string, BootMethod> methods{{"SB", BootMethod::sb},   {"MBB", BootMethod::mbb},
                                                           {"SWB", BootMethod::swb}, {"DWB", BootMethod::dwb},
                                                           {"BWB", BootMethod::bwb}, {"AWB", BootMethod::awb}};
    return methods.at(upper(name));
}

InfoCriterion parse_ic(const std::string& name) {
    static const std::map<std::string, InfoCriterion> criteria{{"AIC", InfoCriterion::aic},
                                                               {"BIC", InfoCriterion::bic},
                                                               {"MAIC", InfoCriterion::maic},
                                                               {"MBIC", InfoCriterion::mbic}};
    return criteria.at(upper(name));
}

Deterministics parse_dc(const std::string& name) {
    const std::string n = lower(name);
    if (n == "none" || n == "0") return Deterministics::none;
    if (n == "intercept" || n == "1") return Deterministics::intercept;
    return Deterministics::trend;
}

OrderTest parse_order_test(const std::string& name) {
    static const std::map<std::string, OrderTest> tests{{"adf", OrderTest::adf},   {"union", OrderTest::union_test},
                                                        {"iadf", OrderTest::iadf}, {"bsqt", OrderTest::bsqt},
                                                        {"fdr", OrderTest::fdr}};
    return tests.at(lower(name));
}

std::vector<DetrendSpec> specs_from(const Settings& s) {
    if (s.dc.empty() && s.detr.empty()) return {};
    const std::vector<std::string> dcs = s.dc.empty() ? std::vector<std::string>{"intercept"} : s.dc;
    const std::vector<std::string> detrs = s.detr.empty() ? std::vector<std::string>{"OLS"} : s.detr;
    std::vector<DetrendSpec> specs;
    for (const auto& d : dcs) {
        for (const auto& m : detrs) {
            specs.push_back({parse_dc(d), upper(m) == "QD" ? DetrendMethod::qd : DetrendMethod::ols, std::nullopt});
        }
    }
    return specs;
}

TestOptions test_options(const Settings& s) {
    TestOptions o;
    o.boot.method = parse_boot(s.boot);
    o.boot.B = s.B;
    o.boot.block_length = s.l;
    o.boot.ar_awb = s.ar_awb;
    o.boot.level = s.level;
    o.boot.seed = s.seed;
    o.boot.workers = s.workers;
    validate(o.boot);
    o.policy.p_min = s.p_min;
    o.policy.p_max = s.p_max;
    o.policy.criterion = parse_ic(s.ic);
    o.policy.rescale = s.ic_scale;
    o.union_test = s.union_test;
    o.specs = specs_from(s);
    return o;
}

Panel load_input(const Settings& s) {
    CsvOptions csv;
    csv.has_time_column = s.time_column;
    csv.missing_tokens = s.missing_tokens;
    Panel panel = load_csv(s.input, csv);
    if (s.columns.empty()) return panel;
    std::vector<std::size_t> idx;
    for (const auto& c : s.columns) idx.push_back(panel.index_of(c));
    return panel.select(idx);
}

Panel single_series(const Panel& panel) {
    if (panel.cols() != 1) {
        throw ValidationError("this test takes one series; choose it with --col (input has " +
                              std::to_string(panel.cols()) + " columns)");
    }
    return panel;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

// ---------------------------------------------------------------------------
// Commands

struct Output {
    json results = json::array();
    std::vector<std::string> warnings;
    std::string table;
    std::string csv;
    std::string svg;
};

void add_warnings(Output& out, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) out.warnings.push_back(w);
    }
}

void from_report(Output& out, const TestReport& r) {
    for (const auto& o : r.outcomes) out.results.push_back(report::to_json(o));
    add_warnings(out, r.warnings);
    out.table = report::table(r.outcomes);
    out.csv = report::outcomes_csv(r.outcomes);
}

Output execute(const Settings& s) {
    Output out;
    const Panel panel = load_input(s);
    const std::string& cmd = s.command;
    if (cmd == "check") {
        out.results.push_back(report::missing_summary(panel));
        out.table = report::missing_table(panel);
        std::ostringstream csv;
        csv << "series,first,last,internal_missing\n";
        for (const auto& row : out.results[0]["series"]) {
            csv << row["series"].get<std::string>() << ',' << row["first"] << ',' << row["last"] << ','
                << row["internal_missing"] << '\n';
        }
        out.csv = csv.str();
        out.svg = plot_missing_pattern(panel);
        return out;
    }

    TestOptions opts = test_options(s);
    if (cmd == "adf") {
        if (opts.specs.empty()) opts.specs.push_back({});
        from_report(out, boot_adf(single_series(panel), opts));
    } else if (cmd == "union") {
        from_report(out, boot_union(single_series(panel), opts));
    } else if (cmd == "iadf") {
        from_report(out, iadf(panel, opts));
    } else if (cmd == "panel") {
        from_report(out, panel_gm(panel, opts));
    } else if (cmd == "bsqt" || cmd == "fdr") {
        const SequentialOutcome seq = cmd == "bsqt" ? bsqt(panel, s.q, opts) : fdr(panel, opts);
        out.results.push_back(report::to_json(seq, cmd));
        add_warnings(out, seq.warnings);
        out.table = report::table(seq, cmd == "fdr");
        out.csv = report::sequential_csv(seq);
    } else if (cmd == "orders") {
        OrderOptions oo;
        oo.max_order = s.max_order;
        oo.test = parse_order_test(s.test);
        oo.test_options = opts;
        oo.q = s.q;
        const OrderResult r = order_integration(panel, oo);
        out.results.push_back(report::to_json(r, panel.names()));
        add_warnings(out, r.warnings);
        out.table = report::table(r, panel.names());
        out.csv = to_csv(r.diff_data);
        out.svg = plot_order_integration(r.d, panel.names());
    } else {
        throw ValidationError("unknown subcommand " + cmd);
    }
    return out;
}

int emit(const Settings& s, const Output& out) {
    for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << out.table;
    if (!s.json_path.empty()) {
        json diagnostics = json::array();
        for (const auto& w : out.warnings) diagnostics.push_back({{"level", "warning"}, {"message", w}});
        const json doc{{"manifest", manifest_json(s)}, {"results", out.results}, {"diagnostics", diagnostics}};
        write_file(s.json_path, doc.dump(2) + "\n");
    }
    if (!s.csv_path.empty()) write_file(s.csv_path, out.csv);
    if (!s.svg_path.empty() && !out.svg.empty()) write_file(s.svg_path, out.svg);
    return kSuccess;
}

// ---------------------------------------------------------------------------
// Argument parsing

enum Groups : unsigned {
    kBoot = 1u << 0,
    kLags = 1u << 1,
    kSpecs = 1u << 2,
    kUnion = 1u << 3,
    kQ = 1u << 4,
    kOrders = 1u << 5,
    kSvg = 1u << 6,
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& description, unsigned groups,
                      Settings& s, std::string& selected) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("input", s.input, "CSV file with a header row; one column per series")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--col", s.columns, "Columns to use (comma separated); default all")->delimiter(',');
    sub->add_flag("--time-column", s.time_column, "First CSV column holds period labels");
    sub->add_option("--na", s.missing_tokens, "Tokens read as missing")->delimiter(',')->capture_default_str();
    sub->add_option("--json", s.json_path, "Write results, manifest and diagnostics as JSON");
    sub->add_option("--csv", s.csv_path,
                    name == "orders" ? "Write the differenced panel as CSV" : "Write results as CSV");
    if (groups & kSvg) sub->add_option("--svg", s.svg_path, "Write an SVG figure");

    if (groups & kBoot) {
        sub->add_option("--level", s.level, "Significance level (FDR level for fdr)")->capture_default_str();
        sub->add_option("--boot", s.boot, "Bootstrap method")
            ->check(CLI::IsMember({"SB", "MBB", "SWB", "DWB", "BWB", "AWB"}, CLI::ignore_case))
            ->capture_default_str();
        sub->add_option("--B", s.B, "Bootstrap replications")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--l", s.l, "Block length; default floor(1.75 T^(1/3))")->check(CLI::PositiveNumber);
        sub->add_option("--ar-awb", s.ar_awb, "AWB autoregressive parameter; default 0.01^(1/l)")
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--seed", s.seed, "Random seed")->capture_default_str();
        sub->add_option("--workers,--threads", s.workers, "Worker threads; default all cores")
            ->check(CLI::PositiveNumber);
    }
    if (groups & kLags) {
        sub->add_option("--p-min", s.p_min, "Smallest lag considered")->capture_default_str();
        sub->add_option("--p-max", s.p_max, "Largest lag considered; default floor(12 (T/100)^(1/4))");
        sub->add_option("--ic", s.ic, "Information criterion")
            ->check(CLI::IsMember({"AIC", "BIC", "MAIC", "MBIC"}, CLI::ignore_case))
            ->capture_default_str();
        sub->add_flag("--ic-scale,!--no-ic-scale", s.ic_scale, "Rescale the series before lag selection");
    }
    if (groups & kSpecs) {
        sub->add_option("--dc", s.dc, "Deterministics: none, intercept, trend (or 0, 1, 2)")
            ->delimiter(',')
            ->check(CLI::IsMember({"none", "intercept", "trend", "intercept_trend", "0", "1", "2"}, CLI::ignore_case));
        sub->add_option("--detr", s.detr, "Detrending: OLS, QD")
            ->delimiter(',')
            ->check(CLI::IsMember({"OLS", "QD"}, CLI::ignore_case));
    }
    if (groups & kUnion) sub->add_flag("--union,!--no-union", s.union_test, "Use the union of rejections");
    if (groups & kQ) {
        sub->add_option("--q", s.q, "BSQT group boundaries: quantiles in [0,1] or counts")->delimiter(',');
    }
    if (groups & kOrders) {
        sub->add_option("--max-order", s.max_order, "Highest order of integration")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--test", s.test, "Test used at each stage")
            ->check(CLI::IsMember({"adf", "union", "iadf", "bsqt", "fdr"}, CLI::ignore_case))
            ->capture_default_str();
    }
    sub->callback([&selected, name] { selected = name; });
    return sub;
}

}  // namespace

int run(int argc, const char* const* argv) {
    Settings s;
    std::string selected;
    std::string replay_path;

    CLI::App app{"Bootstrap unit root tests for single series and panels", "urboot"};
    app.set_version_flag("--version", URBOOT_VERSION);
    app.require_subcommand(1);
    const unsigned tests = kBoot | kLags;
    add_command(app, "check", "Report and plot the missing-value pattern", kSvg, s, selected);
    add_command(app, "adf", "Bootstrap ADF test on one series", tests | kSpecs, s, selected);
    add_command(app, "union", "Bootstrap union-of-rejections test on one series", tests | kSpecs, s, selected);
    add_command(app, "iadf", "Individual tests on every series", tests | kSpecs | kUnion, s, selected);
    add_command(app, "panel", "Group-mean panel test", tests | kSpecs | kUnion, s, selected);
    add_command(app, "bsqt", "Bootstrap sequential quantile test", tests | kSpecs | kUnion | kQ, s, selected);
    add_command(app, "fdr", "Bootstrap FDR-controlling test", tests | kSpecs | kUnion, s, selected);
    add_command(app, "orders", "Determine orders of integration", tests | kSpecs | kUnion | kQ | kOrders | kSvg, s,
                selected);
    CLI::App* replay = app.add_subcommand("replay", "Re-run the manifest embedded in a JSON result");
    replay->add_option("result", replay_path, "JSON file written with --json")->required()->check(CLI::ExistingFile);
    replay->add_option("--json", s.json_path, "Write the reproduced result as JSON");
    replay->add_option("--workers,--threads", s.workers, "Worker threads")->check(CLI::PositiveNumber);
    replay->callback([&selected] { selected = "replay"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (selected == "replay") {
            std::ifstream in(replay_path);
            const json doc = json::parse(in);
            Settings r = settings_from_manifest(doc.at("manifest"));
            r.json_path = s.json_path;
            r.workers = s.workers;
            return emit(r, execute(r));
        }
        s.command = selected;
        if (s.command == "adf") s.union_test = false;
        s.timestamp = current_timestamp();
        return emit(s, execute(s));
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const json::exception& e) {
        std::cerr << "error: invalid result file: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace urboot::cli
