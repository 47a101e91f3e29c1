#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

namespace urboot::report {

namespace {

std::string fixed(double x, int digits = 4) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string join(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
    return out;
}

std::size_t name_width(std::span<const std::string> names, std::size_t minimum) {
    std::size_t w = minimum;
    for (const auto& n : names) w = std::max(w, n.size() + 2);
    return w;
}

}  // namespace

json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return std::stod(buf);
}

json to_json(const TestOutcome& o) {
    return {{"series", o.series}, {"spec", o.spec},     {"statistic", number(o.statistic)},
            {"p_value", number(o.p_value)}, {"reject", o.reject}, {"lags", o.lags}};
}

json to_json(const SequentialOutcome& s, const std::string& procedure) {
    json steps = json::array();
    for (const auto& st : s.steps) {
        json j{{"h0", st.h0}, {"h1", st.h1}, {"series", st.series}, {"statistic", number(st.statistic)}};
        if (st.p_value) j["p_value"] = number(*st.p_value);
        if (st.critical_value) j["critical_value"] = number(*st.critical_value);
        j["reject"] = st.reject;
        steps.push_back(std::move(j));
    }
    json series = json::array();
    for (std::size_t r = 0; r < s.ranking.size(); ++r) {
        const std::size_t i = s.ranking[r];
        series.push_back({{"series", s.names[i]},
                          {"rank", r + 1},
                          {"statistic", number(s.statistics[i])},
                          {"stationary", static_cast<bool>(s.rej_h0[i])}});
    }
    std::size_t stationary = 0;
    for (bool b : s.rej_h0) stationary += b ? 1 : 0;
    return {{"procedure", procedure}, {"stationary_count", stationary}, {"steps", steps}, {"series", series}};
}

json to_json(const OrderResult& r, std::span<const std::string> names) {
    json orders = json::array();
    for (std::size_t i = 0; i < r.d.size(); ++i) orders.push_back({{"series", names[i]}, {"d", r.d[i]}});
    json stages = json::array();
    for (const auto& st : r.stages) {
        json tested = json::array();
        for (std::size_t j = 0; j < st.series.size(); ++j) {
            tested.push_back({{"series", st.series[j]},
                              {"statistic", number(st.statistics[j])},
                              {"reject", static_cast<bool>(st.rejected[j])}});
        }
        stages.push_back({{"differences", st.d}, {"tested", tested}});
    }
    return {{"orders", orders}, {"stages", stages}};
}

json missing_summary(const Panel& panel) {
    const auto internal = check_missing_insample(panel);
    const auto range = find_nonmissing_subsample(panel);
    json series = json::array();
    for (std::size_t i = 0; i < panel.cols(); ++i) {
        series.push_back({{"series", panel.names()[i]},
                          {"first", range.first[i]},
                          {"last", range.last[i]},
                          {"internal_missing", static_cast<bool>(internal[i])}});
    }
    return {{"balanced", range.all_equal}, {"series", series}};
}

std::string table(const std::vector<TestOutcome>& outcomes) {
    std::vector<std::string> names;
    for (const auto& o : outcomes) names.push_back(o.series);
    const std::size_t w = name_width(names, 8);
    std::ostringstream os;
    os << pad("series", w) << pad("test", 16) << pad("statistic", 12) << pad("p-value", 10) << pad("lags", 10)
       << "unit root\n";
    for (const auto& o : outcomes) {
        os << pad(o.series, w) << pad(o.spec, 16) << pad(fixed(o.statistic), 12) << pad(fixed(o.p_value), 10)
           << pad(join(o.lags), 10) << (o.reject ? "rejected" : "not rejected") << '\n';
    }
    return os.str();
}

std::string table(const SequentialOutcome& s, bool fdr) {
    const std::size_t w = name_width(s.names, 8);
    std::ostringstream os;
    os << pad("H0", 6) << pad("H1", 6) << pad("series", w) << pad("statistic", 12)
       << pad(fdr ? "critical" : "p-value", 10) << "decision\n";
    for (const auto& st : s.steps) {
        os << pad(std::to_string(st.h0), 6) << pad(std::to_string(st.h1), 6) << pad(st.series, w)
           << pad(fixed(st.statistic), 12)
           << pad(fdr ? fixed(st.critical_value.value_or(0.0)) : fixed(st.p_value.value_or(0.0)), 10)
           << (st.reject ? "reject" : "stop") << '\n';
    }
    std::size_t stationary = 0;
    for (bool b : s.rej_h0) stationary += b ? 1 : 0;
    os << "stationary series: " << stationary << " of " << s.names.size() << '\n';
    for (std::size_t i = 0; i < s.names.size(); ++i) {
        if (s.rej_h0[i]) os << "  " << s.names[i] << '\n';
    }
    return os.str();
}

std::string table(const OrderResult& r, std::span<const std::string> names) {
    const std::size_t w = name_width(names, 8);
    std::ostringstream os;
    os << pad("series", w) << "order\n";
    for (std::size_t i = 0; i < r.d.size(); ++i) os << pad(names[i], w) << r.d[i] << '\n';
    return os.str();
}

std::string missing_table(const Panel& panel) {
    const auto internal = check_missing_insample(panel);
    const auto range = find_nonmissing_subsample(panel);
    const std::size_t w = name_width(panel.names(), 8);
    std::ostringstream os;
    os << pad("series", w) << pad("first", 8) << pad("last", 8) << "internal missing\n";
    for (std::size_t i = 0; i < panel.cols(); ++i) {
        os << pad(panel.names()[i], w) << pad(std::to_string(range.first[i]), 8)
           << pad(std::to_string(range.last[i]), 8) << (internal[i] ? "yes" : "no") << '\n';
    }
    os << (range.all_equal ? "balanced: all series share one sample period\n"
                           : "unbalanced: sample periods differ across series\n");
    return os.str();
}

std::string outcomes_csv(const std::vector<TestOutcome>& outcomes) {
    std::ostringstream os;
    os << "series,spec,statistic,p_value,reject\n";
    for (const auto& o : outcomes) {
        os << o.series << ',' << o.spec << ',' << number(o.statistic).dump() << ',' << number(o.p_value).dump() << ','
           << (o.reject ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string sequential_csv(const SequentialOutcome& s) {
    std::ostringstream os;
    os << "series,rank,statistic,stationary\n";
    for (std::size_t r = 0; r < s.ranking.size(); ++r) {
        const std::size_t i = s.ranking[r];
        os << s.names[i] << ',' << r + 1 << ',' << number(s.statistics[i]).dump() << ','
           << (s.rej_h0[i] ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace urboot::report
