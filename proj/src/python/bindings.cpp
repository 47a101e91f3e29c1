#include "urboot/adf.hpp"
#include "urboot/errors.hpp"
#include "urboot/order.hpp"
#include "urboot/panel.hpp"
#include "urboot/unit_root_tests.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cctype>
#include <limits>

namespace py = pybind11;
using namespace urboot;

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

template <class Enum, std::size_t N>
Enum pick(const std::string& name, const std::pair<const char*, Enum> (&table)[N], const char* what) {
    for (const auto& [key, value] : table) {
        if (upper(name) == upper(key)) return value;
    }
    throw ValidationError(std::string("unknown ") + what + " '" + name + "'");
}

Deterministics parse_dc(const py::handle& h) {
    if (py::isinstance<py::int_>(h)) {
        const int v = h.cast<int>();
        if (v < 0 || v > 2) throw ValidationError("dc must be 0, 1 or 2");
        return static_cast<Deterministics>(v);
    }
    static const std::pair<const char*, Deterministics> table[] = {{"none", Deterministics::none},
                                                                   {"intercept", Deterministics::intercept},
                                                                   {"trend", Deterministics::trend},
                                                                   {"intercept_trend", Deterministics::trend}};
    return pick(h.cast<std::string>(), table, "dc");
}

std::vector<py::handle> as_list(const py::handle& h) {
    std::vector<py::handle> out;
    if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
        for (auto item : h) out.push_back(item);
    } else {
        out.push_back(h);
    }
    return out;
}

/// Keyword options shared by every test; unknown keys raise TypeError.
TestOptions test_options(const py::kwargs& kw, std::initializer_list<const char*> extra = {}) {
    TestOptions o;
    py::object dc = py::none();
    py::object detr = py::none();
    for (const auto& [key_h, value] : kw) {
        const std::string key = key_h.cast<std::string>();
        if (key == "level") {
            o.boot.level = value.cast<double>();
        } else if (key == "boot") {
            static const std::pair<const char*, BootMethod> table[] = {
                {"SB", BootMethod::sb},   {"MBB", BootMethod::mbb}, {"SWB", BootMethod::swb},
                {"DWB", BootMethod::dwb}, {"BWB", BootMethod::bwb}, {"AWB", BootMethod::awb}};
            o.boot.method = pick(value.cast<std::string>(), table, "bootstrap method");
        } else if (key == "B") {
            o.boot.B = value.cast<std::size_t>();
        } else if (key == "l") {
            if (!value.is_none()) o.boot.block_length = value.cast<std::size_t>();
        } else if (key == "ar_awb") {
            if (!value.is_none()) o.boot.ar_awb = value.cast<double>();
        } else if (key == "seed") {
            o.boot.seed = value.cast<std::uint64_t>();
        } else if (key == "workers") {
            if (!value.is_none()) o.boot.workers = value.cast<std::size_t>();
        } else if (key == "p_min") {
            o.policy.p_min = value.cast<std::size_t>();
        } else if (key == "p_max") {
            if (!value.is_none()) o.policy.p_max = value.cast<std::size_t>();
        } else if (key == "ic") {
            static const std::pair<const char*, InfoCriterion> table[] = {{"AIC", InfoCriterion::aic},
                                                                          {"BIC", InfoCriterion::bic},
                                                                          {"MAIC", InfoCriterion::maic},
                                                                          {"MBIC", InfoCriterion::mbic}};
            o.policy.criterion = pick(value.cast<std::string>(), table, "information criterion");
        } else if (key == "ic_scale") {
            o.policy.rescale = value.cast<bool>();
        } else if (key == "union") {
            o.union_test = value.cast<bool>();
        } else if (key == "dc") {
            dc = py::reinterpret_borrow<py::object>(value);
        } else if (key == "detr") {
            detr = py::reinterpret_borrow<py::object>(value);
        } else if (std::find_if(extra.begin(), extra.end(), [&](const char* e) { return key == e; }) ==
                   extra.end()) {
            throw py::type_error("unexpected keyword argument '" + key + "'");
        }
    }
    validate(o.boot);
    if (!dc.is_none() || !detr.is_none()) {
        const auto dcs = dc.is_none() ? std::vector<py::handle>{} : as_list(dc);
        const auto detrs = detr.is_none() ? std::vector<py::handle>{} : as_list(detr);
        for (std::size_t a = 0; a < std::max<std::size_t>(dcs.size(), 1); ++a) {
            for (std::size_t b = 0; b < std::max<std::size_t>(detrs.size(), 1); ++b) {
                DetrendSpec s;
                if (!dcs.empty()) s.dc = parse_dc(dcs[a]);
                if (!detrs.empty()) {
                    s.method = upper(detrs[b].cast<std::string>()) == "QD" ? DetrendMethod::qd : DetrendMethod::ols;
                }
                o.specs.push_back(s);
            }
        }
    }
    return o;
}

Panel to_panel(const Eigen::MatrixXd& values, std::optional<std::vector<std::string>> names) {
    if (!names) {
        names.emplace();
        for (Eigen::Index i = 0; i < values.cols(); ++i) names->push_back("y" + std::to_string(i + 1));
    }
    return Panel::from_nan(*names, values);
}

Panel series_panel(const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
                   std::optional<std::vector<std::string>> names) {
    if (y.ndim() == 1) {
        Eigen::MatrixXd m(y.shape(0), 1);
        for (py::ssize_t t = 0; t < y.shape(0); ++t) m(t, 0) = y.at(t);
        return to_panel(m, names);
    }
    if (y.ndim() != 2) throw ValidationError("expected a 1-D series or a 2-D (T x N) array");
    Eigen::MatrixXd m(y.shape(0), y.shape(1));
    for (py::ssize_t t = 0; t < y.shape(0); ++t) {
        for (py::ssize_t i = 0; i < y.shape(1); ++i) m(t, i) = y.at(t, i);
    }
    return to_panel(m, names);
}

Eigen::MatrixXd nan_values(const Panel& p) {
    Eigen::MatrixXd v = p.values();
    for (Eigen::Index t = 0; t < v.rows(); ++t) {
        for (Eigen::Index i = 0; i < v.cols(); ++i) {
            if (p.missing(static_cast<std::size_t>(t), static_cast<std::size_t>(i))) {
                v(t, i) = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
    return v;
}

py::dict outcome_dict(const TestOutcome& o) {
    py::dict d;
    d["series"] = o.series;
    d["spec"] = o.spec;
    d["statistic"] = o.statistic;
    d["p_value"] = o.p_value;
    d["reject"] = o.reject;
    d["lags"] = o.lags;
    return d;
}

py::dict report_dict(const TestReport& r) {
    py::list outcomes;
    for (const auto& o : r.outcomes) outcomes.append(outcome_dict(o));
    py::dict d;
    d["outcomes"] = outcomes;
    d["warnings"] = r.warnings;
    return d;
}

py::dict sequential_dict(const SequentialOutcome& s) {
    py::list steps;
    for (const auto& st : s.steps) {
        py::dict d;
        d["h0"] = st.h0;
        d["h1"] = st.h1;
        d["series"] = st.series;
        d["statistic"] = st.statistic;
        d["p_value"] = st.p_value ? py::cast(*st.p_value) : py::none();
        d["critical_value"] = st.critical_value ? py::cast(*st.critical_value) : py::none();
        d["reject"] = st.reject;
        steps.append(d);
    }
    py::dict d;
    d["names"] = s.names;
    d["statistics"] = s.statistics;
    d["ranking"] = s.ranking;
    d["steps"] = steps;
    d["rej_h0"] = s.rej_h0;
    d["warnings"] = s.warnings;
    return d;
}

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Names = std::optional<std::vector<std::string>>;

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bootstrap unit root tests for time series and panels";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ArithmeticError);

    m.def(
        "load_csv",
        [](const std::string& path, bool time_column, std::vector<std::string> na) {
            CsvOptions o;
            o.has_time_column = time_column;
            o.missing_tokens = std::move(na);
            const Panel p = load_csv(path, o);
            py::dict d;
            d["values"] = nan_values(p);
            d["names"] = p.names();
            d["time_index"] = p.time_index();
            return d;
        },
        py::arg("path"), py::arg("time_column") = false, py::arg("na") = std::vector<std::string>{"NA", ""});

    m.def(
        "check_missing_insample",
        [](const Array& y) { return check_missing_insample(series_panel(y, std::nullopt)); }, py::arg("y"));

    m.def(
        "diff_mult",
        [](const Array& y, std::vector<std::size_t> d, bool keep_na) {
            const Panel p = series_panel(y, std::nullopt);
            if (d.size() == 1 && p.cols() > 1) d.assign(p.cols(), d[0]);
            return nan_values(diff_mult(p, d, keep_na));
        },
        py::arg("y"), py::arg("d"), py::arg("keep_na") = true);

    m.def(
        "adf_statistic",
        [](const std::vector<double>& y, const py::object& dc, const std::string& detr, py::kwargs kw) {
            const TestOptions o = test_options(kw);
            DetrendSpec spec;
            spec.dc = parse_dc(dc);
            spec.method = upper(detr) == "QD" ? DetrendMethod::qd : DetrendMethod::ols;
            const AdfStatistic s = adf_statistic(y, spec, o.policy);
            py::dict d;
            d["statistic"] = s.tstat;
            d["lags"] = s.p;
            return d;
        },
        py::arg("y"), py::arg("dc") = py::int_(1), py::arg("detr") = "OLS");

    m.def(
        "boot_adf", [](const Array& y, py::kwargs kw) { return report_dict(boot_adf(series_panel(y, {}), test_options(kw))); },
        py::arg("y"));
    m.def(
        "boot_union",
        [](const Array& y, py::kwargs kw) { return report_dict(boot_union(series_panel(y, {}), test_options(kw))); },
        py::arg("y"));
    m.def(
        "iadf",
        [](const Array& y, Names names, py::kwargs kw) {
            return report_dict(iadf(series_panel(y, std::move(names)), test_options(kw)));
        },
        py::arg("y"), py::arg("names") = py::none());
    m.def(
        "panel_test",
        [](const Array& y, Names names, py::kwargs kw) {
            return report_dict(panel_gm(series_panel(y, std::move(names)), test_options(kw)));
        },
        py::arg("y"), py::arg("names") = py::none());
    m.def(
        "bsqt",
        [](const Array& y, std::vector<double> q, Names names, py::kwargs kw) {
            return sequential_dict(bsqt(series_panel(y, std::move(names)), q, test_options(kw)));
        },
        py::arg("y"), py::arg("q") = std::vector<double>{}, py::arg("names") = py::none());
    m.def(
        "fdr",
        [](const Array& y, Names names, py::kwargs kw) {
            return sequential_dict(fdr(series_panel(y, std::move(names)), test_options(kw)));
        },
        py::arg("y"), py::arg("names") = py::none());
    m.def(
        "order_integration",
        [](const Array& y, std::size_t max_order, const std::string& test, std::vector<double> q, Names names,
           py::kwargs kw) {
            static const std::pair<const char*, OrderTest> table[] = {{"adf", OrderTest::adf},
                                                                      {"union", OrderTest::union_test},
                                                                      {"iadf", OrderTest::iadf},
                                                                      {"bsqt", OrderTest::bsqt},
                                                                      {"fdr", OrderTest::fdr}};
            OrderOptions o;
            o.max_order = max_order;
            o.test = pick(test, table, "order test");
            o.q = std::move(q);
            o.test_options = test_options(kw);
            const OrderResult r = order_integration(series_panel(y, std::move(names)), o);
            py::list stages;
            for (const auto& s : r.stages) {
                py::dict d;
                d["d"] = s.d;
                d["series"] = s.series;
                d["statistics"] = s.statistics;
                d["rejected"] = s.rejected;
                stages.append(d);
            }
            py::dict d;
            d["d"] = r.d;
            d["diff_data"] = nan_values(r.diff_data);
            d["stages"] = stages;
            d["warnings"] = r.warnings;
            return d;
        },
        py::arg("y"), py::arg("max_order") = 2, py::arg("test") = "iadf", py::arg("q") = std::vector<double>{},
        py::arg("names") = py::none());
}
