#include "urboot/panel.hpp"

#include "urboot/errors.hpp"
#include "urboot/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace urboot {

Panel::Panel(std::vector<std::string> names, Eigen::MatrixXd values, Mask mask,
             std::vector<std::string> time_index)
    : names_(std::move(names)), values_(std::move(values)), mask_(std::move(mask)),
      time_index_(std::move(time_index)) {
    if (names_.size() != cols()) {
        throw ValidationError("panel has " + std::to_string(cols()) + " columns but " +
                              std::to_string(names_.size()) + " names");
    }
    if (mask_.rows() != values_.rows() || mask_.cols() != values_.cols()) {
        throw ValidationError("mask shape does not match value shape");
    }
    if (!time_index_.empty() && time_index_.size() != rows()) {
        throw ValidationError("time index length does not match the number of rows");
    }
    std::set<std::string> seen;
    for (const auto& name : names_) {
        if (!seen.insert(name).second) {
            throw ValidationError("duplicate series name '" + name + "'");
        }
    }
    for (Eigen::Index i = 0; i < values_.cols(); ++i) {
        for (Eigen::Index t = 0; t < values_.rows(); ++t) {
            if (mask_(t, i)) {
                values_(t, i) = kMissing;
            } else if (!std::isfinite(values_(t, i))) {
                throw ValidationError("non-finite unmasked value in series '" +
                                      names_[static_cast<std::size_t>(i)] + "'");
            }
        }
    }
}

Panel Panel::from_nan(std::vector<std::string> names, Eigen::MatrixXd values,
                      std::vector<std::string> time_index) {
    Mask mask = values.array().isNaN();
    return Panel(std::move(names), std::move(values), std::move(mask), std::move(time_index));
}

Panel Panel::from_columns(std::vector<std::string> names,
                          const std::vector<std::vector<double>>& columns) {
    const std::size_t n = columns.size();
    const std::size_t t = n == 0 ? 0 : columns.front().size();
    Eigen::MatrixXd values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (columns[i].size() != t) {
            throw ValidationError("columns have unequal lengths");
        }
        for (std::size_t r = 0; r < t; ++r) {
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = columns[i][r];
        }
    }
    return from_nan(std::move(names), std::move(values));
}

Panel Panel::single(std::span<const double> y, std::string name) {
    return from_columns({std::move(name)}, {std::vector<double>(y.begin(), y.end())});
}

std::vector<double> Panel::column(std::size_t i) const {
    std::vector<double> out(rows());
    for (std::size_t t = 0; t < rows(); ++t) {
        out[t] = values_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i));
    }
    return out;
}

Window Panel::window(std::size_t i) const {
    const auto col = mask_.col(static_cast<Eigen::Index>(i));
    Eigen::Index first = 0;
    while (first < col.size() && col(first)) ++first;
    if (first == col.size()) {
        throw ValidationError("series '" + names_[i] + "' has no observed values");
    }
    Eigen::Index last = col.size() - 1;
    while (col(last)) --last;
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

std::vector<double> Panel::observed(std::size_t i) const {
    const Window w = window(i);
    std::vector<double> out;
    out.reserve(w.size());
    for (std::size_t t = w.first; t <= w.last; ++t) {
        if (missing(t, i)) {
            throw ValidationError("series '" + names_[i] + "' has missing values inside its sample");
        }
        out.push_back((*this)(t, i));
    }
    return out;
}

std::size_t Panel::index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw ValidationError("no series named '" + name + "'");
    }
    return static_cast<std::size_t>(it - names_.begin());
}

Panel Panel::select(std::span<const std::size_t> columns) const {
    Eigen::MatrixXd values(values_.rows(), static_cast<Eigen::Index>(columns.size()));
    Mask mask(values_.rows(), static_cast<Eigen::Index>(columns.size()));
    std::vector<std::string> names;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        const auto src = static_cast<Eigen::Index>(columns[k]);
        if (columns[k] >= cols()) throw ValidationError("column index out of range");
        values.col(static_cast<Eigen::Index>(k)) = values_.col(src);
        mask.col(static_cast<Eigen::Index>(k)) = mask_.col(src);
        names.push_back(names_[columns[k]]);
    }
    return Panel(std::move(names), std::move(values), std::move(mask), time_index_);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_row(const std::string& line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                cell += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no);
    cells.push_back(trim(cell));
    return cells;
}

}  // namespace

Panel parse_csv(const std::string& text, const CsvOptions& options) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_row(line, line_no);
            break;
        }
    }
    if (header.empty()) throw ParseError("missing header row", line_no == 0 ? 1 : line_no);

    const std::size_t offset = options.has_time_column ? 1 : 0;
    if (header.size() <= offset) throw ParseError("no data columns in header", line_no);
    std::vector<std::string> names(header.begin() + static_cast<std::ptrdiff_t>(offset), header.end());
    for (const auto& name : names) {
        if (name.empty()) throw ParseError("empty column name", line_no);
    }

    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        ++line_no;
        // A blank line is an empty cell only for single-column files.
        if (trim(line).empty() && header.size() > 1) continue;
        auto cells = split_row(line, line_no);
        if (cells.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(cells.size()),
                             line_no);
        }
        if (options.has_time_column) labels.push_back(cells[0]);
        std::vector<double> row(names.size());
        for (std::size_t j = 0; j < names.size(); ++j) {
            const std::string& cell = cells[j + offset];
            if (std::find(options.missing_tokens.begin(), options.missing_tokens.end(), cell) !=
                options.missing_tokens.end()) {
                row[j] = kMissing;
                continue;
            }
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            if (begin != end && *begin == '+') ++begin;
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr != end || begin == end || !std::isfinite(value)) {
                throw ParseError("non-numeric value '" + cell + "' in column '" + names[j] + "'", line_no);
            }
            row[j] = value;
        }
        rows.push_back(std::move(row));
    }

    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t j = 0; j < names.size(); ++j) {
            values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = rows[t][j];
        }
    }
    return Panel::from_nan(std::move(names), std::move(values), std::move(labels));
}

Panel load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), options);
}

std::string to_csv(const Panel& panel) {
    std::string out;
    const bool with_time = !panel.time_index().empty();
    if (with_time) out += "time,";
    for (std::size_t i = 0; i < panel.cols(); ++i) {
        if (i) out += ',';
        out += panel.names()[i];
    }
    out += '\n';
    char buf[64];
    for (std::size_t t = 0; t < panel.rows(); ++t) {
        if (with_time) {
            out += panel.time_index()[t];
            out += ',';
        }
        for (std::size_t i = 0; i < panel.cols(); ++i) {
            if (i) out += ',';
            if (panel.missing(t, i)) {
                out += "NA";
            } else {
                const auto res = std::to_chars(buf, buf + sizeof buf, panel(t, i));
                out.append(buf, res.ptr);
            }
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Panel& panel, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << to_csv(panel);
}

// ---------------------------------------------------------------------------
// Missingness

std::vector<bool> check_missing_insample(const Panel& panel) {
    std::vector<bool> out(panel.cols(), false);
    for (std::size_t i = 0; i < panel.cols(); ++i) {
        const auto col = panel.mask().col(static_cast<Eigen::Index>(i));
        if (col.all()) continue;
        const Window w = panel.window(i);
        for (std::size_t t = w.first; t <= w.last; ++t) {
            if (col(static_cast<Eigen::Index>(t))) {
                out[i] = true;
                break;
            }
        }
    }
    return out;
}

SubsampleRange find_nonmissing_subsample(const Panel& panel) {
    SubsampleRange range;
    for (std::size_t i = 0; i < panel.cols(); ++i) {
        const Window w = panel.window(i);
        range.first.push_back(w.first + 1);
        range.last.push_back(w.last + 1);
    }
    for (std::size_t i = 1; i < panel.cols(); ++i) {
        if (range.first[i] != range.first[0] || range.last[i] != range.last[0]) range.all_equal = false;
    }
    return range;
}

void require_no_internal_missing(const Panel& panel) {
    const auto gaps = check_missing_insample(panel);
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i]) {
            throw ValidationError("series '" + panel.names()[i] +
                                  "' has missing values inside its sample; bootstrap tests need "
                                  "contiguous observations");
        }
    }
}

bool is_balanced(const Panel& panel) {
    if (panel.cols() == 0) return true;
    const Window w0 = panel.window(0);
    for (std::size_t i = 1; i < panel.cols(); ++i) {
        if (!(panel.window(i) == w0)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Differencing

Panel diff_mult(const Panel& panel, std::span<const std::size_t> d, bool keep_na) {
    if (d.size() != panel.cols()) {
        throw ValidationError("diff_mult needs one order per series");
    }
    const auto T = static_cast<Eigen::Index>(panel.rows());
    Eigen::MatrixXd values = panel.values();
    Panel::Mask mask = panel.mask();
    for (std::size_t i = 0; i < panel.cols(); ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        if (d[i] == 0) continue;
        const Window w = panel.window(i);
        if (d[i] + 2 > w.size()) {
            throw ValidationError("cannot difference series '" + panel.names()[i] + "' " +
                                  std::to_string(d[i]) + " times with " + std::to_string(w.size()) +
                                  " observations");
        }
        for (std::size_t k = 0; k < d[i]; ++k) {
            for (Eigen::Index t = T - 1; t >= 1; --t) {
                if (mask(t, c) || mask(t - 1, c)) {
                    mask(t, c) = true;
                    values(t, c) = kMissing;
                } else {
                    values(t, c) -= values(t - 1, c);
                }
            }
            mask(0, c) = true;
            values(0, c) = kMissing;
        }
    }
    if (keep_na) {
        return Panel(panel.names(), std::move(values), std::move(mask), panel.time_index());
    }
    // Drop rows where any series lost an observation to differencing.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index t = 0; t < T; ++t) {
        bool lost = false;
        for (std::size_t i = 0; i < panel.cols(); ++i) {
            const auto c = static_cast<Eigen::Index>(i);
            if (mask(t, c) && !panel.mask()(t, c)) lost = true;
        }
        if (!lost) keep.push_back(t);
    }
    Eigen::MatrixXd kept_values(static_cast<Eigen::Index>(keep.size()), values.cols());
    Panel::Mask kept_mask(static_cast<Eigen::Index>(keep.size()), values.cols());
    std::vector<std::string> labels;
    for (std::size_t r = 0; r < keep.size(); ++r) {
        kept_values.row(static_cast<Eigen::Index>(r)) = values.row(keep[r]);
        kept_mask.row(static_cast<Eigen::Index>(r)) = mask.row(keep[r]);
        if (!panel.time_index().empty()) labels.push_back(panel.time_index()[static_cast<std::size_t>(keep[r])]);
    }
    return Panel(panel.names(), std::move(kept_values), std::move(kept_mask), std::move(labels));
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

void validate(const DgpSpec& spec) {
    if (spec.T < 2 || spec.N < 1) throw ValidationError("DGP needs T >= 2 and N >= 1");
    if (spec.rho.size() != 1 && spec.rho.size() != spec.N) {
        throw ValidationError("rho must have length 1 or N");
    }
    for (double r : spec.rho) {
        if (!(r > -1.0 && r <= 1.0)) throw ValidationError("rho must lie in (-1, 1]");
    }
    const std::size_t terms = spec.dc == Deterministics::none ? 0 : spec.dc == Deterministics::intercept ? 1 : 2;
    if (!spec.beta.empty() && spec.beta.size() != terms) {
        throw ValidationError("beta length does not match the deterministic components");
    }
    if (spec.innovation.kind == Innovation::Kind::variance_break &&
        !(spec.innovation.break_fraction > 0.0 && spec.innovation.break_fraction < 1.0)) {
        throw ValidationError("break fraction must lie in (0, 1)");
    }
}

}  // namespace

Eigen::MatrixXd simulate_innovations(const DgpSpec& spec, std::uint64_t seed) {
    validate(spec);
    const auto T = static_cast<Eigen::Index>(spec.T);
    const auto N = static_cast<Eigen::Index>(spec.N);
    Rng rng(mix64(seed));
    Eigen::MatrixXd u(T, N);
    // Column-major draw order: series by series, then the common factor.
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index t = 0; t < T; ++t) u(t, i) = rng.normal();
    }
    if (spec.factor_loading != 0.0) {
        for (Eigen::Index t = 0; t < T; ++t) {
            const double f = rng.normal();
            u.row(t).array() += spec.factor_loading * f;
        }
    }
    const auto& inn = spec.innovation;
    if (inn.kind == Innovation::Kind::variance_break) {
        const auto start = static_cast<Eigen::Index>(std::ceil(inn.break_fraction * static_cast<double>(spec.T))) - 1;
        for (Eigen::Index t = std::max<Eigen::Index>(start, 0); t < T; ++t) u.row(t) *= inn.scale;
    } else if (inn.kind == Innovation::Kind::ar1) {
        for (Eigen::Index t = 1; t < T; ++t) u.row(t) += inn.ar * u.row(t - 1);
    }
    return u;
}

Panel simulate_dgp(const DgpSpec& spec, std::uint64_t seed) {
    const Eigen::MatrixXd u = simulate_innovations(spec, seed);
    const auto T = u.rows();
    Eigen::MatrixXd y(T, u.cols());
    for (Eigen::Index i = 0; i < u.cols(); ++i) {
        const double rho = spec.rho.size() == 1 ? spec.rho[0] : spec.rho[static_cast<std::size_t>(i)];
        double x = 0.0;
        for (Eigen::Index t = 0; t < T; ++t) {
            x = rho == 1.0 ? x + u(t, i) : rho * x + u(t, i);
            double det = 0.0;
            if (!spec.beta.empty()) {
                det = spec.beta[0];
                if (spec.dc == Deterministics::trend) det += spec.beta[1] * static_cast<double>(t + 1);
            }
            y(t, i) = x + det;
        }
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < spec.N; ++i) names.push_back("y" + std::to_string(i + 1));
    return Panel(std::move(names), std::move(y), Panel::Mask::Constant(T, u.cols(), false));
}

}  // namespace urboot
