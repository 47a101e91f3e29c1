#include "urboot/plot.hpp"

#include "urboot/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace urboot {

namespace {

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void open_svg(std::ostringstream& os, int width, int height, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
       << "</text>\n";
}

void legend_entry(std::ostringstream& os, int x, int y, const std::string& color, const std::string& label,
                  const std::string& cls) {
    os << "<g class=\"legend " << cls << "\"><rect x=\"" << x << "\" y=\"" << y - 9 << "\" width=\"10\" height=\"10\" fill=\""
       << color << "\"/><text x=\"" << x + 14 << "\" y=\"" << y << "\">" << escape(label) << "</text></g>\n";
}

}  // namespace

std::vector<CellState> missing_pattern(const Panel& panel) {
    const std::size_t T = panel.rows();
    const std::size_t N = panel.cols();
    std::vector<CellState> out(T * N, CellState::present);
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t first = T;
        std::size_t last = 0;
        for (std::size_t t = 0; t < T; ++t) {
            if (!panel.missing(t, i)) {
                first = std::min(first, t);
                last = t;
            }
        }
        for (std::size_t t = 0; t < T; ++t) {
            if (!panel.missing(t, i)) continue;
            out[t * N + i] = (first == T || t < first || t > last) ? CellState::boundary : CellState::internal;
        }
    }
    return out;
}

std::string plot_missing_pattern(const Panel& panel, const MissingPlotOptions& options) {
    const auto pattern = missing_pattern(panel);
    const int T = static_cast<int>(panel.rows());
    const int N = static_cast<int>(panel.cols());
    const int cell_w = std::clamp(600 / std::max(N, 1), 4, 30);
    const int cell_h = std::clamp(500 / std::max(T, 1), 1, 12);
    const int left = 50;
    const int top = 30;
    const int label_h = options.series_labels ? 90 : 10;
    const int width = std::max(left + N * cell_w + 20, 320);
    const int height = top + T * cell_h + label_h + 30;

    std::ostringstream os;
    open_svg(os, width, height, options.title);
    bool seen[3] = {false, false, false};
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < N; ++i) {
            const CellState s = pattern[static_cast<std::size_t>(t * N + i)];
            seen[static_cast<int>(s)] = true;
            const char* cls = s == CellState::present ? "present" : s == CellState::boundary ? "boundary" : "internal";
            const std::string& color = s == CellState::present    ? options.present_color
                                       : s == CellState::boundary ? options.boundary_color
                                                                  : options.internal_color;
            os << "<rect class=\"cell " << cls << "\" x=\"" << left + i * cell_w << "\" y=\"" << top + t * cell_h
               << "\" width=\"" << cell_w << "\" height=\"" << cell_h << "\" fill=\"" << color << "\"/>\n";
        }
    }
    const auto& ti = panel.time_index();
    for (int t = 0; t < T; t += std::max(1, T / 10)) {
        const std::string label = ti.empty() ? std::to_string(t + 1) : ti[static_cast<std::size_t>(t)];
        os << "<text x=\"" << left - 4 << "\" y=\"" << top + t * cell_h + cell_h << "\" text-anchor=\"end\">"
           << escape(label) << "</text>\n";
    }
    if (options.series_labels) {
        for (int i = 0; i < N; ++i) {
            const int x = left + i * cell_w + cell_w / 2;
            const int y = top + T * cell_h + 6;
            os << "<text x=\"" << x << "\" y=\"" << y << "\" transform=\"rotate(60 " << x << ' ' << y << ")\">"
               << escape(panel.names()[static_cast<std::size_t>(i)]) << "</text>\n";
        }
    }
    int lx = left;
    const int ly = height - 10;
    if (seen[0]) legend_entry(os, lx, ly, options.present_color, "present", "present"), lx += 90;
    if (seen[1]) legend_entry(os, lx, ly, options.boundary_color, "missing (start/end)", "boundary"), lx += 150;
    if (seen[2]) legend_entry(os, lx, ly, options.internal_color, "missing (internal)", "internal");
    os << "</svg>\n";
    return os.str();
}

std::string plot_order_integration(std::span<const std::size_t> d, std::span<const std::string> names,
                                   const OrderPlotOptions& options) {
    if (d.size() != names.size()) throw ValidationError("need one name per order");
    if (options.colors.empty()) throw ValidationError("need at least one colour");
    const auto color_of = [&](std::size_t order) {
        return options.colors[std::min(order, options.colors.size() - 1)];
    };

    const int n = static_cast<int>(d.size());
    const int capacity = static_cast<int>(std::max<std::size_t>(options.column_capacity, 1));
    const int columns = n > capacity ? 2 : 1;
    const int per_column = (n + columns - 1) / columns;
    const int row_h = 14;
    const int col_w = 260;
    const int top = 40;
    const int width = 40 + columns * col_w;
    const int height = top + std::max(per_column, 1) * row_h + 50;

    std::ostringstream os;
    open_svg(os, width, height, options.title);
    for (int j = 0; j < n; ++j) {
        const int c = j / std::max(per_column, 1);
        const int r = j % std::max(per_column, 1);
        const int x = 20 + c * col_w;
        const int y = top + r * row_h;
        const std::size_t order = d[static_cast<std::size_t>(j)];
        os << "<g class=\"series order-" << order << "\"><circle cx=\"" << x + 5 << "\" cy=\"" << y - 4
           << "\" r=\"4.5\" fill=\"" << color_of(order) << "\"/><text x=\"" << x + 14 << "\" y=\"" << y << "\">"
           << escape(names[static_cast<std::size_t>(j)]) << " (I(" << order << "))</text></g>\n";
    }
    if (options.legend) {
        const std::set<std::size_t> orders(d.begin(), d.end());
        int lx = 20;
        for (std::size_t order : orders) {
            legend_entry(os, lx, height - 14, color_of(order), "I(" + std::to_string(order) + ")",
                         "order-" + std::to_string(order));
            lx += 60;
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace urboot
