#pragma once

#include "urboot/panel.hpp"

#include <span>
#include <string>
#include <vector>

namespace urboot {

enum class CellState { present, boundary, internal };

/// State of every (t, i) cell, row-major T x N. Boundary cells are missing
/// values before the first or after the last observation of a series.
[[nodiscard]] std::vector<CellState> missing_pattern(const Panel& panel);

struct MissingPlotOptions {
    std::string title = "Missing values";
    bool series_labels = true;
    std::string present_color = "#2e8b57";
    std::string boundary_color = "#7b3f9e";
    std::string internal_color = "#d62728";
};

/// Standalone SVG: one rectangle per cell, series along the x axis and time
/// downwards. The legend lists only the states that occur.
[[nodiscard]] std::string plot_missing_pattern(const Panel& panel, const MissingPlotOptions& options = {});

struct OrderPlotOptions {
    std::string title = "Order of integration";
    bool legend = true;
    /// Colour per order; orders beyond the list reuse the last colour.
    std::vector<std::string> colors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
    /// Series per column before switching to two columns.
    std::size_t column_capacity = 60;
};

/// Standalone SVG with one labelled mark per series, coloured by its order.
[[nodiscard]] std::string plot_order_integration(std::span<const std::size_t> d, std::span<const std::string> names,
                                                 const OrderPlotOptions& options = {});

}  // namespace urboot
