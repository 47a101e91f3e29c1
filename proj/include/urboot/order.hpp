#pragma once

#include "urboot/panel.hpp"
#include "urboot/unit_root_tests.hpp"

#include <string>
#include <vector>

namespace urboot {

enum class OrderTest { adf, union_test, iadf, bsqt, fdr };

[[nodiscard]] std::string to_string(OrderTest test);

struct OrderOptions {
    std::size_t max_order = 2;
    OrderTest test = OrderTest::iadf;
    TestOptions test_options;
    std::vector<double> q;  ///< BSQT boundaries; empty means one series per step
};

/// Outcome of the test run at one differencing order.
struct OrderStage {
    std::size_t d = 0;
    std::vector<std::string> series;  ///< pool tested at this stage
    std::vector<double> statistics;
    std::vector<bool> rejected;
    std::vector<std::string> warnings;
};

struct OrderResult {
    std::vector<std::size_t> d;
    Panel diff_data;
    std::vector<OrderStage> stages;  ///< in the order run: d = max_order - 1 first
    std::vector<std::string> warnings;
};

/// Classifies each series from the highest differencing order downwards: at
/// stage d the unclassified series are differenced d times and tested; those
/// whose unit root is not rejected are I(d + 1).
[[nodiscard]] OrderResult order_integration(const Panel& panel, const OrderOptions& options);

}  // namespace urboot
