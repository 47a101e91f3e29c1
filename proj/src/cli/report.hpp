#pragma once

#include "urboot/order.hpp"
#include "urboot/panel.hpp"
#include "urboot/unit_root_tests.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace urboot::report {

using nlohmann::json;

/// Rounds to 10 significant digits so serialized output is stable; non-finite
/// values become the strings "inf", "-inf" and "nan".
[[nodiscard]] json number(double x);

[[nodiscard]] json to_json(const TestOutcome& outcome);
[[nodiscard]] json to_json(const SequentialOutcome& outcome, const std::string& procedure);
[[nodiscard]] json to_json(const OrderResult& result, std::span<const std::string> names);
[[nodiscard]] json missing_summary(const Panel& panel);

[[nodiscard]] std::string table(const std::vector<TestOutcome>& outcomes);
[[nodiscard]] std::string table(const SequentialOutcome& outcome, bool fdr);
[[nodiscard]] std::string table(const OrderResult& result, std::span<const std::string> names);
[[nodiscard]] std::string missing_table(const Panel& panel);

[[nodiscard]] std::string outcomes_csv(const std::vector<TestOutcome>& outcomes);
[[nodiscard]] std::string sequential_csv(const SequentialOutcome& outcome);

}  // namespace urboot::report
