#pragma once

#include "urboot/panel.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace urboot {

enum class DetrendMethod { ols, qd };

struct DetrendSpec {
    Deterministics dc = Deterministics::intercept;
    DetrendMethod method = DetrendMethod::ols;
    /// Quasi-differencing parameter; unset means 7 (intercept) or 13.5 (trend).
    std::optional<double> qd_c;
};

struct DetrendResult {
    std::vector<double> detrended;  ///< same length as the input; NaN where the input is NaN
    std::vector<double> beta;       ///< 0, 1 or 2 coefficients
};

[[nodiscard]] std::size_t deterministic_terms(Deterministics dc) noexcept;
[[nodiscard]] double default_qd_c(Deterministics dc);

/// QD on dc = none has nothing to remove; the DetrendSpec is rewritten to plain OLS with
/// no deterministics. Returns true when that rewrite happened.
bool normalize(DetrendSpec& spec) noexcept;

/// Least-squares removal of d_t = 1 or (1, t)' from y. Leading and trailing NaN
/// are carried through; the trend counts t = 1, 2, ... from the first observation.
[[nodiscard]] DetrendResult detrend_ols(std::span<const double> y, Deterministics dc);

/// Quasi-differenced (GLS-type) detrending with a = 1 - c / T~, T~ the number of
/// observations. The first observation enters untransformed. Residuals are on the
/// original scale: y - d_t' beta.
[[nodiscard]] DetrendResult detrend_qd(std::span<const double> y, Deterministics dc,
                                       std::optional<double> qd_c = std::nullopt);

[[nodiscard]] DetrendResult detrend(std::span<const double> y, const DetrendSpec& spec);

[[nodiscard]] std::string to_string(Deterministics dc);
[[nodiscard]] std::string to_string(DetrendMethod method);

}  // namespace urboot
