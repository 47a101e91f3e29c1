#pragma once

#include "urboot/detrend.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace urboot {

enum class InfoCriterion { aic, bic, maic, mbic };

struct LagPolicy {
    std::size_t p_min = 0;
    std::optional<std::size_t> p_max;  ///< unset: floor(12 (T/100)^(1/4))
    InfoCriterion criterion = InfoCriterion::maic;
    bool rescale = true;
};

/// floor(12 * (n / 100)^(1/4))
[[nodiscard]] std::size_t default_max_lag(std::size_t n_obs);

/// Largest lag for which the ADF regression over the common sample still has
/// one residual degree of freedom.
[[nodiscard]] std::size_t feasible_max_lag(std::size_t n_obs);

/// Resolves p_max for a series of n_obs observations. An automatic p_max is
/// capped at feasible_max_lag; an explicit one that does not fit throws.
[[nodiscard]] std::size_t resolve_max_lag(const LagPolicy& policy, std::size_t n_obs);

/// OLS fit of  dy_t = gamma y_{t-1} + sum_j phi_j dy_{t-j} + e_t  on a detrended series.
///
/// Rows run over every t with all p lags available, i.e. t = p+2, ..., T (1-based
/// levels). `residuals` are e_t and `u_hat` is dy_t - gamma y_{t-1}, both over those rows.
struct AdfFit {
    std::size_t p = 0;
    double gamma = 0.0;
    std::vector<double> phi;
    std::vector<double> residuals;
    std::vector<double> u_hat;
    double sigma2 = 0.0;  ///< SSR / (n - p - 1)
    double tstat = 0.0;
};

[[nodiscard]] AdfFit adf_regress(std::span<const double> yd, std::size_t p);

/// Information criterion of the lag-k regression on the common sample shared by
/// all lags up to p_max.
[[nodiscard]] double ic_value(std::span<const double> yd, std::size_t k, std::size_t p_max,
                              InfoCriterion criterion);

/// Criterion values for k = p_min .. p_max from a single QR of the common-sample
/// design; entry j belongs to lag p_min + j.
[[nodiscard]] std::vector<double> ic_profile(std::span<const double> yd, std::size_t p_min,
                                             std::size_t p_max, InfoCriterion criterion);

/// argmin of the criterion over [p_min, p_max]; ties go to the smaller lag.
/// Selection runs on `yd_for_selection` when given (QD tests pass their
/// OLS-detrended series), rescaled first when policy.rescale is set.
[[nodiscard]] std::size_t select_lag(std::span<const double> yd, const LagPolicy& policy,
                                     std::span<const double> yd_for_selection = {});

/// Divides the series by a kernel estimate of its time-varying standard
/// deviation: squared centred first differences are smoothed with a Gaussian
/// kernel in time, and levels are rebuilt from the standardised differences.
[[nodiscard]] std::vector<double> rescale_series(std::span<const double> y);

/// Local standard deviations used by rescale_series, one per first difference.
[[nodiscard]] std::vector<double> local_scale(std::span<const double> y);

struct AdfStatistic {
    double tstat = 0.0;
    std::size_t p = 0;
    AdfFit fit;
};

/// Detrend, select the lag on (rescaled) OLS-detrended data, regress on the
/// unrescaled detrended series.
[[nodiscard]] AdfStatistic adf_statistic(std::span<const double> y, const DetrendSpec& spec,
                                         const LagPolicy& policy);

[[nodiscard]] std::string to_string(InfoCriterion criterion);

}  // namespace urboot
