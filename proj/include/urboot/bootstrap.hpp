#pragma once

#include "urboot/adf.hpp"
#include "urboot/panel.hpp"
#include "urboot/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace urboot {

enum class BootMethod { sb, mbb, swb, dwb, bwb, awb };

[[nodiscard]] std::string to_string(BootMethod method);
/// True for the resampling schemes, which cannot keep missing values in place.
[[nodiscard]] bool is_resampling(BootMethod method) noexcept;
/// True for the AR-filter schemes (SB, SWB).
[[nodiscard]] bool is_sieve(BootMethod method) noexcept;

struct BootConfig {
    BootMethod method = BootMethod::awb;
    std::size_t B = 1999;
    std::optional<std::size_t> block_length;  ///< unset: floor(1.75 T^(1/3))
    std::optional<double> ar_awb;              ///< unset: 0.01^(1/l)
    double level = 0.05;
    std::uint64_t seed = 0;
    std::optional<std::size_t> workers;  ///< unset: hardware concurrency
};

[[nodiscard]] std::size_t default_block_length(std::size_t n_obs);
[[nodiscard]] double awb_parameter(std::size_t block_length);
void validate(const BootConfig& config);

/// Residuals of one series, aligned to calendar rows.
///
/// `offset` is the row of the series' first observation. Entry k of `u_hat`
/// and `eps_hat` belongs to row offset + 1 + k: the first observation has no
/// difference and therefore no residual. Pre-sample lagged differences are
/// taken as zero, and both sets are centred to mean zero.
struct SeriesResiduals {
    std::size_t offset = 0;
    std::size_t p = 0;
    double gamma = 0.0;
    std::vector<double> phi;
    std::vector<double> u_hat;
    std::vector<double> eps_hat;
};

struct ResidualSet {
    std::size_t rows = 0;  ///< calendar length T of the panel
    std::vector<SeriesResiduals> series;
};

/// Extended residuals of one detrended series (no centring); exposed for tests.
[[nodiscard]] SeriesResiduals residuals_from_fit(std::span<const double> yd, const AdfFit& fit);

/// OLS-detrends every series with `dc`, selects the lag, fits the ADF
/// regression and stores both centred residual sets.
[[nodiscard]] ResidualSet estimate_residuals(const Panel& panel, Deterministics dc, const LagPolicy& policy);

/// Bootstrap errors plus the raw random draws that produced them.
///
/// `errors` is T x N; rows outside a series' window are NaN and the first row of
/// each window is zero. `indices` holds SB positions or MBB block starts;
/// `multipliers` holds the wild multiplier sequence (calendar indexed for
/// DWB/BWB/AWB/SWB).
struct ErrorDraws {
    Eigen::MatrixXd errors;
    std::vector<std::size_t> indices;
    std::vector<double> multipliers;
};

[[nodiscard]] ErrorDraws gen_errors_sb(const ResidualSet& res, Rng& rng);
[[nodiscard]] ErrorDraws gen_errors_mbb(const ResidualSet& res, std::size_t block_length, Rng& rng);
[[nodiscard]] ErrorDraws gen_errors_swb(const ResidualSet& res, Rng& rng);
[[nodiscard]] ErrorDraws gen_errors_dwb(const ResidualSet& res, std::size_t block_length, Rng& rng);
[[nodiscard]] ErrorDraws gen_errors_bwb(const ResidualSet& res, std::size_t block_length, Rng& rng);
[[nodiscard]] ErrorDraws gen_errors_awb(const ResidualSet& res, double gamma, Rng& rng);

/// Deterministic building blocks of the generators above.
///
/// SB: `positions` index each series' eps_hat, shared across series (balanced only).
[[nodiscard]] ErrorDraws sb_errors(const ResidualSet& res, std::span<const std::size_t> positions);
/// MBB: blocks of eps_hat laid end to end from the given starts, truncated.
[[nodiscard]] ErrorDraws mbb_errors(const ResidualSet& res, std::span<const std::size_t> starts,
                                    std::size_t block_length);
/// SWB: eps_hat times the calendar-indexed multipliers, recoloured by the AR filter.
[[nodiscard]] ErrorDraws swb_errors(const ResidualSet& res, std::span<const double> multipliers);
/// DWB/BWB/AWB: u_hat times the calendar-indexed multipliers.
[[nodiscard]] ErrorDraws wild_errors(const ResidualSet& res, std::span<const double> multipliers);
[[nodiscard]] std::vector<double> awb_multipliers(std::span<const double> z, double gamma);
[[nodiscard]] double bartlett(double x) noexcept;
/// Symmetric square root of the Bartlett-kernel Toeplitz matrix; cached per (T, l).
[[nodiscard]] const Eigen::MatrixXd& dwb_sqrt_covariance(std::size_t T, std::size_t block_length);

/// Per-series cumulative sums of the errors over each series' window.
[[nodiscard]] Eigen::MatrixXd build_sample(const Eigen::MatrixXd& errors);

/// Statistic of one bootstrap (or observed) series: writes K values.
using SeriesStatistic = std::function<void(std::span<const double> y, std::span<double> out)>;

/// Observed and bootstrap statistics, indexed (b, i, k).
struct BootStatMatrix {
    std::size_t B = 0;
    std::size_t N = 0;
    std::size_t K = 0;
    std::vector<double> observed;  ///< N x K
    std::vector<double> boot;      ///< B x N x K

    [[nodiscard]] double obs(std::size_t i, std::size_t k) const { return observed[i * K + k]; }
    [[nodiscard]] double at(std::size_t b, std::size_t i, std::size_t k) const { return boot[(b * N + i) * K + k]; }
    [[nodiscard]] std::vector<double> column(std::size_t i, std::size_t k) const;
};

/// Called once per replication with its raw draws; must be thread-safe when
/// more than one worker runs.
using DrawObserver = std::function<void(std::size_t b, const ErrorDraws& draws)>;

struct BootstrapRequest {
    SeriesStatistic statistic;
    std::size_t K = 1;
    /// Deterministic components removed before estimating residuals.
    Deterministics residual_dc = Deterministics::intercept;
    LagPolicy policy;
    /// Stream tag; replication b draws from Rng::stream(seed, tag, b).
    std::uint64_t stream_tag = 0;
    DrawObserver observer;
};

/// Runs the whole resampling loop for the panel. The result depends only on
/// (panel, request, config minus workers).
[[nodiscard]] BootStatMatrix bootstrap_statistics(const Panel& panel, const BootstrapRequest& request,
                                                  const BootConfig& config);

/// Same, on residuals estimated by the caller.
[[nodiscard]] BootStatMatrix bootstrap_statistics(const Panel& panel, const ResidualSet& residuals,
                                                  const BootstrapRequest& request, const BootConfig& config);

/// Runs fn(b) for b in [0, count) on up to `workers` threads; rethrows the
/// first exception.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);
[[nodiscard]] std::size_t resolve_workers(const BootConfig& config);

}  // namespace urboot
