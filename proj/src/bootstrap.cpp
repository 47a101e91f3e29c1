#include "urboot/bootstrap.hpp"

#include "series_window.hpp"
#include "urboot/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

namespace urboot {

std::string to_string(BootMethod method) {
    switch (method) {
        case BootMethod::sb: return "SB";
        case BootMethod::mbb: return "MBB";
        case BootMethod::swb: return "SWB";
        case BootMethod::dwb: return "DWB";
        case BootMethod::bwb: return "BWB";
        case BootMethod::awb: return "AWB";
    }
    return "?";
}

bool is_resampling(BootMethod method) noexcept { return method == BootMethod::sb || method == BootMethod::mbb; }
bool is_sieve(BootMethod method) noexcept { return method == BootMethod::sb || method == BootMethod::swb; }

std::size_t default_block_length(std::size_t n_obs) {
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(1.75 * std::cbrt(static_cast<double>(n_obs)))));
}

double awb_parameter(std::size_t block_length) { return std::pow(0.01, 1.0 / static_cast<double>(block_length)); }

void validate(const BootConfig& config) {
    if (config.B == 0) throw ValidationError("B must be positive");
    if (!(config.level > 0.0 && config.level < 1.0)) throw ValidationError("level must lie in (0, 1)");
    if (config.block_length && *config.block_length == 0) throw ValidationError("block length must be positive");
    if (config.ar_awb && !(*config.ar_awb > 0.0 && *config.ar_awb < 1.0)) {
        throw ValidationError("AWB parameter must lie in (0, 1)");
    }
    if (config.workers && *config.workers == 0) throw ValidationError("workers must be positive");
}

// ---------------------------------------------------------------------------
// Residuals

SeriesResiduals residuals_from_fit(std::span<const double> yd, const AdfFit& fit) {
    const auto trimmed = detail::trim_missing(yd);
    const auto y = trimmed.values;
    const std::size_t m = y.size() - 1;
    std::vector<double> dy(m);
    for (std::size_t k = 0; k < m; ++k) dy[k] = y[k + 1] - y[k];

    SeriesResiduals out;
    out.offset = trimmed.offset;
    out.p = fit.p;
    out.gamma = fit.gamma;
    out.phi = fit.phi;
    out.u_hat.resize(m);
    out.eps_hat.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double u = dy[k] - fit.gamma * y[k];
        double e = u;
        for (std::size_t j = 1; j <= fit.p && j <= k; ++j) e -= fit.phi[j - 1] * dy[k - j];
        out.u_hat[k] = u;
        out.eps_hat[k] = e;
    }
    return out;
}

namespace {

void center(std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= mean;
}

void require_degenerate_free(std::span<const double> y, std::span<const double> yd) {
    double scale = 0.0;
    double resid = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        scale = std::max(scale, std::abs(y[t]));
        resid = std::max(resid, std::abs(yd[t]));
    }
    if (resid <= 1e-12 * scale || resid == 0.0) {
        throw DegenerateInputError("series is fully explained by its deterministic components");
    }
}

}  // namespace

ResidualSet estimate_residuals(const Panel& panel, Deterministics dc, const LagPolicy& policy) {
    require_no_internal_missing(panel);
    ResidualSet set;
    set.rows = panel.rows();
    for (std::size_t i = 0; i < panel.cols(); ++i) {
        const Window w = panel.window(i);
        const auto y = panel.observed(i);
        const auto yd = detrend_ols(y, dc).detrended;
        try {
            require_degenerate_free(y, yd);
            const std::size_t p = select_lag(yd, policy);
            auto r = residuals_from_fit(yd, adf_regress(yd, p));
            r.offset = w.first;
            center(r.u_hat);
            center(r.eps_hat);
            set.series.push_back(std::move(r));
        } catch (const DegenerateInputError& e) {
            throw DegenerateInputError("series '" + panel.names()[i] + "': " + e.what());
        }
    }
    return set;
}

// ---------------------------------------------------------------------------
// Error generation

namespace {

Eigen::MatrixXd empty_errors(const ResidualSet& res) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(res.rows),
                                                  static_cast<Eigen::Index>(res.series.size()), kMissing);
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        e(static_cast<Eigen::Index>(res.series[i].offset), static_cast<Eigen::Index>(i)) = 0.0;
    }
    return e;
}

/// Writes u*_t = sum_j phi_j u*_{t-j} + eps*_t (zero start) into column i.
void recolor_into(Eigen::MatrixXd& errors, std::size_t i, const SeriesResiduals& r, const std::vector<double>& eps) {
    const auto col = static_cast<Eigen::Index>(i);
    std::vector<double> u(eps.size());
    for (std::size_t k = 0; k < eps.size(); ++k) {
        double v = eps[k];
        for (std::size_t j = 1; j <= r.p && j <= k; ++j) v += r.phi[j - 1] * u[k - j];
        u[k] = v;
        errors(static_cast<Eigen::Index>(r.offset + 1 + k), col) = v;
    }
}

std::size_t common_length(const ResidualSet& res) {
    const std::size_t n = res.series.front().eps_hat.size();
    const std::size_t offset = res.series.front().offset;
    for (const auto& r : res.series) {
        if (r.eps_hat.size() != n || r.offset != offset) {
            throw ValidationError("resampling bootstraps need all series observed over the same period");
        }
    }
    return n;
}

std::size_t max_window(const ResidualSet& res) {
    std::size_t n = 0;
    for (const auto& r : res.series) n = std::max(n, r.u_hat.size() + 1);
    return n;
}

}  // namespace

ErrorDraws sb_errors(const ResidualSet& res, std::span<const std::size_t> positions) {
    const std::size_t n = common_length(res);
    if (positions.size() != n) throw ValidationError("SB needs one position per residual");
    ErrorDraws out{empty_errors(res), {positions.begin(), positions.end()}, {}};
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        const auto& r = res.series[i];
        std::vector<double> eps(n);
        for (std::size_t k = 0; k < n; ++k) eps[k] = r.eps_hat[positions[k]];
        recolor_into(out.errors, i, r, eps);
    }
    return out;
}

ErrorDraws mbb_errors(const ResidualSet& res, std::span<const std::size_t> starts, std::size_t block_length) {
    const std::size_t n = common_length(res);
    const std::size_t l = std::min(block_length, n);
    ErrorDraws out{empty_errors(res), {starts.begin(), starts.end()}, {}};
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        const auto& r = res.series[i];
        const auto col = static_cast<Eigen::Index>(i);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t block = k / l;
            out.errors(static_cast<Eigen::Index>(r.offset + 1 + k), col) = r.eps_hat[starts[block] + k % l];
        }
    }
    return out;
}

ErrorDraws swb_errors(const ResidualSet& res, std::span<const double> multipliers) {
    if (multipliers.size() != res.rows) throw ValidationError("need one multiplier per row");
    ErrorDraws out{empty_errors(res), {}, {multipliers.begin(), multipliers.end()}};
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        const auto& r = res.series[i];
        std::vector<double> eps(r.eps_hat.size());
        for (std::size_t k = 0; k < eps.size(); ++k) eps[k] = multipliers[r.offset + 1 + k] * r.eps_hat[k];
        recolor_into(out.errors, i, r, eps);
    }
    return out;
}

ErrorDraws wild_errors(const ResidualSet& res, std::span<const double> multipliers) {
    if (multipliers.size() != res.rows) throw ValidationError("need one multiplier per row");
    ErrorDraws out{empty_errors(res), {}, {multipliers.begin(), multipliers.end()}};
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        const auto& r = res.series[i];
        for (std::size_t k = 0; k < r.u_hat.size(); ++k) {
            const std::size_t row = r.offset + 1 + k;
            out.errors(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) = multipliers[row] * r.u_hat[k];
        }
    }
    return out;
}

std::vector<double> awb_multipliers(std::span<const double> z, double gamma) {
    std::vector<double> xi(z.size());
    if (z.empty()) return xi;
    const double innovation_sd = std::sqrt(1.0 - gamma * gamma);
    xi[0] = z[0];
    for (std::size_t t = 1; t < z.size(); ++t) xi[t] = gamma * xi[t - 1] + innovation_sd * z[t];
    return xi;
}

double bartlett(double x) noexcept { return std::max(0.0, 1.0 - std::abs(x)); }

const Eigen::MatrixXd& dwb_sqrt_covariance(std::size_t T, std::size_t block_length) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Eigen::MatrixXd>> cache;
    const std::lock_guard lock(mutex);
    auto& slot = cache[{T, block_length}];
    if (!slot) {
        const auto n = static_cast<Eigen::Index>(T);
        Eigen::MatrixXd sigma(n, n);
        for (Eigen::Index s = 0; s < n; ++s) {
            for (Eigen::Index t = 0; t < n; ++t) {
                sigma(s, t) = bartlett(static_cast<double>(std::abs(s - t)) / static_cast<double>(block_length));
            }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
        const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        slot = std::make_unique<Eigen::MatrixXd>(eig.eigenvectors() * root.asDiagonal() *
                                                 eig.eigenvectors().transpose());
    }
    return *slot;
}

ErrorDraws gen_errors_sb(const ResidualSet& res, Rng& rng) {
    const std::size_t n = common_length(res);
    std::vector<std::size_t> positions(n);
    for (auto& s : positions) s = rng.index(n);
    return sb_errors(res, positions);
}

ErrorDraws gen_errors_mbb(const ResidualSet& res, std::size_t block_length, Rng& rng) {
    const std::size_t n = common_length(res);
    const std::size_t l = std::min(block_length, n);
    std::vector<std::size_t> starts((n + l - 1) / l);
    for (auto& s : starts) s = rng.index(n - l + 1);
    return mbb_errors(res, starts, l);
}

ErrorDraws gen_errors_swb(const ResidualSet& res, Rng& rng) {
    std::vector<double> xi(res.rows);
    for (double& x : xi) x = rng.normal();
    return swb_errors(res, xi);
}

ErrorDraws gen_errors_dwb(const ResidualSet& res, std::size_t block_length, Rng& rng) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(res.rows));
    for (Eigen::Index t = 0; t < z.size(); ++t) z(t) = rng.normal();
    const Eigen::VectorXd xi = dwb_sqrt_covariance(res.rows, block_length) * z;
    return wild_errors(res, std::span<const double>(xi.data(), static_cast<std::size_t>(xi.size())));
}

ErrorDraws gen_errors_bwb(const ResidualSet& res, std::size_t block_length, Rng& rng) {
    const std::size_t blocks = (res.rows + block_length - 1) / block_length;
    std::vector<double> eta(blocks);
    for (double& x : eta) x = rng.normal();
    std::vector<double> xi(res.rows);
    for (std::size_t t = 0; t < res.rows; ++t) xi[t] = eta[t / block_length];
    return wild_errors(res, xi);
}

ErrorDraws gen_errors_awb(const ResidualSet& res, double gamma, Rng& rng) {
    std::vector<double> z(res.rows);
    for (double& x : z) x = rng.normal();
    return wild_errors(res, awb_multipliers(z, gamma));
}

Eigen::MatrixXd build_sample(const Eigen::MatrixXd& errors) {
    Eigen::MatrixXd y = errors;
    for (Eigen::Index i = 0; i < y.cols(); ++i) {
        double acc = 0.0;
        for (Eigen::Index t = 0; t < y.rows(); ++t) {
            if (std::isnan(errors(t, i))) continue;
            acc += errors(t, i);
            y(t, i) = acc;
        }
    }
    return y;
}

// ---------------------------------------------------------------------------
// Replication loop

std::vector<double> BootStatMatrix::column(std::size_t i, std::size_t k) const {
    std::vector<double> out(B);
    for (std::size_t b = 0; b < B; ++b) out[b] = at(b, i, k);
    return out;
}

std::size_t resolve_workers(const BootConfig& config) {
    if (config.workers) return *config.workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t b = 0; b < count; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t b = next++; b < count && !failed; b = next++) {
                try {
                    fn(b);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

BootStatMatrix bootstrap_statistics(const Panel& panel, const BootstrapRequest& request, const BootConfig& config) {
    const ResidualSet residuals = estimate_residuals(panel, request.residual_dc, request.policy);
    return bootstrap_statistics(panel, residuals, request, config);
}

BootStatMatrix bootstrap_statistics(const Panel& panel, const ResidualSet& residuals,
                                    const BootstrapRequest& request, const BootConfig& config) {
    validate(config);
    if (residuals.series.size() != panel.cols() || residuals.rows != panel.rows()) {
        throw ValidationError("residual set does not match the panel");
    }
    const std::size_t N = panel.cols();
    const std::size_t K = request.K;
    BootStatMatrix out;
    out.B = config.B;
    out.N = N;
    out.K = K;
    out.observed.resize(N * K);
    out.boot.resize(config.B * N * K);

    for (std::size_t i = 0; i < N; ++i) {
        const auto y = panel.observed(i);
        request.statistic(y, std::span<double>(out.observed).subspan(i * K, K));
    }

    const std::size_t l = config.block_length.value_or(default_block_length(max_window(residuals)));
    const double gamma = config.ar_awb.value_or(awb_parameter(l));
    if (config.method == BootMethod::dwb) (void)dwb_sqrt_covariance(residuals.rows, l);

    parallel_for(config.B, resolve_workers(config), [&](std::size_t b) {
        Rng rng = Rng::stream(config.seed, request.stream_tag, b);
        ErrorDraws draws;
        switch (config.method) {
            case BootMethod::sb: draws = gen_errors_sb(residuals, rng); break;
            case BootMethod::mbb: draws = gen_errors_mbb(residuals, l, rng); break;
            case BootMethod::swb: draws = gen_errors_swb(residuals, rng); break;
            case BootMethod::dwb: draws = gen_errors_dwb(residuals, l, rng); break;
            case BootMethod::bwb: draws = gen_errors_bwb(residuals, l, rng); break;
            case BootMethod::awb: draws = gen_errors_awb(residuals, gamma, rng); break;
        }
        if (request.observer) request.observer(b, draws);
        const Eigen::MatrixXd sample = build_sample(draws.errors);
        std::vector<double> y;
        for (std::size_t i = 0; i < N; ++i) {
            const auto& r = residuals.series[i];
            const std::size_t n = r.u_hat.size() + 1;
            y.resize(n);
            for (std::size_t t = 0; t < n; ++t) {
                y[t] = sample(static_cast<Eigen::Index>(r.offset + t), static_cast<Eigen::Index>(i));
            }
            request.statistic(y, std::span<double>(out.boot).subspan((b * N + i) * K, K));
        }
    });
    return out;
}

}  // namespace urboot
