#include "urboot/adf.hpp"

#include "series_window.hpp"
#include "urboot/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace urboot {

namespace {

constexpr double kCollinear = 1e-10;
constexpr double kPerfectFit = 1e-20;

/// Lagged level and lagged differences for rows whose level index runs from
/// `first_row` to n - 1 (0-based); column 0 is y_{t-1}, column j is dy_{t-j}.
void fill_design(std::span<const double> y, std::size_t first_row, std::size_t lags, Eigen::MatrixXd& z,
                 bool with_dependent) {
    const std::size_t n = y.size();
    const auto rows = static_cast<Eigen::Index>(n - first_row);
    const auto cols = static_cast<Eigen::Index>(lags + 1 + (with_dependent ? 1 : 0));
    z.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = first_row + static_cast<std::size_t>(r);
        z(r, 0) = y[t - 1];
        for (std::size_t j = 1; j <= lags; ++j) z(r, static_cast<Eigen::Index>(j)) = y[t - j] - y[t - j - 1];
        if (with_dependent) z(r, cols - 1) = y[t] - y[t - 1];
    }
}

void check_rank(const Eigen::MatrixXd& r_factor, const Eigen::MatrixXd& design, Eigen::Index regressors) {
    for (Eigen::Index j = 0; j < regressors; ++j) {
        const double norm = design.col(j).norm();
        if (norm == 0.0 || std::abs(r_factor(j, j)) <= kCollinear * norm) {
            throw DegenerateInputError(j == 0 ? "lagged level has no variation; the detrended series is degenerate"
                                              : "ADF regressors are exactly collinear");
        }
    }
}

double penalty_constant(InfoCriterion criterion, double n) {
    return (criterion == InfoCriterion::aic || criterion == InfoCriterion::maic) ? 2.0 : std::log(n);
}

bool is_modified(InfoCriterion criterion) {
    return criterion == InfoCriterion::maic || criterion == InfoCriterion::mbic;
}

}  // namespace

std::size_t default_max_lag(std::size_t n_obs) {
    return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n_obs) / 100.0, 0.25)));
}

std::size_t feasible_max_lag(std::size_t n_obs) { return n_obs < 3 ? 0 : (n_obs - 3) / 2; }

std::size_t resolve_max_lag(const LagPolicy& policy, std::size_t n_obs) {
    if (n_obs < 3) throw ValidationError("an ADF regression needs at least 3 observations");
    std::size_t p_max;
    if (policy.p_max) {
        p_max = *policy.p_max;
        if (p_max > feasible_max_lag(n_obs)) {
            throw ValidationError("p_max = " + std::to_string(p_max) + " is too large for " +
                                  std::to_string(n_obs) + " observations");
        }
    } else {
        p_max = std::min(default_max_lag(n_obs), feasible_max_lag(n_obs));
    }
    if (policy.p_min > p_max) {
        throw ValidationError("p_min (" + std::to_string(policy.p_min) + ") exceeds p_max (" +
                              std::to_string(p_max) + ")");
    }
    return p_max;
}

AdfFit adf_regress(std::span<const double> yd, std::size_t p) {
    const auto y = detail::trim_missing(yd).values;
    const std::size_t n_obs = y.size();
    if (n_obs < 2 * p + 3) {
        throw ValidationError("too few observations (" + std::to_string(n_obs) + ") for an ADF regression with " +
                              std::to_string(p) + " lags");
    }
    Eigen::MatrixXd x;
    fill_design(y, p + 1, p, x, false);
    const Eigen::Index n = x.rows();
    Eigen::VectorXd dy(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const std::size_t t = p + 1 + static_cast<std::size_t>(r);
        dy(r) = y[t] - y[t - 1];
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    const auto k = x.cols();
    const Eigen::MatrixXd r_factor = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    check_rank(r_factor, x, k);

    const Eigen::VectorXd qty = (qr.householderQ().transpose() * dy).head(k);
    const Eigen::VectorXd beta = r_factor.triangularView<Eigen::Upper>().solve(qty);
    const Eigen::VectorXd resid = dy - x * beta;
    const double ssr = resid.squaredNorm();
    if (ssr <= kPerfectFit * dy.squaredNorm()) {
        throw DegenerateInputError("ADF regression fits exactly; the detrended series is degenerate");
    }
    const double sigma2 = ssr / static_cast<double>(n - k);
    const Eigen::MatrixXd r_inv =
        r_factor.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const double var_gamma = sigma2 * r_inv.row(0).squaredNorm();

    AdfFit fit;
    fit.p = p;
    fit.gamma = beta(0);
    fit.phi.assign(beta.data() + 1, beta.data() + k);
    fit.residuals.assign(resid.data(), resid.data() + n);
    fit.u_hat.resize(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) fit.u_hat[static_cast<std::size_t>(r)] = dy(r) - fit.gamma * x(r, 0);
    fit.sigma2 = sigma2;
    fit.tstat = fit.gamma / std::sqrt(var_gamma);
    return fit;
}

std::vector<double> ic_profile(std::span<const double> yd, std::size_t p_min, std::size_t p_max,
                               InfoCriterion criterion) {
    const auto y = detail::trim_missing(yd).values;
    const std::size_t n_obs = y.size();
    if (p_min > p_max) throw ValidationError("p_min exceeds p_max");
    if (n_obs < 2 * p_max + 3) {
        throw ValidationError("too few observations for lag selection up to " + std::to_string(p_max));
    }
    // Common sample: every candidate uses rows t = p_max+2, ..., T (1-based).
    Eigen::MatrixXd z;
    fill_design(y, p_max + 1, p_max, z, true);
    const Eigen::Index m = z.cols() - 1;
    const auto n_eff = static_cast<double>(z.rows());

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    const Eigen::MatrixXd r_factor = qr.matrixQR().topRows(m + 1).triangularView<Eigen::Upper>();
    check_rank(r_factor, z, m);
    const Eigen::VectorXd rhs = r_factor.col(m);
    const double total = z.col(m).squaredNorm();
    const double sum_sq_level = z.col(0).squaredNorm();
    const double c_t = penalty_constant(criterion, n_eff);

    // Residual sum of squares of the nested model with the first j regressors
    // is the squared tail of Q'y.
    std::vector<double> tail(static_cast<std::size_t>(m + 1), 0.0);
    double acc = rhs(m) * rhs(m);
    tail[static_cast<std::size_t>(m)] = acc;
    for (Eigen::Index j = m - 1; j >= 0; --j) {
        acc += rhs(j) * rhs(j);
        tail[static_cast<std::size_t>(j)] = acc;
    }

    std::vector<double> out;
    out.reserve(p_max - p_min + 1);
    for (std::size_t k = p_min; k <= p_max; ++k) {
        const auto j = static_cast<Eigen::Index>(k + 1);
        const double ssr = tail[static_cast<std::size_t>(j)];
        if (ssr <= kPerfectFit * total) throw DegenerateInputError("lag-selection regression fits exactly");
        const double sigma2 = ssr / n_eff;
        double penalty = static_cast<double>(k);
        if (is_modified(criterion)) {
            const Eigen::VectorXd beta =
                r_factor.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(rhs.head(j));
            penalty += beta(0) * beta(0) * sum_sq_level / sigma2;
        }
        out.push_back(std::log(sigma2) + c_t * penalty / n_eff);
    }
    return out;
}

double ic_value(std::span<const double> yd, std::size_t k, std::size_t p_max, InfoCriterion criterion) {
    if (k > p_max) throw ValidationError("lag exceeds p_max");
    return ic_profile(yd, k, p_max, criterion).front();
}

std::size_t select_lag(std::span<const double> yd, const LagPolicy& policy,
                       std::span<const double> yd_for_selection) {
    if (policy.p_max && policy.p_min == *policy.p_max) return policy.p_min;
    const auto data = yd_for_selection.empty() ? yd : yd_for_selection;
    const auto obs = detail::trim_missing(data).values;
    const std::size_t p_max = resolve_max_lag(policy, obs.size());
    if (policy.p_min == p_max) return p_max;

    std::vector<double> rescaled;
    std::span<const double> input = obs;
    if (policy.rescale) {
        rescaled = rescale_series(obs);
        input = rescaled;
    }
    const auto ic = ic_profile(input, policy.p_min, p_max, policy.criterion);
    std::size_t best = 0;
    for (std::size_t j = 1; j < ic.size(); ++j) {
        if (ic[j] < ic[best]) best = j;
    }
    return policy.p_min + best;
}

namespace {

/// Row-normalised Gaussian smoothing weights over m equally spaced points,
/// bandwidth by Silverman's rule for the uniform design on (0, 1].
const Eigen::MatrixXd& smoothing_weights(std::size_t m) {
    thread_local std::unordered_map<std::size_t, Eigen::MatrixXd> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    const double md = static_cast<double>(m);
    const double sd_design = std::sqrt((md * md - 1.0) / 12.0) / md;
    const double h = 1.06 * sd_design * std::pow(md, -0.2);
    Eigen::MatrixXd w(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (Eigen::Index s = 0; s < w.rows(); ++s) {
        for (Eigen::Index t = 0; t < w.cols(); ++t) {
            const double u = static_cast<double>(s - t) / (md * h);
            w(s, t) = std::exp(-0.5 * u * u);
        }
        w.row(s) /= w.row(s).sum();
    }
    return cache.emplace(m, std::move(w)).first->second;
}

}  // namespace

std::vector<double> local_scale(std::span<const double> yd) {
    const auto y = detail::trim_missing(yd).values;
    if (y.size() < 10) throw ValidationError("rescaling needs at least 10 observations");
    const std::size_t m = y.size() - 1;
    Eigen::VectorXd dy(static_cast<Eigen::Index>(m));
    for (std::size_t t = 0; t < m; ++t) dy(static_cast<Eigen::Index>(t)) = y[t + 1] - y[t];
    const double raw = dy.squaredNorm();
    const Eigen::VectorXd sq = (dy.array() - dy.mean()).square().matrix();
    if (sq.sum() <= kPerfectFit * raw || raw == 0.0) {
        throw DegenerateInputError("first differences have zero variance; cannot rescale");
    }
    const Eigen::VectorXd var = smoothing_weights(m) * sq;
    std::vector<double> out(m);
    for (std::size_t t = 0; t < m; ++t) out[t] = std::sqrt(var(static_cast<Eigen::Index>(t)));
    return out;
}

std::vector<double> rescale_series(std::span<const double> yd) {
    const auto y = detail::trim_missing(yd).values;
    const auto s = local_scale(y);
    std::vector<double> out(y.size());
    out[0] = y[0] / s[0];
    for (std::size_t t = 1; t < y.size(); ++t) out[t] = out[t - 1] + (y[t] - y[t - 1]) / s[t - 1];
    return out;
}

AdfStatistic adf_statistic(std::span<const double> y_in, const DetrendSpec& spec_in, const LagPolicy& policy) {
    const auto y = detail::trim_missing(y_in).values;
    DetrendSpec spec = spec_in;
    normalize(spec);
    const auto test = detrend(y, spec);

    double scale = 0.0;
    double resid = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        scale = std::max(scale, std::abs(y[t]));
        resid = std::max(resid, std::abs(test.detrended[t]));
    }
    if (resid <= 1e-12 * scale || resid == 0.0) {
        throw DegenerateInputError("series is fully explained by its deterministic components");
    }

    std::size_t p;
    if (spec.method == DetrendMethod::qd) {
        const auto selection = detrend_ols(y, spec.dc);
        p = select_lag(test.detrended, policy, selection.detrended);
    } else {
        p = select_lag(test.detrended, policy);
    }
    AdfStatistic out;
    out.fit = adf_regress(test.detrended, p);
    out.p = p;
    out.tstat = out.fit.tstat;
    return out;
}

std::string to_string(InfoCriterion criterion) {
    switch (criterion) {
        case InfoCriterion::aic: return "AIC";
        case InfoCriterion::bic: return "BIC";
        case InfoCriterion::maic: return "MAIC";
        case InfoCriterion::mbic: return "MBIC";
    }
    return "?";
}

}  // namespace urboot
