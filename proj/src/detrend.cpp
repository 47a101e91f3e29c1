#include "urboot/detrend.hpp"

#include "series_window.hpp"
#include "urboot/errors.hpp"

#include <Eigen/Dense>

namespace urboot {

std::size_t deterministic_terms(Deterministics dc) noexcept {
    switch (dc) {
        case Deterministics::none: return 0;
        case Deterministics::intercept: return 1;
        case Deterministics::trend: return 2;
    }
    return 0;
}

double default_qd_c(Deterministics dc) {
    switch (dc) {
        case Deterministics::intercept: return 7.0;
        case Deterministics::trend: return 13.5;
        case Deterministics::none: break;
    }
    throw ValidationError("quasi-differencing needs deterministic components");
}

bool normalize(DetrendSpec& spec) noexcept {
    if (spec.method == DetrendMethod::qd && spec.dc == Deterministics::none) {
        spec.method = DetrendMethod::ols;
        return true;
    }
    return false;
}

namespace {

Eigen::MatrixXd design(std::size_t n, Deterministics dc) {
    const auto k = static_cast<Eigen::Index>(deterministic_terms(dc));
    Eigen::MatrixXd d(static_cast<Eigen::Index>(n), k);
    for (Eigen::Index t = 0; t < d.rows(); ++t) {
        if (k >= 1) d(t, 0) = 1.0;
        if (k >= 2) d(t, 1) = static_cast<double>(t + 1);
    }
    return d;
}

DetrendResult finish(std::span<const double> full, const detail::Trimmed& obs, const Eigen::MatrixXd& d,
                     const Eigen::VectorXd& beta) {
    DetrendResult out;
    out.detrended.assign(full.begin(), full.end());
    const Eigen::VectorXd fit = d * beta;
    for (std::size_t t = 0; t < obs.values.size(); ++t) {
        out.detrended[obs.offset + t] = obs.values[t] - fit(static_cast<Eigen::Index>(t));
    }
    out.beta.assign(beta.data(), beta.data() + beta.size());
    return out;
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const auto qr = x.colPivHouseholderQr();
    if (qr.rank() < x.cols()) throw ValidationError("deterministic regressors are rank deficient");
    return qr.solve(y);
}

detail::Trimmed checked(std::span<const double> y, Deterministics dc) {
    const auto obs = detail::trim_missing(y);
    if (obs.values.size() < deterministic_terms(dc) + 1) {
        throw ValidationError("too few observations to remove the deterministic components");
    }
    return obs;
}

}  // namespace

DetrendResult detrend_ols(std::span<const double> y, Deterministics dc) {
    const auto obs = checked(y, dc);
    if (dc == Deterministics::none) return {std::vector<double>(y.begin(), y.end()), {}};
    const std::size_t n = obs.values.size();
    const Eigen::MatrixXd d = design(n, dc);
    const Eigen::Map<const Eigen::VectorXd> yv(obs.values.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd beta(1);
    if (dc == Deterministics::intercept) {
        beta(0) = yv.mean();
    } else {
        beta = least_squares(d, yv);
    }
    return finish(y, obs, d, beta);
}

DetrendResult detrend_qd(std::span<const double> y, Deterministics dc, std::optional<double> qd_c) {
    if (dc == Deterministics::none) throw ValidationError("QD detrending needs deterministic components");
    const auto obs = checked(y, dc);
    const double c = qd_c.value_or(default_qd_c(dc));
    if (!(c > 0.0)) throw ValidationError("QD parameter c must be positive");
    const std::size_t n = obs.values.size();
    const double a = 1.0 - c / static_cast<double>(n);

    const Eigen::MatrixXd d = design(n, dc);
    const Eigen::Map<const Eigen::VectorXd> yv(obs.values.data(), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd dq = d;
    Eigen::VectorXd yq = yv;
    for (Eigen::Index t = static_cast<Eigen::Index>(n) - 1; t >= 1; --t) {
        dq.row(t) -= a * d.row(t - 1);
        yq(t) -= a * yv(t - 1);
    }
    return finish(y, obs, d, least_squares(dq, yq));
}

DetrendResult detrend(std::span<const double> y, const DetrendSpec& spec) {
    DetrendSpec s = spec;
    normalize(s);
    return s.method == DetrendMethod::ols ? detrend_ols(y, s.dc) : detrend_qd(y, s.dc, s.qd_c);
}

std::string to_string(Deterministics dc) {
    switch (dc) {
        case Deterministics::none: return "none";
        case Deterministics::intercept: return "intercept";
        case Deterministics::trend: return "trend";
    }
    return "?";
}

std::string to_string(DetrendMethod method) { return method == DetrendMethod::ols ? "OLS" : "QD"; }

}  // namespace urboot
