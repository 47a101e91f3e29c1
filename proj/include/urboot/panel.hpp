#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace urboot {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Inclusive 0-based row range of the observed part of one series.
struct Window {
    std::size_t first = 0;
    std::size_t last = 0;
    [[nodiscard]] std::size_t size() const noexcept { return last - first + 1; }
    friend bool operator==(const Window&, const Window&) = default;
};

/// T x N matrix of named series with an explicit missing mask.
///
/// Masked cells hold a quiet NaN; no unmasked cell may be NaN or infinite.
/// Column order is the tie-breaking order used by every ranking downstream.
/// The optional time index is a label per row and never enters a computation.
class Panel {
public:
    using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

    Panel() = default;
    Panel(std::vector<std::string> names, Eigen::MatrixXd values, Mask mask,
          std::vector<std::string> time_index = {});

    /// Builds the mask from NaN cells of `values`.
    [[nodiscard]] static Panel from_nan(std::vector<std::string> names, Eigen::MatrixXd values,
                                        std::vector<std::string> time_index = {});
    /// One column per inner vector; NaN marks missing.
    [[nodiscard]] static Panel from_columns(std::vector<std::string> names,
                                            const std::vector<std::vector<double>>& columns);
    [[nodiscard]] static Panel single(std::span<const double> y, std::string name = "y");

    [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::vector<std::string>& time_index() const noexcept { return time_index_; }
    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
    [[nodiscard]] const Mask& mask() const noexcept { return mask_; }
    [[nodiscard]] bool missing(std::size_t t, std::size_t i) const { return mask_(t, i); }
    [[nodiscard]] double operator()(std::size_t t, std::size_t i) const { return values_(t, i); }

    /// Column i, NaN at masked rows.
    [[nodiscard]] std::vector<double> column(std::size_t i) const;
    /// First and last observed rows of column i; throws if the column is fully missing.
    [[nodiscard]] Window window(std::size_t i) const;
    /// Values between the first and last observation. Throws on internal gaps.
    [[nodiscard]] std::vector<double> observed(std::size_t i) const;
    /// Index of a column by name; throws if absent.
    [[nodiscard]] std::size_t index_of(const std::string& name) const;
    /// Sub-panel with the given columns, in the given order.
    [[nodiscard]] Panel select(std::span<const std::size_t> columns) const;

private:
    std::vector<std::string> names_;
    Eigen::MatrixXd values_;
    Mask mask_;
    std::vector<std::string> time_index_;
};

// ---------------------------------------------------------------------------
// CSV

struct CsvOptions {
    std::vector<std::string> missing_tokens{"NA", ""};
    /// First column holds period labels rather than data.
    bool has_time_column = false;
};

[[nodiscard]] Panel load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
[[nodiscard]] Panel parse_csv(const std::string& text, const CsvOptions& options = {});
/// Shortest round-trip decimal representation; missing cells are written as "NA".
[[nodiscard]] std::string to_csv(const Panel& panel);
void write_csv(const Panel& panel, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Missingness

/// True for series with a missing cell strictly inside their observed range.
[[nodiscard]] std::vector<bool> check_missing_insample(const Panel& panel);

struct SubsampleRange {
    std::vector<std::size_t> first;  ///< 1-based
    std::vector<std::size_t> last;   ///< 1-based
    bool all_equal = true;
};

[[nodiscard]] SubsampleRange find_nonmissing_subsample(const Panel& panel);

/// Throws ValidationError naming the first series with an internal gap.
void require_no_internal_missing(const Panel& panel);
[[nodiscard]] bool is_balanced(const Panel& panel);

// ---------------------------------------------------------------------------
// Differencing

/// Column i differenced d[i] times. With keep_na the output keeps all T rows
/// and masks the d[i] observations lost at the head of each series; otherwise
/// every row touched by a lost observation is dropped.
[[nodiscard]] Panel diff_mult(const Panel& panel, std::span<const std::size_t> d, bool keep_na = true);

// ---------------------------------------------------------------------------
// Simulation

enum class Deterministics { none, intercept, trend };

struct Innovation {
    enum class Kind { iid_normal, ar1, variance_break };
    Kind kind = Kind::iid_normal;
    double ar = 0.0;              ///< AR(1) coefficient for Kind::ar1
    double scale = 1.0;           ///< s.d. multiplier after the break
    double break_fraction = 0.5;  ///< in (0, 1)
};

/// y_t = x_t + beta' d_t with x_t = rho x_{t-1} + u_t and x_0 = 0.
struct DgpSpec {
    std::vector<double> rho{1.0};  ///< one value for all series, or one per series
    std::vector<double> beta;      ///< length 0, 1 or 2 matching dc
    Deterministics dc = Deterministics::none;
    Innovation innovation;
    std::size_t T = 100;
    std::size_t N = 1;
    /// Loading on a common N(0,1) factor added to every series' innovation.
    double factor_loading = 0.0;
};

[[nodiscard]] Panel simulate_dgp(const DgpSpec& spec, std::uint64_t seed);

/// Innovations u_t that simulate_dgp would use for the same (spec, seed).
[[nodiscard]] Eigen::MatrixXd simulate_innovations(const DgpSpec& spec, std::uint64_t seed);

}  // namespace urboot
