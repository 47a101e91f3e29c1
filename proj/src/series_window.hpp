#pragma once

#include "urboot/errors.hpp"

#include <cmath>
#include <span>

namespace urboot::detail {

/// Observed part of a series: leading and trailing NaN stripped.
struct Trimmed {
    std::size_t offset = 0;
    std::span<const double> values;
};

inline Trimmed trim_missing(std::span<const double> y) {
    std::size_t b = 0;
    std::size_t e = y.size();
    while (b < e && std::isnan(y[b])) ++b;
    while (e > b && std::isnan(y[e - 1])) --e;
    for (std::size_t t = b; t < e; ++t) {
        if (std::isnan(y[t])) throw ValidationError("series has missing values inside its sample");
    }
    return {b, y.subspan(b, e - b)};
}

}  // namespace urboot::detail
