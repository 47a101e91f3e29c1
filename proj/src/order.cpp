#include "urboot/order.hpp"

#include "urboot/errors.hpp"
#include "urboot/rng.hpp"

#include <algorithm>

namespace urboot {

std::string to_string(OrderTest test) {
    switch (test) {
        case OrderTest::adf: return "adf";
        case OrderTest::union_test: return "union";
        case OrderTest::iadf: return "iadf";
        case OrderTest::bsqt: return "bsqt";
        case OrderTest::fdr: return "fdr";
    }
    return "?";
}

namespace {

void merge_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
    for (const auto& w : from) {
        if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
    }
}

void fill_from_report(OrderStage& stage, const TestReport& report) {
    for (const auto& o : report.outcomes) {
        stage.statistics.push_back(o.statistic);
        stage.rejected.push_back(o.reject);
    }
    merge_warnings(stage.warnings, report.warnings);
}

void run_stage(OrderStage& stage, const Panel& pool, const OrderOptions& options, std::uint64_t seed) {
    TestOptions opts = options.test_options;
    opts.boot.seed = seed;
    switch (options.test) {
        case OrderTest::adf:
        case OrderTest::union_test:
            for (std::size_t i = 0; i < pool.cols(); ++i) {
                const std::size_t column[] = {i};
                opts.boot.seed = mix64(seed ^ (i + 1));
                const Panel one = pool.select(column);
                const TestReport r = options.test == OrderTest::adf ? boot_adf(one, opts) : boot_union(one, opts);
                if (r.outcomes.size() != 1) {
                    throw ValidationError("order classification with adf needs exactly one dc/detr combination");
                }
                fill_from_report(stage, r);
            }
            break;
        case OrderTest::iadf: {
            const TestReport r = iadf(pool, opts);
            if (r.outcomes.size() != pool.cols()) {
                throw ValidationError("order classification with iadf needs the union or one dc/detr combination");
            }
            fill_from_report(stage, r);
            break;
        }
        case OrderTest::bsqt:
        case OrderTest::fdr: {
            const SequentialOutcome s =
                options.test == OrderTest::bsqt ? bsqt(pool, options.q, opts) : fdr(pool, opts);
            stage.statistics = s.statistics;
            stage.rejected = s.rej_h0;
            merge_warnings(stage.warnings, s.warnings);
            break;
        }
    }
}

}  // namespace

OrderResult order_integration(const Panel& panel, const OrderOptions& options) {
    if (options.max_order < 1) throw ValidationError("max_order must be at least 1");
    require_no_internal_missing(panel);

    const std::size_t N = panel.cols();
    OrderResult result;
    result.d.assign(N, 0);
    std::vector<std::size_t> pool(N);
    for (std::size_t i = 0; i < N; ++i) pool[i] = i;

    for (std::size_t stage_d = options.max_order; stage_d-- > 0 && !pool.empty();) {
        const Panel sub = panel.select(pool);
        const std::vector<std::size_t> orders(pool.size(), stage_d);
        const Panel differenced = diff_mult(sub, orders, true);

        OrderStage stage;
        stage.d = stage_d;
        stage.series = sub.names();
        run_stage(stage, differenced, options, mix64(mix64(options.test_options.boot.seed) ^ stage_d));

        std::vector<std::size_t> remaining;
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (!stage.rejected[j]) {
                result.d[pool[j]] = stage_d + 1;
            } else if (stage_d > 0) {
                remaining.push_back(pool[j]);
            }
        }
        pool = std::move(remaining);
        merge_warnings(result.warnings, stage.warnings);
        result.stages.push_back(std::move(stage));
    }

    result.diff_data = diff_mult(panel, result.d, true);
    return result;
}

}  // namespace urboot
