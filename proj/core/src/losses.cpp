#include "textspot/losses.hpp"

#include "textspot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace textspot {

namespace {

constexpr int kNumClasses = 37;

double pairwise_sum_span(std::span<const double> terms) {
    if (terms.size() <= 16) {
        double acc = 0.0;
        for (double t : terms) acc += t;
        return acc;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum_span(terms.first(half)) + pairwise_sum_span(terms.subspan(half));
}

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

} // namespace

double pairwise_sum(const std::vector<double>& terms) {
    return pairwise_sum_span(terms);
}

LossReport global_loss(const Grid<double>& logits, const Grid<int>& target) {
    if (logits.height != target.height || logits.width != target.width)
        throw ContractError("global_loss logits/target shape mismatch");
    for (int y : target.values)
        if (y != 0 && y != 1)
            throw ContractError("global_loss target must be binary");

    const std::size_t n = logits.size();
    std::vector<double> per_cell(n);
    LossReport report;
    report.gradient.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = logits.values[i];
        const double y = static_cast<double>(target.values[i]);
        // -[y log S(x) + (1-y) log(1-S(x))] == softplus(x) - x*y
        per_cell[i] = softplus(x) - x * y;
        report.gradient[i] = (stable_sigmoid(x) - y) / static_cast<double>(n);
    }
    report.value = pairwise_sum(per_cell) / static_cast<double>(n);
    return report;
}

LossReport char_loss(const Grid<double>& logits, const std::vector<int>& labels) {
    if (logits.width != kNumClasses)
        throw ContractError("char_loss expects 37 logit columns, got " +
                            std::to_string(logits.width));
    if (labels.size() != static_cast<std::size_t>(logits.height))
        throw ContractError("char_loss labels/logits row count mismatch");

    std::size_t counted = 0, negatives = 0;
    for (int l : labels) {
        if (l < -1 || l > 36)
            throw ContractError("char label out of range: " + std::to_string(l));
        if (l >= 0) ++counted;
        if (l == 0) ++negatives;
    }

    LossReport report;
    report.gradient.assign(logits.size(), 0.0);
    if (counted == 0) return report; // fully unannotated: zero loss, zero gradient

    const double n = static_cast<double>(counted);
    double char_weight = 1.0;
    if (negatives > 0 && negatives < counted)
        char_weight = static_cast<double>(negatives) / (n - static_cast<double>(negatives));

    std::vector<double> per_cell;
    per_cell.reserve(counted);
    for (int row = 0; row < logits.height; ++row) {
        const int label = labels[static_cast<std::size_t>(row)];
        if (label < 0) continue;
        const double weight = (label == 0) ? 1.0 : char_weight;

        const double* x = logits.values.data() +
                          static_cast<std::size_t>(row) * kNumClasses;
        const double xmax = *std::max_element(x, x + kNumClasses);
        double sum_exp = 0.0;
        for (int t = 0; t < kNumClasses; ++t) sum_exp += std::exp(x[t] - xmax);
        const double lse = xmax + std::log(sum_exp);

        per_cell.push_back(weight * (lse - x[label]));

        double* g = report.gradient.data() + static_cast<std::size_t>(row) * kNumClasses;
        for (int t = 0; t < kNumClasses; ++t) {
            const double softmax_t = std::exp(x[t] - lse);
            const double y_t = (t == label) ? 1.0 : 0.0;
            g[t] = weight * (softmax_t - y_t) / n;
        }
    }
    report.value = pairwise_sum(per_cell) / n;
    return report;
}

double mask_loss(const LossReport& global_report, const LossReport& char_report,
                 const LossConfig& cfg) {
    if (!std::isfinite(global_report.value) || !std::isfinite(char_report.value))
        throw ContractError("mask_loss requires finite component losses");
    return global_report.value + cfg.beta * char_report.value;
}

double total_loss(double l_rpn, double l_rcnn, double l_mask,
                  const LossConfig& cfg) {
    if (!std::isfinite(l_rpn) || !std::isfinite(l_rcnn) || !std::isfinite(l_mask))
        throw ContractError("total_loss requires finite inputs");
    return l_rpn + cfg.alpha1 * l_rcnn + cfg.alpha2 * l_mask;
}

double finite_diff_max_rel_error(
    const std::function<LossReport(const std::vector<double>&)>& fn,
    const std::vector<double>& point, double step, double analytic_perturbation) {
    const LossReport base = fn(point);
    if (base.gradient.size() != point.size())
        throw ContractError("gradient size does not match parameter count");

    double max_err = 0.0;
    std::vector<double> probe = point;
    for (std::size_t i = 0; i < point.size(); ++i) {
        probe[i] = point[i] + step;
        const double up = fn(probe).value;
        probe[i] = point[i] - step;
        const double down = fn(probe).value;
        probe[i] = point[i];

        const double numeric = (up - down) / (2.0 * step);
        const double analytic = base.gradient[i] + analytic_perturbation;
        const double diff = std::abs(analytic - numeric);
        const double err = (std::abs(analytic) < 1e-8) ? diff : diff / std::abs(analytic);
        max_err = std::max(max_err, err);
    }
    return max_err;
}

double finite_diff_check_global(const Grid<double>& logits, const Grid<int>& target,
                                double step, double analytic_perturbation) {
    const int h = logits.height, w = logits.width;
    auto fn = [h, w, &target](const std::vector<double>& flat) {
        return global_loss(Grid<double>(h, w, flat), target);
    };
    return finite_diff_max_rel_error(fn, logits.values, step, analytic_perturbation);
}

double finite_diff_check_char(const Grid<double>& logits,
                              const std::vector<int>& labels, double step,
                              double analytic_perturbation) {
    const int h = logits.height, w = logits.width;
    auto fn = [h, w, &labels](const std::vector<double>& flat) {
        return char_loss(Grid<double>(h, w, flat), labels);
    };
    return finite_diff_max_rel_error(fn, logits.values, step, analytic_perturbation);
}

} // namespace textspot
