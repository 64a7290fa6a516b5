#pragma once

#include "textspot/grid.hpp"

#include <functional>
#include <vector>

namespace textspot {

// Multi-task loss weights; the reference setting is all 1.0.
struct LossConfig {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double beta = 1.0;
};

struct LossReport {
    double value = 0.0;
    std::vector<double> gradient; // same element count/layout as the logits
};

// Average binary cross-entropy on sigmoid(logits) against a {0,1} target,
// computed in softplus form so it never overflows. Gradient per cell is
// (sigmoid(x) - y) / N.
LossReport global_loss(const Grid<double>& logits, const Grid<int>& target);

// Weighted spatial soft-max loss over N pixels and 37 classes (background
// class 0, characters 1..36). Background cells weigh 1, character cells
// N_neg / (N - N_neg). Cells labeled -1 contribute nothing and are excluded
// from both counts. Degenerate cases (N_neg == N or N_neg == 0) fall back to
// weight 1 so the loss stays bounded.
LossReport char_loss(const Grid<double>& logits, const std::vector<int>& labels);

// L_global + beta * L_char.
double mask_loss(const LossReport& global_report, const LossReport& char_report,
                 const LossConfig& cfg);

// L_rpn + alpha1 * L_rcnn + alpha2 * L_mask.
double total_loss(double l_rpn, double l_rcnn, double l_mask,
                  const LossConfig& cfg);

// Central-difference gradient verification of a value-and-gradient function
// over a flat parameter vector. Returns the max relative error, falling back
// to absolute error where the analytic coordinate is below 1e-8.
// `analytic_perturbation` is a test hook added to every analytic gradient
// coordinate before comparison.
double finite_diff_max_rel_error(
    const std::function<LossReport(const std::vector<double>&)>& fn,
    const std::vector<double>& point, double step = 1e-3,
    double analytic_perturbation = 0.0);

double finite_diff_check_global(const Grid<double>& logits, const Grid<int>& target,
                                double step = 1e-3,
                                double analytic_perturbation = 0.0);
double finite_diff_check_char(const Grid<double>& logits,
                              const std::vector<int>& labels, double step = 1e-3,
                              double analytic_perturbation = 0.0);

// Deterministic pairwise tree reduction; used for all loss summations so
// values are bit-reproducible regardless of evaluation strategy.
double pairwise_sum(const std::vector<double>& terms);

} // namespace textspot
