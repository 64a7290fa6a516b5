#include "textspot/losses.hpp"

#include "textspot/errors.hpp"
#include "textspot/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace textspot;

namespace {

Grid<double> random_logits(int h, int w, DetRng& rng, double lo = -5.0,
                           double hi = 5.0) {
    Grid<double> g(h, w);
    for (double& v : g.values) v = rng.uniform(lo, hi);
    return g;
}

} // namespace

TEST_CASE("global loss at logit 0, target 1 is ln 2 with gradient -1/2") {
    Grid<double> logits(1, 1, 0.0);
    Grid<int> target(1, 1, 1);
    const LossReport r = global_loss(logits, target);
    CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(r.gradient[0] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("global loss saturates without overflowing") {
    Grid<double> logits(1, 1, 30.0);
    Grid<int> target(1, 1, 1);
    CHECK(global_loss(logits, target).value < 1e-12);

    Grid<double> extreme(1, 1, 500.0);
    Grid<int> zero(1, 1, 0);
    const LossReport r = global_loss(extreme, zero);
    CHECK(std::isfinite(r.value));
    CHECK(r.value == doctest::Approx(500.0));
}

TEST_CASE("global loss matches scalar-at-a-time summation") {
    DetRng rng(3);
    for (int t = 0; t < 20; ++t) {
        const Grid<double> logits = random_logits(4, 4, rng, -8.0, 8.0);
        Grid<int> target(4, 4);
        for (int& y : target.values) y = static_cast<int>(rng.next_below(2));
        const double expected = static_cast<double>(
            oracles::naive_bce(logits.values, target.values));
        CHECK(global_loss(logits, target).value ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("global loss rejects shape mismatch and non-binary targets") {
    CHECK_THROWS_AS(global_loss(Grid<double>(2, 2), Grid<int>(2, 3)),
                    ContractError);
    Grid<int> bad(2, 2, 0);
    bad.at(0, 0) = 2;
    CHECK_THROWS_AS(global_loss(Grid<double>(2, 2), bad), ContractError);
}

TEST_CASE("Eq. 7 weights: three background cells and one character cell") {
    // N=4, labels (0,0,0,3): N_neg=3, character weight 3/(4-3) = 3.
    Grid<double> logits(4, 37, 0.0);
    const std::vector<int> labels{0, 0, 0, 3};
    const LossReport r = char_loss(logits, labels);
    // Uniform logits: every cell contributes ln 37, weighted (1,1,1,3).
    const double expected = (1.0 + 1.0 + 1.0 + 3.0) * std::log(37.0) / 4.0;
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("all -1 labels give zero loss and zero gradient") {
    DetRng rng(4);
    const Grid<double> logits = random_logits(6, 37, rng);
    const std::vector<int> labels(6, -1);
    const LossReport r = char_loss(logits, labels);
    CHECK(r.value == 0.0);
    for (double g : r.gradient) CHECK(g == 0.0);
}

TEST_CASE("uniform logits, one background cell: ln 37") {
    Grid<double> logits(1, 37, 0.25); // any constant row
    const LossReport r = char_loss(logits, {0});
    CHECK(r.value == doctest::Approx(std::log(37.0)).epsilon(1e-12));
}

TEST_CASE("char loss matches the naive formula on random inputs") {
    DetRng rng(5);
    for (int t = 0; t < 20; ++t) {
        const Grid<double> logits = random_logits(8, 37, rng);
        std::vector<int> labels(8);
        for (int& l : labels) l = static_cast<int>(rng.next_below(38)) - 1;
        const double expected = static_cast<double>(
            oracles::naive_char_loss(logits.values, 8, labels));
        CHECK(char_loss(logits, labels).value ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("char loss is invariant under per-cell logit shifts") {
    DetRng rng(6);
    const Grid<double> logits = random_logits(5, 37, rng);
    const std::vector<int> labels{0, 3, -1, 36, 0};
    const double base = char_loss(logits, labels).value;

    Grid<double> shifted = logits;
    for (int row = 0; row < 5; ++row) {
        const double shift = rng.uniform(-7.0, 7.0);
        for (int t = 0; t < 37; ++t) shifted.at(row, t) += shift;
    }
    CHECK(char_loss(shifted, labels).value == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("character-cell gradients scale by exactly N_neg/(N-N_neg)") {
    DetRng rng(7);
    const Grid<double> logits = random_logits(4, 37, rng);
    const std::vector<int> weighted_labels{0, 0, 0, 3};
    const LossReport weighted = char_loss(logits, weighted_labels);

    // Reference: same logits where every cell is "background-like" weight 1.
    // Scale factor for the character cell is N_neg/(N-N_neg) = 3.
    Grid<double> row(1, 37);
    for (int t = 0; t < 37; ++t) row.at(0, t) = logits.at(3, t);
    const LossReport single = char_loss(row, {3}); // N=1, weight 1, norm 1
    for (int t = 0; t < 37; ++t) {
        const double unweighted_per_n = single.gradient[static_cast<std::size_t>(t)] / 4.0;
        CHECK(weighted.gradient[3 * 37 + t] ==
              doctest::Approx(3.0 * unweighted_per_n).epsilon(1e-12));
    }
}

TEST_CASE("degenerate weights: all background or all characters") {
    Grid<double> logits(2, 37, 0.0);
    // All background: weights 1.
    CHECK(char_loss(logits, {0, 0}).value ==
          doctest::Approx(std::log(37.0)).epsilon(1e-12));
    // No background: divisor would be zero; weight defined as 1.
    CHECK(char_loss(logits, {3, 9}).value ==
          doctest::Approx(std::log(37.0)).epsilon(1e-12));
}

TEST_CASE("char loss validates shapes and label ranges") {
    CHECK_THROWS_AS(char_loss(Grid<double>(2, 36), {0, 0}), ContractError);
    CHECK_THROWS_AS(char_loss(Grid<double>(2, 37), {0}), ContractError);
    CHECK_THROWS_AS(char_loss(Grid<double>(2, 37), {0, 37}), ContractError);
    CHECK_THROWS_AS(char_loss(Grid<double>(2, 37), {-2, 0}), ContractError);
}

TEST_CASE("mask and total loss arithmetic") {
    LossConfig cfg;
    LossReport g{0.5, {}}, c{0.25, {}};
    CHECK(mask_loss(g, c, cfg) == doctest::Approx(0.75));
    cfg.beta = 0.0;
    CHECK(mask_loss(g, c, cfg) == doctest::Approx(0.5));
    CHECK(mask_loss(LossReport{}, LossReport{}, cfg) == 0.0);

    LossConfig defaults;
    CHECK(total_loss(1.0, 1.0, 1.0, defaults) == doctest::Approx(3.0));
    CHECK(total_loss(0.2, 0.3, 0.5, defaults) == doctest::Approx(1.0));
    LossConfig zeros{0.0, 0.0, 1.0};
    CHECK(total_loss(0.7, 9.0, 9.0, zeros) == doctest::Approx(0.7));
}

TEST_CASE("finite differences confirm the global loss gradient") {
    DetRng rng(8);
    for (int t = 0; t < 5; ++t) {
        const Grid<double> logits = random_logits(8, 8, rng);
        Grid<int> target(8, 8);
        for (int& y : target.values) y = static_cast<int>(rng.next_below(2));
        CHECK(finite_diff_check_global(logits, target) < 1e-4);
    }
}

TEST_CASE("finite differences confirm the char loss gradient") {
    DetRng rng(9);
    for (int t = 0; t < 3; ++t) {
        const Grid<double> logits = random_logits(64, 37, rng);
        std::vector<int> labels(64);
        for (int& l : labels) l = static_cast<int>(rng.next_below(38)) - 1;
        CHECK(finite_diff_check_char(logits, labels) < 1e-4);
    }
}

TEST_CASE("all -1 labels: analytic and numeric gradients both vanish") {
    DetRng rng(10);
    const Grid<double> logits = random_logits(4, 37, rng);
    const std::vector<int> labels(4, -1);
    CHECK(finite_diff_check_char(logits, labels) == 0.0);
}

TEST_CASE("a perturbed analytic gradient is caught") {
    DetRng rng(11);
    const Grid<double> logits = random_logits(4, 4, rng);
    Grid<int> target(4, 4, 1);
    CHECK(finite_diff_check_global(logits, target, 1e-3, 0.01) > 1e-4);
}

TEST_CASE("global loss is nonnegative on random inputs") {
    DetRng rng(13);
    for (int t = 0; t < 50; ++t) {
        const Grid<double> logits = random_logits(6, 6, rng, -20.0, 20.0);
        Grid<int> target(6, 6);
        for (int& y : target.values) y = static_cast<int>(rng.next_below(2));
        CHECK(global_loss(logits, target).value >= 0.0);
    }
}

TEST_CASE("pairwise_sum equals sequential summation on benign input") {
    DetRng rng(12);
    std::vector<double> terms;
    long double reference = 0.0L;
    for (int i = 0; i < 1000; ++i) {
        terms.push_back(rng.uniform(-1.0, 1.0));
        reference += terms.back();
    }
    CHECK(pairwise_sum(terms) ==
          doctest::Approx(static_cast<double>(reference)).epsilon(1e-12));
}
