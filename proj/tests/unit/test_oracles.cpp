#include <doctest.h>

#include <cmath>
#include <random>

#include "dscim/analysis.hpp"
#include "dscim/oracles.hpp"

using namespace dscim;

TEST_CASE("exact_psum") {
    SignedColumn cancel;
    cancel.x = {1, -1};
    cancel.w = {127, 127};
    CHECK(exact_psum(cancel) == 0);

    SignedColumn extreme;
    extreme.x.assign(128, -128);
    extreme.w.assign(128, 127);
    CHECK(exact_psum(extreme) == -2080768);

    SignedColumn triple;
    triple.x = {-3, 19, 104};
    triple.w = {55, -2, -90};
    CHECK(exact_psum(triple) == -3 * 55 + 19 * -2 + 104 * -90);
}

TEST_CASE("enumerate_expected_count") {
    MacroConfig cfg;
    cfg.rows = 1;
    cfg.columns = 1;
    cfg.group_size = 1;
    SignedColumn one;
    one.x = {static_cast<std::int8_t>(200 - 128)};  // x' = 200
    one.w = {static_cast<std::int8_t>(100 - 128)};  // w' = 100
    CHECK(enumerate_expected_count(one, cfg) == 20000);

    one.x = {-128};  // a_s = 0
    CHECK(enumerate_expected_count(one, cfg) == 0);

    MacroConfig four;
    four.rows = 4;
    four.group_size = 4;
    SignedColumn maxed;
    maxed.x.assign(4, 127);  // x' = 255, a_s = 127 at k = 1
    maxed.w.assign(4, 127);
    CHECK(enumerate_expected_count(maxed, four) == 4 * 127 * 127);
}

TEST_CASE("naive_scim_count basics") {
    const std::vector<double> zeros(16, 0.0);
    CHECK(naive_scim_count(zeros, 500, 1).or_count == 0);

    // single input: no saturation possible, unbiased estimate of p*N
    const std::vector<double> single = {0.3};
    const long long cycles = 20000;
    const auto r = naive_scim_count(single, cycles, 77);
    CHECK(r.ideal == doctest::Approx(0.3 * cycles));
    const double se = std::sqrt(0.3 * 0.7 * cycles);
    CHECK(std::abs(static_cast<double>(r.or_count) - 0.3 * cycles) < 4.0 * se);
}

TEST_CASE("naive OR16 saturates like the closed form") {
    const std::vector<double> p(16, 0.1);
    const long long cycles = 40000;
    const auto r = naive_scim_count(p, cycles, 1234);
    const double q = 1.0 - std::pow(0.9, 16);  // about 0.8147
    const double se = std::sqrt(q * (1.0 - q) * cycles);
    CHECK(std::abs(static_cast<double>(r.or_count) - q * cycles) < 4.0 * se);
    CHECK(r.ideal == doctest::Approx(1.6 * cycles));
}

TEST_CASE("or_saturation_rel_error closed form") {
    const SaturationPoint p = or_saturation_rel_error(4, 0.5);
    CHECK(p.rel_error == 0.53125);  // 1 - (1 - 0.5^4)/2, exact in binary
    for (double prob : {0.0, 0.01, 0.37, 0.99, 1.0}) {
        CHECK(or_saturation_rel_error(1, prob).rel_error == 0.0);
    }
    CHECK(or_saturation_rel_error(64, 1e-6).rel_error < 1e-4);
    CHECK(or_saturation_rel_error(16, 0.0).rel_error == 0.0);

    // monotone in fan-in and in p
    double prev = 0.0;
    for (int n : {1, 2, 4, 8, 16, 32, 64}) {
        const double cur = or_saturation_rel_error(n, 0.25).rel_error;
        CHECK(cur >= prev);
        prev = cur;
    }
    prev = 0.0;
    for (double prob : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        const double cur = or_saturation_rel_error(8, prob).rel_error;
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("bipolar baseline: all nonnegative weights leave the negative path dark") {
    MacroConfig cfg;
    cfg.bitstream_len = 256;
    std::mt19937 rng(42);
    SignedColumn col;
    col.x.resize(cfg.rows);
    col.w.resize(cfg.rows);
    for (auto& v : col.x) v = static_cast<std::int8_t>(rng() & 0xff);
    for (auto& v : col.w) v = static_cast<std::int8_t>(rng() % 128);
    const auto r = bipolar_mac_simulate(col, cfg);
    CHECK(r.neg_count == 0);
    CHECK(r.estimate == rescale(r.pos_count, cfg.bitstream_len, 0, Compensation::none));
}

TEST_CASE("bipolar baseline: single row estimate is unbiased") {
    MacroConfig cfg;
    cfg.rows = 1;
    cfg.group_size = 1;
    cfg.bitstream_len = 4096;
    SignedColumn col;
    col.x = {72};   // unsigned 200
    col.w = {-90};  // magnitude 90 on the negative path
    double sum = 0.0;
    const int reps = 40;
    for (int i = 0; i < reps; ++i) {
        MacroConfig c = cfg;
        c.prng_a.seed = static_cast<std::uint8_t>(i + 1);  // reseeds the derived row generators
        sum += static_cast<double>(bipolar_mac_simulate(col, c).estimate);
    }
    const double mean = sum / reps;
    const double expected = -200.0 * 90.0;
    // loose 4-sigma band from binomial variance of a single rectangle
    const double p = 200.0 * 90.0 / 65536.0;
    const double se = 65536.0 * std::sqrt(p * (1 - p) / (4096.0 * reps));
    CHECK(std::abs(mean - expected) < 4.0 * se);
}

TEST_CASE("bipolar baseline saturates at least 5x worse than the remapped design on dense columns") {
    MacroConfig remapped;  // DS-CIM1 geometry
    remapped.group_size = 16;
    remapped.bitstream_len = 256;

    std::mt19937 rng(9);
    const int trials = 40;
    double sq_bipolar = 0.0;
    double sq_remapped = 0.0;
    for (int t = 0; t < trials; ++t) {
        SignedColumn col;
        col.x.resize(remapped.rows);
        col.w.resize(remapped.rows);
        for (auto& v : col.x) v = static_cast<std::int8_t>(80 + rng() % 48);   // dense high magnitudes
        for (auto& v : col.w) v = static_cast<std::int8_t>(-(80 + static_cast<int>(rng() % 48)));
        const long long exact = exact_psum(col);
        const double scale = full_scale(remapped);

        MacroConfig b = remapped;
        b.prng_a.seed = static_cast<std::uint8_t>(t + 1);
        const double e_b = static_cast<double>(bipolar_mac_simulate(col, b).estimate - exact) / scale;
        sq_bipolar += e_b * e_b;

        const double e_r = static_cast<double>(simulate_column(remapped, col).psum_est - exact) / scale;
        sq_remapped += e_r * e_r;
    }
    const double rmse_b = std::sqrt(sq_bipolar / trials);
    const double rmse_r = std::sqrt(sq_remapped / trials);
    CHECK(rmse_b > 5.0 * rmse_r);
}
