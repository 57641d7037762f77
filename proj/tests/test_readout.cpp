#include "oracles.hpp"

#include "esqn/errors.hpp"
#include "esqn/esqn.hpp"
#include "esqn/data.hpp"
#include "esqn/metrics.hpp"
#include "esqn/readout.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace esqn;

TEST_SUITE("readout") {

TEST_CASE("collect_states with one step and no washout") {
    EsqnWeights w;
    w.plus_in = DenseMatrix{{0.2}};
    w.minus_in = DenseMatrix{{0.1}};
    w.plus_res = DenseMatrix{{0.1}};
    w.minus_res = DenseMatrix{{0.0}};
    w.rates_in = {1.0};
    w.rates_res = {1.0};
    EsqnModel m(w, Vector{0.5});
    const DenseMatrix z = collect_states(m, DenseMatrix{{1.0}}, 0);
    REQUIRE(z.rows() == 3);
    REQUIRE(z.cols() == 1);
    CHECK(z(0, 0) == 1.0);
    CHECK(z(1, 0) == 1.0);
    CHECK(z(2, 0) == doctest::Approx(0.25 / 1.1).epsilon(1e-15));
}

TEST_CASE("zero-weight reservoir has a zero state block") {
    EsqnConfig c;
    c.n_in = 1;
    c.n_res = 4;
    c.weight_hi = 0.0;
    SeededRng rng(1);
    EsqnModel m = esqn_init(c, rng);
    const DenseMatrix z = collect_states(m, DenseMatrix{{0.1}, {0.2}, {0.3}}, 1);
    CHECK(z.cols() == 2);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t r = 2; r < 6; ++r) CHECK(z(r, k) == 0.0);
}

TEST_CASE("collect_states equals a manual drive on NARMA inputs") {
    SeededRng data_rng(5);
    const NarmaSeries narma = generate_narma10(50, data_rng);
    const DenseMatrix inputs(50, 1, narma.input);
    EsqnConfig c;
    c.n_in = 1;
    c.n_res = 10;
    SeededRng r1(6), r2(6);
    EsqnModel a = esqn_init(c, r1);
    EsqnModel b = esqn_init(c, r2);
    const DenseMatrix z = collect_states(a, inputs, 5);
    REQUIRE(z.cols() == 45);
    for (std::size_t t = 0; t < 50; ++t) {
        const Vector in{narma.input[t]};
        const Vector& s = b.update(in);
        if (t < 5) continue;
        CHECK(z(0, t - 5) == 1.0);
        CHECK(z(1, t - 5) == narma.input[t]);
        for (std::size_t u = 0; u < 10; ++u) CHECK(z(2 + u, t - 5) == s[u]);
    }
    CHECK(a.state() == b.state());
    CHECK_THROWS_AS(collect_states(a, inputs, 50), ArgumentError);
}

TEST_CASE("exactly linear targets are fitted with zero error") {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> d(-1, 1);
    DenseMatrix z(4, 30);
    for (std::size_t k = 0; k < 30; ++k) {
        z(0, k) = 1.0;
        for (std::size_t r = 1; r < 4; ++r) z(r, k) = d(gen);
    }
    const DenseMatrix true_w{{0.5, -1.0, 2.0, 0.25}};
    const DenseMatrix t = true_w * z;
    const ReadoutMap map = fit_readout(z, t, 0.0);
    CHECK(nmse(t.transposed(), predict_columns(map, z).transposed()) < 1e-20);
}

TEST_CASE("very large lambda shrinks the readout to zero") {
    const DenseMatrix z{{1, 1, 1, 1, 1}, {0, 1, 2, 3, 4}};
    const DenseMatrix t{{1, 2, 3, 4, 6}};
    const ReadoutMap map = fit_readout(z, t, 1e6, false);
    // Zero predictor: NMSE = sum b^2 / sum (b - mean)^2 = 66 / 14.8.
    CHECK(nmse(t.transposed(), predict_columns(map, z).transposed()) ==
          doctest::Approx(66.0 / 14.8).epsilon(1e-3));
}

TEST_CASE("multi-output fit equals stacked single-output fits") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> d(-1, 1);
    DenseMatrix z(5, 20), t(2, 20);
    for (auto* m : {&z, &t})
        for (std::size_t r = 0; r < m->rows(); ++r)
            for (std::size_t c = 0; c < 20; ++c) (*m)(r, c) = d(gen);
    const ReadoutMap both = fit_readout(z, t, 0.01);
    for (std::size_t m = 0; m < 2; ++m) {
        DenseMatrix one(1, 20);
        for (std::size_t c = 0; c < 20; ++c) one(0, c) = t(m, c);
        const ReadoutMap single = fit_readout(z, one, 0.01);
        for (std::size_t c = 0; c < 5; ++c) CHECK(both.w_out(m, c) == doctest::Approx(single.w_out(0, c)).epsilon(1e-12));
    }
}

TEST_CASE("predict applies the affine map") {
    const Vector in{1.0};
    const Vector state{0.5, -0.25};
    CHECK(predict(ReadoutMap{DenseMatrix(1, 4)}, in, state)[0] == 0.0);
    CHECK(predict(ReadoutMap{DenseMatrix{{0.7, 0, 0, 0}}}, in, state)[0] == 0.7);
    CHECK(predict(ReadoutMap{DenseMatrix{{0.1, 0.2, 0.3, 0.4}}}, in, state)[0] ==
          doctest::Approx(0.35).epsilon(1e-15));
    CHECK_THROWS_AS(predict(ReadoutMap{DenseMatrix(1, 3)}, in, state), DimensionError);
    CHECK(predict(ReadoutMap{DenseMatrix{{0.1, 0.3, 0.4}}, false}, in, state)[0] ==
          doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("predict is affine in the regressor") {
    const ReadoutMap map{DenseMatrix{{0.3, -1.0, 2.0, 0.5}, {1.0, 0.0, -0.5, 0.25}}};
    const Vector in1{0.2}, in2{-0.7};
    const Vector s1{0.4, 0.9}, s2{-0.3, 0.1};
    for (double alpha : {0.0, 0.25, 0.6, 1.0}) {
        const Vector mix_in{alpha * in1[0] + (1 - alpha) * in2[0]};
        const Vector mix_s{alpha * s1[0] + (1 - alpha) * s2[0], alpha * s1[1] + (1 - alpha) * s2[1]};
        const Vector y = predict(map, mix_in, mix_s);
        const Vector y1 = predict(map, in1, s1);
        const Vector y2 = predict(map, in2, s2);
        for (std::size_t m = 0; m < 2; ++m)
            CHECK(y[m] == doctest::Approx(alpha * y1[m] + (1 - alpha) * y2[m]).epsilon(1e-14));
    }
}

TEST_CASE("lambda 0 fit reproduces targets when samples do not exceed regressors") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> d(-1, 1);
    DenseMatrix z(12, 9), t(1, 9);
    for (std::size_t c = 0; c < 9; ++c) {
        for (std::size_t r = 0; r < 12; ++r) z(r, c) = d(gen);
        t(0, c) = d(gen);
    }
    const DenseMatrix fitted = predict_columns(fit_readout(z, t, 0.0), z);
    for (std::size_t c = 0; c < 9; ++c) CHECK(std::abs(fitted(0, c) - t(0, c)) < 1e-6);
}

TEST_CASE("fit matches an independent normal-equations solve") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> d(-1, 1);
    for (int i = 0; i < 10; ++i) {
        DenseMatrix z(6, 25), t(1, 25);
        for (std::size_t c = 0; c < 25; ++c) {
            for (std::size_t r = 0; r < 6; ++r) z(r, c) = d(gen);
            t(0, c) = d(gen);
        }
        const DenseMatrix ours = fit_readout(z, t, 0.05).w_out;
        const DenseMatrix ref = oracle::normal_equations_ridge(z, t, 0.05);
        for (std::size_t c = 0; c < 6; ++c) CHECK(ours(0, c) == doctest::Approx(ref(0, c)).epsilon(1e-10));
    }
}

TEST_CASE("lambda selection prefers regularization on a noisy, overparameterized tail") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> d(-1, 1);
    DenseMatrix z(30, 40), t(1, 40);
    for (std::size_t c = 0; c < 40; ++c) {
        for (std::size_t r = 0; r < 30; ++r) z(r, c) = d(gen);
        t(0, c) = z(1, c) + 0.5 * d(gen);
    }
    const std::vector<double> grid{1e-8, 1e-1, 10.0};
    const LambdaChoice choice = select_lambda(z, t, grid);
    CHECK(choice.lambda > 1e-8);
    const std::vector<double> single{0.5};
    CHECK(select_lambda(z, t, single).lambda == 0.5);
    CHECK(default_lambda_grid().size() == 8);
    CHECK(default_lambda_grid().front() == doctest::Approx(1e-8));
    CHECK(default_lambda_grid().back() == doctest::Approx(1e-1));
}

TEST_CASE("readout text round-trip") {
    const ReadoutMap map{DenseMatrix{{0.1, 1.0 / 3.0, -2.5e-17}}, false};
    std::stringstream ss;
    write_readout(ss, map);
    const ReadoutMap back = read_readout(ss);
    CHECK(back.w_out == map.w_out);
    CHECK_FALSE(back.with_input);
}

}
