#include "oracles.hpp"

#include "esqn/errors.hpp"
#include "esqn/randnn.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace esqn;
using namespace esqn::randnn;

namespace {

RandnnSpec single(double lp, double lm, double r) {
    return RandnnSpec{{lp}, {lm}, {r}, DenseMatrix(1, 1), DenseMatrix(1, 1)};
}

RandnnSpec chain() {
    RandnnSpec s{{1.0, 0.0}, {0.0, 0.0}, {2.0, 2.0}, DenseMatrix(2, 2), DenseMatrix(2, 2)};
    s.w_plus(1, 0) = 1.0; // neuron 1 -> neuron 2
    return s;
}

} // namespace

TEST_SUITE("randnn") {

TEST_CASE("single neuron loads") {
    CHECK(solve_steady_state(single(0.5, 0.0, 1.0)).rho[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(solve_steady_state(single(0.4, 0.2, 0.6)).rho[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("feedforward chain solves by forward substitution") {
    const auto st = solve_steady_state(chain());
    CHECK(st.stable);
    CHECK(st.rho[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(st.rho[1] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("mutually coupled pair agrees with a spike-level simulation") {
    RandnnSpec s{{0.3, 0.3}, {0.0, 0.0}, {1.0, 1.0}, DenseMatrix(2, 2), DenseMatrix(2, 2)};
    s.w_plus(0, 1) = 0.5;
    s.w_plus(1, 0) = 0.5;
    const auto st = solve_steady_state(s);
    REQUIRE(st.stable);
    // Symmetric fixed point: rho = 0.3 + 0.5 rho.
    CHECK(st.rho[0] == doctest::Approx(0.6).epsilon(1e-12));
    const auto sim = oracle::simulate_randnn(s, 77, 2'000'000);
    for (std::size_t u = 0; u < 2; ++u) {
        INFO("neuron ", u, " sim ", sim.mean[u], " +/- ", sim.std_error[u]);
        CHECK(std::abs(sim.mean[u] - st.rho[u]) <= 2.0 * sim.std_error[u]);
    }
}

TEST_CASE("residual evaluation") {
    const auto st = solve_steady_state(chain());
    CHECK(residual(chain(), st.rho) < 1e-12);
    CHECK(residual(single(0.5, 0.0, 1.0), Vector{0.0}) == doctest::Approx(0.5));
    // rho + 0.01 = (0.51, 0.26): |0.51 - 1/2| = 0.01, |0.26 - 0.51/2| = 0.005.
    CHECK(residual(chain(), Vector{0.51, 0.26}) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_THROWS_AS(residual(chain(), Vector{0.1}), DimensionError);
}

TEST_CASE("random stable specs: residual below tolerance and monotone in excitation") {
    std::mt19937_64 gen(101);
    int checked = 0;
    while (checked < 20) {
        RandnnSpec s = oracle::random_spec(gen, 5);
        const auto st = solve_steady_state(s);
        if (!st.stable) continue;
        ++checked;
        CHECK(residual(s, st.rho) < 1e-12);
        for (std::size_t u = 0; u < 5; ++u) {
            RandnnSpec bumped = s;
            bumped.lambda_plus[u] += 0.05;
            const auto st2 = solve_steady_state(bumped);
            if (st2.stable) CHECK(st2.rho[u] >= st.rho[u] - 1e-12);
        }
    }
}

TEST_CASE("feedforward specs agree with one forward pass") {
    std::mt19937_64 gen(202);
    for (int i = 0; i < 20; ++i) {
        const RandnnSpec s = oracle::random_spec(gen, 5, true);
        const auto st = solve_steady_state(s);
        const Vector exact = oracle::forward_substitution(s);
        for (std::size_t u = 0; u < 5; ++u) CHECK(std::abs(st.rho[u] - exact[u]) < 1e-12);
    }
}

TEST_CASE("overloaded neuron is reported unstable, not an error") {
    const auto st = solve_steady_state(single(3.0, 0.0, 1.0));
    CHECK_FALSE(st.stable);
    CHECK(st.rho[0] >= 1.0);

    // Self-excitation pushes the load past 1 over time.
    RandnnSpec s = single(0.9, 0.0, 1.0);
    s.w_plus(0, 0) = 0.5;
    CHECK_FALSE(solve_steady_state(s).stable);
}

TEST_CASE("iteration budget exhaustion raises a convergence error with the last iterate") {
    RandnnSpec s{{0.3, 0.3}, {0.0, 0.0}, {1.0, 1.0}, DenseMatrix(2, 2), DenseMatrix(2, 2)};
    s.w_plus(0, 1) = 0.9;
    s.w_plus(1, 0) = 0.9;
    SolverOptions opt;
    opt.max_iter = 5;
    try {
        (void)solve_steady_state(s, opt);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.last_iterate().size() == 2);
    }
}

TEST_CASE("spec validation") {
    RandnnSpec s = chain();
    s.w_plus(1, 0) = 3.0; // more than r_1 = 2
    CHECK_THROWS_AS(validate(s), ArgumentError);
    CHECK_NOTHROW(validate(s, false));

    RandnnSpec neg = chain();
    neg.w_minus(0, 1) = -0.1;
    CHECK_THROWS_AS(validate(neg), DomainError);

    RandnnSpec dead = chain();
    dead.lambda_plus = {0.0, 0.0};
    CHECK_THROWS_AS(validate(dead), ArgumentError);

    RandnnSpec zero_rate = chain();
    zero_rate.rates[1] = 0.0;
    CHECK_THROWS_AS(validate(zero_rate), DomainError);
}

TEST_CASE("spec text format round-trips") {
    std::mt19937_64 gen(9);
    const RandnnSpec s = oracle::random_spec(gen, 4);
    std::stringstream ss;
    write_spec(ss, s);
    const RandnnSpec back = read_spec(ss);
    CHECK(back.w_plus == s.w_plus);
    CHECK(back.w_minus == s.w_minus);
    CHECK(back.rates == s.rates);
    CHECK(back.lambda_plus == s.lambda_plus);
    CHECK(back.lambda_minus == s.lambda_minus);

    std::istringstream truncated("2\n1 0\n0 0\n");
    CHECK_THROWS_AS(read_spec(truncated), ArgumentError);
}

}
