#include "esqn/data.hpp"
#include "esqn/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace esqn;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "esqn_data_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_SUITE("data") {

TEST_CASE("NARMA recurrence from rest with zero drive") {
    const Vector b = narma10_response(Vector(5, 0.0));
    CHECK(b[0] == doctest::Approx(0.1).epsilon(1e-15));
    // 0.3 * 0.1 + 0.05 * 0.1 * 0.1 + 0.1
    CHECK(b[1] == doctest::Approx(0.1305).epsilon(1e-15));
}

TEST_CASE("NARMA recurrence uses s(t) and s(t-9)") {
    Vector drive(12, 0.0);
    drive[0] = 0.4;
    drive[9] = 0.5;
    const Vector with = narma10_response(drive);
    Vector only_late = drive;
    only_late[0] = 0.0;
    const Vector without = narma10_response(only_late);
    // Index 9 is b(10), which carries 1.5 * s(0) * s(9) = 0.3.
    for (std::size_t t = 0; t < 9; ++t) CHECK(with[t] == without[t]);
    CHECK(with[9] - without[9] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("NARMA generation is reproducible and sized") {
    SeededRng a(7), b(7);
    const NarmaSeries x = generate_narma10(2000, a);
    const NarmaSeries y = generate_narma10(2000, b);
    CHECK(x.input == y.input);
    CHECK(x.output == y.output);
    CHECK(x.input.size() == 2000);
    CHECK(x.output.size() == 2000);
    for (double s : x.input) {
        CHECK(s >= 0.0);
        CHECK(s < 0.5);
    }
    CHECK_THROWS_AS(generate_narma10(0, a), ArgumentError);
}

TEST_CASE("NARMA drive mean") {
    SeededRng rng(1234);
    const NarmaSeries x = generate_narma10(100'000, rng, 0);
    double mean = 0.0;
    for (double s : x.input) mean += s;
    CHECK(mean / 1e5 == doctest::Approx(0.25).epsilon(0.02)); // +/- 0.005
}

TEST_CASE("NARMA default protocol sizes split 1990 / 390") {
    SeededRng rng(1);
    const std::size_t offsets[] = {0};
    const SupervisedDataset d = make_narma_dataset(generate_narma10(2380, rng), offsets);
    const auto [train, val] = split(d, 1990, 390);
    CHECK(train.size() == 1990);
    CHECK(val.size() == 390);
}

TEST_CASE("NARMA lag window rows hold lagged drive values") {
    NarmaSeries s{{0.0, 0.1, 0.2, 0.3, 0.4}, {1.0, 1.1, 1.2, 1.3, 1.4}};
    const std::size_t offsets[] = {0, 2};
    const SupervisedDataset d = make_narma_dataset(s, offsets);
    REQUIRE(d.size() == 3);
    CHECK(d.inputs(0, 0) == 0.2);
    CHECK(d.inputs(0, 1) == 0.0);
    CHECK(d.targets(0, 0) == 1.2);
}

TEST_CASE("CSV single column and header") {
    const auto plain = temp_file("plain.csv", "1\n2\n3\n4\n5\n");
    CHECK(load_csv(plain.string()).values == Vector{1, 2, 3, 4, 5});

    const auto header = temp_file("header.csv", "t,value\n0,1.5\n1,2.5\n2,-3e-1\n");
    CHECK(load_csv(header.string(), std::string("value")).values == Vector{1.5, 2.5, -0.3});
    CHECK(load_csv(header.string(), std::size_t{1}).values == Vector{1.5, 2.5, -0.3});
}

TEST_CASE("CSV errors name their position") {
    const auto bad = temp_file("bad.csv", "1\n2\nabc\n4\n");
    try {
        (void)load_csv(bad.string());
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.kind() == LoadError::Kind::bad_cell);
        CHECK(e.row() == 3);
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
    try {
        (void)load_csv("/nonexistent/file.csv");
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.kind() == LoadError::Kind::missing_file);
    }
    const auto empty = temp_file("empty.csv", "value\n");
    try {
        (void)load_csv(empty.string(), std::string("value"));
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.kind() == LoadError::Kind::empty_column);
    }
    const auto narrow = temp_file("narrow.csv", "1,2\n3\n");
    try {
        (void)load_csv(narrow.string(), std::size_t{1});
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.kind() == LoadError::Kind::missing_column);
        CHECK(e.row() == 2);
    }
}

TEST_CASE("rescaler maps the fit segment onto [0, 1]") {
    const Vector seg{2.0, 4.0};
    const Rescaler r = fit_rescaler(seg);
    CHECK(esqn::apply(r, Vector{3.0}).values[0] == 0.5);
    const Vector xs{2.0, 2.7, 3.3, 4.0};
    const Vector back = invert(r, esqn::apply(r, xs).values);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(back[i] - xs[i]) <= 1e-12);
    CHECK_THROWS_AS(fit_rescaler(Vector{1.0, 1.0}), DegenerateError);
}

TEST_CASE("rescaler clips values outside the fit segment and counts them") {
    const Rescaler r = fit_rescaler(Vector{0.0, 10.0});
    const Rescaled out = esqn::apply(r, Vector{5.0, 12.0, -1.0, 10.0, 20.0});
    CHECK(out.clipped == 3);
    CHECK(out.values == Vector{0.5, 1.0, 0.0, 1.0, 1.0});
}

TEST_CASE("lagged windows") {
    const Vector s{1, 2, 3, 4, 5};
    const std::size_t zero[] = {0};
    const SupervisedDataset d = make_lagged_dataset(s, zero);
    CHECK(d.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(d.inputs(k, 0) == s[k]);
        CHECK(d.targets(k, 0) == s[k + 1]);
    }

    const Vector ten{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::size_t seasonal[] = {0, 6, 7};
    CHECK(make_lagged_dataset(ten, seasonal).size() == 2); // 10 - 7 - 1

    const std::size_t too_far[] = {9};
    CHECK_THROWS_AS(make_lagged_dataset(ten, too_far), ArgumentError);
}

TEST_CASE("lagged rows index the series exactly") {
    Vector arange(200);
    for (std::size_t i = 0; i < arange.size(); ++i) arange[i] = static_cast<double>(i);
    const std::size_t offsets[] = {0, 1, 2, 3, 4, 5, 6};
    for (std::size_t horizon : {1u, 3u}) {
        const SupervisedDataset d = make_lagged_dataset(arange, offsets, horizon);
        CHECK(d.size() == 200 - 6 - horizon);
        for (std::size_t k = 0; k < d.size(); ++k) {
            const double t = static_cast<double>(k + 6);
            for (std::size_t j = 0; j < 7; ++j) CHECK(d.inputs(k, j) == t - static_cast<double>(offsets[j]));
            CHECK(d.targets(k, 0) == t + static_cast<double>(horizon));
            CHECK(d.target_time[k] == k + 6 + horizon);
        }
    }
}

TEST_CASE("ISP and UKERNA protocol sizes") {
    const TimeSeries isp = generate_traffic_standin(9848 + 4924 + 7, 288, 1);
    const std::size_t isp_lags[] = {0, 1, 2, 3, 4, 5, 6};
    const auto [itrain, ival] = split(make_lagged_dataset(isp.values, isp_lags), 9848);
    CHECK(itrain.size() == 9848);
    CHECK(ival.size() == 4924);

    const TimeSeries uk = generate_traffic_standin(47 + 15 + 8, 7, 2);
    const std::size_t uk_lags[] = {0, 6, 7};
    const auto [utrain, uval] = split(make_lagged_dataset(uk.values, uk_lags), 47, 15);
    CHECK(utrain.size() == 47);
    CHECK(uval.size() == 15);
}

TEST_CASE("splits are contiguous, ordered and leak-free") {
    Vector s(13);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i);
    const std::size_t zero[] = {0, 2};
    const SupervisedDataset d = make_lagged_dataset(s, zero); // 10 rows
    REQUIRE(d.size() == 10);
    const auto [train, val] = split(d, 7);
    CHECK(val.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(val.targets(k, 0) == d.targets(7 + k, 0));
    for (auto vt : val.target_time)
        for (auto tt : train.target_time) CHECK(vt > tt);
    CHECK(train.split == Split::train);
    CHECK(val.split == Split::validation);
    CHECK_THROWS_AS(split(d, 8, 3), ArgumentError);

    const auto [a, b] = split_series(s, 10);
    CHECK(a.size() == 10);
    CHECK(b == Vector{10, 11, 12});
}

TEST_CASE("dataset CSV snapshot names the lags and re-ingests") {
    const Vector s{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const std::size_t offsets[] = {0, 6, 7};
    const SupervisedDataset d = make_lagged_dataset(s, offsets);
    std::stringstream ss;
    write_dataset_csv(ss, d);
    const std::string text = ss.str();
    CHECK(text.rfind("lag0,lag6,lag7,target\n", 0) == 0);
    std::istringstream in(text);
    CHECK(read_csv(in, std::string("target")).values == Vector{9, 10});
}

TEST_CASE("traffic stand-in is seeded and positive") {
    const TimeSeries a = generate_traffic_standin(500, 24, 3);
    const TimeSeries b = generate_traffic_standin(500, 24, 3);
    CHECK(a.values == b.values);
    for (double v : a.values) CHECK(v > 0.0);
    CHECK(generate_traffic_standin(500, 24, 4).values != a.values);
}

}
