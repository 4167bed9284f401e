#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tecc/cepstral.hpp"
#include "tecc/error.hpp"
#include "tecc/rng.hpp"

#include <cmath>
#include <limits>

using namespace tecc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    std::vector<double> d(rows * cols);
    for (auto& v : d) v = 10.0 * rng.normal() + 3.0;
    return FeatureMatrix(rows, cols, std::move(d));
}

}  // namespace

TEST_CASE("TEO of a constant is zero") {
    const auto p = teo(std::vector<double>(50, 0.37));
    for (double v : p.values) CHECK(v == 0.0);
}

TEST_CASE("TEO of a sinusoid is A^2 sin^2(Omega)") {
    for (double phi : {0.0, 0.4, 2.0}) {
        std::vector<double> x(200);
        for (std::size_t n = 0; n < x.size(); ++n) x[n] = 0.7 * std::cos(0.3 * n + phi);
        const auto p = teo(x);
        const double expect = 0.49 * std::sin(0.3) * std::sin(0.3);
        CHECK_THAT(expect, WithinAbs(0.04279, 1e-5));
        for (std::size_t n = 1; n + 1 < x.size(); ++n) CHECK_THAT(p.values[n], WithinAbs(expect, 1e-9));
    }
}

TEST_CASE("TEO of an interior impulse") {
    std::vector<double> x(11, 0.0);
    x[5] = 1.0;
    const auto p = teo(x);
    for (std::size_t n = 1; n + 1 < x.size(); ++n) CHECK(p.values[n] == (n == 5 ? 1.0 : 0.0));
}

TEST_CASE("TEO boundaries replicate neighbours and interior matches the oracle") {
    Rng rng(4);
    std::vector<double> x(257);
    for (auto& v : x) v = rng.normal();
    const auto p = teo(x);
    const auto ref = oracle::teager_interior(x);
    for (std::size_t n = 1; n + 1 < x.size(); ++n) CHECK(p.values[n] == ref[n - 1]);
    CHECK(p.values.front() == p.values[1]);
    CHECK(p.values.back() == p.values[x.size() - 2]);
    CHECK_THROWS_AS(teo(std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("TEO is shift-equivariant on interior samples") {
    Rng rng(5);
    std::vector<double> x(100);
    for (auto& v : x) v = rng.normal();
    std::vector<double> shifted(x.begin() + 7, x.end());
    const auto a = teo(x);
    const auto b = teo(shifted);
    for (std::size_t n = 1; n + 1 < shifted.size(); ++n) CHECK(b.values[n] == a.values[n + 7]);
}

TEST_CASE("TEO scales quadratically with amplitude") {
    Rng rng(12);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(64);
        for (auto& v : x) v = 2.0 * rng.uniform01() - 1.0;
        const auto base = teo(x).values;

        const double pow2 = std::ldexp(1.0, static_cast<int>(rng.uniform_index(21)) - 10);
        std::vector<double> y(x);
        for (auto& v : y) v *= pow2;
        const auto exact = teo(y).values;
        for (std::size_t n = 0; n < x.size(); ++n) REQUIRE(exact[n] == pow2 * pow2 * base[n]);

        // Other factors round alpha * x first; the error stays within a few ulps of the unreduced terms.
        const double alpha = 0.1 + 9.9 * rng.uniform01();
        for (std::size_t n = 0; n < x.size(); ++n) y[n] = alpha * x[n];
        const auto scaled = teo(y).values;
        for (std::size_t n = 1; n + 1 < x.size(); ++n) {
            const double magnitude = alpha * alpha * (x[n] * x[n] + std::abs(x[n - 1] * x[n + 1]));
            REQUIRE(std::abs(scaled[n] - alpha * alpha * base[n]) <= 8.0 * eps * magnitude);
        }
    }
}

TEST_CASE("frame grid arithmetic") {
    FrameGrid g;
    CHECK(g.window_samples(16000) == 400);
    CHECK(g.hop_samples(16000) == 160);
    CHECK(g.num_frames(16000, 16000) == 98);
    CHECK(g.num_frames(399, 16000) == 0);
    CHECK(g.window_samples(44100) == 1102);
    CHECK(g.hop_samples(44100) == 441);

    const TeagerEnergyProfile short_profile{std::vector<double>(399, 1.0), 0};
    CHECK_THROWS_WITH(frame_average(short_profile, g, 16000), Catch::Matchers::ContainsSubstring("too short"));
}

TEST_CASE("frame count matches a brute-force enumerator") {
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = rng.uniform_index(5000);
        const std::size_t w = 1 + rng.uniform_index(600);
        const std::size_t h = 1 + rng.uniform_index(300);
        std::size_t count = 0;
        for (std::size_t start = 0; start + w <= n; start += h) ++count;
        REQUIRE(frame_count(n, w, h) == count);
    }
}

TEST_CASE("frame average of a constant profile") {
    const auto avg = frame_average(std::vector<double>(1000, 5.0), 400, 160);
    REQUIRE(avg.size() == 4);
    for (double v : avg) CHECK(v == 5.0);
}

TEST_CASE("log compression with floor") {
    const auto out = log_compress(std::vector<double>{1.0, 0.0, std::exp(2.0), -3.0});
    CHECK(out[0] == 0.0);
    CHECK_THAT(out[1], WithinAbs(-23.0259, 1e-4));
    CHECK_THAT(out[2], WithinAbs(2.0, 1e-12));
    CHECK(out[3] == out[1]);
}

TEST_CASE("DCT of a constant vector is DC only") {
    const auto c = dct_ii(std::vector<double>(40, 3.0), 40);
    CHECK_THAT(c[0], WithinAbs(3.0 * std::sqrt(40.0), 1e-12));
    for (std::size_t k = 1; k < 40; ++k) CHECK_THAT(c[k], WithinAbs(0.0, 1e-12));
}

TEST_CASE("DCT matches direct summation, inverts, and preserves energy") {
    Rng rng(7);
    for (std::size_t N : {1u, 2u, 13u, 26u, 40u}) {
        std::vector<double> v(N);
        for (auto& x : v) x = rng.normal();
        const auto c = dct_ii(v, N);
        const auto ref = oracle::dct2(v);
        for (std::size_t k = 0; k < N; ++k) CHECK_THAT(c[k], WithinAbs(ref[k], 1e-12));
        const auto back = dct_ii_inverse(c);
        const auto ref_back = oracle::dct3(c);
        double e_in = 0.0, e_out = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
            CHECK_THAT(back[n], WithinAbs(v[n], 1e-12));
            CHECK_THAT(back[n], WithinAbs(ref_back[n], 1e-12));
            e_in += v[n] * v[n];
            e_out += c[n] * c[n];
        }
        CHECK_THAT(e_out, WithinRel(e_in, 1e-12));
    }
}

TEST_CASE("DCT truncation keeps the leading coefficients") {
    Rng rng(8);
    std::vector<double> v(26);
    for (auto& x : v) x = rng.normal();
    const auto full = dct_ii(v, 26);
    const auto part = dct_ii(v, 13);
    REQUIRE(part.size() == 13);
    for (std::size_t k = 0; k < 13; ++k) CHECK(part[k] == full[k]);
    CHECK_THROWS_AS(DctII(10, 11), Error);
    CHECK_THROWS_AS(dct_ii_inverse(std::vector<double>{}), Error);
}

TEST_CASE("CMN examples and properties") {
    const FeatureMatrix two(2, 1, {1.0, 3.0});
    const auto a = cmn(two);
    CHECK(a(0, 0) == -1.0);
    CHECK(a(1, 0) == 1.0);

    const FeatureMatrix one(1, 3, {4.0, -2.0, 9.0});
    const auto centred = cmn(one);
    for (double v : centred.data()) CHECK(v == 0.0);

    Rng rng(9);
    const auto m = random_matrix(57, 12, rng);
    const auto c = cmn(m);
    for (std::size_t j = 0; j < c.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.rows(); ++i) s += c(i, j);
        CHECK(std::abs(s / c.rows()) <= 1e-9);
    }
    const auto cc = cmn(c);
    for (std::size_t i = 0; i < c.data().size(); ++i) CHECK_THAT(cc.data()[i], WithinAbs(c.data()[i], 1e-12));
    CHECK_THROWS_AS(cmn(FeatureMatrix()), Error);
}

TEST_CASE("delta regression") {
    std::vector<double> ramp(20);
    for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = static_cast<double>(t);
    const FeatureMatrix r(20, 1, ramp);
    const auto d = deltas(r);
    for (std::size_t t = 2; t + 2 < 20; ++t) CHECK(d(t, 0) == 1.0);
    const auto dd = deltas(d);
    for (std::size_t t = 4; t + 4 < 20; ++t) CHECK(dd(t, 0) == 0.0);

    const auto flat = deltas(FeatureMatrix(10, 2, std::vector<double>(20, 4.5)));
    for (double v : flat.data()) CHECK(v == 0.0);

    Rng rng(10);
    const auto m = random_matrix(31, 4, rng);
    for (int K : {1, 2, 3}) {
        const auto got = deltas(m, K);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::vector<double> col(m.rows());
            for (std::size_t i = 0; i < m.rows(); ++i) col[i] = m(i, j);
            const auto ref = oracle::regression_delta(col, K);
            for (std::size_t i = 0; i < m.rows(); ++i) CHECK_THAT(got(i, j), WithinAbs(ref[i], 1e-12));
        }
    }

    std::vector<double> shifted(m.data().begin(), m.data().end());
    for (auto& v : shifted) v += 17.25;
    const auto ds = deltas(FeatureMatrix(m.rows(), m.cols(), shifted));
    const auto d0 = deltas(m);
    for (std::size_t i = 0; i < shifted.size(); ++i) CHECK_THAT(ds.data()[i], WithinAbs(d0.data()[i], 1e-12));
}

TEST_CASE("append_deltas stacks blocks and records the layout") {
    Rng rng(12);
    const auto m = random_matrix(9, 5, rng);
    const auto full = append_deltas(m);
    REQUIRE(full.cols() == 15);
    CHECK(full.meta().layout == FeatureLayout{5, 5, 5});
    const auto d = deltas(m);
    const auto dd = deltas(d);
    for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(full(i, j) == m(i, j));
            CHECK(full(i, 5 + j) == d(i, j));
            CHECK(full(i, 10 + j) == dd(i, j));
        }
    }
}

TEST_CASE("FeatureMatrix validation") {
    CHECK_THROWS_AS(FeatureMatrix(2, 2, {1.0, 2.0, 3.0}), Error);
    CHECK_THROWS_AS(FeatureMatrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}), Error);
    CHECK_THROWS_AS(FeatureMatrix(1, 2, {1.0, 2.0}, FeatureMeta{"x", "tecc", FeatureLayout{1, 0, 0}}), Error);
}
