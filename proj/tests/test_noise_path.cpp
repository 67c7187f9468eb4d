#include "burgers3d/noise.hpp"
#include "burgers3d/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace burgers3d;

TEST_CASE("philox4x64-10 known-answer blocks (numpy.random.Philox)") {
    // Frozen from numpy 2.2.6: Philox(key=K).random_raw(8). numpy advances
    // the counter before producing a block, so its i-th block is counter i+1.
    const auto b0 = Philox4x64::block({0, 0}, {1, 0, 0, 0});
    CHECK(b0[0] == 0x02f4ba6408e4d89bULL);
    CHECK(b0[1] == 0x3dd62b0b9ca8c5b2ULL);
    CHECK(b0[2] == 0x1c8667a55d902e79ULL);
    CHECK(b0[3] == 0x907d7a052fd5b4dcULL);
    const auto b1 = Philox4x64::block({0, 0}, {2, 0, 0, 0});
    CHECK(b1[0] == 0x809bf322883987c3ULL);
    CHECK(b1[1] == 0x471128b9e807f7ddULL);
    CHECK(b1[2] == 0xf250ba0dbec065b7ULL);
    CHECK(b1[3] == 0xfc6ed66767a457bcULL);
    const auto b2 = Philox4x64::block({0x123456789abcdef0ULL, 0}, {1, 0, 0, 0});
    CHECK(b2[0] == 0x6cbbf974e52b24dcULL);
    CHECK(b2[1] == 0xf7b1843d1e4fd656ULL);
    CHECK(b2[2] == 0xd8ff397f5c0b9a62ULL);
    CHECK(b2[3] == 0x8cb8647259442556ULL);
    const auto b3 = Philox4x64::block({0xdeadbeefULL, 0}, {1, 0, 0, 0});
    CHECK(b3[0] == 0xa4e930dc738acaf1ULL);
}

TEST_CASE("normal inverse CDF against frozen scipy values") {
    const std::vector<std::pair<double, double>> table = {
        {1e-12, -7.034483825301131},   {1e-06, -4.753424308822899},
        {0.025, -1.9599639845400545},  {0.31, -0.4958503473474533},
        {0.5, 0.0},                    {0.7734, 0.7500908333062771},
        {0.975, 1.959963984540054},    {0.999999, 4.753424308817087},
        {0.999999999999, 7.0344869100478356}};
    for (const auto& [p, expected] : table)
        CHECK(normal_inverse_cdf(p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(normal_inverse_cdf(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_inverse_cdf(1.0), std::domain_error);
}

TEST_CASE("sample_path basics") {
    SUBCASE("b=0 is the deterministic path") {
        const NoisePath p = sample_path({0.0, 7}, 0.1, 1.0);
        for (double w : p.w) CHECK(w == 0.0);
        for (double a : p.alpha) CHECK(a == 1.0);
    }
    SUBCASE("identical seeds give bit-identical paths") {
        const NoisePath a = sample_path({0.7, 42}, 1e-2, 0.5);
        const NoisePath b = sample_path({0.7, 42}, 1e-2, 0.5);
        REQUIRE(a.w.size() == b.w.size());
        for (std::size_t i = 0; i < a.w.size(); ++i) CHECK(a.w[i] == b.w[i]);
    }
    SUBCASE("invariants: start at zero, alpha consistent and positive") {
        const NoisePath p = sample_path({1.3, 9}, 0.05, 1.0);
        CHECK(p.w[0] == 0.0);
        CHECK(p.alpha[0] == 1.0);
        for (std::size_t i = 0; i < p.w.size(); ++i) {
            CHECK(p.alpha[i] == std::exp(-p.w[i]));
            CHECK(p.alpha[i] > 0.0);
            CHECK(p.alpha[i] * std::exp(p.w[i]) == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(sample_path({1.0, 0}, -0.1, 1.0), std::domain_error);
        CHECK_THROWS_AS(sample_path({1.0, 0}, 0.1, -1.0), std::domain_error);
        CHECK_THROWS_AS(sample_path({1.0, 0}, 0.3, 1.0), std::domain_error); // dt does not divide T
    }
    SUBCASE("terminal variance matches N(0, bT) at 3 stderr over 1e5 paths") {
        const double b = 0.8, T = 1.0;
        const int n = 100000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const NoisePath p = sample_path({b, static_cast<std::uint64_t>(i)}, 0.25, T);
            sum += p.w.back();
            sum_sq += p.w.back() * p.w.back();
        }
        const double mean = sum / n;
        const double var = (sum_sq - n * mean * mean) / (n - 1);
        // sample variance of a Gaussian: stderr ~ sigma^2 sqrt(2/(n-1))
        const double stderr_var = b * T * std::sqrt(2.0 / (n - 1));
        CHECK(std::fabs(var - b * T) <= 3.0 * stderr_var);
        CHECK(std::fabs(mean) <= 3.0 * std::sqrt(b * T / n));
    }
    SUBCASE("martingale normalization: E exp(W - bt/2) = 1 at 3 stderr") {
        const double b = 1.0, T = 1.0;
        const int n = 100000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = std::sqrt(b * T) * normal_draw(2024, 0, i);
            const double x = std::exp(w - b * T / 2.0);
            sum += x;
            sum_sq += x * x;
        }
        const double mean = sum / n;
        const double sd = std::sqrt((sum_sq - n * mean * mean) / (n - 1));
        CHECK(std::fabs(mean - 1.0) <= 3.0 * sd / std::sqrt(n));
    }
}

TEST_CASE("refine_path") {
    SUBCASE("coarse points preserved exactly") {
        const NoisePath coarse = sample_path({0.9, 11}, 0.125, 1.0);
        const NoisePath fine = refine_path(coarse, 4);
        REQUIRE(fine.steps() == coarse.steps() * 4);
        for (std::size_t i = 0; i <= coarse.steps(); ++i) {
            CHECK(fine.w[4 * i] == coarse.w[i]);
            CHECK(fine.times[4 * i] == doctest::Approx(coarse.times[i]).epsilon(1e-15));
        }
    }
    SUBCASE("b=0 fills zeros") {
        const NoisePath coarse = sample_path({0.0, 11}, 0.25, 1.0);
        const NoisePath fine = refine_path(coarse, 8);
        for (double w : fine.w) CHECK(w == 0.0);
    }
    SUBCASE("factor below 1 is a domain error") {
        const NoisePath coarse = sample_path({1.0, 3}, 0.5, 1.0);
        CHECK_THROWS_AS(refine_path(coarse, 0), std::domain_error);
    }
    SUBCASE("bridge midpoint variance at 3 stderr over 1e4 bridges") {
        // One interval of length 1: midpoint | endpoints ~ N(W_T/2, b/4).
        const double b = 1.0;
        const int n = 10000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const NoisePath coarse = sample_path({b, static_cast<std::uint64_t>(500 + i)}, 1.0, 1.0);
            const NoisePath fine = refine_path(coarse, 2);
            const double centered = fine.w[1] - 0.5 * (coarse.w[0] + coarse.w[1]);
            sum += centered;
            sum_sq += centered * centered;
        }
        const double mean = sum / n;
        const double var = (sum_sq - n * mean * mean) / (n - 1);
        const double expected = b / 4.0;
        const double stderr_var = expected * std::sqrt(2.0 / (n - 1));
        CHECK(std::fabs(var - expected) <= 3.0 * stderr_var);
    }
    SUBCASE("refined increments still have variance b*dt_fine") {
        const double b = 0.6;
        const int n = 4000;
        double sum_sq = 0.0;
        int count = 0;
        for (int i = 0; i < n; ++i) {
            const NoisePath coarse = sample_path({b, static_cast<std::uint64_t>(9000 + i)}, 0.5, 1.0);
            const NoisePath fine = refine_path(coarse, 2);
            for (std::size_t j = 1; j < fine.w.size(); ++j) {
                const double inc = fine.w[j] - fine.w[j - 1];
                sum_sq += inc * inc;
                ++count;
            }
        }
        const double var = sum_sq / count;
        const double expected = b * 0.25;
        CHECK(std::fabs(var - expected) <= 3.0 * expected * std::sqrt(2.0 / count));
    }
}

TEST_CASE("closed-form alpha moment bounds") {
    SUBCASE("doob bound values") {
        CHECK(doob_sup_moment_bound(0.0, 1.0, 1.0) == 2.0);
        CHECK(doob_sup_moment_bound(1.0, 1.0, 1.0) ==
              doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
    }
    SUBCASE("sharp bound values") {
        CHECK(doob_sup_moment_bound_sharp(2.0, 1.0, 1.0) ==
              doctest::Approx(std::sqrt(2.0) * 4.0 * std::exp(2.0)).epsilon(1e-15));
        CHECK(doob_sup_moment_bound_sharp(2.0, 0.0, 1.0) ==
              doctest::Approx(std::sqrt(2.0) * 4.0).epsilon(1e-15));
        CHECK_THROWS_AS(doob_sup_moment_bound_sharp(1.0, 1.0, 1.0), std::domain_error);
    }
    SUBCASE("exact exponential moment") {
        CHECK(exp_moment_exact(1.0, 1.0, 1.0) == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
        CHECK(exp_moment_exact(3.7, 2.0, 0.0) == 1.0);
    }
    SUBCASE("MC sup alpha^{-1} stays below the crude bound (1e4 paths)") {
        const double b = 1.0, T = 1.0;
        const int n = 10000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const NoisePath p = sample_path({b, static_cast<std::uint64_t>(31000 + i)}, 1e-2, T);
            const double sup = std::exp(p.max_w()); // sup alpha^{-1}
            sum += sup;
            sum_sq += sup * sup;
        }
        const double mean = sum / n;
        const double sd = std::sqrt((sum_sq - n * mean * mean) / (n - 1));
        CHECK(mean <= doob_sup_moment_bound(1.0, b, T) + 3.0 * sd / std::sqrt(n));
        // and the same for sup alpha^{+1} via symmetry of the bound
        double sum_pos = 0.0;
        for (int i = 0; i < n; ++i) {
            const NoisePath p = sample_path({b, static_cast<std::uint64_t>(62000 + i)}, 1e-2, T);
            sum_pos += std::exp(-p.min_w());
        }
        CHECK(sum_pos / n <= doob_sup_moment_bound(1.0, b, T) + 3.0 * sd / std::sqrt(n));
    }
    SUBCASE("MC E exp(W(1)) within 3 stderr of exp(1/2), 1e5 samples") {
        const int n = 100000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = std::exp(normal_draw(777, 3, i));
            sum += x;
            sum_sq += x * x;
        }
        const double mean = sum / n;
        const double sd = std::sqrt((sum_sq - n * mean * mean) / (n - 1));
        CHECK(std::fabs(mean - exp_moment_exact(1.0, 1.0, 1.0)) <= 3.0 * sd / std::sqrt(n));
    }
}

TEST_CASE("path serialization") {
    const NoisePath p = sample_path({0.5, 19}, 0.25, 1.0);
    SUBCASE("CSV header and rows") {
        std::stringstream out;
        write_path_csv(p, out);
        std::string header;
        std::getline(out, header);
        CHECK(header == "t,W,alpha");
        std::string row;
        int rows = 0;
        while (std::getline(out, row)) ++rows;
        CHECK(rows == 5);
    }
    SUBCASE("binary round trip") {
        const std::string file = "test_path_roundtrip.b3dw";
        write_path_binary_file(p, file);
        const NoisePath q = read_path_binary_file(file);
        REQUIRE(q.w.size() == p.w.size());
        for (std::size_t i = 0; i < p.w.size(); ++i) {
            CHECK(q.w[i] == p.w[i]);
            CHECK(q.alpha[i] == p.alpha[i]);
        }
        std::remove(file.c_str());
    }
}
