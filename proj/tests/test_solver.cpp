#include "burgers3d/cole_hopf.hpp"
#include "burgers3d/solver.hpp"
#include "burgers3d/spectral_ops.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace burgers3d;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    const int n = a.resolution();
    REQUIRE(b.resolution() == n);
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int i1 = 0; i1 < a.side(); ++i1)
            for (int i2 = 0; i2 < a.side(); ++i2)
                for (int i3 = 0; i3 < a.side(); ++i3)
                    worst = std::max(worst, std::abs(a.at(c, i1, i2, i3) - b.at(c, i1, i2, i3)));
    return worst;
}

SpectralField l2_difference_field(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    add_scaled(d, b, -1.0);
    return d;
}

SolverConfig base_config(int n, double nu, double horizon, double dt, double b) {
    SolverConfig cfg;
    cfg.grid = GridSpec::standard(n);
    cfg.nu = nu;
    cfg.horizon = horizon;
    cfg.dt = dt;
    cfg.noise.b = b;
    return cfg;
}

} // namespace

TEST_CASE("step_random_pde: linear part is exact") {
    SolverConfig cfg = base_config(4, 0.7, 0.1, 1e-3, 0.0);
    cfg.convective_enabled = false;
    const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
    SpectralField v(cfg.grid.n);
    v.set_coeff(0, {1, 2, 0}, {0.3, -0.1});
    v.set_coeff(0, {-1, -2, 0}, {0.3, 0.1});
    SpectralField state = v;
    const int steps = 40;
    for (int m = 0; m < steps; ++m)
        state = step_random_pde(state, m * cfg.dt, cfg.dt, path, cfg);
    const double factor = std::exp(-cfg.nu * 5.0 * steps * cfg.dt);
    const auto z = state.coeff(0, {1, 2, 0});
    CHECK(z.real() == doctest::Approx(0.3 * factor).epsilon(1e-12));
    CHECK(z.imag() == doctest::Approx(-0.1 * factor).epsilon(1e-12));
}

TEST_CASE("step_random_pde matches a manual two-stage reconstruction") {
    // b=0 sine shear: stage values rebuilt from the public operations.
    SolverConfig cfg = base_config(6, 1.0, 0.01, 1e-2, 0.0);
    const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
    SpectralField v(cfg.grid.n);
    v.set_coeff(0, {1, 0, 0}, {0.0, -0.5});
    v.set_coeff(0, {-1, 0, 0}, {0.0, 0.5});

    const SpectralField stepped = step_random_pde(v, 0.0, cfg.dt, path, cfg);

    SpectralField k1 = galerkin_project(convective_term(v, cfg.grid), cfg.grid.n);
    scale_in_place(k1, -1.0); // alpha = 1
    SpectralField pred = v;
    add_scaled(pred, k1, cfg.dt);
    pred = heat_oracle(pred, cfg.dt, cfg.nu);
    SpectralField k2 = galerkin_project(convective_term(pred, cfg.grid), cfg.grid.n);
    scale_in_place(k2, -1.0);
    SpectralField manual = v;
    add_scaled(manual, k1, 0.5 * cfg.dt);
    manual = heat_oracle(manual, cfg.dt, cfg.nu);
    add_scaled(manual, k2, 0.5 * cfg.dt);

    CHECK(max_coeff_diff(stepped, manual) < 1e-14);
    // first substage is the heat-decayed Euler predictor built from
    // -(1/2) sin(2 x1): check its k=(2,0,0) content explicitly
    CHECK(pred.coeff(0, {2, 0, 0}).imag() ==
          doctest::Approx(cfg.dt * 0.25 * std::exp(-4.0 * cfg.dt)).epsilon(1e-12));
}

TEST_CASE("step self-convergence is second order on smooth data (b=0)") {
    SolverConfig coarse = base_config(6, 0.5, 0.08, 4e-3, 0.0);
    const SpectralField v0 =
        galerkin_project(testing::random_hermitian_field(6, 314, 3.0), coarse.grid.n);
    auto terminal = [&](double dt) {
        SolverConfig cfg = coarse;
        cfg.dt = dt;
        cfg.record_every = 1000000;
        const NoisePath path = sample_path(cfg.noise, dt, cfg.horizon);
        return integrate(v0, path, cfg).final_state;
    };
    const SpectralField a = terminal(4e-3);
    const SpectralField b = terminal(2e-3);
    const SpectralField c = terminal(1e-3);
    const double e_ab = l2_norm(l2_difference_field(a, b));
    const double e_bc = l2_norm(l2_difference_field(b, c));
    const double order = std::log2(e_ab / e_bc);
    CHECK(order >= 1.9);
}

TEST_CASE("integrate basics") {
    SUBCASE("zero initial data stays zero") {
        SolverConfig cfg = base_config(4, 1.0, 0.05, 1e-2, 0.4);
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const TrajectoryRecord rec = integrate(SpectralField(cfg.grid.n), path, cfg);
        CHECK(rec.status == RunStatus::completed);
        for (double x : rec.linf) CHECK(x == 0.0);
        for (double x : rec.l2) CHECK(x == 0.0);
    }
    SUBCASE("heat-only run matches heat_oracle to 1e-12 at every recorded time") {
        SolverConfig cfg = base_config(8, 1.0, 0.2, 5e-3, 0.0);
        cfg.convective_enabled = false;
        cfg.record_every = 10;
        const SpectralField v0 = testing::random_hermitian_field(8, 99, 2.5);
        const SpectralField v0p = galerkin_project(v0, cfg.grid.n);
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const TrajectoryRecord rec = integrate(v0, path, cfg);
        // terminal state against the oracle
        CHECK(max_coeff_diff(rec.final_state, heat_oracle(v0p, cfg.horizon, cfg.nu)) < 1e-12);
        // recorded norms against oracle states
        for (std::size_t i = 0; i < rec.size(); ++i) {
            const SpectralField z = heat_oracle(v0p, rec.times[i], cfg.nu);
            CHECK(rec.l2[i] == doctest::Approx(l2_norm(z)).epsilon(1e-12));
            CHECK(rec.semi_one[i] == doctest::Approx(seminorm(z, 1.0)).epsilon(1e-12));
        }
    }
    SUBCASE("record cadence: 11 rows for 100 steps at record_every=10") {
        SolverConfig cfg = base_config(4, 1.0, 0.1, 1e-3, 0.0);
        cfg.record_every = 10;
        SpectralField v0(cfg.grid.n);
        v0.set_coeff(0, {1, 0, 0}, {0.0, -0.25});
        v0.set_coeff(0, {-1, 0, 0}, {0.0, 0.25});
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const TrajectoryRecord rec = integrate(v0, path, cfg);
        CHECK(rec.size() == 11);
        CHECK(rec.times.back() == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("low blow-up threshold aborts with partial data") {
        // steep shear at nu=0.02 drives the H^1 seminorm from 22 past 50
        SolverConfig cfg = base_config(8, 0.02, 1.0, 1e-3, 0.0);
        SpectralField v0(cfg.grid.n);
        v0.set_coeff(0, {1, 0, 0}, {0.0, -1.0});
        v0.set_coeff(0, {-1, 0, 0}, {0.0, 1.0});
        cfg.blowup_threshold = 50.0;
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const TrajectoryRecord rec = integrate(v0, path, cfg);
        CHECK(rec.status == RunStatus::aborted_blowup);
        CHECK(rec.size() >= 1);
        CHECK(rec.times.back() < cfg.horizon);
        CHECK(rec.semi_one.back() > 50.0);
    }
    SUBCASE("threshold below the initial norm is a configuration error") {
        SolverConfig cfg = base_config(4, 1.0, 0.1, 1e-2, 0.0);
        SpectralField v0(cfg.grid.n);
        v0.set_coeff(0, {1, 0, 0}, {0.0, -0.5});
        v0.set_coeff(0, {-1, 0, 0}, {0.0, 0.5});
        cfg.blowup_threshold = 1e-3;
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        CHECK_THROWS_AS(integrate(v0, path, cfg), ConfigError);
    }
    SUBCASE("identical seed and config reproduce the record bit for bit") {
        SolverConfig cfg = base_config(6, 0.4, 0.1, 2e-3, 0.6);
        cfg.noise.seed = 7;
        cfg.record_every = 5;
        SpectralField v0(cfg.grid.n);
        v0.set_coeff(0, {1, 0, 0}, {0.0, -0.5});
        v0.set_coeff(0, {-1, 0, 0}, {0.0, 0.5});
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const TrajectoryRecord a = integrate(v0, path, cfg);
        const TrajectoryRecord b = integrate(v0, path, cfg);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.linf[i] == b.linf[i]);
            CHECK(a.semi_three_half[i] == b.semi_three_half[i]);
            CHECK(a.dissipation[i] == b.dissipation[i]);
        }
    }
    SUBCASE("coarse path is bridge-refined onto the solver grid") {
        SolverConfig cfg = base_config(4, 1.0, 0.1, 1e-3, 0.8);
        SpectralField v0(cfg.grid.n);
        v0.set_coeff(0, {1, 0, 0}, {0.0, -0.25});
        v0.set_coeff(0, {-1, 0, 0}, {0.0, 0.25});
        const NoisePath coarse = sample_path(cfg.noise, 1e-2, cfg.horizon);
        const NoisePath fine = refine_path(coarse, 10);
        const TrajectoryRecord via_integrate = integrate(v0, coarse, cfg);
        const TrajectoryRecord via_refined = integrate(v0, fine, cfg);
        REQUIRE(via_integrate.size() == via_refined.size());
        for (std::size_t i = 0; i < via_integrate.size(); ++i)
            CHECK(via_integrate.linf[i] == via_refined.linf[i]);
    }
}

TEST_CASE("mean-mode update follows the scheme's own quadrature") {
    SolverConfig cfg = base_config(5, 0.8, 0.01, 1e-2, 0.5);
    cfg.noise.seed = 3;
    const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
    SpectralField v = testing::random_hermitian_field(5, 17, 3.0);
    v = galerkin_project(v, cfg.grid.n);
    v.enforce_hermitian();

    const SpectralField v1 = step_random_pde(v, 0.0, cfg.dt, path, cfg);

    // Heat factor is 1 at k=0, so the zero mode moves by the trapezoid of
    // the two nonlinear stage contributions.
    const double a0_inv = 1.0 / path.alpha[0];
    const double a1_inv = 1.0 / path.alpha[1];
    SpectralField k1 = galerkin_project(convective_term(v, cfg.grid), cfg.grid.n);
    scale_in_place(k1, -a0_inv);
    SpectralField pred = v;
    add_scaled(pred, k1, cfg.dt);
    pred = heat_oracle(pred, cfg.dt, cfg.nu);
    SpectralField k2 = galerkin_project(convective_term(pred, cfg.grid), cfg.grid.n);
    scale_in_place(k2, -a1_inv);

    const auto m0 = spatial_mean(v);
    const auto m1 = spatial_mean(v1);
    const auto g1 = spatial_mean(k1);
    const auto g2 = spatial_mean(k2);
    for (int c = 0; c < 3; ++c)
        CHECK(m1[c] - m0[c] ==
              doctest::Approx(0.5 * cfg.dt * (g1[c] + g2[c])).epsilon(1e-11));
}

TEST_CASE("recover_u") {
    SolverConfig cfg = base_config(4, 1.0, 0.1, 2e-3, 0.7);
    cfg.noise.seed = 11;
    cfg.record_every = 10;
    SpectralField v0(cfg.grid.n);
    v0.set_coeff(0, {1, 0, 0}, {0.0, -0.5});
    v0.set_coeff(0, {-1, 0, 0}, {0.0, 0.5});
    const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
    const TrajectoryRecord traj_v = integrate(v0, path, cfg);
    const TrajectoryRecord traj_u = recover_u(traj_v, path);
    SUBCASE("norms rescale by alpha^{-1} per instant") {
        for (std::size_t i = 0; i < traj_v.size(); ++i) {
            CHECK(traj_u.semi_one[i] * traj_v.alpha[i] ==
                  doctest::Approx(traj_v.semi_one[i]).epsilon(1e-14));
            CHECK(traj_u.linf[i] * traj_v.alpha[i] ==
                  doctest::Approx(traj_v.linf[i]).epsilon(1e-14));
        }
    }
    SUBCASE("b=0 leaves the record unchanged") {
        SolverConfig det = cfg;
        det.noise = {0.0, 0};
        const NoisePath flat = sample_path(det.noise, det.dt, det.horizon);
        const TrajectoryRecord tv = integrate(v0, flat, det);
        const TrajectoryRecord tu = recover_u(tv, flat);
        for (std::size_t i = 0; i < tv.size(); ++i) CHECK(tu.l2[i] == tv.l2[i]);
    }
    SUBCASE("field-level recover then re-scale is the identity") {
        const double alpha = path.alpha.back();
        const SpectralField u = recover_u(traj_v.final_state, alpha);
        SpectralField back = u;
        scale_in_place(back, alpha);
        CHECK(max_coeff_diff(back, traj_v.final_state) < 1e-15);
    }
}

TEST_CASE("direct Stratonovich route") {
    SUBCASE("linear single mode follows exp(-nu|k|^2 t + W(t)) with O(dt) strong error") {
        SolverConfig cfg = base_config(3, 1.0, 0.25, 0.0, 1.0);
        cfg.convective_enabled = false;
        cfg.noise.seed = 5;
        auto terminal_error = [&](double dt) {
            SolverConfig c2 = cfg;
            c2.dt = dt;
            double err_sum = 0.0;
            for (std::uint64_t seed = 0; seed < 16; ++seed) {
                NoiseConfig nc{1.0, 1000 + seed};
                const NoisePath path = sample_path(nc, dt, cfg.horizon);
                SpectralField u0(cfg.grid.n);
                u0.set_coeff(0, {1, 0, 0}, {0.5, 0.0});
                u0.set_coeff(0, {-1, 0, 0}, {0.5, 0.0});
                c2.noise = nc;
                const TrajectoryRecord rec = integrate_direct_stratonovich(u0, path, c2);
                const double exact =
                    0.5 * std::exp(-cfg.nu * cfg.horizon + path.w.back());
                err_sum += std::abs(rec.final_state.coeff(0, {1, 0, 0}).real() - exact);
            }
            return err_sum / 16.0;
        };
        const double e1 = terminal_error(1e-2);
        const double e2 = terminal_error(5e-3);
        CHECK(e2 < e1);
        CHECK(e1 / e2 > 1.5); // strong order about one
    }
    SUBCASE("b=0: direct and transformed routes agree to 1e-6 at N=32") {
        SolverConfig cfg = base_config(32, 0.3, 0.1, 1e-3, 0.0);
        SpectralField u0(cfg.grid.n);
        u0.set_coeff(0, {1, 0, 0}, {0.0, -0.5});
        u0.set_coeff(0, {-1, 0, 0}, {0.0, 0.5});
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const TrajectoryRecord direct = integrate_direct_stratonovich(u0, path, cfg);
        const TrajectoryRecord transformed = integrate(u0, path, cfg);
        const SpectralField u_from_v = recover_u(transformed.final_state, path.alpha.back());
        CHECK(l2_norm(l2_difference_field(direct.final_state, u_from_v)) < 1e-6);
    }
}

TEST_CASE("cole_hopf_oracle_1d") {
    const int m = 64;
    std::vector<double> sine(m);
    for (int j = 0; j < m; ++j) sine[j] = std::sin(kTwoPi * j / m);
    SUBCASE("zero data stays zero") {
        const auto out = cole_hopf_oracle_1d(std::vector<double>(m, 0.0), 0.5, 1.0);
        for (double v : out) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("large viscosity approaches pure heat decay") {
        const double nu = 10.0, t = 0.1;
        const auto out = cole_hopf_oracle_1d(sine, nu, t);
        double worst = 0.0;
        for (int j = 0; j < m; ++j)
            worst = std::max(worst,
                             std::abs(out[j] - std::exp(-nu * t) * sine[j]));
        CHECK(worst / std::exp(-nu * t) < 1e-2);
    }
    SUBCASE("doubled input resolution agrees to 1e-8") {
        std::vector<double> sine2(2 * m);
        for (int j = 0; j < 2 * m; ++j) sine2[j] = std::sin(kTwoPi * j / (2 * m));
        const auto a = cole_hopf_oracle_1d(sine, 0.1, 1.0);
        const auto b = cole_hopf_oracle_1d(sine2, 0.1, 1.0);
        double worst = 0.0;
        for (int j = 0; j < m; ++j) worst = std::max(worst, std::abs(a[j] - b[2 * j]));
        CHECK(worst < 1e-8);
    }
    SUBCASE("nonzero mean is a domain error") {
        CHECK_THROWS_AS(cole_hopf_oracle_1d(std::vector<double>(m, 1.0), 0.5, 1.0),
                        std::domain_error);
    }
    SUBCASE("solver tracks the oracle on a short 1D run") {
        SolverConfig cfg = base_config(32, 0.15, 0.5, 1e-3, 0.0);
        SpectralField v0(cfg.grid.n);
        v0.set_coeff(0, {1, 0, 0}, {0.0, -0.5});
        v0.set_coeff(0, {-1, 0, 0}, {0.0, 0.5});
        const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
        const TrajectoryRecord rec = integrate(v0, path, cfg);
        const auto profile = extract_x1_profile(rec.final_state, cfg.grid.m);
        std::vector<double> u0(cfg.grid.m);
        for (int j = 0; j < cfg.grid.m; ++j) u0[j] = std::sin(kTwoPi * j / cfg.grid.m);
        const auto exact = cole_hopf_oracle_1d(u0, cfg.nu, cfg.horizon);
        double worst = 0.0, scale = 0.0;
        for (int j = 0; j < cfg.grid.m; ++j) {
            worst = std::max(worst, std::abs(profile[j] - exact[j]));
            scale = std::max(scale, std::abs(exact[j]));
        }
        CHECK(worst / scale < 1e-4);
    }
}

TEST_CASE("trajectory CSV round trip and parse errors") {
    SolverConfig cfg = base_config(4, 1.0, 0.05, 1e-2, 0.5);
    cfg.noise.seed = 21;
    SpectralField v0(cfg.grid.n);
    v0.set_coeff(0, {1, 0, 0}, {0.0, -0.5});
    v0.set_coeff(0, {-1, 0, 0}, {0.0, 0.5});
    const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
    const TrajectoryRecord rec = integrate(v0, path, cfg);

    std::stringstream buf;
    write_trajectory_csv(rec, buf);
    SUBCASE("round trip preserves every column bit for bit") {
        const TrajectoryRecord back = read_trajectory_csv(buf);
        REQUIRE(back.size() == rec.size());
        for (std::size_t i = 0; i < rec.size(); ++i) {
            CHECK(back.times[i] == rec.times[i]);
            CHECK(back.alpha[i] == rec.alpha[i]);
            CHECK(back.linf[i] == rec.linf[i]);
            CHECK(back.semi_half[i] == rec.semi_half[i]);
            CHECK(back.semi_three_half[i] == rec.semi_three_half[i]);
            CHECK(back.dissipation[i] == rec.dissipation[i]);
            CHECK(back.mean[i][0] == rec.mean[i][0]);
        }
        CHECK(back.kind == "v");
        CHECK(back.metadata.at("config").at("n").get<int>() == 4);
    }
    SUBCASE("malformed field names the line") {
        std::string text = buf.str();
        const auto pos = text.find('\n', text.find('\n', text.find('\n') + 1) + 1);
        text.insert(pos + 1, "0.01,garbage_value,1,1,1,1,1,1,0,0,0,0\n");
        std::stringstream corrupted(text);
        try {
            read_trajectory_csv(corrupted);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        }
    }
}

TEST_CASE("overflow to non-finite coefficients is a numerical failure") {
    // Quadratic nonlinearity on a ~1e150 amplitude overflows within one
    // step, jumping straight past any finite blow-up threshold.
    SolverConfig cfg = base_config(4, 1e-6, 1.0, 0.5, 0.0);
    cfg.blowup_threshold = 1e290;
    SpectralField v0(cfg.grid.n);
    v0.set_coeff(0, {1, 0, 0}, {0.0, -1e150});
    v0.set_coeff(0, {-1, 0, 0}, {0.0, 1e150});
    const NoisePath path = sample_path(cfg.noise, cfg.dt, cfg.horizon);
    CHECK_THROWS_AS(integrate(v0, path, cfg), NumericalFailure);
}
