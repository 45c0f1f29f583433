#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/fitting.hpp"
#include "fraclab/heatflow.hpp"
#include "fraclab/walkers.hpp"
#include "support/oracle_math.hpp"

using namespace fraclab;
using doctest::Approx;

TEST_SUITE("walkers")
{
    TEST_CASE("counter rng streams")
    {
        CounterRng a(42, 0), b(42, 0), c(42, 1);
        bool differs = false;
        for (int i = 0; i < 16; ++i) {
            const auto x = a.next();
            CHECK(x == b.next());
            differs |= x != c.next();
        }
        CHECK(differs);
        CounterRng u(1, 2);
        double m = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const double v = u.uniform();
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
            m += v;
        }
        CHECK(m / 100000 == Approx(0.5).epsilon(0.01));
    }

    TEST_CASE("alias table reproduces the weights")
    {
        std::vector<double> w{1.0, 2.0, 3.0, 4.0};
        AliasTable t(w);
        CounterRng rng(9, 0);
        std::vector<double> counts(4, 0.0);
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            counts[t.sample(rng)] += 1.0;
        }
        for (int k = 0; k < 4; ++k) {
            const double p = w[k] / 10.0;
            CHECK(std::abs(counts[k] / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
        }
        std::vector<double> bad{1.0, -1.0};
        CHECK_THROWS_AS(AliasTable{bad}, ValidationError);
    }

    TEST_CASE("classical walk")
    {
        WalkConfig cfg;
        cfg.h = 0.02;
        cfg.horizon = 0.5;
        cfg.ensemble = 20000;
        cfg.seed = 7;
        cfg.checkpoints = {0.1, 0.2, 0.3};
        auto r = run_classical_walk(cfg);
        CHECK(r.times.size() == 4);
        CHECK(r.elapsed() == Approx(0.5));

        auto msd = r.msd_x();
        auto fit = fit_power_law(r.times, msd);
        CHECK(fit.exponent == Approx(1.0).epsilon(0.05));
        const double n = static_cast<double>(cfg.ensemble);
        CHECK(std::abs(mean(r.final_positions())) < 3.0 * std::sqrt(0.5 / n));

        auto again = run_classical_walk(cfg);
        CHECK(again.x == r.x);
        cfg.threads = 3;
        CHECK(run_classical_walk(cfg).x == r.x);

        WalkConfig bad = cfg;
        bad.h = -1.0;
        CHECK_THROWS_AS(run_classical_walk(bad), ValidationError);
    }

    TEST_CASE("classical histogram is close to the Gaussian")
    {
        WalkConfig cfg;
        cfg.h = 0.02;
        cfg.horizon = 0.5;
        cfg.ensemble = 100000;
        cfg.seed = 7;
        auto r = run_classical_walk(cfg);
        // bin width 4h with edges between lattice points of equal parity
        auto d = empirical_density(r, HistogramSpec{-4.02, 3.98, 100});
        const double w = 0.08;
        double l1 = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double x = d.node(i);
            const double p = oracle_math::normal_cdf(x + w / 2, 0.5) - oracle_math::normal_cdf(x - w / 2, 0.5);
            l1 += std::abs(d[i] * w - p);
        }
        CHECK(l1 < 0.05);
    }

    TEST_CASE("censored walk stays in the domain")
    {
        const Interval omega{-1.0, 1.0};
        CensoredWalkModel model(1.0 / 64, FracOrder(0.5), omega);
        CHECK(model.sites() == 127);
        CHECK(model.normalizer() == Approx(2.0 * std::riemann_zeta(2.0)));
        const std::size_t mid = model.nearest(0.0);
        CHECK(model.site(mid) == Approx(0.0));
        double row = model.stay(mid);
        for (std::size_t j = 0; j < model.sites(); ++j) {
            if (j != mid) {
                row += model.probability(mid, j);
            }
        }
        CHECK(row == Approx(1.0).epsilon(1e-12));
        CHECK(model.time_scale() == Approx(1.0 / (2.0 * std::riemann_zeta(2.0) / std::numbers::pi)).epsilon(1e-12));

        // empirical stay frequency at the center against the exact table
        CounterRng rng(5, 0);
        const int n = 200000;
        int stays = 0;
        for (int i = 0; i < n; ++i) {
            stays += model.step(mid, rng) == mid ? 1 : 0;
        }
        const double p = model.stay(mid);
        CHECK(std::abs(static_cast<double>(stays) / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));

        WalkConfig cfg;
        cfg.kind = WalkKind::long_jump;
        cfg.h = 1.0 / 64;
        cfg.s = 0.5;
        cfg.horizon = 0.1;
        cfg.ensemble = 5000;
        cfg.domain = omega;
        auto r = run_censored_walk(cfg);
        for (const auto& snap : r.x) {
            for (double x : snap) {
                CHECK(omega.lo < x);
                CHECK(x < omega.hi);
            }
        }

        CHECK_THROWS_AS(CensoredWalkModel(0.1, FracOrder(0.5), omega), ValidationError);
    }

    TEST_CASE("free long-jump walk at s = 1/2 is Cauchy")
    {
        WalkConfig cfg;
        cfg.kind = WalkKind::long_jump;
        cfg.h = 1e-3;
        cfg.s = 0.5;
        cfg.horizon = 1.0;
        cfg.ensemble = 100000;
        cfg.seed = 3;
        auto r = run_free_longjump_walk(cfg);
        auto x = r.final_positions();
        std::sort(x.begin(), x.end());
        // unit-time scale of the limit law: 1 / (2 zeta(2) C(1, 1/2))
        const double c = std::numbers::pi / (2.0 * std::riemann_zeta(2.0));
        double ks = 0.0;
        const double n = static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double f = oracle_math::cauchy_cdf(x[i], c);
            ks = std::max({ks, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
        }
        CHECK(ks < 0.02);
        CHECK(std::abs(x[x.size() / 2]) < 0.02);

        // truncated second moments keep growing: (2c/pi)(R - c atan(R/c)) for the Cauchy law
        std::vector<double> m;
        for (double R : {4.0, 8.0, 16.0}) {
            double acc = 0.0;
            for (double v : x) {
                if (std::abs(v) < R) {
                    acc += v * v;
                }
            }
            m.push_back(acc / n);
            const double ref = 2.0 * c / std::numbers::pi * (R - c * std::atan(R / c));
            CHECK(acc / n == Approx(ref).epsilon(0.05));
        }
        CHECK(m[2] / m[1] > 1.8);
    }

    TEST_CASE("lattice jump law")
    {
        CHECK(lattice_tail_mass(FracOrder(0.5), 1000) == Approx(2.0 / 1000.5 / (2 * std::riemann_zeta(2.0))).epsilon(1e-3));
        WalkConfig cfg;
        cfg.kind = WalkKind::long_jump;
        cfg.h = 1e-2;
        cfg.s = 0.5;
        cfg.horizon = 0.1;
        cfg.ensemble = 2000;
        LongJumpLaw law;
        law.kind = LongJumpLaw::Kind::lattice_power_law;
        law.k_max = 1000;
        law.tail_radius = 100.0;
        CHECK_THROWS_AS(run_free_longjump_walk(cfg, law), ValidationError);
        law.tail_radius = 5.0;
        auto r = run_free_longjump_walk(cfg, law);
        for (double v : r.final_positions()) {
            // positions live on the lattice
            CHECK(std::abs(v / cfg.h - std::round(v / cfg.h)) < 1e-6);
        }
    }

    TEST_CASE("comb walk")
    {
        CombConfig cc;
        cc.steps = 4000;
        cc.ensemble = 20000;
        cc.seed = 5;
        cc.checkpoints = {100, 200, 400, 1000, 2000};
        auto r = run_comb_walk(cc);
        std::vector<double> t(r.times.begin(), r.times.end());
        CHECK(fit_power_law(t, r.msd_x()).exponent == Approx(0.5).epsilon(0.07 / 0.5));
        CHECK(fit_power_law(t, r.msd_y()).exponent == Approx(1.0).epsilon(0.05));
        CHECK(fit_power_law(t, backbone_fraction(r)).exponent == Approx(-0.5).epsilon(0.1 / 0.5));
        cc.threads = 2;
        auto r2 = run_comb_walk(cc);
        CHECK(r2.x == r.x);
        CHECK(r2.y == r.y);
    }

    TEST_CASE("empirical density")
    {
        std::vector<double> one{0.0};
        auto d = empirical_density(one, HistogramSpec{-0.5, 0.5, 5});
        int nonzero = 0;
        for (double v : d.values()) {
            nonzero += v > 0.0 ? 1 : 0;
        }
        CHECK(nonzero == 1);
        CHECK(d[2] == Approx(5.0));

        std::vector<double> xs;
        CounterRng rng(3, 0);
        for (int i = 0; i < 1000; ++i) {
            xs.push_back(rng.uniform() * 2.0 - 1.0);
        }
        auto coarse = empirical_density(xs, HistogramSpec{-1.0, 1.0, 20});
        auto fine = empirical_density(xs, HistogramSpec{-1.0, 1.0, 40});
        double mc = 0.0, mf = 0.0;
        for (double v : coarse.values()) {
            mc += v * 0.1;
        }
        for (double v : fine.values()) {
            mf += v * 0.05;
        }
        CHECK(mc == Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(mc - mf) < 1e-12);

        std::vector<double> outside{2.0};
        CHECK_THROWS_AS(empirical_density(outside, HistogramSpec{-1.0, 1.0, 10}), ValidationError);
    }
}
