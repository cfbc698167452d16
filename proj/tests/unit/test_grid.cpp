#include "hwm/error.hpp"
#include "hwm/grid.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hwm;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField field_of(const GridPtr& g, std::vector<double> v) { return ScalarField(g, std::move(v)); }

} // namespace

TEST(MakeGrid, TorusNodesAndWeight) {
    const auto g = make_grid(GridKind::torus, 8);
    EXPECT_DOUBLE_EQ(g->dx, pi / 4);
    for (std::size_t j = 0; j < 8; ++j) EXPECT_DOUBLE_EQ(g->nodes[j], j * pi / 4);
    EXPECT_NEAR(g->dx * g->n, 2 * pi, 1e-15);
    const std::vector<double> k = {0, 1, 2, 3, -4, -3, -2, -1};
    for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(g->wavenumbers[j], k[j]);
}

TEST(MakeGrid, WindowNodesAndWeight) {
    const auto g = make_grid(GridKind::window, 8, 4.0);
    EXPECT_DOUBLE_EQ(g->dx, 1.0);
    for (std::size_t j = 0; j < 8; ++j) EXPECT_DOUBLE_EQ(g->nodes[j], -4.0 + j);
    EXPECT_DOUBLE_EQ(g->wavenumbers[1], pi / 4);
    EXPECT_DOUBLE_EQ(g->circumference(), 8.0);
    EXPECT_DOUBLE_EQ(g->k_max(), pi);
}

TEST(MakeGrid, RejectsBadInput) {
    EXPECT_THROW(make_grid(GridKind::torus, 12), DomainError);
    EXPECT_THROW(make_grid(GridKind::torus, 4), DomainError);
    EXPECT_THROW(make_grid(GridKind::window, 16), DomainError);
    EXPECT_THROW(make_grid(GridKind::window, 16, -1.0), DomainError);
    EXPECT_THROW(make_grid(GridKind::torus, 16, 2.0), DomainError);
}

TEST(Multiplier, HalfwaveOfSingleModeIsExact) {
    const auto g = make_grid(GridKind::torus, 64);
    std::vector<double> f(64), expect(64);
    for (std::size_t j = 0; j < 64; ++j) {
        f[j] = std::cos(3 * g->nodes[j]);
        expect[j] = 3 * f[j];
    }
    const auto out = apply_multiplier(field_of(g, f), Symbol::halfwave);
    EXPECT_LE(oracle::sup_diff_span(out.values(), expect), 1e-13);
}

TEST(Multiplier, HilbertOfCosineIsSine) {
    const auto g = make_grid(GridKind::torus, 32);
    std::vector<double> f(32), expect(32);
    for (std::size_t j = 0; j < 32; ++j) {
        f[j] = std::cos(g->nodes[j]);
        expect[j] = std::sin(g->nodes[j]);
    }
    const auto out = apply_multiplier(field_of(g, f), Symbol::hilbert);
    EXPECT_LE(oracle::sup_diff_span(out.values(), expect), 1e-14);
}

TEST(Multiplier, EveryPureModeMatchesItsSymbol) {
    const auto g = make_grid(GridKind::torus, 32);
    for (int k = 0; k < 16; ++k) {
        for (int phase = 0; phase < 2; ++phase) {
            std::vector<double> f(32), hw(32), hb(32);
            for (std::size_t j = 0; j < 32; ++j) {
                const double s = k * g->nodes[j];
                f[j] = phase == 0 ? std::cos(s) : std::sin(s);
                hw[j] = k * f[j];
                // -i sgn(k) maps cos -> sin and sin -> -cos
                hb[j] = k == 0 ? 0.0 : (phase == 0 ? std::sin(s) : -std::cos(s));
            }
            EXPECT_LE(oracle::sup_diff_span(apply_multiplier(field_of(g, f), Symbol::halfwave).values(), hw), 1e-13) << k;
            EXPECT_LE(oracle::sup_diff_span(apply_multiplier(field_of(g, f), Symbol::hilbert).values(), hb), 1e-13) << k;
        }
    }
}

TEST(Multiplier, AgreesWithNaiveDft) {
    const auto g = make_grid(GridKind::window, 64, 5.0);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    std::vector<double> f(64);
    for (auto& v : f) v = gauss(rng);
    const double unit = pi / 5.0;
    const auto hw = oracle::naive_multiplier(f, [&](long k) { return std::complex<double>(unit * std::abs(k), 0.0); });
    const auto hb = oracle::naive_multiplier(f, [&](long k) {
        return k == -32 ? std::complex<double>{} : std::complex<double>(0.0, -1.0) * static_cast<double>((k > 0) - (k < 0));
    });
    const auto dv = oracle::naive_multiplier(f, [&](long k) {
        return k == -32 ? std::complex<double>{} : std::complex<double>(0.0, unit * k);
    });
    EXPECT_LE(oracle::sup_diff_span(apply_multiplier(field_of(g, f), Symbol::halfwave).values(), hw), 1e-12);
    EXPECT_LE(oracle::sup_diff_span(apply_multiplier(field_of(g, f), Symbol::hilbert).values(), hb), 1e-12);
    EXPECT_LE(oracle::sup_diff_span(apply_multiplier(field_of(g, f), Symbol::derivative).values(), dv), 1e-12);
}

TEST(Multiplier, WindowHalfwaveOfLorentzian) {
    // |grad| (1/(1+x^2)) = (1 - x^2)/(1 + x^2)^2, which is 1 at x = 0.
    const auto g = make_grid(GridKind::window, 8192, 200.0);
    std::vector<double> f(g->n);
    for (std::size_t j = 0; j < g->n; ++j) f[j] = 1.0 / (1.0 + g->nodes[j] * g->nodes[j]);
    const auto out = apply_multiplier(field_of(g, f), Symbol::halfwave);
    EXPECT_NEAR(out[g->n / 2], 1.0, 1e-3);
}

TEST(Multiplier, HilbertOfDerivativeIsHalfwave) {
    const auto g = make_grid(GridKind::torus, 128);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = oracle::random_trig_poly(rng, 16, true);
        const auto f = field_of(g, oracle::sample(p, *g));
        const auto lhs = apply_multiplier(apply_multiplier(f, Symbol::derivative), Symbol::hilbert);
        const auto rhs = apply_multiplier(f, Symbol::halfwave);
        double worst = 0.0;
        for (std::size_t j = 0; j < g->n; ++j) worst = std::max(worst, std::abs(lhs[j] - rhs[j]));
        EXPECT_LE(worst, 1e-12);
    }
}

TEST(Multiplier, CotlarIdentity) {
    const auto g = make_grid(GridKind::torus, 256);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = field_of(g, oracle::sample(oracle::random_trig_poly(rng, 32), *g));
        const auto h = field_of(g, oracle::sample(oracle::random_trig_poly(rng, 32), *g));
        std::vector<double> fg(g->n), hfhg(g->n);
        const auto hf = apply_multiplier(f, Symbol::hilbert);
        const auto hh = apply_multiplier(h, Symbol::hilbert);
        for (std::size_t j = 0; j < g->n; ++j) {
            fg[j] = f[j] * h[j];
            hfhg[j] = hf[j] * hh[j];
        }
        const auto h_fg = apply_multiplier(field_of(g, fg), Symbol::hilbert);
        const auto h_hfhg = apply_multiplier(field_of(g, hfhg), Symbol::hilbert);
        double worst = 0.0;
        for (std::size_t j = 0; j < g->n; ++j)
            worst = std::max(worst, std::abs(h_fg[j] - hf[j] * h[j] - f[j] * hh[j] - h_hfhg[j]));
        EXPECT_LE(worst, 1e-11);
    }
}

TEST(Multiplier, SymmetryAtQuadratureLevel) {
    const auto g = make_grid(GridKind::torus, 128);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = field_of(g, oracle::sample(oracle::random_trig_poly(rng, 20), *g));
        const auto h = field_of(g, oracle::sample(oracle::random_trig_poly(rng, 20), *g));
        const double a = inner(f, apply_multiplier(h, Symbol::halfwave));
        const double b = inner(apply_multiplier(f, Symbol::halfwave), h);
        EXPECT_LE(std::abs(a - b), 1e-12);
        const double c = inner(f, apply_multiplier(h, Symbol::hilbert));
        const double d = inner(apply_multiplier(f, Symbol::hilbert), h);
        EXPECT_LE(std::abs(c + d), 1e-12);
    }
}

TEST(Multiplier, AnnihilatesTheMean) {
    const auto g = make_grid(GridKind::torus, 16);
    const auto f = field_of(g, std::vector<double>(16, 3.5));
    for (auto s : {Symbol::halfwave, Symbol::hilbert, Symbol::derivative}) {
        const auto out = apply_multiplier(f, s);
        for (double v : out.values()) EXPECT_LT(std::abs(v), 1e-15);
    }
}

TEST(SphereFieldTest, ValidatesNorm) {
    const auto g = make_grid(GridKind::torus, 8);
    Components c;
    for (auto& v : c) v.assign(8, 0.0);
    c[2].assign(8, 1.0);
    EXPECT_NO_THROW(SphereField(g, c));
    c[2][3] = 1.0 + 1e-9;
    EXPECT_THROW(SphereField(g, c), DomainError);
    c[2].resize(7);
    EXPECT_THROW(SphereField(g, c), DomainError);
}

TEST(HwmRhs, ConstantFieldGivesZero) {
    const auto g = make_grid(GridKind::torus, 32);
    Components c;
    c[0].assign(32, 0.0);
    c[1].assign(32, 0.0);
    c[2].assign(32, 1.0);
    EXPECT_EQ(hwm_rhs(SphereField(g, c)).sup_norm(), 0.0);
}

TEST(HwmRhs, EquatorGivesZero) {
    const auto g = make_grid(GridKind::torus, 64);
    Components c;
    for (auto& v : c) v.resize(64);
    for (std::size_t j = 0; j < 64; ++j) {
        c[0][j] = std::cos(g->nodes[j]);
        c[1][j] = std::sin(g->nodes[j]);
        c[2][j] = 0.0;
    }
    EXPECT_LE(hwm_rhs(SphereField::normalized(g, c)).sup_norm(), 1e-14);
}

TEST(HwmRhs, CircleProfileIsTransported) {
    // (a cos 2s, a sin 2s, -v) satisfies u x |grad| u = -v du/ds.
    const double v = 0.5, a = std::sqrt(1 - v * v);
    const auto g = make_grid(GridKind::torus, 128);
    Components c;
    for (auto& x : c) x.resize(g->n);
    std::vector<double> expect[3];
    for (auto& e : expect) e.resize(g->n);
    for (std::size_t j = 0; j < g->n; ++j) {
        const double s = g->nodes[j];
        c[0][j] = a * std::cos(2 * s);
        c[1][j] = a * std::sin(2 * s);
        c[2][j] = -v;
        expect[0][j] = -v * (-2 * a * std::sin(2 * s));
        expect[1][j] = -v * (2 * a * std::cos(2 * s));
        expect[2][j] = 0.0;
    }
    const auto rhs = hwm_rhs(SphereField::normalized(g, c));
    for (int i = 0; i < 3; ++i) EXPECT_LE(oracle::sup_diff_span(rhs.component(i), expect[i]), 1e-10);
}

TEST(HwmRhs, TangentToTheSphere) {
    const auto g = make_grid(GridKind::torus, 128);
    const SphereField u = SphereField::normalized(g, oracle::perturbed_equator(*g, 3, 6, 0.8));
    const auto rhs = hwm_rhs(u);
    for (std::size_t j = 0; j < g->n; ++j) {
        const auto p = u.at(j);
        const auto q = rhs.at(j);
        EXPECT_LE(std::abs(p[0] * q[0] + p[1] * q[1] + p[2] * q[2]), 1e-14);
    }
}
