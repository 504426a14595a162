#include <onedatom/linear.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace onedatom;

namespace {

// Leaky transmission in the (Q/Q0, f) parametrisation, emitter factor
// (2iΔω/γ + 1) with γ = γ_at + 2γ*.
complex t_f_form(double dw, const SystemParams& p)
{
    const double q = p.q_ratio();
    const complex t0 = leaky_cavity_t0(dw, p);
    const double f = p.f();
    const complex em = 2.0 * I * dw / p.leak_rate() + 1.0;
    const complex cav = I * q * (dw + p.delta()) / p.kappa() + 1.0;
    return q * t0 * (-1.0 + f / (f + em * cav));
}

std::vector<double> detuning_scan(const SystemParams& p)
{
    std::vector<double> out;
    for (double m = p.gamma() / 10.0; m <= 2.0 * p.kappa(); m *= 1.07) {
        out.push_back(m);
        out.push_back(-m);
    }
    return out;
}

} // namespace

TEST(EmptyCavity, Resonance)
{
    const auto p = make_params(1.0, 500.0);
    EXPECT_EQ(empty_cavity_t0(0.0, p), complex(1.0, 0.0));
    EXPECT_NEAR(std::norm(-empty_cavity_t0(0.0, p)), 1.0, 1e-15);
}

TEST(EmptyCavity, HalfWidth)
{
    const auto p = make_params(1.0, 500.0, 100.0);
    const complex t0 = empty_cavity_t0(400.0, p);
    EXPECT_NEAR(std::abs(t0 - 1.0 / complex(1.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::norm(t0), 0.5, 1e-15);
}

TEST(EmptyCavity, FarDetuned)
{
    const auto p = make_params(1.0, 1.0);
    EXPECT_LT(std::abs(empty_cavity_t0(1e9, p)), 1e-8);
    EXPECT_LT(std::abs(empty_cavity_t0(-1e9, p)), 1e-8);
}

TEST(ScatteringMatrix, ResonantLimitIsTotalReflection)
{
    const auto p = make_params(1.0, 500.0);
    const auto s = scattering_matrix_ideal(0.0, p);
    EXPECT_EQ(s, ScatteringMatrix::Identity());
    // approaching the pole continuously
    const auto near = scattering_matrix_ideal(1e-9, p);
    EXPECT_NEAR(std::abs(near(0, 0)), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(near(1, 0)), 0.0, 1e-8);
}

TEST(ScatteringMatrix, EmptyResonantCavity)
{
    const auto s = scattering_matrix_from_zeta(0.0);
    EXPECT_EQ(s(1, 0), complex(-1.0, 0.0));
    EXPECT_EQ(s(0, 0), complex(0.0, 0.0));
}

TEST(ScatteringMatrix, UnitaryAtArbitraryPoint)
{
    const auto p = make_params(1.0 / 500.0, 1.0, -0.5);
    const auto s = scattering_matrix_ideal(0.1, p);
    EXPECT_LT((s * s.adjoint() - ScatteringMatrix::Identity()).norm(), 1e-12);
    EXPECT_NEAR(std::abs(s.determinant()), 1.0, 1e-12);
}

TEST(ScatteringMatrix, RandomUnitarityAndReciprocity)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const auto p = make_params(std::pow(10.0, -3.0 + 2.0 * (u(rng) + 1.0) / 2.0), 1.0, u(rng));
        const double dw = std::pow(10.0, 3.0 * u(rng)) * (u(rng) < 0 ? -1.0 : 1.0);
        const auto s = scattering_matrix_ideal(dw, p);
        ASSERT_LT((s.adjoint() * s - ScatteringMatrix::Identity()).norm(), 1e-12);
        ASSERT_EQ(s(0, 1), s(1, 0));
        ASSERT_NEAR(std::abs(s.determinant()), 1.0, 1e-12);
    }
}

TEST(ScatteringMatrix, RejectsLeakyParams)
{
    const auto p = make_params(1.0, 500.0, 0.0, 0.1);
    try {
        scattering_matrix_ideal(1.0, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::LeakyNotSupported);
    }
}

TEST(TransmissionLeaky, ResonanceWithEmitter)
{
    for (double q : {1.0, 0.96, 0.5})
        for (double f : {0.5, 2.6, 30.0}) {
            const auto p = make_params_from_ratios(0.01, 1.0, 0.0, q, f);
            const auto pt = transmission_leaky(0.0, p);
            EXPECT_NEAR(pt.cap_t, q * q / ((1 + f) * (1 + f)), 1e-14);
            EXPECT_NEAR(pt.cap_r, std::pow(1.0 - q / (1.0 + f), 2), 1e-14);
            EXPECT_NEAR(pt.leaks, 1.0 - pt.cap_t - pt.cap_r, 1e-15);
        }
}

TEST(TransmissionLeaky, EmptyCavity)
{
    for (double q : {1.0, 0.8, 0.5}) {
        const auto p = make_params_from_ratios(0.01, 1.0, 0.0, q, 3.0);
        const auto pt = transmission_empty(0.0, p);
        EXPECT_NEAR(pt.cap_t, q * q, 1e-15);
        EXPECT_NEAR(pt.cap_r, (1 - q) * (1 - q), 1e-15);
    }
}

TEST(TransmissionLeaky, ReducesToScatteringMatrix)
{
    for (double delta : {0.0, -0.5, 0.3}) {
        const auto p = make_params(1.0 / 500.0, 1.0, delta);
        for (double dw : detuning_scan(p)) {
            const auto s = scattering_matrix_ideal(dw, p);
            const auto pt = transmission_leaky(dw, p);
            ASSERT_LT(std::abs(pt.t - s(1, 0)), 1e-10) << dw;
            ASSERT_LT(std::abs(pt.r - s(0, 0)), 1e-10) << dw;
        }
    }
}

TEST(TransmissionLeaky, MatchesFParametrisation)
{
    for (double q : {1.0, 0.7})
        for (double f : {0.3, 3.0, 300.0})
            for (double delta : {0.0, -0.4}) {
                const auto p = make_params_from_ratios(0.005, 1.0, delta, q, f);
                for (double dw : detuning_scan(p))
                    ASSERT_LT(std::abs(transmission_leaky(dw, p).t - t_f_form(dw, p)), 1e-12);
            }
}

TEST(TransmissionLeaky, DephasingEntersThroughLeakRate)
{
    const auto a = make_params(0.01, 1.0, 0.0, 0.002, 0.1, 0.0);
    const auto b = make_params(0.01, 1.0, 0.0, 0.0, 0.1, 0.001);
    for (double dw : {0.0, 0.003, -0.02})
        EXPECT_LT(std::abs(transmission_leaky(dw, a).t - transmission_leaky(dw, b).t), 1e-15);
}

TEST(TransmissionLeaky, IdealEnergyConservation)
{
    for (double delta : {0.0, -0.5}) {
        const auto p = make_params(0.002, 1.0, delta);
        for (double dw : detuning_scan(p))
            ASSERT_NEAR(transmission_leaky(dw, p).leaks, 0.0, 1e-12);
    }
}

TEST(TransmissionLeaky, LeaksNonNegative)
{
    const auto p = make_params(0.01, 1.0, -0.2, 0.003, 0.2, 0.001);
    for (double dw : detuning_scan(p))
        ASSERT_GT(transmission_leaky(dw, p).leaks, -1e-12);
}

TEST(TransmissionLeaky, EvanescentSwapsPorts)
{
    const auto p = make_params_from_ratios(0.01, 1.0, 0.1, 0.9, 4.0);
    for (double dw : {0.0, 0.004, -0.3}) {
        const auto fp = transmission_leaky(dw, p);
        const auto ev = transmission_leaky(dw, p, Geometry::evanescent);
        EXPECT_EQ(fp.t, ev.r);
        EXPECT_EQ(fp.r, ev.t);
        EXPECT_DOUBLE_EQ(fp.leaks, ev.leaks);
    }
}

TEST(TransmissionLeaky, FanoAsymmetry)
{
    const double g = 1.0 / 500.0;
    const auto fano = make_params(g, 1.0, -0.5);
    EXPECT_GT(std::abs(transmission_leaky(g, fano).cap_t - transmission_leaky(-g, fano).cap_t),
              1e-6);
    const auto sym = make_params(g, 1.0, 0.0);
    for (double dw : detuning_scan(sym))
        ASSERT_NEAR(transmission_leaky(dw, sym).cap_t, transmission_leaky(-dw, sym).cap_t, 1e-12);
}

TEST(Linewidths, PaperValues)
{
    for (double ratio : {1.0 / 500.0, 1.0 / 100.0}) {
        const auto w = linewidths_ideal(make_params(ratio, 1.0));
        EXPECT_EQ(w.broad_analytic, 1.0);
        EXPECT_EQ(w.dip_analytic, ratio);
        EXPECT_NEAR(w.broad_numeric, 1.0, 0.02);
        EXPECT_NEAR(w.dip_numeric, ratio, 0.02 * ratio);
    }
}

TEST(Linewidths, MatchExactHalfCrossings)
{
    // T = 1/(1+ζ²) crosses 1/2 at ζ = ±1, a quadratic in Δω
    for (double ratio : {1.0 / 500.0, 1.0 / 100.0, 1.0 / 20.0}) {
        const double k = 1.0, g = ratio;
        const double root = std::sqrt(k * k + 2.0 * g * k);
        const auto w = linewidths_ideal(make_params(g, k));
        EXPECT_NEAR(w.broad_numeric, k, 1e-9);
        EXPECT_NEAR(w.dip_numeric, root - k, 1e-9);
    }
}

TEST(Linewidths, RequiresResonantCavity)
{
    try {
        linewidths_ideal(make_params(0.002, 1.0, 0.1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnsupportedRegime);
    }
}

TEST(ResonanceExtrema, Ideal)
{
    const auto e = resonance_extrema(make_params(0.002, 1.0));
    EXPECT_EQ(e.t_max, 1.0);
    EXPECT_EQ(e.t_min, 0.0);
    EXPECT_EQ(e.r_max, 1.0);
    EXPECT_EQ(e.r_min, 0.0);
    EXPECT_EQ(e.leaks, 0.0);
}

TEST(ResonanceExtrema, OptimisedPillar)
{
    const auto e = resonance_extrema(make_params_from_ratios(0.002, 1.0, 0.0, 0.96, 2.6));
    EXPECT_NEAR(e.t_max, 0.9216, 1e-12);
    EXPECT_NEAR(e.t_min, 0.9216 / (3.6 * 3.6), 1e-12);
    EXPECT_NEAR(e.t_min, 0.0711, 1e-4);
    EXPECT_NEAR(e.contrast(), 0.8505, 1e-4);
}

TEST(ResonanceExtrema, BaselinePillar)
{
    const auto e = resonance_extrema(make_params_from_ratios(0.002, 1.0, 0.0, 0.5, 3.0));
    EXPECT_NEAR(e.t_max, 0.25, 1e-14);
    EXPECT_NEAR(e.t_min, 0.015625, 1e-14);
    EXPECT_NEAR(e.contrast(), 0.234375, 1e-14);
}

TEST(ResonanceExtrema, Identities)
{
    for (double q : {1.0, 0.9, 0.5, 0.1})
        for (double f : {0.1, 1.0, 10.0, 1e4}) {
            const auto p = make_params_from_ratios(0.002, 1.0, 0.0, q, f);
            const auto e = resonance_extrema(p);
            EXPECT_NEAR(std::sqrt(e.r_max) + std::sqrt(e.t_min), 1.0, 1e-12);
            EXPECT_NEAR(e.leaks, 2.0 * std::sqrt(e.r_max) * std::sqrt(e.t_min), 1e-12);
            EXPECT_NEAR(e.leaks, transmission_leaky(0.0, p).leaks, 1e-12);
            EXPECT_NEAR(e.t_min, transmission_leaky(0.0, p).cap_t, 1e-14);
            EXPECT_NEAR(e.t_max, transmission_empty(0.0, p).cap_t, 1e-14);
            if (f >= 1e4) {
                EXPECT_NEAR(e.leaks, e.leaks_approx, 1e-3 * e.leaks);
            }
        }
}

TEST(ResonanceExtrema, ContrastIncreasesWithF)
{
    for (double q : {1.0, 0.6}) {
        double prev = -1.0;
        for (double f = 0.01; f < 1e5; f *= 2.0) {
            const double c = resonance_extrema(make_params_from_ratios(0.002, 1.0, 0.0, q, f))
                                 .contrast();
            EXPECT_GT(c, prev);
            prev = c;
        }
    }
}
