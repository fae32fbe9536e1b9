#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "capeig/spectral.hpp"
#include "oracles.hpp"

using namespace capeig;

namespace {

constexpr double kHalfPi = 1.5707963267948966;

SolverConfig config(int n, int p, double theta0, Problem problem, int count = 8, int basis = 32) {
    SolverConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.theta0 = theta0;
    cfg.problem = problem;
    cfg.count = count;
    cfg.basis_size = basis;
    cfg.mode_margin = 1.05;
    cfg.quad_tolerance = 1e-11;
    cfg.asymmetry_tolerance = 1e-8;
    return cfg;
}

template <typename F>
ErrorKind error_kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no capeig::Error thrown";
    return ErrorKind::IoError;
}

// D q evaluated straight from monomial coefficients.
double radial_operator_at(const std::vector<double>& c, int l, int n, double x) {
    double q = 0, dq = 0, d2q = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        q += c[k] * std::pow(x, double(k));
        if (k >= 1)
            dq += c[k] * double(k) * std::pow(x, double(k - 1));
        if (k >= 2)
            d2q += c[k] * double(k * (k - 1)) * std::pow(x, double(k - 2));
    }
    return (1 - x * x) * d2q - (2.0 * l + n) * x * dq - double(l) * (l + n - 1) * q;
}

} // namespace

TEST(GaussJacobi, WeightSums) {
    for (double gamma : {0.0, 0.5, 1.0, 2.5, 7.0}) {
        const auto rule = gauss_jacobi_rule<double>(gamma, 12);
        EXPECT_NEAR(rule.weights.sum(), std::pow(2.0, gamma + 1) / (gamma + 1), 1e-13 * 4);
    }
    EXPECT_NEAR(gauss_jacobi_rule<double>(0.0, 5).weights.sum(), 2.0, 1e-14);
    EXPECT_NEAR(gauss_jacobi_rule<double>(1.0, 5).weights.sum(), 2.0, 1e-14);
}

TEST(GaussJacobi, TwoPointLegendreMoment) {
    const auto rule = gauss_jacobi_rule<double>(0.0, 2);
    EXPECT_NEAR((rule.weights.array() * rule.nodes.array().square()).sum(), 2.0 / 3.0, 1e-15);
}

TEST(GaussJacobi, ExactForShiftedMoments) {
    // integral of (1-s)^(gamma+j) over [-1,1] = 2^(gamma+j+1)/(gamma+j+1)
    for (double gamma : {0.0, 0.5, 1.5, 3.0, 6.5}) {
        for (int m : {1, 4, 9, 20}) {
            const auto rule = gauss_jacobi_rule<double>(gamma, m);
            for (int j = 0; j <= 2 * m - 1; ++j) {
                const double got = (rule.weights.array() * (1.0 - rule.nodes.array()).pow(j)).sum();
                const double exact = std::pow(2.0, j + gamma + 1) / (gamma + j + 1);
                EXPECT_NEAR(got / exact, 1.0, 1e-13) << "gamma " << gamma << " m " << m << " j " << j;
            }
        }
    }
}

TEST(GaussJacobi, NodesInsideAndWeightsPositive) {
    for (int m : {1, 2, 33, 128, 512}) {
        const auto rule = gauss_jacobi_rule<double>(2.5, m);
        ASSERT_EQ(rule.nodes.size(), m);
        EXPECT_TRUE((rule.nodes.array() > -1).all() && (rule.nodes.array() < 1).all());
        EXPECT_TRUE((rule.weights.array() > 0).all());
        for (int i = 1; i < m; ++i)
            EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
    }
}

TEST(Chebyshev, EvaluatesBasisAndCalculus) {
    const auto t3 = ChebyshevSeries<double>::basis(3, 4);
    for (double s : {-1.0, -0.3, 0.2, 0.9}) {
        EXPECT_NEAR(t3(s), 4 * s * s * s - 3 * s, 1e-15);
        EXPECT_NEAR(t3.derivative()(s), 12 * s * s - 3, 1e-14);
        EXPECT_NEAR(t3.times_s()(s), s * (4 * s * s * s - 3 * s), 1e-15);
        EXPECT_NEAR(t3.times_affine(2.0, -0.5)(s), (2.0 - 0.5 * s) * (4 * s * s * s - 3 * s), 1e-14);
    }
    EXPECT_EQ(ChebyshevSeries<double>::constant(3.0).derivative()(0.4), 0.0);
}

TEST(RadialOperator, HandExamples) {
    const auto map = CapMap::from_angle(1.1);
    const auto one = RadialPoly::from_monomials({1.0}, map);
    const auto x = RadialPoly::from_monomials({0.0, 1.0}, map);
    for (double pt : {map.x0, 0.3, 0.8, 1.0}) {
        EXPECT_NEAR(apply_radial_operator(one, 0, 5)(pt), 0.0, 1e-13);
        EXPECT_NEAR(apply_radial_operator(x, 0, 3)(pt), -3 * pt, 1e-13);
        EXPECT_NEAR(apply_radial_operator(x, 1, 2)(pt), -6 * pt, 1e-13);
        EXPECT_NEAR(apply_radial_operator(one, 1, 2)(pt), -2.0, 1e-13);
    }
}

TEST(RadialOperator, MatchesPointwiseFormula) {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(-1, 1);
    for (double theta0 : {0.3, 1.0, 2.5}) {
        const auto map = CapMap::from_angle(theta0);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> c(7);
            for (auto& v : c)
                v = u(rng);
            const int l = trial % 4, n = 2 + trial % 3;
            const auto dq = apply_radial_operator(RadialPoly::from_monomials(c, map), l, n);
            for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                const double pt = map.x0 + t * (1 - map.x0);
                EXPECT_NEAR(dq(pt), radial_operator_at(c, l, n, pt), 1e-10);
            }
        }
    }
}

TEST(RadialOperator, LinearAndDegreePreserving) {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto map = CapMap::from_angle(0.9);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a(6), b(4);
        for (auto& v : a)
            v = u(rng);
        for (auto& v : b)
            v = u(rng);
        const double alpha = u(rng);
        const auto qa = RadialPoly::from_monomials(a, map);
        const auto qb = RadialPoly::from_monomials(b, map);
        const RadialPoly combo{alpha * qa.series + qb.series, map};
        const auto lhs = apply_radial_operator(combo, 2, 4);
        const auto da = apply_radial_operator(qa, 2, 4);
        const auto db = apply_radial_operator(qb, 2, 4);
        EXPECT_LE(lhs.degree(), 5);
        EXPECT_LE(da.degree(), qa.degree());
        for (double s : {-1.0, -0.5, 0.0, 0.7, 1.0}) {
            const double pt = map.x_of(s);
            EXPECT_NEAR(lhs(pt), alpha * da(pt) + db(pt), 1e-12);
        }
    }
}

TEST(RadialOperator, SelfAdjointOnConstrainedBasis) {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int n : {2, 3, 5}) {
        for (int l : {0, 1, 3}) {
            const double theta0 = 1.2;
            const auto map = CapMap::from_angle(theta0);
            const double gamma = l + 0.5 * (n - 2);
            const auto rule = gauss_jacobi_rule<double>(gamma, 40);
            auto random_q = [&] {
                // (x - x0) times a random cubic: vanishes at the cap boundary
                std::vector<double> c(4);
                for (auto& v : c)
                    v = u(rng);
                ChebyshevSeries<double> poly(Eigen::Map<Eigen::VectorXd>(c.data(), 4));
                return RadialPoly{(map.half_width * poly).times_affine(1.0, 1.0), map};
            };
            const auto qi = random_q(), qj = random_q();
            const auto dqi = apply_radial_operator(qi, l, n), dqj = apply_radial_operator(qj, l, n);
            double left = 0, right = 0, scale = 0;
            for (int k = 0; k < rule.nodes.size(); ++k) {
                const double s = rule.nodes[k];
                const double w = rule.weights[k] * std::pow(map.one_plus_x(s), gamma) * map.half_width *
                                 std::pow(map.half_width, gamma);
                left += dqi.series(s) * qj.series(s) * w;
                right += qi.series(s) * dqj.series(s) * w;
                scale += std::abs(dqi.series(s) * qj.series(s) * w);
            }
            EXPECT_NEAR(left, right, 1e-10 * scale) << "n=" << n << " l=" << l;
        }
    }
}

TEST(Multiplicity, Examples) {
    EXPECT_EQ(multiplicity(0, 2), 1u);
    EXPECT_EQ(multiplicity(0, 7), 1u);
    EXPECT_EQ(multiplicity(1, 2), 2u);
    EXPECT_EQ(multiplicity(1, 3), 3u);
    EXPECT_EQ(multiplicity(2, 4), 9u);
}

TEST(Multiplicity, MatchesHarmonicDimensionCount) {
    // degree-l harmonics on S^{n-1} live in n variables
    for (int n = 2; n <= 8; ++n)
        for (int l = 0; l <= 9; ++l)
            EXPECT_EQ(multiplicity(l, n), oracle::harmonic_dimension(l, n)) << "l=" << l << " n=" << n;
}

TEST(SolverConfigValidation, RejectsBadInput) {
    auto cfg = config(2, 1, kHalfPi, Problem::Buckling);
    EXPECT_EQ(error_kind_of([&] { cfg.validate(); }), ErrorKind::InvalidConfig);
    cfg = config(2, 2, 0.0, Problem::Buckling);
    EXPECT_EQ(error_kind_of([&] { cfg.validate(); }), ErrorKind::InvalidConfig);
    cfg = config(2, 2, M_PI, Problem::Buckling);
    EXPECT_EQ(error_kind_of([&] { cfg.validate(); }), ErrorKind::InvalidConfig);
    cfg = config(1, 1, kHalfPi, Problem::Clamped);
    EXPECT_EQ(error_kind_of([&] { cfg.validate(); }), ErrorKind::InvalidConfig);
    cfg = config(2, 1, kHalfPi, Problem::Clamped, 6, 0);
    EXPECT_EQ(error_kind_of([&] { cfg.validate(); }), ErrorKind::InvalidConfig);
    EXPECT_NO_THROW(config(3, 3, 2.0, Problem::Buckling).validate());
}

TEST(AssembleMode, RhsIsPositiveDefinite) {
    for (auto problem : {Problem::Clamped, Problem::Buckling}) {
        for (int p : {2, 3}) {
            auto cfg = config(3, p, 1.3, problem, 8, 16);
            for (int l : {0, 2}) {
                const auto forms = assemble_mode(cfg, l);
                EXPECT_NO_THROW(cholesky(forms.rhs));
                EXPECT_EQ(forms.rhs.order(), 16);
            }
        }
    }
}

TEST(AssembleMode, HemisphereGroundValue) {
    const auto forms = assemble_mode(config(2, 1, kHalfPi, Problem::Clamped, 6, 16), 0);
    const auto pairs = generalized_sym_eigen(forms.stiffness, forms.rhs);
    EXPECT_NEAR(pairs.values[0] / 2.0, 1.0, 1e-8);
}

TEST(AssembleMode, FormsAreSymmetricBeforeSymmetrization) {
    for (auto problem : {Problem::Clamped, Problem::Buckling}) {
        const auto forms = assemble_mode(config(3, 3, 1.0, problem, 8, 24), 1);
        EXPECT_LT(forms.asymmetry, 1e-10);
    }
}

TEST(AssembleMode, UndersizedQuadratureIsRejected) {
    auto cfg = config(2, 2, 1.0, Problem::Buckling, 4, 16);
    cfg.quad_size = 6;
    EXPECT_EQ(error_kind_of([&] { assemble_mode(cfg, 0); }), ErrorKind::QuadratureNotConverged);
}

TEST(SolveMode, HemisphereMembrane) {
    const auto cfg = config(2, 1, kHalfPi, Problem::Clamped, 6, 32);
    const double expected[] = {2, 6, 12};
    for (int l = 0; l < 3; ++l) {
        const auto mode = solve_mode(cfg, l);
        EXPECT_NEAR(mode.radial_values.front() / expected[l], 1.0, 1e-10);
        EXPECT_EQ(mode.multiplicity, multiplicity(l, 2));
        for (std::size_t i = 1; i < mode.radial_values.size(); ++i)
            EXPECT_LE(mode.radial_values[i - 1], mode.radial_values[i]);
        EXPECT_GT(mode.radial_values.front(), 0);
    }
}

TEST(SolveMode, HemisphereRadialLadder) {
    // l = 0 on the hemisphere: odd zonal harmonics, d(d+1) for d = 1, 3, 5
    const auto mode = solve_mode(config(2, 1, kHalfPi, Problem::Clamped, 6, 32), 0);
    EXPECT_NEAR(mode.radial_values[0], 2, 1e-9);
    EXPECT_NEAR(mode.radial_values[1], 12, 1e-9);
    EXPECT_NEAR(mode.radial_values[2], 30, 1e-8);
}

TEST(SolveSpectrum, HemisphereMembraneSix) {
    const auto s = solve_spectrum(config(2, 1, kHalfPi, Problem::Clamped, 6, 32));
    const auto values = s.sequence().values;
    const double expected[] = {2, 6, 6, 12, 12, 12};
    ASSERT_EQ(values.size(), 6u);
    for (int i = 0; i < 6; ++i)
        EXPECT_NEAR(values[i] / expected[i], 1.0, 1e-8);
    // 12 arrives from two modes (l = 0 and l = 2); the value as a whole has multiplicity 3
    const double distinct[] = {2, 6, 12};
    std::uint64_t per_value[3] = {0, 0, 0};
    for (const auto& e : s.entries)
        for (int d = 0; d < 3; ++d)
            if (std::abs(e.value / distinct[d] - 1.0) < 1e-8)
                per_value[d] += e.multiplicity;
    EXPECT_EQ(per_value[0], 1u);
    EXPECT_EQ(per_value[1], 2u);
    EXPECT_EQ(per_value[2], 3u);
}

TEST(SolveSpectrum, HemisphereDegreeLadderWithMultiplicities) {
    const auto values = solve_spectrum(config(2, 1, kHalfPi, Problem::Clamped, 15, 32)).sequence().values;
    std::size_t i = 0;
    for (int d = 1; d <= 5; ++d)
        for (int copy = 0; copy < d; ++copy, ++i)
            EXPECT_NEAR(values[i] / (d * (d + 1.0)), 1.0, 1e-8) << i;
}

TEST(SolveSpectrum, HigherDimensionalHemisphere) {
    for (int n : {3, 4, 6}) {
        const auto values = solve_spectrum(config(n, 1, kHalfPi, Problem::Clamped, 1, 24)).sequence().values;
        EXPECT_NEAR(values[0] / n, 1.0, 1e-8);
    }
}

TEST(SolveSpectrum, EntriesSortedAndDeterministic) {
    const auto cfg = config(3, 2, 2.0, Problem::Buckling, 10, 20);
    const auto a = solve_spectrum(cfg), b = solve_spectrum(cfg);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_EQ(a.entries[i].value, b.entries[i].value);
        if (i > 0)
            EXPECT_LE(a.entries[i - 1].value, a.entries[i].value);
    }
    EXPECT_EQ(a.sequence().values.size(), 10u);
}

TEST(SolveSpectrum, FlatLimitMatchesBesselZeros) {
    const double j01 = oracle::bessel_first_zero(0), j11 = oracle::bessel_first_zero(1);
    EXPECT_NEAR(j01, 2.404825557695773, 1e-12);
    EXPECT_NEAR(j11, 3.831705970207512, 1e-12);
    const double theta0 = 0.05;
    const double lam = solve_spectrum(config(2, 1, theta0, Problem::Clamped, 1, 24)).sequence().values[0];
    const double buck = solve_spectrum(config(2, 2, theta0, Problem::Buckling, 1, 24)).sequence().values[0];
    EXPECT_NEAR(lam * theta0 * theta0 / (j01 * j01), 1.0, 0.01);
    EXPECT_NEAR(buck * theta0 * theta0 / (j11 * j11), 1.0, 0.01);
}

TEST(SolveSpectrum, BucklingDominatesMembrane) {
    for (int n : {2, 3, 4})
        for (double theta0 : {M_PI / 3, kHalfPi, 2 * M_PI / 3}) {
            const double lam = solve_spectrum(config(n, 1, theta0, Problem::Clamped, 1, 24)).sequence().values[0];
            const double buck = solve_spectrum(config(n, 2, theta0, Problem::Buckling, 1, 24)).sequence().values[0];
            EXPECT_GE(buck, lam) << "n=" << n << " theta0=" << theta0;
        }
}

TEST(SolveSpectrum, DomainMonotonicity) {
    for (int p : {1, 2, 3}) {
        const auto problem = p == 1 ? Problem::Clamped : Problem::Buckling;
        double previous = INFINITY;
        for (double theta0 : {0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 2.8}) {
            const double v = solve_spectrum(config(3, p, theta0, problem, 1, 24)).sequence().values[0];
            EXPECT_LE(v, previous * (1 + 1e-12)) << "p=" << p << " theta0=" << theta0;
            previous = v;
        }
    }
}

TEST(SolveSpectrum, QuadratureDoublingIsInvisible) {
    auto cfg = config(3, 3, 1.1, Problem::Buckling, 8, 20);
    const auto base = solve_spectrum(cfg);
    cfg.quad_size = 2 * base.quad_size;
    const auto doubled = solve_spectrum(cfg);
    const auto a = base.sequence().values, b = doubled.sequence().values;
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_NEAR(b[i] / a[i], 1.0, 1e-9);
}

TEST(SolveSpectrum, FixedModeCapTooSmall) {
    auto cfg = config(2, 1, kHalfPi, Problem::Clamped, 6, 16);
    cfg.mode_cap = 0;
    EXPECT_EQ(error_kind_of([&] { solve_spectrum(cfg); }), ErrorKind::ModeCapTooSmall);
    cfg.mode_cap = 6;
    EXPECT_NO_THROW(solve_spectrum(cfg));
}

TEST(SolveSpectrum, ConvergenceEstimatesAreSmall) {
    const auto s = solve_spectrum(config(3, 2, kHalfPi, Problem::Buckling, 8, 32));
    EXPECT_LT(s.max_convergence_estimate(), 1e-7);
    EXPECT_LT(s.max_form_asymmetry, 1e-8);
    EXPECT_FALSE(s.below_buckling_guard());
}

TEST(SolveSpectrum, GuardFlag) {
    Spectrum s;
    s.config = config(4, 2, 1.0, Problem::Buckling);
    s.entries = {{1.5, 0, 0, 1, 0}};
    EXPECT_TRUE(s.below_buckling_guard());
    s.entries = {{2.5, 0, 0, 1, 0}};
    EXPECT_FALSE(s.below_buckling_guard());
    s.config.problem = Problem::Clamped;
    s.entries = {{1.0, 0, 0, 1, 0}};
    EXPECT_FALSE(s.below_buckling_guard());
}

TEST(ConvergenceStudy, HemisphereMembraneFromAbove) {
    const auto table = convergence_study(config(2, 1, kHalfPi, Problem::Clamped, 6), {8, 16, 32});
    ASSERT_EQ(table.values.size(), 6u);
    for (double v : table.values[0])
        EXPECT_GE(v, 2 - 1e-10);
    for (const auto& row : table.values)
        for (std::size_t j = 1; j < row.size(); ++j)
            EXPECT_LE(row[j], row[j - 1] + 1e-10);
}

TEST(ConvergenceStudy, RepeatedSizesGiveIdenticalColumns) {
    const auto table = convergence_study(config(3, 2, 1.0, Problem::Buckling, 4), {12, 12});
    for (const auto& row : table.values)
        EXPECT_EQ(row[0], row[1]);
}

TEST(ConvergenceStudy, BucklingNonIncreasing) {
    const auto table = convergence_study(config(3, 2, kHalfPi, Problem::Buckling, 8), {8, 16, 32});
    for (std::size_t k = 0; k < table.values.size(); ++k) {
        const auto& row = table.values[k];
        for (std::size_t j = 1; j < row.size(); ++j)
            EXPECT_LE(row[j], row[j - 1] + 1e-10);
        EXPECT_NEAR(table.estimates[k], std::abs(row[2] - row[1]) / row[2], 1e-15);
    }
}

TEST(ConvergenceStudy, RejectsDescendingSizes) {
    EXPECT_THROW(convergence_study(config(2, 1, 1.0, Problem::Clamped, 2), {16, 8}), Error);
}
