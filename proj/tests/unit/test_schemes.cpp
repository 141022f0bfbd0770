#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rlogkg/errors.hpp"
#include "rlogkg/schemes.hpp"

using namespace rlogkg;

namespace {

/// Dense Gaussian elimination with partial pivoting. Test oracle only.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        }
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

Field gaussian(const Grid1D& g, double shift = 0.0) {
    return Field::sample(g, [&](double x) { return std::exp(-(x - shift) * (x - shift) / 6.0); });
}

Field random_field(std::size_t n, std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Field u(n);
    for (auto& v : u) v = dist(rng);
    return u;
}

double rel_linf(const Field& a, const Field& b) {
    return norm_linf(a - b) / std::max(norm_linf(b), 1e-300);
}

}  // namespace

TEST(Nonlinearity, FEpsClosedForms) {
    EXPECT_EQ(f_eps(0.0, 1.0), 0.0);
    EXPECT_NEAR(f_eps(3.0, 1.0), std::log(4.0), 1e-15);
    EXPECT_NEAR(f_eps(0.0, 1e-3), -13.815510557964274, 1e-12);
    EXPECT_THROW(f_eps(-1e-3, 1.0), DomainError);
    EXPECT_THROW(f_eps(1.0, 0.0), DomainError);
    EXPECT_THROW(f_eps(1.0, -1.0), DomainError);
}

TEST(Nonlinearity, AntiderivativeClosedForms) {
    for (double eps : {1e-7, 1e-3, 0.5, 1.0}) EXPECT_EQ(F_eps(0.0, eps), 0.0);
    EXPECT_NEAR(F_eps(1.0, 1.0), 2.0 * std::log(2.0) - 1.0, 1e-15);
    EXPECT_THROW(F_eps(-1.0, 1.0), DomainError);
    EXPECT_THROW(F_eps(1.0, 0.0), DomainError);
}

TEST(Nonlinearity, AntiderivativeMatchesIntegrandNumerically) {
    for (double eps : {1e-3, 1.0}) {
        for (double rho : {0.1, 1.0, 10.0}) {
            const double d = 1e-5 * rho;
            const double numeric = (F_eps(rho + d, eps) - F_eps(rho - d, eps)) / (2.0 * d);
            const double exact = f_eps(rho, eps);
            EXPECT_NEAR(numeric, exact, 1e-6 * std::max(1.0, std::abs(exact))) << "eps=" << eps << " rho=" << rho;
        }
    }
}

TEST(SchemeParams, Validation) {
    EXPECT_THROW(SchemeParams(0.0), DomainError);
    EXPECT_THROW(SchemeParams(-1e-3), DomainError);
    EXPECT_THROW(SchemeParams(1e-3, INFINITY), DomainError);
    const SchemeParams p(1e-3);
    EXPECT_EQ(p.lambda(), 1.0);
    EXPECT_EQ(p.scheme(), Scheme::EFD);
    EXPECT_EQ(parse_scheme("SIFD"), Scheme::SIFD);
    EXPECT_THROW(parse_scheme("rk4"), ArgumentError);
}

TEST(FirstStep, ZeroDataStaysZero) {
    const Grid1D g(-4.0, 4.0, 32);
    const Field u1 = first_step(Field(32), Field(32), g, 0.1, SchemeParams(1e-3));
    for (double v : u1) EXPECT_EQ(v, 0.0);
}

TEST(FirstStep, UniformFieldClosedForm) {
    const Grid1D g(-4.0, 4.0, 32);
    const Field u1 = first_step(Field(32, 1.0), Field(32), g, 0.1, SchemeParams(1e-3));
    const double expected = 1.0 - 0.005 * (1.0 + std::log1p(1e-6));
    for (double v : u1) EXPECT_NEAR(v, expected, 1e-15);
}

TEST(StepEfd, UniformFieldIsAnOdeStep) {
    const Grid1D g(0.0, 1.0, 10);
    const auto s = SolverState::initial(Field(10, 1.0), Field(10, 1.0));
    const Field next = step_efd(s, g, 0.1, SchemeParams(1.0));
    for (double v : next) EXPECT_NEAR(v, 1.0 - 0.01 * (1.0 + std::log(2.0)), 1e-15);
    EXPECT_NEAR(next[0], 0.9830685, 1e-7);
}

TEST(StepSifd, UniformFieldClosedForm) {
    const double expected = (100.0 - 0.5 - std::log(2.0)) / 100.5;
    for (std::size_t n : {4u, 10u, 33u}) {
        const Grid1D g(0.0, 1.0, n);
        const auto s = SolverState::initial(Field(n, 1.0), Field(n, 1.0));
        const Field next = step_sifd(s, g, 0.1, SchemeParams(1.0, 1.0, Scheme::SIFD));
        for (double v : next) EXPECT_NEAR(v, expected, 1e-14 * expected);
    }
}

TEST(Steppers, ZeroPreservation) {
    const Grid1D g(-8.0, 8.0, 64);
    const auto s = SolverState::initial(Field(64), Field(64));
    for (Scheme sch : {Scheme::EFD, Scheme::SIFD}) {
        const Field next = Stepper(g, 0.01, SchemeParams(1e-7, 1.0, sch)).step(s);
        for (double v : next) EXPECT_EQ(v, 0.0);
    }
}

TEST(Steppers, SchemeMismatchRejected) {
    const Grid1D g(0.0, 1.0, 8);
    const auto s = SolverState::initial(Field(8), Field(8));
    EXPECT_THROW(step_efd(s, g, 0.1, SchemeParams(1.0, 1.0, Scheme::SIFD)), ArgumentError);
    EXPECT_THROW(step_sifd(s, g, 0.1, SchemeParams(1.0)), ArgumentError);
}

TEST(Steppers, OverflowNamesStep) {
    const Grid1D g(0.0, 1.0, 8);
    auto s = SolverState::initial(Field(8, 1e200), Field(8, 1e200));
    s.step_index = 41;
    try {
        step_efd(s, g, 0.1, SchemeParams(1.0));
        FAIL() << "expected overflow";
    } catch (const OverflowError& e) {
        EXPECT_EQ(e.step(), 42u);
        EXPECT_NEAR(e.time(), 4.2, 1e-12);
    }
}

TEST(CyclicTridiagonal, MatchesDenseSolve) {
    std::mt19937 rng(5);
    for (std::size_t n : {3u, 4u, 5u, 17u, 64u}) {
        const double diag = 3.7;
        const double off = -1.2;
        const CyclicTridiagonal m(n, diag, off);
        std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            a[i][i] = diag;
            a[i][(i + 1) % n] += off;
            a[i][(i + n - 1) % n] += off;
        }
        const Field rhs = random_field(n, rng);
        const auto expected = dense_solve(a, rhs.data());
        Field x = rhs;
        m.solve(x.values());
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], expected[i], 1e-13) << "n=" << n;
    }
}

TEST(CyclicTridiagonal, RejectsNonDominantMatrix) {
    EXPECT_THROW(CyclicTridiagonal(8, 1.0, 0.5), InternalError);
    EXPECT_THROW(CyclicTridiagonal(2, 4.0, 1.0), ArgumentError);
}

TEST(StepSifd, SolvedSystemResidual) {
    std::mt19937 rng(11);
    for (double h : {0.5, 0.1, 1.0 / 64.0}) {
        for (double tau : {0.5, 0.05, 1e-3}) {
            const Grid1D g = Grid1D::from_spacing(-16.0, 16.0, h);
            const Stepper st(g, tau, SchemeParams(1e-3, 1.0, Scheme::SIFD));
            const auto s = SolverState::initial(random_field(g.size(), rng, 2.0), random_field(g.size(), rng, 2.0));
            Field rhs(g.size());
            st.sifd_rhs(s.u_prev.values(), s.u_curr.values(), rhs.values());
            const Field x = st.step(s);
            Field ax(g.size());
            st.sifd_matrix().apply(x.values(), ax.values());
            const double rel = norm_l2(ax - rhs, g) / norm_l2(rhs, g);
            EXPECT_LE(rel, 1e-12) << "h=" << h << " tau=" << tau;
        }
    }
}

TEST(Steppers, TimeReversibleSingleStep) {
    const Grid1D g = Grid1D::from_spacing(-16.0, 16.0, 0.1);
    std::mt19937 rng(3);
    for (Scheme sch : {Scheme::EFD, Scheme::SIFD}) {
        const Stepper st(g, 0.05, SchemeParams(1e-3, 1.0, sch));
        const auto s = SolverState::initial(gaussian(g), gaussian(g, 0.1));
        const Field next = st.step(s);
        const auto back = SolverState::initial(next, s.u_curr);
        EXPECT_LE(rel_linf(st.step(back), s.u_prev), 1e-10);
        (void)rng;
    }
}

TEST(Steppers, TimeReversibleOverManySteps) {
    const Grid1D g = Grid1D::from_spacing(-16.0, 16.0, 0.1);
    for (Scheme sch : {Scheme::EFD, Scheme::SIFD}) {
        const Stepper st(g, 0.01, SchemeParams(1.0, 1.0, sch));
        auto s = SolverState::initial(gaussian(g), gaussian(g, 0.02));
        const Field start0 = s.u_prev;
        const Field start1 = s.u_curr;
        for (int i = 0; i < 500; ++i) s.advance(st.step(s));
        auto r = SolverState::initial(s.u_curr, s.u_prev);
        for (int i = 0; i < 500; ++i) r.advance(st.step(r));
        // After 500 backward steps r holds (u^1, u^0).
        EXPECT_LE(rel_linf(r.u_curr, start0), 1e-8);
        EXPECT_LE(rel_linf(r.u_prev, start1), 1e-8);
    }
}

TEST(Steppers, ShiftEquivariance) {
    std::mt19937 rng(17);
    const Grid1D g(-4.0, 4.0, 40);
    for (int trial = 0; trial < 5; ++trial) {
        const auto s = SolverState::initial(random_field(40, rng), random_field(40, rng));
        const auto k = static_cast<std::ptrdiff_t>(rng() % 40);
        const auto rs = SolverState::initial(s.u_prev.rotated(k), s.u_curr.rotated(k));

        const Stepper efd(g, 0.05, SchemeParams(1e-3));
        EXPECT_EQ(efd.step(rs), efd.step(s).rotated(k));

        const Stepper sifd(g, 0.05, SchemeParams(1e-3, 1.0, Scheme::SIFD));
        EXPECT_LE(rel_linf(sifd.step(rs), sifd.step(s).rotated(k)), 1e-13);
    }
}

TEST(Stability, SigmaMaxClosedForms) {
    EXPECT_NEAR(sigma_max(1e-3, 1.0), 13.815510557964274, 1e-12);
    EXPECT_EQ(sigma_max(1.0, 0.0), 0.0);
    EXPECT_NEAR(sigma_max(0.8, 1.0), std::log(1.64), 1e-15);
    EXPECT_NEAR(sigma_max(0.8, 1.0), 0.4946962, 1e-7);
    EXPECT_THROW(sigma_max(0.0, 1.0), DomainError);
}

TEST(Stability, LimitFormulas) {
    const Grid1D g(0.0, 1.0, 10);
    const auto sifd5 = stability_limit(SchemeParams(1e-3, 1.0, Scheme::SIFD), g, 5.0, 0.5);
    ASSERT_TRUE(sifd5.tau_limit.has_value());
    EXPECT_DOUBLE_EQ(*sifd5.tau_limit, 1.0);
    EXPECT_TRUE(sifd5.satisfied);
    EXPECT_DOUBLE_EQ(sifd5.margin, 2.0);

    const auto sifd_small = stability_limit(SchemeParams(0.8, 1.0, Scheme::SIFD), g, 0.5, 100.0);
    EXPECT_FALSE(sifd_small.tau_limit.has_value());
    EXPECT_TRUE(sifd_small.satisfied);
    EXPECT_TRUE(std::isinf(sifd_small.margin));

    const auto efd = stability_limit(SchemeParams(1e-3), g, 1.0, 0.1);
    ASSERT_TRUE(efd.tau_limit.has_value());
    EXPECT_NEAR(*efd.tau_limit, 0.2 / std::sqrt(4.02), 1e-15);
    EXPECT_NEAR(*efd.tau_limit, 0.0997509, 1e-7);
    EXPECT_FALSE(efd.satisfied);
}

TEST(Amplification, ClosedForms) {
    const auto efd = amplification_factor({0.0, 0, 16, 0.1, 0.1}, Scheme::EFD);
    EXPECT_NEAR(efd.theta, 0.995, 1e-15);
    EXPECT_EQ(efd.xi_modulus, 1.0);

    for (double tau : {0.01, 0.5, 3.0}) {
        for (long l : {-8L, -3L, 0L, 5L, 7L}) {
            const double h = 0.25;
            const auto a = amplification_factor({1.0, l, 16, h, tau}, Scheme::SIFD);
            const double s = 2.0 / h * std::sin(static_cast<double>(l) * std::numbers::pi / 16.0);
            EXPECT_NEAR(a.theta, (2.0 - tau * tau) / (2.0 + tau * tau * (s * s + 1.0)), 1e-15);
            EXPECT_LE(std::abs(a.theta), 1.0);
            EXPECT_EQ(a.xi_modulus, 1.0);
        }
    }
    EXPECT_THROW(amplification_factor({0.0, 8, 16, 0.1, 0.1}, Scheme::EFD), ArgumentError);
    EXPECT_THROW(amplification_factor({0.0, -9, 16, 0.1, 0.1}, Scheme::EFD), ArgumentError);
}

TEST(Amplification, EfdUnstableJustAboveLimit) {
    const double sigma = sigma_max(1e-3, 1.0);
    const Grid1D g = Grid1D::from_spacing(-16.0, 16.0, 0.125);
    const double limit = *stability_limit(SchemeParams(1e-3), g, sigma, 1.0).tau_limit;
    const long n = static_cast<long>(g.size());
    const auto a = amplification_factor({sigma, -n / 2, g.size(), g.spacing(), 1.001 * limit}, Scheme::EFD);
    EXPECT_GT(a.xi_modulus, 1.0);
}

TEST(Amplification, StableModesUnderLimit) {
    for (double eps : {1e-7, 1e-3, 0.1}) {
        for (double amp : {0.0, 1.0, 3.0}) {
            const double sigma = sigma_max(eps, amp);
            for (std::size_t n : {16u, 128u}) {
                const Grid1D g(-16.0, 16.0, n);
                for (Scheme sch : {Scheme::EFD, Scheme::SIFD}) {
                    const auto rep = stability_limit(SchemeParams(eps, 1.0, sch), g, sigma, 1.0);
                    // Just inside the limit: at equality round-off can push |theta| past 1.
                    const double tau = rep.tau_limit ? (1.0 - 1e-9) * *rep.tau_limit : 10.0;
                    const long half = static_cast<long>(n) / 2;
                    for (long l = -half; l < half; ++l) {
                        const auto a = amplification_factor({sigma, l, n, g.spacing(), tau}, sch);
                        EXPECT_LE(a.xi_modulus, 1.0 + 1e-12);
                    }
                }
            }
        }
    }
}
