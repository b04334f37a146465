#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cnlse/analysis.hpp"
#include "cnlse/errors.hpp"
#include "cnlse/oracles.hpp"
#include "cnlse/schemes.hpp"
#include "pde_residual.hpp"

using namespace cnlse;
using cnlse::testing::pde_residual;

namespace {

FieldState sech_state(const Grid& g, double amp_u, double amp_v) {
    FieldState s{Field(g.n_space()), Field(g.n_space()), 0.0};
    for (std::size_t i = 0; i < g.n_space(); ++i) {
        s.u[i] = amp_u / std::cosh(g.node(i));
        s.v[i] = amp_v / std::cosh(g.node(i));
    }
    return s;
}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

TEST_CASE("rho by direct substitution") {
    const Grid g(0.0, 1.5, 2, 0.1, 1);  // h = 0.5
    CHECK(stability_rho(Physics{0, 0, 1, 0, 0, 1}, g, {1.0, 0.0}) == doctest::Approx(4.0));
    CHECK(stability_rho(Physics{1, 0, 0, 0, 0, 0}, g, {0.0, 0.0}) == doctest::Approx(8.0));
    // Each nonlinear pair enters through its larger member.
    CHECK(stability_rho(Physics{0, 0, 1, 3, 2, 5}, g, {1.0, 2.0}) ==
          doctest::Approx(4.0 * 5 * 1 + 4.0 * 3 * 2));
}

TEST_CASE("rho for the Manakov setup straddles the threshold across the step range") {
    const Grid g(-50.0, 50.0, 999, 15.0 / 10000, 10000);
    const Physics p{0, 1.0, 1, 1, 1, 1};
    const FieldState s = sech_state(g, 1.0, 1.0);
    const InvariantPair inv = invariants(s);
    // sum sech^2(x_i) = (1/h) * integral sech^2 = 20 to spectral accuracy.
    CHECK(inv.i_u == doctest::Approx(20.0).epsilon(1e-10));
    const double rho = stability_rho(p, g, inv);
    CHECK(rho == doctest::Approx(16.0 * p.k / (g.h() * g.h()) + 160.0).epsilon(1e-10));

    const auto coarse = stability_budget(p, g, inv);
    const auto fine = stability_budget(p, g.with_time(15.0 / 1000000, 1000000), inv);
    CHECK(coarse.verdict == Verdict::UnstableRegime);
    CHECK(fine.verdict == Verdict::StableRegime);
}

TEST_CASE("rho is monotone in every coefficient and invariant and antitone in h") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Physics p{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        const InvariantPair inv{10 * u(rng), 10 * u(rng)};
        const Grid g(-10.0, 10.0, 50 + trial, 0.01, 1);
        const double base = stability_rho(p, g, inv);
        const double bump = 0.1 + u(rng);
        for (int field = 0; field < 8; ++field) {
            Physics q = p;
            InvariantPair j = inv;
            double* targets[] = {&q.sigma, &q.k, &q.a, &q.b, &q.c, &q.d, &j.i_u, &j.i_v};
            *targets[field] += bump;
            CHECK(stability_rho(q, g, j) >= base);
        }
        const Grid coarser(-10.0, 10.0, 40 + trial, 0.01, 1);
        CHECK(stability_rho(p, coarser, inv) <= base);
    }
}

TEST_CASE("stability budget invariants") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Physics p{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        const InvariantPair inv{10 * u(rng), 10 * u(rng)};
        const Grid g(-10.0, 10.0, 99, 1e-4 * (1 + 100 * u(rng)), 1);
        const double threshold = 0.05 + u(rng);
        const StabilityBudget b = stability_budget(p, g, inv, threshold);
        CHECK(b.rho_tau == doctest::Approx(b.rho * g.tau()).epsilon(1e-14));
        CHECK((b.verdict == Verdict::UnstableRegime) == (b.rho_tau > threshold));
        CHECK(b.rho * b.recommended_tau <= threshold * (1 + 1e-12));
        CHECK(b.rho * b.recommended_tau == doctest::Approx(threshold).epsilon(1e-12));
    }
    const StabilityBudget zero = stability_budget(Physics{}, Grid(0, 1, 3, 0.1, 1), {0, 0});
    CHECK(zero.rho == 0.0);
    CHECK(zero.verdict == Verdict::StableRegime);
    CHECK(std::isinf(zero.recommended_tau));
    CHECK_THROWS_AS(stability_budget(Physics{}, Grid(0, 1, 3, 0.1, 1), {0, 0}, 0.0), ValidationError);

    const Grid half(0.0, 1.5, 2, 0.1, 1);  // h = 0.5
    const StabilityBudget b = stability_budget(Physics{1, 0, 0, 0, 0, 0}, half, {0, 0});
    CHECK(b.rho == doctest::Approx(8.0));
    CHECK(b.rho_tau == doctest::Approx(0.8));
    CHECK(b.verdict == Verdict::UnstableRegime);
    CHECK(to_string(b.verdict) == "unstable-regime");
}

TEST_CASE("element bounds") {
    const Grid g(-1.0, 1.0, 19, 0.01, 1);  // h = 0.1
    const FieldState zero{Field(19), Field(19), 0.0};
    const ElementBounds none = element_bounds(Physics{}, g, zero);
    CHECK(none.t11 == 1.0);
    CHECK(none.t44 == 1.0);
    CHECK(none.t12 == 0.0);
    CHECK(none.t43 == 0.0);

    const ElementBounds conv = element_bounds(Physics{1, 0, 0, 0, 0, 0}, g, zero);
    CHECK(conv.t11 == doctest::Approx(1.1));
    CHECK(conv.t33 == doctest::Approx(1.1));
    CHECK(conv.t12 == 0.0);

    // Unequal-coupling coefficients on sech fields, re-evaluated here term by term.
    const Grid g2(-30.0, 30.0, 299, 0.02, 1);
    const Physics p{0, 0.5, 1, 1.0 / 3, 1, 1.0 / 3};
    const FieldState s = sech_state(g2, 1.2, 1.4);
    double mu = 0, mv = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        mu = std::max(mu, std::norm(s.u[i]));
        mv = std::max(mv, std::norm(s.v[i]));
    }
    const double tau = 0.02, h = 0.2;
    const ElementBounds eb = element_bounds(p, g2, s);
    CHECK(eb.t11 == doctest::Approx(1.0));
    CHECK(eb.t12 == doctest::Approx(4 * tau * 0.5 / (h * h) + tau * 1 * mu + tau * (1.0 / 3) * mv));
    CHECK(eb.t21 == eb.t12);
    CHECK(eb.t34 == doctest::Approx(4 * tau * 0.5 / (h * h) + tau * 1 * mv + tau * (1.0 / 3) * mu));
    CHECK(eb.t43 == eb.t34);
    CHECK(eb.t12 >= 4 * tau * 0.5 / (h * h));
}

TEST_CASE("matrix norm bound") {
    const Grid g(0.0, 1.0, 9, 0.1, 1);
    CHECK(matrix_norm_bound(Physics{}, g, {0, 0}) == doctest::Approx(4.0));
    CHECK(matrix_norm_bound(Physics{0, 0, 1, 1, 1, 1}, g, {1, 1}) == doctest::Approx(4.8));

    const Grid t3(-30.0, 30.0, 299, 0.02, 2000);
    const Physics p{0.3, 0.5, 1, 0.2, 1, 1.6};
    const InvariantPair inv = invariants(sech_state(t3, 1.5, 1.5));
    const double tau = 0.02, h = 0.2;
    const double expected = 4 + 4 * tau * 0.3 / h + 16 * tau * 0.5 / (h * h) +
                            2 * tau * (1 * inv.i_u + 0.2 * inv.i_v + 1.6 * inv.i_u + 1 * inv.i_v);
    CHECK(matrix_norm_bound(p, t3, inv) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("convergence residual Q") {
    const Physics p{0, 1, 1, 1, 1, 1};
    CHECK(convergence_q(p, {3, 1}, {0.5, 0.5}) == doctest::Approx(28.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        const InvariantPair s{u(rng), u(rng)};
        CHECK(convergence_q(Physics{0.1, 0.2, u(rng), u(rng), u(rng), u(rng)}, s, s) == 0.0);
    }
}

TEST_CASE("Q after 100 implicit steps obeys the Lipschitz bound") {
    const Grid g(-30.0, 30.0, 299, 0.02, 100);
    const Physics p{0.3, 0.5, 1, 0.2, 1, 1.6};
    FieldState s = sech_state(g, 1.5, 1.5);
    const InvariantPair start = invariants(s);
    ImplicitStepper stepper(p, g, {});
    for (std::size_t step = 1; step <= 100; ++step) stepper.advance(s, step);
    const InvariantPair end = invariants(s);

    const double m = 1.6;
    const double total0 = start.i_u + start.i_v;
    const double total1 = end.i_u + end.i_v;
    const double bound = 4 * m * 3 * std::sqrt(std::max(total0, total1)) * std::abs(total1 - total0);
    CHECK(convergence_q(p, end, start) <= bound);
    CHECK(convergence_q(p, end, start) <= 1e-9);
}

TEST_CASE("fundamental soliton values") {
    CHECK(std::abs(nls_fundamental_soliton(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(nls_fundamental_soliton(0, std::numbers::pi) - Complex(0, 1)) < 1e-15);
    for (double x : {-7.0, -1.3, 0.0, 0.4, 2.5, 30.0}) {
        for (double t : {0.0, 0.7, 5.0, 15.0}) {
            CHECK(std::abs(nls_fundamental_soliton(x, t)) == doctest::Approx(sech(x)).epsilon(1e-14));
        }
    }
}

TEST_CASE("bound state values") {
    CHECK(std::abs(nls_breather_a2(0, 0) - 2.0) < 1e-14);
    for (double x = -12.0; x <= 12.0; x += 0.37) {
        CHECK(std::abs(std::abs(nls_breather_a2(x, 0)) - 2 * sech(x)) < 1e-12);
        CHECK(std::abs(nls_breather_a2(x, 0) - 2 * sech(x)) < 1e-12);
        for (double t : {0.1, 0.9, 2.3}) {
            CHECK(std::abs(std::abs(nls_breather_a2(x, t + std::numbers::pi / 2)) -
                           std::abs(nls_breather_a2(x, t))) < 1e-12);
        }
    }
    // Far tails stay finite.
    CHECK(std::isfinite(std::abs(nls_breather_a2(400.0, 1.0))));
}

TEST_CASE("manakov soliton values and constraint") {
    const Physics p{0, 1, 1, 1, 1, 1};
    const ModeValues at0 = manakov_soliton(0, 0, 1.0, p);
    CHECK(std::abs(at0.u - 1.0) < 1e-15);
    CHECK(std::abs(at0.v - 1.0) < 1e-15);
    for (double x : {-3.0, 0.2, 4.0}) {
        CHECK(std::abs(manakov_soliton(x, 0, 1.0, p).u - sech(x)) < 1e-15);
        for (double t : {0.3, 7.0}) {
            CHECK(std::abs(manakov_soliton(x, t, 1.0, p).u) == doctest::Approx(sech(x)).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(manakov_soliton(0, 0, 1.0, Physics{0, 0.5, 1, 1, 1, 1}), UnsupportedParametersError);
    CHECK_THROWS_AS(manakov_soliton(0, 0, 1.0, Physics{0, 1, 1, 2, 1, 1}), UnsupportedParametersError);
    CHECK_THROWS_AS(manakov_soliton(0, 0, 1.0, Physics{0.1, 1, 1, 1, 1, 1}), UnsupportedParametersError);
    try {
        check_manakov_parameters(2.0, Physics{0, 1, 1, 1, 1, 1});
        FAIL("expected the constraint to be rejected");
    } catch (const UnsupportedParametersError& e) {
        CHECK(std::string(e.what()).find("requires k = 4") != std::string::npos);
    }
}

TEST_CASE("oracles satisfy their equations") {
    const PointOracle fundamental = [](double x, double t) {
        return ModeValues{nls_fundamental_soliton(x, t), {}};
    };
    const PointOracle breather = [](double x, double t) { return ModeValues{nls_breather_a2(x, t), {}}; };
    const Physics nls{0, 0.5, 1, 0, 0, 0};
    const Physics manakov_phys{0, 1, 1, 1, 1, 1};
    const PointOracle manakov = [&](double x, double t) {
        return manakov_soliton(x, t, 1.0, manakov_phys);
    };
    for (double x = -6.0; x <= 6.0; x += 0.7) {
        for (double t : {0.0, 0.35, 1.2, 3.9}) {
            CHECK(pde_residual(fundamental, nls, x, t).max() <= 1e-10);
            CHECK(pde_residual(breather, nls, x, t).max() <= 1e-8);
            CHECK(pde_residual(manakov, manakov_phys, x, t).max() <= 1e-10);
        }
    }
}

TEST_CASE("the residual test detects a wrong solution") {
    // sech(x) e^{it} solves neither equation.
    const PointOracle wrong = [](double x, double t) {
        return ModeValues{nls_fundamental_soliton(x, 2 * t), {}};
    };
    CHECK(pde_residual(wrong, Physics{0, 0.5, 1, 0, 0, 0}, 0.3, 1.0).max() > 1e-2);
}

TEST_CASE("error against an oracle") {
    const Grid g(-5.0, 5.0, 49, 0.1, 1);
    const PointOracle fundamental = [](double x, double t) {
        return ModeValues{nls_fundamental_soliton(x, t), {}};
    };
    FieldState exact = sample_oracle(fundamental, g, 0.3);
    const OracleError none = error_vs_oracle(exact, fundamental, g);
    CHECK(none.l2 == 0.0);
    CHECK(none.max == 0.0);

    const double eps = 1e-3;
    for (auto& z : exact.u) z += eps;
    const OracleError shifted = error_vs_oracle(exact, fundamental, g);
    CHECK(shifted.l2 == doctest::Approx(g.h() * eps * std::sqrt(49.0)).epsilon(1e-9));
    CHECK(shifted.max == doctest::Approx(eps).epsilon(1e-9));

    const FieldState wrong_shape{Field(3), Field(3), 0.0};
    CHECK_THROWS_AS(error_vs_oracle(wrong_shape, fundamental, g), InvalidStateError);
}
