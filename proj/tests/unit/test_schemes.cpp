#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

#include "cnlse/errors.hpp"
#include "cnlse/schemes.hpp"

using namespace cnlse;
using Real50 = boost::multiprecision::cpp_bin_float_50;

namespace {

FieldState sech_state(const Grid& g, double amp_u, double amp_v, double shift_v = 0.0) {
    FieldState s{Field(g.n_space()), Field(g.n_space()), 0.0};
    for (std::size_t i = 0; i < g.n_space(); ++i) {
        const double x = g.node(i);
        s.u[i] = amp_u / std::cosh(x);
        s.v[i] = amp_v / std::cosh(x - shift_v);
    }
    return s;
}

FieldState random_state(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> dist;
    FieldState s{Field(n), Field(n), 0.0};
    for (auto& z : s.u) z = {dist(rng), dist(rng)};
    for (auto& z : s.v) z = {dist(rng), dist(rng)};
    return s;
}

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const Field& a) {
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
}

/// Complex number over 50-digit reals, just enough arithmetic for the
/// explicit update formula.
struct C50 {
    Real50 re, im;
    C50 operator+(const C50& o) const { return {re + o.re, im + o.im}; }
    C50 operator-(const C50& o) const { return {re - o.re, im - o.im}; }
    C50 operator*(const C50& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    C50 scale(const Real50& s) const { return {re * s, im * s}; }
    Real50 norm() const { return re * re + im * im; }
};

C50 to50(Complex z) { return {Real50(z.real()), Real50(z.imag())}; }

/// One explicit update at node i evaluated in 50-digit arithmetic:
/// W + i tau [ i s sigma D1 W + k D2 W + g W ].
C50 explicit_node_oracle(const Field& w, const Field& other, std::size_t i, double sign,
                         const Physics& p, double self, double cross, const Grid& g) {
    const C50 zero{0, 0};
    const C50 prev = i > 0 ? to50(w[i - 1]) : zero;
    const C50 next = i + 1 < w.size() ? to50(w[i + 1]) : zero;
    const C50 here = to50(w[i]);
    const Real50 h(g.h()), tau(g.tau());
    const C50 iu{0, 1};
    const C50 d1 = (next - prev).scale(Real50(1) / (2 * h));
    const C50 d2 = (next - here.scale(Real50(2)) + prev).scale(Real50(1) / (h * h));
    const Real50 g_here = Real50(self) * here.norm() + Real50(cross) * to50(other[i]).norm();
    const C50 bracket =
        (iu * d1).scale(Real50(sign * p.sigma)) + d2.scale(Real50(p.k)) + here.scale(g_here);
    return here + (iu * bracket).scale(tau);
}

/// Residual of the six-point equations for a candidate W^{n+1}, relative to
/// the size of W^{n+1}; computed independently of the solver.
double six_point_residual(const FieldState& w0, const FieldState& w1, const Physics& p,
                          const Grid& g) {
    const std::size_t n = w0.size();
    const double h = g.h(), tau = g.tau();
    const Complex I(0, 1);
    double res = 0.0, size = 0.0;
    for (int mode = 0; mode < 2; ++mode) {
        const Field& a0 = mode == 0 ? w0.u : w0.v;
        const Field& a1 = mode == 0 ? w1.u : w1.v;
        const Field& b0 = mode == 0 ? w0.v : w0.u;
        const Field& b1 = mode == 0 ? w1.v : w1.u;
        const double sign = mode == 0 ? 1.0 : -1.0;
        const double self = mode == 0 ? p.a : p.c;
        const double cross = mode == 0 ? p.b : p.d;
        auto half = [&](const Field& x0, const Field& x1, std::ptrdiff_t j) {
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) return Complex{};
            return 0.5 * (x0[j] + x1[j]);
        };
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = static_cast<std::ptrdiff_t>(i);
            const Complex m = half(a0, a1, j);
            const Complex l = half(a0, a1, j - 1);
            const Complex r = half(a0, a1, j + 1);
            const double gm = self * std::norm(m) + cross * std::norm(half(b0, b1, j));
            const Complex rhs = I * sign * p.sigma * (r - l) / (2 * h) +
                                p.k * (r - 2.0 * m + l) / (h * h) + gm * m;
            res = std::max(res, std::abs(a1[i] - a0[i] - I * tau * rhs));
            size = std::max(size, std::abs(a1[i]));
        }
    }
    return res / size;
}

const Physics kTable3{0.3, 0.5, 1.0, 0.2, 1.0, 1.6};

}  // namespace

TEST_CASE("explicit step with zero coefficients is the identity") {
    std::mt19937_64 rng(1);
    const Grid g(-5.0, 5.0, 40, 0.01, 1);
    const FieldState s = random_state(rng, 40);
    const FieldState next = explicit_step(s, Physics{}, g);
    CHECK(next.u == s.u);
    CHECK(next.v == s.v);
    CHECK(next.time == doctest::Approx(0.01));
}

TEST_CASE("explicit step keeps the zero field") {
    const Grid g(-5.0, 5.0, 40, 0.01, 1);
    const FieldState zero{Field(40), Field(40), 0.0};
    const FieldState next = explicit_step(zero, kTable3, g);
    CHECK(max_abs(next.u) == 0.0);
    CHECK(max_abs(next.v) == 0.0);
}

TEST_CASE("explicit update at x = 0 matches a 50-digit evaluation") {
    const Grid g(-10.0, 10.0, 199, 1e-4, 1);
    REQUIRE(std::abs(g.node(99)) < 1e-12);
    const Physics p{0.0, 0.5, 1.0, 0.0, 0.0, 0.0};
    const FieldState s = sech_state(g, 1.0, 0.0);
    const FieldState next = explicit_step(s, p, g);
    const C50 expected = explicit_node_oracle(s.u, s.v, 99, +1.0, p, p.a, p.b, g);
    CHECK(std::abs(next.u[99].real() - expected.re.convert_to<double>()) <= 1e-15);
    CHECK(std::abs(next.u[99].imag() - expected.im.convert_to<double>()) <= 1e-15);
}

TEST_CASE("explicit update with every term active matches a 50-digit evaluation") {
    std::mt19937_64 rng(3);
    const Grid g(-1.0, 1.0, 9, 0.003, 1);
    const FieldState s = random_state(rng, 9);
    const FieldState next = explicit_step(s, kTable3, g);
    for (std::size_t i = 0; i < 9; ++i) {
        const C50 eu = explicit_node_oracle(s.u, s.v, i, +1.0, kTable3, kTable3.a, kTable3.b, g);
        const C50 ev = explicit_node_oracle(s.v, s.u, i, -1.0, kTable3, kTable3.c, kTable3.d, g);
        CHECK(std::abs(next.u[i] - Complex(eu.re.convert_to<double>(), eu.im.convert_to<double>())) <=
              1e-13);
        CHECK(std::abs(next.v[i] - Complex(ev.re.convert_to<double>(), ev.im.convert_to<double>())) <=
              1e-13);
    }
}

TEST_CASE("explicit blow-up is reported with its step index") {
    const Grid g(-1.0, 1.0, 9, 10.0, 1);
    FieldState s{Field(9, 1e100), Field(9), 0.0};
    ExplicitStepper stepper(Physics{0, 0, 1, 0, 0, 0}, g);
    try {
        for (std::size_t step = 1; step <= 10; ++step) stepper.advance(s, step);
        FAIL("expected a blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.step() >= 1);
        CHECK(e.step() <= 3);
    }
}

TEST_CASE("steps reject malformed input") {
    const Grid g(-1.0, 1.0, 9, 0.1, 1);
    FieldState bad{Field(9), Field(9), 0.0};
    bad.u[3] = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(explicit_step(bad, kTable3, g), InvalidStateError);
    CHECK_THROWS_AS(implicit_step(bad, kTable3, g, {}), InvalidStateError);
    const FieldState short_state{Field(8), Field(8), 0.0};
    CHECK_THROWS_AS(explicit_step(short_state, kTable3, g), InvalidStateError);
    CHECK_THROWS_AS(implicit_step(short_state, kTable3, g, {}), InvalidStateError);
}

TEST_CASE("iteration policy validation and names") {
    CHECK_NOTHROW(IterationPolicy{}.validate());
    CHECK_THROWS_AS((IterationPolicy{0.0, 25, 10, IterationMethod::Newton}.validate()), ValidationError);
    CHECK_THROWS_AS((IterationPolicy{1e-12, 0, 10, IterationMethod::Newton}.validate()), ValidationError);
    CHECK_THROWS_AS((IterationPolicy{1e-12, 25, 1.0, IterationMethod::Newton}.validate()), ValidationError);
    CHECK(parse_scheme("explicit") == Scheme::Explicit);
    CHECK(parse_iteration_method(to_string(IterationMethod::Picard)) == IterationMethod::Picard);
    CHECK_THROWS_AS(parse_scheme("euler"), ValidationError);
}

TEST_CASE("implicit step with zero coefficients is the identity in one solve") {
    std::mt19937_64 rng(4);
    const Grid g(-5.0, 5.0, 30, 0.01, 1);
    const FieldState s = random_state(rng, 30);
    for (const auto method : {IterationMethod::Newton, IterationMethod::Picard}) {
        IterationPolicy policy;
        policy.method = method;
        const auto [next, report] = implicit_step(s, Physics{}, g, policy);
        CHECK(report.iterations_used == 1);
        CHECK(max_diff(next.u, s.u) <= 1e-15);
        CHECK(max_diff(next.v, s.v) <= 1e-15);
        CHECK(next.time == doctest::Approx(0.01));
    }
}

TEST_CASE("linear Crank-Nicolson step conserves both energies") {
    std::mt19937_64 rng(8);
    const Grid g(-10.0, 10.0, 99, 0.05, 1);
    const FieldState s = random_state(rng, 99);
    for (const Physics p : {Physics{0, 0.5, 0, 0, 0, 0}, Physics{0.7, 0.5, 0, 0, 0, 0}}) {
        for (const auto method : {IterationMethod::Newton, IterationMethod::Picard}) {
            IterationPolicy policy;
            policy.method = method;
            const auto [next, report] = implicit_step(s, p, g, policy);
            CHECK(invariants(next).i_u == doctest::Approx(invariants(s).i_u).epsilon(1e-12));
            CHECK(invariants(next).i_v == doctest::Approx(invariants(s).i_v).epsilon(1e-12));
        }
    }
}

TEST_CASE("Newton needs two to four solves on the asymmetric-coupling problem") {
    const Grid g(-30.0, 30.0, 299, 0.02, 1);
    const FieldState s = sech_state(g, 1.5, 1.5);
    const auto [next, report] = implicit_step(s, kTable3, g, IterationPolicy{});
    CHECK(report.iterations_used >= 2);
    CHECK(report.iterations_used <= 4);
    CHECK(report.residual <= 1e-12);
    CHECK(six_point_residual(s, next, kTable3, g) <= 1e-12);
}

TEST_CASE("Picard and Newton converge to the same six-point solution") {
    std::mt19937_64 rng(12);
    const Grid g(-4.0, 4.0, 60, 0.01, 1);
    const FieldState s = random_state(rng, 60);
    IterationPolicy picard;
    picard.method = IterationMethod::Picard;
    const auto [a, ra] = implicit_step(s, kTable3, g, IterationPolicy{});
    const auto [b, rb] = implicit_step(s, kTable3, g, picard);
    CHECK(ra.iterations_used <= rb.iterations_used);
    CHECK(max_diff(a.u, b.u) <= 1e-11 * max_abs(a.u));
    CHECK(max_diff(a.v, b.v) <= 1e-11 * max_abs(a.v));
    CHECK(six_point_residual(s, a, kTable3, g) <= 1e-12);
    CHECK(six_point_residual(s, b, kTable3, g) <= 1e-11);
    // The frozen-coefficient iterates conserve each energy exactly, so the
    // converged Picard step does too.
    CHECK(invariants(b).i_u == doctest::Approx(invariants(s).i_u).epsilon(1e-12));
}

TEST_CASE("iteration failure is reported") {
    const Grid g(-5.0, 5.0, 49, 0.02, 1);
    const FieldState s = sech_state(g, 1.5, 1.5);
    IterationPolicy one;
    one.max_iters = 1;
    CHECK_THROWS_AS(implicit_step(s, kTable3, g, one), IterationFailureError);

    // A frozen-coefficient sweep whose contraction factor tau*g is far above
    // one cannot converge.
    IterationPolicy picard;
    picard.method = IterationMethod::Picard;
    const Grid coarse(-5.0, 5.0, 49, 5.0, 1);
    const FieldState big = sech_state(coarse, 4.0, 4.0);
    try {
        (void)implicit_step(big, kTable3, coarse, picard);
        FAIL("expected iteration failure");
    } catch (const IterationFailureError& e) {
        CHECK(e.step() == 1);
        CHECK(e.iterations() >= 1);
    }
}

TEST_CASE("both steps commute with a global phase rotation") {
    std::mt19937_64 rng(21);
    const Grid g(-4.0, 4.0, 50, 0.002, 1);
    const FieldState s = random_state(rng, 50);
    const Complex phase = std::polar(1.0, 0.8);
    FieldState r = s;
    for (auto& z : r.u) z *= phase;
    for (auto& z : r.v) z *= phase;

    auto check = [&](const FieldState& a, const FieldState& b) {
        Field au = a.u, av = a.v;
        for (auto& z : au) z *= phase;
        for (auto& z : av) z *= phase;
        CHECK(max_diff(au, b.u) <= 1e-12 * max_abs(au));
        CHECK(max_diff(av, b.v) <= 1e-12 * max_abs(av));
    };
    check(explicit_step(s, kTable3, g), explicit_step(r, kTable3, g));
    check(implicit_step(s, kTable3, g, {}).first, implicit_step(r, kTable3, g, {}).first);
}

TEST_CASE("even data stays even when sigma = 0") {
    const Grid g(-15.0, 15.0, 149, 0.001, 1);
    const Physics p{0.0, 0.5, 1.0, 0.2, 1.0, 1.6};
    for (const Scheme scheme : {Scheme::Explicit, Scheme::Implicit}) {
        FieldState s = sech_state(g, 1.5, 1.2);
        for (int step = 0; step < 50; ++step) {
            s = scheme == Scheme::Explicit ? explicit_step(s, p, g) : implicit_step(s, p, g, {}).first;
        }
        const std::size_t n = s.size();
        double asym = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            asym = std::max(asym, std::abs(s.u[i] - s.u[n - 1 - i]));
            asym = std::max(asym, std::abs(s.v[i] - s.v[n - 1 - i]));
        }
        CHECK(asym <= 1e-10);
    }
}

TEST_CASE("reusable steppers match the one-shot functions") {
    const Grid g(-10.0, 10.0, 99, 0.01, 1);
    const FieldState s = sech_state(g, 1.0, 0.5, 1.0);
    FieldState a = s;
    ExplicitStepper e(kTable3, g);
    e.advance(a, 1);
    CHECK(a == explicit_step(s, kTable3, g));

    FieldState b = s;
    ImplicitStepper i(kTable3, g, {});
    const StepReport rep = i.advance(b, 1);
    const auto [c, rc] = implicit_step(s, kTable3, g, {});
    CHECK(b == c);
    CHECK(rep.iterations_used == rc.iterations_used);
}
