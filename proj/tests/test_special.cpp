#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "klsum/characters.hpp"
#include "klsum/lfunctions.hpp"
#include "klsum/quadrature.hpp"
#include "klsum/special.hpp"

using namespace klsum;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_gap(cplx got, cplx want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

} // namespace

TEST_CASE("adaptive quadrature on polynomial and analytic integrands") {
    for (int k = 0; k <= 13; ++k) {
        auto f = [&](double x) { return std::pow(x, k); };
        const QuadResult r = integrate(f, 0.0, 1.0);
        CHECK(std::abs(r.value.real() - 1.0 / (k + 1)) < 1e-15);
        CHECK(std::abs(r.value.imag()) < 1e-18);
        CHECK(r.error >= 0.0);
        CHECK(r.evaluations > 0);
    }

    const QuadResult e = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(std::abs(e.value.real() - (std::exp(1.0) - 1.0)) < 1e-13);

    const QuadResult osc = integrate([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0);
    CHECK(std::abs(osc.value.real() - std::sin(40.0) / 40.0) < 1e-12);

    const QuadResult cx =
        integrate([](double x) { return std::exp(cplx(0.0, x)); }, 0.0, 1.0);
    const cplx want = (std::exp(cplx(0.0, 1.0)) - 1.0) / cplx(0.0, 1.0);
    CHECK(std::abs(cx.value - want) < 1e-13);

    const QuadResult zero = integrate([](double x) { return x; }, 2.0, 2.0);
    CHECK(zero.value == cplx(0.0, 0.0));

    CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0), Error);
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, -1.0), Error);
}

TEST_CASE("complex gamma against fixed references") {
    // Reference values computed with 50-digit arbitrary-precision arithmetic.
    CHECK(rel_gap(gamma_cplx(cplx(0.5, 3.0)),
                  cplx(0.0214456705524306461, 0.00686536483726167791)) < 5e-11);
    CHECK(rel_gap(gamma_cplx(cplx(1.0, 1.0)),
                  cplx(0.498015668118356043, -0.154949828301810685)) < 5e-12);
    CHECK(rel_gap(gamma_cplx(cplx(1.0, 2.0)),
                  cplx(0.151904002670036137, 0.019804880161854982)) < 5e-12);
    CHECK(rel_gap(gamma_cplx(cplx(0.5, 0.0)), cplx(1.77245385090551603, 0.0)) < 5e-13);
    CHECK(rel_gap(gamma_cplx(cplx(5.0, 0.0)), cplx(24.0, 0.0)) < 5e-13);
    CHECK(rel_gap(gamma_cplx(cplx(1.0, 32.0)),
                  cplx(-8.63330679288553682e-22, -1.9112763024947603e-21)) < 5e-10);
    // Reflection region.
    CHECK(rel_gap(gamma_cplx(cplx(0.25, -0.75)),
                  cplx(0.193336665450261838, 0.821451590707461649)) < 5e-12);
    CHECK(rel_gap(gamma_cplx(cplx(-0.5, 0.0)),
                  cplx(-2.0 * std::sqrt(kPi), 0.0)) < 5e-12);
    // Poles at non-positive integers.
    CHECK_THROWS_AS(gamma_cplx(cplx(0.0, 0.0)), Error);
    CHECK_THROWS_AS(gamma_cplx(cplx(-3.0, 0.0)), Error);
}

TEST_CASE("digamma and integer polygamma") {
    CHECK(std::abs(digamma(1.0 / 3.0) - (-3.13203378002080632)) < 1e-13);
    CHECK(std::abs(digamma(0.4) - (-2.56138454458511615)) < 1e-13);
    CHECK(std::abs(digamma(1.0) - (-0.577215664901532861)) < 1e-14);
    CHECK(std::abs(digamma(1.0 / 7.0) - (-7.3639802422243432)) < 1e-13);
    CHECK(std::abs(digamma(5.0 / 7.0) - (-1.18018144033949875)) < 1e-13);
    CHECK_THROWS_AS(digamma(0.0), Error);
    CHECK_THROWS_AS(digamma(-2.5), Error);

    for (int n = 1; n <= 20; ++n)
        CHECK(std::abs(digamma_int(n) - digamma(double(n))) < 1e-13);

    const double tri[6] = {1.64493406684822644, 0.644934066848226436, 0.394934066848226436,
                           0.283822955737115325, 0.221322955737115325, 0.181322955737115325};
    const double tetra[6] = {-2.40411380631918857, -0.404113806319188571,
                             -0.154113806319188571, -0.0800397322451144967,
                             -0.0487897322451144967, -0.0327897322451144967};
    for (int n = 1; n <= 6; ++n) {
        CHECK(std::abs(trigamma_int(n) - tri[n - 1]) < 1e-14);
        CHECK(std::abs(tetragamma_int(n) - tetra[n - 1]) < 1e-14);
    }
    CHECK(std::abs(pentagamma_int(1) - std::pow(kPi, 4) / 15.0) < 1e-13);
    CHECK(std::abs(pentagamma_int(3) - 0.11893940226682915) < 1e-14);
    CHECK_THROWS_AS(digamma_int(0), Error);
    CHECK_THROWS_AS(trigamma_int(0), Error);
    CHECK_THROWS_AS(tetragamma_int(-1), Error);
    CHECK_THROWS_AS(pentagamma_int(0), Error);
}

TEST_CASE("Hurwitz and Riemann zeta against fixed references") {
    CHECK(std::abs(riemann_zeta(cplx(2.0, 0.0)).real() - kPi * kPi / 6.0) < 1e-13);
    CHECK(rel_gap(riemann_zeta(cplx(3.0, 0.0)), cplx(1.20205690315959429, 0.0)) < 1e-13);
    CHECK(rel_gap(riemann_zeta(cplx(1.0, 2.0)),
                  cplx(0.598165569762381737, -0.35185474521784529)) < 1e-12);
    CHECK(rel_gap(hurwitz_zeta(cplx(2.0, 0.0), 1.0 / 3.0),
                  cplx(10.0955971254270941, 0.0)) < 1e-13);
    CHECK(rel_gap(hurwitz_zeta(cplx(1.0, 2.0), 0.4),
                  cplx(-0.592514924608282332, 1.83426569779917771)) < 1e-12);
    CHECK(std::abs(hurwitz_zeta(cplx(1.0, 32.0), 3.0 / 7.0) -
                   cplx(-1.53457695744722867, 2.679341171025208)) < 1e-11);
    CHECK(rel_gap(hurwitz_zeta(cplx(1.5, 0.0), 0.5),
                  cplx(4.77653794755483325, 0.0)) < 1e-13);
    CHECK(rel_gap(hurwitz_zeta(cplx(1.0, -2.0), 0.25),
                  cplx(-3.48856762881013554, -0.882103019232468364)) < 1e-12);
    CHECK_THROWS_AS(hurwitz_zeta(cplx(1.0, 0.0), 0.5), Error);
    CHECK_THROWS_AS(hurwitz_zeta(cplx(2.0, 0.0), 0.0), Error);
    CHECK_THROWS_AS(hurwitz_zeta(cplx(2.0, 0.0), -1.0), Error);
}

TEST_CASE("Bessel power series and Neumann series against fixed references") {
    // Real integer orders, cross-checked against the standard library too.
    CHECK(std::abs(bessel_j_power_series(cplx(0.0, 0.0), 1.0).real() -
                   0.765197686557966551) < 1e-14);
    CHECK(std::abs(bessel_j_power_series(cplx(1.0, 0.0), 2.5).real() -
                   0.497094102464274038) < 1e-14);
    CHECK(std::abs(bessel_j_power_series(cplx(0.0, 0.0), 11.0).real() -
                   (-0.171190300407196088)) < 1e-12);
    CHECK(std::abs(bessel_j_power_series(cplx(5.0, 0.0), 2.0).real() -
                   0.00703962975587168548) < 1e-16);
    CHECK(std::abs(bessel_j_power_series(cplx(11.0, 0.0), 7.0).real() -
                   0.00833476140768781455) < 1e-15);
    CHECK(rel_gap(bessel_j_power_series(cplx(39.0, 0.0), 1.0),
                  cplx(8.86197549592660885e-59, 0.0)) < 1e-12);
    for (double x : {0.3, 1.0, 4.0, 9.0})
        for (int n : {0, 1, 2, 7})
            CHECK(std::abs(bessel_j_power_series(cplx(double(n), 0.0), x).real() -
                           std::cyl_bessel_j(double(n), x)) < 1e-12);

    // Real non-integer negative orders.
    CHECK(rel_gap(bessel_j_power_series(cplx(-0.21875, 0.0), 2.0),
                  cplx(0.0328571184331904677, 0.0)) < 1e-12);
    CHECK(rel_gap(bessel_j_power_series(cplx(-0.9998, 0.0), 1.0),
                  cplx(-0.439652113297321684, 0.0)) < 1e-12);

    // Purely imaginary orders 2it.
    CHECK(rel_gap(bessel_j_power_series(cplx(0.0, 2.0), 3.0),
                  cplx(0.0921478061389018138, 4.85850832118096929)) < 1e-12);
    CHECK(rel_gap(bessel_j_power_series(cplx(0.0, 6.0), 1.0),
                  cplx(-1958.29969189370526, 429.12881619757019)) < 1e-12);
    CHECK(rel_gap(bessel_j_power_series(cplx(0.0, 1.0), 6.0),
                  cplx(0.315398958146811138, -0.6848814787725203)) < 1e-12);
    CHECK(rel_gap(bessel_j_power_series(cplx(0.0, 20.0), 2.0),
                  cplx(-3844161509570.90575, -757832084732.668133)) < 1e-11);

    CHECK_THROWS_AS(bessel_j_power_series(cplx(0.0, 0.0), 0.0), Error);

    CHECK(std::abs(neumann_y0_series(0.5) - (-0.444518733506706557)) < 1e-13);
    CHECK(std::abs(neumann_y0_series(2.0) - 0.51037567264974512) < 1e-13);
    CHECK(std::abs(neumann_y0_series(9.0) - 0.249936698285024676) < 1e-11);
    for (double x : {0.25, 1.0, 3.0, 6.0, 11.0})
        CHECK(std::abs(neumann_y0_series(x) - std::cyl_neumann(0.0, x)) < 1e-11);
}

TEST_CASE("Dirichlet L-values at primitive characters") {
    auto g4 = CharacterGroup::get(4);
    DirichletCharacter chi4 = g4->character(0);
    for (u32 i = 0; i < g4->num_characters(); ++i)
        if (!g4->character(i).is_principal()) chi4 = g4->character(i);
    REQUIRE(chi4.is_primitive());
    CHECK(rel_gap(dirichlet_l(cplx(1.0, 0.0), chi4), cplx(kPi / 4.0, 0.0)) < 1e-12);
    CHECK(rel_gap(dirichlet_l(cplx(2.0, 0.0), chi4),
                  cplx(0.915965594177219015, 0.0)) < 1e-12);

    auto g3 = CharacterGroup::get(3);
    DirichletCharacter chi3 = g3->character(0);
    for (u32 i = 0; i < g3->num_characters(); ++i)
        if (!g3->character(i).is_principal()) chi3 = g3->character(i);
    REQUIRE(chi3.is_primitive());
    CHECK(rel_gap(dirichlet_l(cplx(1.0, 0.0), chi3),
                  cplx(kPi / (3.0 * std::sqrt(3.0)), 0.0)) < 1e-12);

    // Modulus 1: the Riemann zeta function.
    DirichletCharacter one = CharacterGroup::get(1)->character(0);
    CHECK(rel_gap(dirichlet_l(cplx(2.0, 0.0), one), cplx(kPi * kPi / 6.0, 0.0)) < 1e-13);
    CHECK(rel_gap(dirichlet_l(cplx(1.0, 2.0), one),
                  cplx(0.598165569762381737, -0.35185474521784529)) < 1e-12);
    CHECK_THROWS_AS(dirichlet_l(cplx(1.0, 0.0), one), Error);

    // Imprimitive input is rejected.
    auto g8 = CharacterGroup::get(8);
    bool threw = false;
    for (u32 i = 0; i < g8->num_characters(); ++i) {
        const DirichletCharacter chi = g8->character(i);
        if (chi.is_primitive()) continue;
        try {
            dirichlet_l(cplx(2.0, 0.0), chi);
        } catch (const Error& e) {
            threw = (e.code() == errc::not_primitive);
        }
        break;
    }
    CHECK(threw);
}

TEST_CASE("restricted L reciprocal and truncated Euler product agree") {
    DirichletCharacter one = CharacterGroup::get(1)->character(0);
    // 1/zeta^(6)(2) = (1 - 1/4)(1 - 1/9) / zeta(2)... inverted restriction:
    // zeta^(6)(2) = zeta(2) (1 - 2^-2)(1 - 3^-2) = (pi^2/6)(3/4)(8/9).
    const cplx inv = l_restricted_inverse(cplx(2.0, 0.0), one, 6);
    const double want = 1.0 / (kPi * kPi / 6.0 * 0.75 * (8.0 / 9.0));
    CHECK(std::abs(inv.real() - want) < 1e-12);
    CHECK(std::abs(inv.imag()) < 1e-12);

    // Non-principal character mod 3 restricted at Q = 6:
    // L^(6)(1, chi3) = L(1, chi3) / (1 - chi3(2)/2) = (pi/(3 sqrt 3)) / (3/2).
    auto g3 = CharacterGroup::get(3);
    DirichletCharacter chi3 = g3->character(0);
    for (u32 i = 0; i < g3->num_characters(); ++i)
        if (!g3->character(i).is_principal()) chi3 = g3->character(i);
    const cplx inv3 = l_restricted_inverse(cplx(1.0, 0.0), chi3, 6);
    CHECK(std::abs(inv3.real() - 2.0 * std::sqrt(3.0) / kPi) < 1e-12);

    // Principal character at s = 1: the reciprocal extends by zero.
    auto g5 = CharacterGroup::get(5);
    const DirichletCharacter prin5 = principal_character(5);
    CHECK(l_restricted_inverse(cplx(1.0, 0.0), prin5, 5) == cplx(0.0, 0.0));

    // Cross-check against the truncated Euler product of L^(Q) itself.
    for (u32 i = 0; i < g5->num_characters(); ++i) {
        const DirichletCharacter chi = g5->character(i);
        const PartialL trunc = partial_l(cplx(2.0, 0.0), chi, 10, 100000);
        const cplx inv5 = l_restricted_inverse(cplx(2.0, 0.0), chi, 10);
        CHECK(std::abs(1.0 / inv5 - trunc.value) <
              1e-5 + 10.0 * trunc.error_estimate);
    }

    // The character modulus must divide into the prime support of Q.
    CHECK_THROWS_AS(l_restricted_inverse(cplx(2.0, 0.0), chi3, 10), Error);
    CHECK_THROWS_AS(l_restricted_inverse(cplx(2.0, 0.0), one, 0), Error);
}
