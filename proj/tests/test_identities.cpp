#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <klsum/identities.hpp>

#include "helpers.hpp"

using namespace klsum;

namespace {

FiniteTestWeight random_weight(u64 lo, u64 hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    FiniteTestWeight h;
    for (u64 c = lo; c <= hi; ++c) h.values[c] = cplx{unif(rng), unif(rng)};
    return h;
}

} // namespace

TEST_CASE("smooth cutoff family basics") {
    auto f = SmoothCutoff::bump(1.0, 2.0);
    CHECK(f(0.5) == cplx{0.0, 0.0});
    CHECK(f(1.0) == cplx{0.0, 0.0});
    CHECK(f(2.0) == cplx{0.0, 0.0});
    CHECK(f(3.0) == cplx{0.0, 0.0});
    CHECK(f(1.5).real() == 1.0); // normalized peak at the midpoint
    CHECK(f(1.5).imag() == 0.0);
    CHECK(f(1.2).real() > 0.0);
    CHECK(f(1.2).real() < 1.0);
    CHECK(f(1.2).real() == f(1.8).real()); // symmetric envelope

    auto g = SmoothCutoff::modulated_bump(1.0, 2.0, 3.0);
    CHECK(std::abs(std::abs(g(1.3)) - f(1.3).real()) < 1e-15);
    CHECK(g(0.9) == cplx{0.0, 0.0});
    CHECK(f.tag() == "bump:1,2");
    CHECK(g.tag() == "modbump:1,2,3");

    CHECK_THROWS_AS(SmoothCutoff::bump(2.0, 1.0), Error);
    CHECK_THROWS_AS(SmoothCutoff::bump(0.0, 1.0), Error);
}

TEST_CASE("mobius sieve identity") {
    SECTION("trivial twist gives bitwise equal sides") {
        auto chi1 = principal_character(1);
        auto h = FiniteTestWeight::indicator_range(1, 40);
        auto rep = verify_mobius_identity(1, 1, chi1, 1, h);
        CHECK(rep.abs_error == 0.0);
        CHECK(rep.pass);
    }
    SECTION("nontrivial twist mod 3, indicator weight") {
        auto g3 = CharacterGroup::get(3);
        auto chi1 = g3->character(1);
        REQUIRE(chi1.is_primitive());
        auto h = FiniteTestWeight::indicator_range(1, 50);
        auto rep = verify_mobius_identity(1, 1, chi1, 1, h);
        CHECK(rep.rel_error < 1e-9);
    }
    SECTION("order-4 twist mod 5 with a random weight and delta = 2") {
        auto g5 = CharacterGroup::get(5);
        DirichletCharacter chi1 = g5->character(0);
        bool found = false;
        for (u64 i = 0; i < g5->num_characters(); ++i) {
            auto cand = g5->character(i);
            if (std::abs(cand(2).imag()) > 0.5) { chi1 = cand; found = true; break; }
        }
        REQUIRE(found);
        std::mt19937_64 rng(20240917);
        auto h = random_weight(1, 100, rng);
        auto rep = verify_mobius_identity(2, 3, chi1, 2, h);
        CHECK(rep.rel_error < 1e-9);
        CHECK(rep.id == "BasicMobius");
    }
    SECTION("precondition violations") {
        auto g3 = CharacterGroup::get(3);
        auto chi1 = g3->character(1);
        auto h = FiniteTestWeight::indicator_range(1, 10);
        CHECK_THROWS_AS(verify_mobius_identity(3, 1, chi1, 1, h), Error);
        CHECK_THROWS_AS(verify_mobius_identity(1, 1, chi1, 6, h), Error);
        auto g12 = CharacterGroup::get(12);
        // a mod-12 character of conductor 3 is not primitive
        for (u64 i = 0; i < g12->num_characters(); ++i) {
            auto chi = g12->character(i);
            if (chi.conductor() == 3)
                CHECK_THROWS_AS(verify_mobius_identity(1, 1, chi, 1, h), Error);
        }
    }
}

TEST_CASE("twist encoding identity") {
    std::mt19937_64 rng(555019);

    SECTION("trivial modulus") {
        auto chi = principal_character(1);
        auto h = FiniteTestWeight::indicator_range(1, 30);
        auto rep = verify_twist_identity(1, 1, chi, h);
        CHECK(rep.rel_error < 1e-12);
    }
    SECTION("q = 6 induced from the quadratic character mod 3") {
        auto g6 = CharacterGroup::get(6);
        DirichletCharacter chi = g6->character(0);
        bool found = false;
        for (u64 i = 0; i < g6->num_characters(); ++i) {
            auto cand = g6->character(i);
            if (cand.conductor() == 3) { chi = cand; found = true; break; }
        }
        REQUIRE(found);
        auto h = random_weight(1, 60, rng);
        auto rep = verify_twist_identity(1, 1, chi, h);
        CHECK(rep.rel_error < 1e-9);
        CHECK(rep.id == "basic");
    }
    SECTION("q = 15 primitive character, (m, n) = (7, 4)") {
        auto g15 = CharacterGroup::get(15);
        DirichletCharacter chi = g15->character(0);
        bool found = false;
        for (u64 i = 0; i < g15->num_characters(); ++i) {
            auto cand = g15->character(i);
            if (cand.is_primitive()) { chi = cand; found = true; break; }
        }
        REQUIRE(found);
        auto h = random_weight(1, 60, rng);
        auto rep = verify_twist_identity(7, 4, chi, h);
        CHECK(rep.rel_error < 1e-9);
    }
    SECTION("m sharing a factor with the conductor is rejected") {
        auto g5 = CharacterGroup::get(5);
        auto chi = g5->character(1);
        auto h = FiniteTestWeight::indicator_range(1, 10);
        if (chi.conductor() == 5) CHECK_THROWS_AS(verify_twist_identity(5, 1, chi, h), Error);
    }
}

TEST_CASE("general twist encoding identity") {
    std::mt19937_64 rng(90210177);

    SECTION("q = 6, m = 12 forces a full split") {
        auto g6 = CharacterGroup::get(6);
        for (u64 i = 0; i < g6->num_characters(); ++i) {
            auto chi = g6->character(i);
            auto h = random_weight(1, 50, rng);
            auto rep = verify_twist_identity_general(12, 1, chi, h);
            CHECK(rep.rel_error < 1e-9);
            CHECK(rep.id == "basicgeneral");
        }
    }
    SECTION("bitwise agreement with the restricted form when gcd(m, q) = 1") {
        auto g15 = CharacterGroup::get(15);
        auto h = random_weight(1, 40, rng);
        for (u64 i = 0; i < g15->num_characters(); ++i) {
            auto chi = g15->character(i);
            auto a = verify_twist_identity(7, 4, chi, h);
            auto b = verify_twist_identity_general(7, 4, chi, h);
            CHECK(a.lhs.real() == b.lhs.real());
            CHECK(a.lhs.imag() == b.lhs.imag());
            CHECK(a.rhs.real() == b.rhs.real());
            CHECK(a.rhs.imag() == b.rhs.imag());
        }
    }
    SECTION("100 random tuples") {
        std::uniform_int_distribution<u64> qd(1, 30), mnd(1, 50);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const u64 q = qd(rng), m = mnd(rng), n = mnd(rng);
            auto group = CharacterGroup::get(q);
            std::uniform_int_distribution<u64> cd(0, group->num_characters() - 1);
            auto chi = group->character(cd(rng));
            auto h = random_weight(1, 40, rng);
            auto rep = verify_twist_identity_general(m, n, chi, h);
            worst = std::max(worst, rep.rel_error);
        }
        CHECK(worst < 1e-9);
    }
    SECTION("scaling covariance: scaling h scales both sides") {
        auto g12 = CharacterGroup::get(12);
        auto chi = g12->character(1);
        auto h = random_weight(1, 30, rng);
        const cplx lambda{2.0, -3.0};
        FiniteTestWeight h2;
        for (auto& [c, v] : h.values) h2.values[c] = v * lambda;
        auto a = verify_twist_identity_general(4, 9, chi, h);
        auto b = verify_twist_identity_general(4, 9, chi, h2);
        CHECK(rel_err(b.lhs, a.lhs * lambda) < 1e-12);
        CHECK(rel_err(b.rhs, a.rhs * lambda) < 1e-12);
    }
}

TEST_CASE("master encoding identity") {
    auto cutoff = SmoothCutoff::bump(1.0, 2.0);

    SECTION("zero weight") {
        ArithmeticWeight f(5);
        auto rep = verify_master_identity(1, 1, 5, f, cutoff, 50.0);
        CHECK(rep.abs_error == 0.0);
        CHECK(rep.lhs == cplx{0.0, 0.0});
    }
    SECTION("indicator weight mod 5") {
        auto f = ArithmeticWeight::indicator(5, 2);
        auto rep = verify_master_identity(1, 1, 5, f, cutoff, 50.0);
        CHECK(rep.rel_error < 1e-8);
        CHECK(rep.id == "THEbasicidentity");
    }
    SECTION("random weight mod 12 with a sliding m") {
        std::mt19937_64 rng(777);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        ArithmeticWeight f(12);
        for (u64 r = 0; r < 12; ++r)
            if (std::gcd(r, static_cast<u64>(12)) == 1) f.set(r, cplx{unif(rng), unif(rng)});
        auto rep = verify_master_identity(6, 5, 12, f, cutoff, 100.0);
        CHECK(rep.rel_error < 1e-8);
    }
    SECTION("modulated cutoff") {
        auto f = ArithmeticWeight::indicator(7, 3);
        auto mod = SmoothCutoff::modulated_bump(1.0, 2.0, 2.0);
        auto rep = verify_master_identity(2, 3, 7, f, mod, 40.0);
        CHECK(rep.rel_error < 1e-8);
    }
}

TEST_CASE("identity report serialization") {
    auto g5 = CharacterGroup::get(5);
    auto chi = g5->character(1);
    auto h = FiniteTestWeight::indicator_range(1, 20);
    auto rep = verify_twist_identity(1, 1, chi, h);
    auto line = identity_report_json(rep);
    CHECK(line.find("\"id\":\"basic\"") != std::string::npos);
    CHECK(line.find("\"m\":1") != std::string::npos);
    CHECK(line.find("\"pass\":true") != std::string::npos);
    CHECK(line.find("\"X\"") == std::string::npos); // absent when not applicable
    CHECK(line.front() == '{');
    CHECK(line.back() == '}');
    // identical reports serialize to identical bytes
    auto rep2 = verify_twist_identity(1, 1, chi, h);
    CHECK(identity_report_json(rep2) == line);
}
