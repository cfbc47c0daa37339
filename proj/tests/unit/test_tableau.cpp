#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "srk/srk.hpp"

using namespace srk;

namespace {

bool has_finding(const ValidationReport& r, Severity s, const std::string& needle) {
    for (const auto& f : r.findings) {
        if (f.severity == s && f.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("srk_test_" + name);
}

}  // namespace

TEST_SUITE("tableau") {

TEST_CASE("BDK1 registry entry") {
    const MethodTableau t = registry_get("BDK1");
    CHECK(t.s1 == 2);
    CHECK(t.s2 == 2);
    CHECK(t.calculus == Calculus::Ito);
    CHECK(t.c == 0.5);
    CHECK(t.alpha == Vector{0.5, 0.5});
    CHECK(t.beta == Vector{0.0, 1.0});
    CHECK(t.A0 == Matrix{{0, 0}, {1, 0}});
    CHECK(t.B0 == Matrix{{0, 0}, {1, 0}});
    CHECK(t.A1 == Matrix{{0, 0}, {0.5, 0}});
    CHECK(t.B1 == Matrix{{0, 0}, {0.5, 0}});
    CHECK_FALSE(t.Bhat1.has_value());
}

TEST_CASE("BDK2 drift weights and B0 column") {
    const MethodTableau t = registry_get("BDK2");
    const double r6 = std::sqrt(6.0);
    CHECK(t.s1 == 3);
    CHECK(t.s2 == 2);
    CHECK(t.c == 0.5);
    CHECK(t.alpha[0] == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(t.alpha[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(t.alpha[2] == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(t.B0(0, 0) == 0.0);
    CHECK(t.B0(1, 0) == doctest::Approx(0.6 - r6 / 10).epsilon(1e-15));
    CHECK(t.B0(2, 0) == doctest::Approx(0.6 + 2 * r6 / 5).epsilon(1e-15));
}

TEST_CASE("StratoImplicit12 carries the Gauss-Legendre block") {
    const MethodTableau t = registry_get("StratoImplicit12");
    const double r3 = std::sqrt(3.0);
    CHECK(t.calculus == Calculus::Stratonovich);
    CHECK(t.c == 0.25);
    REQUIRE(t.Bhat1.has_value());
    const Matrix gl{{0.25, (3 + 2 * r3) / 12}, {(3 - 2 * r3) / 12, 0.25}};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) CHECK((*t.Bhat1)(i, j) == doctest::Approx(gl(i, j)).epsilon(1e-15));
    }
    CHECK(t.A0 == Matrix{{0.5}});
}

TEST_CASE("EulerMaruyama is the one stage baseline") {
    const MethodTableau t = registry_get("EulerMaruyama");
    CHECK(t.s1 == 1);
    CHECK(t.s2 == 1);
    CHECK(t.alpha == Vector{1.0});
    CHECK(t.beta == Vector{1.0});
    CHECK(t.A0.is_zero());
    CHECK(t.B0.is_zero());
    CHECK(t.A1.is_zero());
    CHECK(t.B1.is_zero());
    CHECK(t.c == 0.5);
    CHECK(t.weak_order == 1);
}

TEST_CASE("unknown names list the valid ones") {
    try {
        (void)registry_get("RK4");
        FAIL("expected LookupError");
    } catch (const LookupError& e) {
        CHECK(std::string(e.what()).find("BDK1") != std::string::npos);
        CHECK(std::string(e.what()).find("StratoDIRK") != std::string::npos);
    }
}

TEST_CASE("registry holds thirteen methods that validate cleanly") {
    CHECK(registry_names().size() == 13);
    for (const auto& name : registry_names()) {
        CAPTURE(name);
        const ValidationReport r = validate(registry_get(name));
        CHECK(r.ok);
        CHECK(r.findings.empty());
    }
}

TEST_CASE("BDK1 with alpha = (1/2, 1/3) warns on the first reduced condition") {
    MethodTableau t = registry_get("BDK1");
    t.alpha = {0.5, 1.0 / 3};
    const ValidationReport r = validate(t);
    CHECK(r.ok);
    CHECK(has_finding(r, Severity::Warning, "reduced condition 1 "));
}

TEST_CASE("validation errors") {
    SUBCASE("Stratonovich without Bhat1") {
        MethodTableau t = registry_get("StratoExplicit24");
        t.Bhat1.reset();
        const ValidationReport r = validate(t);
        CHECK_FALSE(r.ok);
        CHECK(has_finding(r, Severity::Error, "Bhat1"));
    }
    SUBCASE("Ito with Bhat1") {
        MethodTableau t = registry_get("BDK1");
        t.Bhat1 = t.B1;
        CHECK_FALSE(validate(t).ok);
    }
    SUBCASE("c outside (0, 1/2]") {
        MethodTableau t = registry_get("BDK3");
        t.c = 0.7;
        CHECK_FALSE(validate(t).ok);
        t.c = 0.0;
        CHECK_FALSE(validate(t).ok);
    }
    SUBCASE("alpha length") {
        MethodTableau t = registry_get("BDK1");
        t.alpha = {1.0};
        CHECK_FALSE(validate(t).ok);
    }
    SUBCASE("explicit tag on an implicit drift block") {
        MethodTableau t = registry_get("BDK1");
        t.A0(0, 0) = 0.25;
        CHECK_FALSE(validate(t).ok);
        t.structure = Structure::IMEX;
        CHECK(validate(t).ok);
    }
}

TEST_CASE("schedule of BDK1 interleaves drift and stochastic stages") {
    const StageSchedule s = compute_schedule(registry_get("BDK1"));
    std::vector<StageRef> order;
    for (const auto& b : s.blocks) {
        CHECK_FALSE(b.implicit);
        for (const auto& st : b.stages) order.push_back(st);
    }
    auto position = [&](StageKind k, std::size_t i) {
        return std::find(order.begin(), order.end(), StageRef{k, i}) - order.begin();
    };
    // H_2^0 uses f^q(H_1^q); H_2^p uses f^0(H_1^0) and f^q(H_1^q).
    CHECK(position(StageKind::Stochastic, 0) < position(StageKind::Drift, 1));
    CHECK(position(StageKind::Drift, 0) < position(StageKind::Stochastic, 1));
    CHECK(s.inferred_structure() == Structure::Explicit);
}

TEST_CASE("inferred structures of the implicit family") {
    CHECK(compute_schedule(registry_get("ItoImplicit12")).inferred_structure() != Structure::Explicit);
    CHECK(compute_schedule(registry_get("ItoEXDIRK")).inferred_structure() == Structure::IMEX);
    CHECK(compute_schedule(registry_get("StratoImplicit12")).inferred_structure() == Structure::Implicit);
}

TEST_CASE("save and load reproduce every registered tableau bit for bit") {
    for (const auto& name : registry_names()) {
        CAPTURE(name);
        const MethodTableau t = registry_get(name);
        const auto path = temp_file(name + ".json");
        save_method(t, path);
        CHECK(load_method(path) == t);
        std::filesystem::remove(path);
    }
}

TEST_CASE("method files with closed form strings") {
    const MethodTableau bdk1 = load_method(std::string(SRK_DATA_DIR) + "/methods/bdk1.json");
    CHECK(bdk1 == registry_get("BDK1"));
    const MethodTableau si = load_method(std::string(SRK_DATA_DIR) + "/methods/strato_implicit12.json");
    const MethodTableau ref = registry_get("StratoImplicit12");
    REQUIRE(si.Bhat1.has_value());
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) CHECK((*si.Bhat1)(i, j) == doctest::Approx((*ref.Bhat1)(i, j)).epsilon(1e-15));
    }
}

TEST_CASE("load errors") {
    SUBCASE("shape") {
        MethodTableau t = registry_get("BDK1");
        t.alpha = {0.5, 0.25, 0.25};
        CHECK_THROWS_AS(parse_method(dump_method(t)), ValidationError);
    }
    SUBCASE("range") {
        MethodTableau t = registry_get("BDK1");
        t.c = 0.7;
        CHECK_THROWS_AS(parse_method(dump_method(t)), ValidationError);
    }
    SUBCASE("malformed") {
        CHECK_THROWS_AS(parse_method("{\"name\": "), ParseError);
        CHECK_THROWS_AS(parse_method("{\"name\": \"x\"}"), ParseError);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(load_method(temp_file("does_not_exist.json")), ParseError); }
}

TEST_CASE("number expressions") {
    CHECK(evaluate_number_expression("1/2") == 0.5);
    CHECK(evaluate_number_expression("3/5-1/10*sqrt(6)") == doctest::Approx(0.6 - std::sqrt(6.0) / 10).epsilon(1e-15));
    CHECK(evaluate_number_expression("(3+2*sqrt(3))/12") == doctest::Approx((3 + 2 * std::sqrt(3.0)) / 12).epsilon(1e-15));
    CHECK(evaluate_number_expression("-1.5e-1") == -0.15);
    CHECK_THROWS_AS(evaluate_number_expression("1/"), ParseError);
    CHECK_THROWS_AS(evaluate_number_expression("sqrt(2"), ParseError);
}

TEST_CASE("enum text forms") {
    CHECK(calculus_from_string(to_string(Calculus::Stratonovich)) == Calculus::Stratonovich);
    CHECK(structure_from_string(to_string(Structure::IMEX)) == Structure::IMEX);
    CHECK_THROWS_AS(calculus_from_string("levy"), ParseError);
}

}
