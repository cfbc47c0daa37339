#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "srk/srk.hpp"

using namespace srk;

namespace {

const TableRow& row(const std::string& id) {
    for (const auto& r : condition_table()) {
        if (r.id == id) return r;
    }
    throw std::logic_error("no row " + id);
}

const ConditionRecord& record(const ConditionReport& rep, const std::string& id) {
    for (const auto& r : rep.records) {
        if (r.id == id) return r;
    }
    throw std::logic_error("no record " + id);
}

// E[phi(X_1)] over the atom table for dX = lambda X dt + mu X dW, phi(x) = x^n.
double one_step_moment(const MethodTableau& t, double lambda, double mu, double h, int n) {
    SdeProblem p;
    p.d = 1;
    p.m = 1;
    p.calculus = t.calculus;
    p.fields.push_back([lambda](std::span<const double> x, std::span<double> out) { out[0] = lambda * x[0]; });
    p.fields.push_back([mu](std::span<const double> x, std::span<double> out) { out[0] = mu * x[0]; });
    Stepper stepper(p, t);
    double e = 0.0;
    for (const auto& a : enumerate_atoms(RvFamily::for_method(t), 1).atoms) {
        e += a.probability * std::pow(stepper.step(State{1.0}, h, a.draw)[0], n);
    }
    return e;
}

// Exact E[X(h)^n] from X(0) = 1.
double exact_moment(Calculus calc, double lambda, double mu, double h, int n) {
    const double a = calc == Calculus::Ito ? lambda : lambda + mu * mu / 2;
    return std::exp((n * a + n * (n - 1) * mu * mu / 2) * h);
}

}  // namespace

TEST_SUITE("conditions") {

TEST_CASE("table has 34 exotic rows and 9 Isserlis rows") {
    const auto& t = condition_table();
    REQUIRE(t.size() == 43);
    int exotic = 0;
    for (const auto& r : t) {
        CHECK(r.forest.is_exotic() == !r.isserlis);
        CHECK(r.forest.order() <= 2);
        exotic += r.isserlis ? 0 : 1;
    }
    CHECK(exotic == 34);
}

TEST_CASE("BDK1 hand contractions") {
    const MethodTableau t = registry_get("BDK1");
    // alpha^T 1 with E[1].
    CHECK(evaluate_table_condition(t, row("E1").forest) == doctest::Approx(1.0).epsilon(1e-15));
    // beta^T (B1 1) E[theta (theta^3 - 3 theta)] and E[theta^4] = 3 for the Ito law.
    CHECK(std::abs(evaluate_table_condition(t, row("E3").forest)) < 1e-14);
    // alpha^T A0 1.
    CHECK(evaluate_table_condition(t, row("E4").forest) == doctest::Approx(0.5).epsilon(1e-14));
    // (beta^T 1)^4 E[theta^4].
    CHECK(evaluate_table_condition(t, row("I9").forest) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("reduced condition alpha^T (B0 1)^2 = c against hand values") {
    const double r6 = std::sqrt(6.0);
    SUBCASE("BDK1") {
        const auto rep = check_reduced(registry_get("BDK1"));
        CHECK(record(rep, "5").lhs == doctest::Approx(0.5 * 0 + 0.5 * 1).epsilon(1e-15));
    }
    SUBCASE("BDK2") {
        const double u = 0.6 - r6 / 10;
        const double v = 0.6 + 2 * r6 / 5;
        const auto rep = check_reduced(registry_get("BDK2"));
        CHECK(record(rep, "5").lhs == doctest::Approx(2.0 / 3 * u * u + 1.0 / 6 * v * v).epsilon(1e-14));
        CHECK(record(rep, "5").lhs == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("BDK3") {
        const auto rep = check_reduced(registry_get("BDK3"));
        CHECK(record(rep, "5").target == doctest::Approx(1.0 / 3));
        CHECK(record(rep, "5").satisfied);
    }
}

TEST_CASE("Euler-Maruyama satisfies the order one rows only") {
    const ConditionReport rep = check_all_table(registry_get("EulerMaruyama"));
    CHECK_FALSE(rep.all_satisfied);
    for (const auto& r : condition_table()) {
        CAPTURE(r.id);
        const bool ok = record(rep, r.id).satisfied;
        if (r.forest.order() == 1) CHECK(ok);
        if (!ok) CHECK(r.forest.order() == 2);
    }
}

TEST_CASE("checking against the other calculus fails") {
    CHECK_FALSE(check_all_table(registry_get("BDK1"), Calculus::Stratonovich).all_satisfied);
    CHECK_FALSE(check_all_table(registry_get("StratoExplicit24"), Calculus::Ito).all_satisfied);
}

TEST_CASE("noise labels do not matter") {
    for (const auto& name : registry_names()) {
        const MethodTableau t = registry_get(name);
        for (const auto& r : condition_table()) {
            if (r.forest.class_count() != 2) continue;
            CAPTURE(name);
            CAPTURE(r.id);
            const double a = evaluate_table_condition(t, r.forest, {1, 2});
            const double b = evaluate_table_condition(t, r.forest, {2, 1});
            CHECK(a == doctest::Approx(b).epsilon(1e-13));
        }
    }
}

TEST_CASE("reduced conditions imply the table conditions") {
    for (const auto& name : registry_names()) {
        CAPTURE(name);
        const MethodTableau t = registry_get(name);
        if (check_reduced(t).all_satisfied) CHECK(check_all_table(t).all_satisfied);
    }
}

TEST_CASE("every weak order two method passes all 43 rows") {
    std::size_t n = 0;
    for (const auto& name : registry_names()) {
        const MethodTableau t = registry_get(name);
        if (t.weak_order != 2) continue;
        CAPTURE(name);
        const ConditionReport rep = check_all_table(t);
        CHECK(rep.records.size() == 43);
        CHECK(rep.all_satisfied);
        CHECK(rep.failures() == 0);
        CHECK(check_reduced(t).all_satisfied);
        ++n;
    }
    CHECK(n == 12);
}

TEST_CASE("reduced record counts") {
    CHECK(check_reduced(registry_get("BDK1")).records.size() == 10);
    CHECK(check_reduced(registry_get("BDK3")).records.size() == 9);
    CHECK(check_reduced(registry_get("StratoExplicit24")).records.size() == 27);
    CHECK(check_reduced(registry_get("StratoImplicit12")).records.size() == 26);
}

TEST_CASE("one step moments on a linear SDE have local error O(h^3)") {
    for (const auto& name : registry_names()) {
        const MethodTableau t = registry_get(name);
        CAPTURE(name);
        for (int n : {1, 2, 4}) {
            CAPTURE(n);
            const double e1 = std::abs(one_step_moment(t, -0.4, 0.6, 0.02, n) - exact_moment(t.calculus, -0.4, 0.6, 0.02, n));
            const double e2 = std::abs(one_step_moment(t, -0.4, 0.6, 0.01, n) - exact_moment(t.calculus, -0.4, 0.6, 0.01, n));
            if (t.weak_order == 2) {
                CHECK(e1 / e2 > 6.0);
            } else if (n > 1) {
                CHECK(e1 / e2 < 5.0);
            }
        }
    }
}

TEST_CASE("reports render") {
    const ConditionReport rep = check_all_table(registry_get("EulerMaruyama"));
    const auto j = nlohmann::json::parse(render_json(rep));
    CHECK(j.is_object());
    const std::string text = render_text(rep);
    CHECK(text.find("FAIL") != std::string::npos);
    CHECK(text.find("condition(s) violated") != std::string::npos);
    CHECK(render_text(check_reduced(registry_get("BDK1"))).find("all conditions satisfied") != std::string::npos);
}

}
