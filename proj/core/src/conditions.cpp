#include "srk/conditions.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "srk/errors.hpp"

namespace srk {

namespace {

struct RowSpec {
    const char* id;
    const char* differential;
    Rational ito;
    Rational strat;
};

Rational q(std::int64_t n, std::int64_t d = 1) { return {n, d}; }

// Exotic rows first (order 1, then order 2), then the single-class Isserlis rows.
const std::vector<RowSpec>& row_specs() {
    static const std::vector<RowSpec> rows = {
        {"E1", "phi_i f^{0,i}", q(1), q(1)},
        {"E2", "phi_ij f^{p1,i} f^{p1,j}", q(1), q(1)},
        {"E3", "phi_i f^{p1,i}_{i1} f^{p1,i1}", q(0), q(1, 2)},
        {"E4", "phi_i f^{0,i}_{i1} f^{0,i1}", q(1, 2), q(1, 2)},
        {"E5", "phi_ij f^{0,i} f^{0,j}", q(1), q(1)},
        {"E6", "phi_i f^{0,i}_{i1} f^{p1,i1}_{i2} f^{p1,i2}", q(0), q(1, 4)},
        {"E7", "phi_i f^{p1,i}_{i1} f^{0,i1}_{i2} f^{p1,i2}", q(0), q(0)},
        {"E8", "phi_i f^{p1,i}_{i1} f^{p1,i1}_{i2} f^{0,i2}", q(0), q(1, 4)},
        {"E9", "phi_i f^{0,i}_{i1i2} f^{p1,i1} f^{p1,i2}", q(1, 2), q(1, 2)},
        {"E10", "phi_i f^{p1,i}_{i1i2} f^{0,i1} f^{p1,i2}", q(0), q(1, 4)},
        {"E11", "phi_ij f^{0,i}_{i1} f^{p1,i1} f^{p1,j}", q(1, 2), q(1, 2)},
        {"E12", "phi_ij f^{p1,i}_{i1} f^{0,i1} f^{p1,j}", q(1, 2), q(1, 2)},
        {"E13", "phi_ij f^{p1,i}_{i1} f^{p1,i1} f^{0,j}", q(0), q(1, 2)},
        {"E14", "phi_ijk f^{0,i} f^{p1,j} f^{p1,k}", q(1), q(1)},
        {"E15", "phi_i f^{p1,i}_{i1} f^{p1,i1}_{i2} f^{p2,i2}_{i3} f^{p2,i3}", q(0), q(1, 8)},
        {"E16", "phi_i f^{p1,i}_{i1} f^{p2,i1}_{i2} f^{p1,i2}_{i3} f^{p2,i3}", q(0), q(0)},
        {"E17", "phi_i f^{p1,i}_{i1} f^{p2,i1}_{i2} f^{p2,i2}_{i3} f^{p1,i3}", q(0), q(0)},
        {"E18", "phi_i f^{p1,i}_{i1} f^{p1,i1}_{i2i3} f^{p2,i2} f^{p2,i3}", q(0), q(1, 4)},
        {"E19", "phi_i f^{p1,i}_{i1} f^{p2,i1}_{i2i3} f^{p1,i2} f^{p2,i3}", q(0), q(0)},
        {"E20", "phi_i f^{p1,i}_{i1i2} f^{p1,i1} f^{p2,i2}_{i3} f^{p2,i3}", q(0), q(1, 8)},
        {"E21", "phi_i f^{p1,i}_{i1i2} f^{p2,i1} f^{p1,i2}_{i3} f^{p2,i3}", q(0), q(1, 4)},
        {"E22", "phi_i f^{p1,i}_{i1i2} f^{p2,i1} f^{p2,i2}_{i3} f^{p1,i3}", q(0), q(0)},
        {"E23", "phi_i f^{p1,i}_{i1i2i3} f^{p1,i1} f^{p2,i2} f^{p2,i3}", q(0), q(1, 4)},
        {"E24", "phi_ij f^{p1,i}_{i1} f^{p2,i1}_{i2} f^{p2,i2} f^{p1,j}", q(0), q(1, 4)},
        {"E25", "phi_ij f^{p2,i}_{i1} f^{p1,i1}_{i2} f^{p2,i2} f^{p1,j}", q(0), q(0)},
        {"E26", "phi_ij f^{p2,i}_{i1} f^{p2,i1}_{i2} f^{p1,i2} f^{p1,j}", q(0), q(1, 4)},
        {"E27", "phi_ij f^{p1,i}_{i1i2} f^{p2,i1} f^{p2,i2} f^{p1,j}", q(1, 2), q(1, 2)},
        {"E28", "phi_ij f^{p2,i}_{i1i2} f^{p1,i1} f^{p2,i2} f^{p1,j}", q(0), q(1, 4)},
        {"E29", "phi_ij f^{p1,i}_{i1} f^{p1,i1} f^{p2,j}_{j1} f^{p2,j1}", q(0), q(1, 4)},
        {"E30", "phi_ij f^{p1,i}_{i1} f^{p2,i1} f^{p1,j}_{j1} f^{p2,j1}", q(1, 2), q(1, 2)},
        {"E31", "phi_ij f^{p1,i}_{i1} f^{p2,i1} f^{p2,j}_{j1} f^{p1,j1}", q(0), q(0)},
        {"E32", "phi_ijk f^{p1,i}_{i1} f^{p1,i1} f^{p2,j} f^{p2,k}", q(0), q(1, 2)},
        {"E33", "phi_ijk f^{p1,i}_{i1} f^{p2,i1} f^{p1,j} f^{p2,k}", q(1, 2), q(1, 2)},
        {"E34", "phi_ijkl f^{p1,i} f^{p1,j} f^{p2,k} f^{p2,l}", q(1), q(1)},
        {"I1", "phi_i f^{p1,i}_{i1} f^{p1,i1}_{i2} f^{p1,i2}_{i3} f^{p1,i3}", q(0), q(1, 8)},
        {"I2", "phi_i f^{p1,i}_{i1} f^{p1,i1}_{i2i3} f^{p1,i2} f^{p1,i3}", q(0), q(1, 4)},
        {"I3", "phi_i f^{p1,i}_{i1i2} f^{p1,i1} f^{p1,i2}_{i3} f^{p1,i3}", q(0), q(3, 8)},
        {"I4", "phi_i f^{p1,i}_{i1i2i3} f^{p1,i1} f^{p1,i2} f^{p1,i3}", q(0), q(3, 4)},
        {"I5", "phi_ij f^{p1,i}_{i1} f^{p1,i1}_{i2} f^{p1,i2} f^{p1,j}", q(0), q(1, 2)},
        {"I6", "phi_ij f^{p1,i}_{i1i2} f^{p1,i1} f^{p1,i2} f^{p1,j}", q(1, 2), q(1)},
        {"I7", "phi_ij f^{p1,i}_{i1} f^{p1,i1} f^{p1,j}_{j1} f^{p1,j1}", q(1, 2), q(3, 4)},
        {"I8", "phi_ijk f^{p1,i}_{i1} f^{p1,i1} f^{p1,j} f^{p1,k}", q(1), q(3, 2)},
        {"I9", "phi_ijkl f^{p1,i} f^{p1,j} f^{p1,k} f^{p1,l}", q(3), q(3)},
    };
    return rows;
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

ConditionRecord make_record(std::string id, std::string description, double lhs, double ito, double strat,
                            Calculus against, double tolerance) {
    ConditionRecord r;
    r.id = std::move(id);
    r.description = std::move(description);
    r.lhs = lhs;
    r.target_ito = ito;
    r.target_strat = strat;
    r.target = against == Calculus::Ito ? ito : strat;
    r.tolerance = tolerance;
    r.satisfied = std::abs(lhs - r.target) <= tolerance;
    r.potentially_superfluous = r.target == 0.0;
    return r;
}

void finish(ConditionReport& report) {
    report.all_satisfied = true;
    for (const auto& r : report.records) report.all_satisfied = report.all_satisfied && r.satisfied;
}

}  // namespace

const std::vector<TableRow>& condition_table() {
    static const std::vector<TableRow> table = [] {
        std::vector<TableRow> out;
        for (const auto& spec : row_specs()) {
            TableRow row;
            row.id = spec.id;
            row.differential = spec.differential;
            row.forest = parse_differential(spec.differential);
            row.target_ito = spec.ito;
            row.target_strat = spec.strat;
            row.isserlis = spec.id[0] == 'I';
            out.push_back(std::move(row));
        }
        return out;
    }();
    return table;
}

double ConditionRecord::residual() const { return lhs - target; }

std::size_t ConditionReport::failures() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.satisfied ? 0 : 1;
    return n;
}

double evaluate_table_condition(const MethodTableau& t, const DecoratedForest& forest,
                                const std::vector<std::size_t>& labels) {
    return rk_coefficient_map(t, forest, labels);
}

ConditionReport check_all_table(const MethodTableau& t, double tolerance) {
    return check_all_table(t, t.calculus, tolerance);
}

ConditionReport check_all_table(const MethodTableau& t, Calculus against, double tolerance) {
    ConditionReport report;
    report.method = t.name;
    report.calculus = against;
    report.kind = "table";
    for (const auto& row : condition_table()) {
        const double lhs = evaluate_table_condition(t, row.forest);
        report.records.push_back(make_record(row.id, row.differential, lhs, to_double(row.target_ito),
                                             to_double(row.target_strat), against, tolerance));
    }
    finish(report);
    return report;
}

ConditionReport check_reduced(const MethodTableau& t, double tolerance) {
    ConditionReport report;
    report.method = t.name;
    report.calculus = t.calculus;
    report.kind = "reduced";

    const Vector one1 = ones(t.s1);
    const Vector one2 = ones(t.s2);
    const Vector& a = t.alpha;
    const Vector& b = t.beta;
    const Vector A0e = t.A0.row_sums();
    const Vector B0e = t.B0.row_sums();
    const Vector A1e = t.A1.row_sums();
    const Vector B1e = t.B1.row_sums();
    const bool half = t.c == 0.5;

    auto add = [&](int id, const std::string& text, double lhs, double target) {
        report.records.push_back(make_record(std::to_string(id), text, lhs, target, target, t.calculus, tolerance));
    };

    if (t.calculus == Calculus::Ito) {
        add(1, "alpha^T 1 = 1", dot(a, one1), 1.0);
        add(2, "beta^T 1 = 1", dot(b, one2), 1.0);
        add(3, "alpha^T A0 1 = 1/2", dot(a, A0e), 0.5);
        add(4, "alpha^T B0 1 = 1/2", dot(a, B0e), 0.5);
        add(5, "alpha^T (B0 1)^2 = c", dot(a, hadamard(B0e, B0e)), t.c);
        add(6, "beta^T A1 1 = 1/2", dot(b, A1e), 0.5);
        add(7, "beta^T B1 1 = 1/2", dot(b, B1e), 0.5);
        add(8, "beta^T (B1 1)^2 = 1/4", dot(b, hadamard(B1e, B1e)), 0.25);
        add(9, "beta^T B1 B1 1 = 0", dot(b, t.B1.apply(B1e)), 0.0);
        if (half) add(10, "beta^T A1 B0 1 = 0", dot(b, t.A1.apply(B0e)), 0.0);
        finish(report);
        return report;
    }

    if (!t.Bhat1) throw PreconditionError("check_reduced: Stratonovich method '" + t.name + "' has no Bhat1");
    const Matrix& H = *t.Bhat1;
    const Vector He = H.row_sums();
    const Vector B1He = t.B1.apply(He);
    const Vector HB1e = H.apply(B1e);
    const Vector HHe = H.apply(He);
    const Vector B1e2 = hadamard(B1e, B1e);
    const Vector He2 = hadamard(He, He);

    add(1, "alpha^T 1 = 1", dot(a, one1), 1.0);
    add(2, "beta^T 1 = 1", dot(b, one2), 1.0);
    add(3, "beta^T Bhat1 1 = 1/2", dot(b, He), 0.5);
    add(4, "alpha^T A0 1 = 1/2", dot(a, A0e), 0.5);
    add(5, "alpha^T B0 1 = 1/2", dot(a, B0e), 0.5);
    add(6, "alpha^T (B0 1)^2 = c", dot(a, hadamard(B0e, B0e)), t.c);
    add(7, "alpha^T B0 Bhat1 1 = 1/4", dot(a, t.B0.apply(He)), 0.25);
    add(8, "beta^T A1 1 = 1/2", dot(b, A1e), 0.5);
    add(9, "beta^T (Bhat1 1 * A1 1) = 1/4", dot(b, hadamard(He, A1e)), 0.25);
    add(10, "beta^T Bhat1 A1 1 = 1/4", dot(b, H.apply(A1e)), 0.25);
    add(11, "beta^T B1 1 = 1/2", dot(b, B1e), 0.5);
    add(12, "beta^T (B1 1)^2 = 1/4", dot(b, B1e2), 0.25);
    add(13, "beta^T Bhat1 B1 Bhat1 1 = 1/8", dot(b, H.apply(B1He)), 0.125);
    add(14, "beta^T (Bhat1 1 * B1 Bhat1 1) = 1/8", dot(b, hadamard(He, B1He)), 0.125);
    add(15, "beta^T (Bhat1 1 * (B1 1)^2) = 1/8", dot(b, hadamard(He, B1e2)), 0.125);
    add(16, "beta^T (B1 1 * Bhat1 B1 1) = 1/8", dot(b, hadamard(B1e, HB1e)), 0.125);
    add(17, "beta^T Bhat1 (B1 1)^2 = 1/8", dot(b, H.apply(B1e2)), 0.125);
    add(18, "beta^T (B1 1 * Bhat1 1) = 1/4", dot(b, hadamard(B1e, He)), 0.25);
    add(19, "beta^T Bhat1 B1 1 = 1/4", dot(b, HB1e), 0.25);
    add(20, "beta^T B1 Bhat1 1 = 1/4", dot(b, B1He), 0.25);
    add(21, "beta^T (Bhat1 1 * Bhat1 Bhat1 1) = 1/8", dot(b, hadamard(He, HHe)), 0.125);
    add(22, "beta^T Bhat1 (Bhat1 1)^2 = 1/12", dot(b, H.apply(He2)), 1.0 / 12.0);
    add(23, "beta^T Bhat1 Bhat1 Bhat1 1 = 1/24", dot(b, H.apply(HHe)), 1.0 / 24.0);
    add(24, "beta^T (Bhat1 1)^3 = 1/4", dot(b, hadamard(He2, He)), 0.25);
    add(25, "beta^T (Bhat1 1)^2 = 1/3", dot(b, He2), 1.0 / 3.0);
    add(26, "beta^T Bhat1 Bhat1 1 = 1/6", dot(b, HHe), 1.0 / 6.0);
    if (half) add(27, "beta^T A1 B0 1 = 0", dot(b, t.A1.apply(B0e)), 0.0);
    finish(report);
    return report;
}

std::string render_text(const ConditionReport& report) {
    std::ostringstream out;
    out << report.method << " (" << to_string(report.calculus) << ", " << report.kind << " conditions)\n";
    for (const auto& r : report.records) {
        out << std::left << std::setw(5) << r.id << ' ' << (r.satisfied ? "ok  " : "FAIL") << "  lhs="
            << std::setw(22) << std::setprecision(15) << r.lhs << " target=" << std::setw(10) << r.target << "  "
            << r.description;
        if (r.potentially_superfluous) out << "  [zero target]";
        out << '\n';
    }
    out << (report.all_satisfied ? "all conditions satisfied" : std::to_string(report.failures()) + " condition(s) violated")
        << '\n';
    return out.str();
}

std::string render_json(const ConditionReport& report) {
    nlohmann::json j;
    j["method"] = report.method;
    j["calculus"] = std::string(to_string(report.calculus));
    j["kind"] = report.kind;
    j["all_satisfied"] = report.all_satisfied;
    j["records"] = nlohmann::json::array();
    for (const auto& r : report.records) {
        j["records"].push_back({{"id", r.id},
                                {"description", r.description},
                                {"lhs", r.lhs},
                                {"target_ito", r.target_ito},
                                {"target_strat", r.target_strat},
                                {"target", r.target},
                                {"tolerance", r.tolerance},
                                {"satisfied", r.satisfied},
                                {"potentially_superfluous", r.potentially_superfluous}});
    }
    return j.dump(2);
}

}  // namespace srk
