#pragma once

#include <string>
#include <vector>

#include "srk/forests.hpp"
#include "srk/tableau.hpp"

namespace srk {

/// One row of the weak-order-two condition tables: 34 exotic rows followed by
/// 9 Isserlis rows.
struct TableRow {
    std::string id;            // "E1".."E34", "I1".."I9"
    std::string differential;  // index notation as printed in the table
    DecoratedForest forest;
    Rational target_ito;
    Rational target_strat;
    bool isserlis = false;

    [[nodiscard]] Rational target(Calculus c) const { return c == Calculus::Ito ? target_ito : target_strat; }
};

const std::vector<TableRow>& condition_table();

struct ConditionRecord {
    std::string id;
    std::string description;  // forest key or contraction formula
    double lhs = 0.0;
    double target_ito = 0.0;
    double target_strat = 0.0;
    double target = 0.0;  // column matching the checked calculus
    double tolerance = 0.0;
    bool satisfied = false;
    bool potentially_superfluous = false;  // target is zero

    [[nodiscard]] double residual() const;
};

struct ConditionReport {
    std::string method;
    Calculus calculus = Calculus::Ito;
    std::string kind;  // "table" or "reduced"
    std::vector<ConditionRecord> records;
    bool all_satisfied = true;

    [[nodiscard]] std::size_t failures() const;
};

inline constexpr double kTableTolerance = 1e-12;
inline constexpr double kReducedTolerance = 1e-13;

/// a(π) for a table forest with noise classes bound to `labels` (default p1=1, p2=2).
double evaluate_table_condition(const MethodTableau& t, const DecoratedForest& forest,
                                const std::vector<std::size_t>& labels = {});

/// All 43 table rows against the column of `against` (defaults to t.calculus).
ConditionReport check_all_table(const MethodTableau& t, double tolerance = kTableTolerance);
ConditionReport check_all_table(const MethodTableau& t, Calculus against, double tolerance = kTableTolerance);

/// Reduced algebraic conditions of the ansatz (Ito 1-9, Stratonovich 1-26),
/// plus the c = 1/2 condition (Ito 10, Stratonovich 27) when c = 1/2.
ConditionReport check_reduced(const MethodTableau& t, double tolerance = kReducedTolerance);

std::string render_text(const ConditionReport& report);
std::string render_json(const ConditionReport& report);

}  // namespace srk
