#include <cmath>

#include "srk/errors.hpp"
#include "srk/tableau.hpp"

namespace srk {

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt6 = std::sqrt(6.0);

MethodTableau make(std::string name, Calculus calc, double c, Vector alpha, Vector beta, Matrix A0, Matrix B0,
                   Matrix A1, Matrix B1, std::optional<Matrix> Bhat1, int det_order, int weak_order,
                   Structure structure) {
    MethodTableau t;
    t.name = std::move(name);
    t.calculus = calc;
    t.s1 = alpha.size();
    t.s2 = beta.size();
    t.alpha = std::move(alpha);
    t.beta = std::move(beta);
    t.A0 = std::move(A0);
    t.B0 = std::move(B0);
    t.A1 = std::move(A1);
    t.B1 = std::move(B1);
    t.Bhat1 = std::move(Bhat1);
    t.c = c;
    t.det_order = det_order;
    t.weak_order = weak_order;
    t.structure = structure;
    return t;
}

MethodTableau bdk1() {
    return make("BDK1", Calculus::Ito, 0.5, {0.5, 0.5}, {0.0, 1.0}, {{0, 0}, {1, 0}}, {{0, 0}, {1, 0}},
                {{0, 0}, {0.5, 0}}, {{0, 0}, {0.5, 0}}, std::nullopt, 2, 2, Structure::Explicit);
}

MethodTableau bdk2() {
    return make("BDK2", Calculus::Ito, 0.5, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {0.0, 1.0},
                {{0, 0, 0}, {0.5, 0, 0}, {-1, 2, 0}},
                {{0, 0}, {0.6 - kSqrt6 / 10, 0}, {0.6 + 2 * kSqrt6 / 5, 0}}, {{0, 0, 0}, {0.5, 0, 0}},
                {{0, 0}, {0.5, 0}}, std::nullopt, 3, 2, Structure::Explicit);
}

MethodTableau bdk3() {
    return make("BDK3", Calculus::Ito, 1.0 / 3, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {0.0, 1.0},
                {{0, 0, 0}, {0.5, 0, 0}, {-1, 2, 0}}, {{0, 0}, {0.5, 0}, {1, 0}}, {{0, 0, 0}, {0.5, 0, 0}},
                {{0, 0}, {0.5, 0}}, std::nullopt, 3, 2, Structure::Explicit);
}

MethodTableau ito_implicit12() {
    return make("ItoImplicit12", Calculus::Ito, 0.25, {1.0}, {0.0, 1.0}, {{0.5}}, {{0.5, 0}}, {{0}, {0.5}},
                {{1, 0}, {-0.5, 1}}, std::nullopt, 2, 2, Structure::DiagonallyImplicit);
}

MethodTableau strato_explicit24() {
    return make("StratoExplicit24", Calculus::Stratonovich, 0.5, {0.5, 0.5}, {0.0, 2.0 / 3, 1.0 / 6, 1.0 / 6},
                {{0, 0}, {1, 0}}, {{0, 0, 0, 0}, {0, 1, 0, 0}}, {{0, 0}, {0.5, 0}, {0.5, 0}, {0.5, 0}},
                {{0, 0, 0, 0}, {0.5, 0, 0, 0}, {-1, 1.5, 0, 0}, {-1, 1.5, 0, 0}},
                Matrix{{0, 0, 0, 0}, {0.5, 0, 0, 0}, {-0.5, 0.5, 0, 0}, {-1.5, 1.5, 1, 0}}, 2, 2,
                Structure::Explicit);
}

MethodTableau strato_implicit12() {
    return make("StratoImplicit12", Calculus::Stratonovich, 0.25, {1.0}, {0.5, 0.5}, {{0.5}}, {{0.25, 0.25}},
                {{0.5}, {0.5}}, {{0.25, 0.25}, {0.25, 0.25}},
                Matrix{{0.25, (3 + 2 * kSqrt3) / 12}, {(3 - 2 * kSqrt3) / 12, 0.25}}, 2, 2, Structure::Implicit);
}

MethodTableau strato_det_order3() {
    return make("StratoDetOrder3", Calculus::Stratonovich, 0.5, {0.25, 0.0, 0.75}, {0.0, 2.0 / 3, 1.0 / 6, 1.0 / 6},
                {{0, 0, 0}, {1.0 / 3, 0, 0}, {0, 2.0 / 3, 0}},
                {{0.5 - kSqrt3 / 2, 0, 0, 0}, {kSqrt3 - 1, 0, 0, 0}, {1.0 / 6 + kSqrt3 / 6, 0, 0, 1.0 / 3}},
                {{0, 0, 0}, {0.5, 0, 0}, {-0.5, 1, 0}, {0.5, 0, 0}},
                {{0, 0, 0, 0}, {0.5, 0, 0, 0}, {-1, 1.5, 0, 0}, {-0.5, 1.5, -0.5, 0}},
                Matrix{{0, 0, 0, 0}, {0.5, 0, 0, 0}, {-0.5, 0.5, 0, 0}, {-1.5, 1.5, 1, 0}}, 3, 2,
                Structure::Explicit);
}

MethodTableau ito_dirkex() {
    return make("ItoDIRKEX", Calculus::Ito, 0.25, {1.0}, {0.0, 1.0}, {{0.5}}, {{0.5, 0}}, {{0}, {0.5}},
                {{0, 0}, {0.5, 0}}, std::nullopt, 2, 2, Structure::IMEX);
}

MethodTableau ito_exdirk() {
    return make("ItoEXDIRK", Calculus::Ito, 0.5, {0.5, 0.5}, {0.0, 1.0}, {{0, 0}, {1, 0}}, {{0, 0}, {1, 0}},
                {{0, 0}, {0.5, 0}}, {{1, 0}, {-0.5, 1}}, std::nullopt, 2, 2, Structure::IMEX);
}

MethodTableau strato_dirkex() {
    return make("StratoDIRKEX", Calculus::Stratonovich, 0.25, {1.0}, {0.0, 2.0 / 3, 1.0 / 6, 1.0 / 6}, {{0.5}},
                {{0, 0.5, 0, 0}}, {{0}, {0}, {1.5}, {1.5}},
                {{0, 0, 0, 0}, {0.5, 0, 0, 0}, {-1, 1.5, 0, 0}, {-0.5, 1.5, -0.5, 0}},
                Matrix{{0, 0, 0, 0}, {0.5, 0, 0, 0}, {-0.5, 0.5, 0, 0}, {-1.5, 1.5, 1, 0}}, 2, 2, Structure::IMEX);
}

Matrix strato_dirk_block() {
    return Matrix{{0.5, 0, 0},
                  {(3 - 2 * kSqrt3) / 6, kSqrt3 / 6, 0},
                  {(-3 + 2 * kSqrt3) / 6, 0.5, (3 - kSqrt3) / 6}};
}

MethodTableau strato_exdirk() {
    return make("StratoEXDIRK", Calculus::Stratonovich, 0.5, {0.5, 0.5}, {0.0, 0.5, 0.5}, {{0, 0}, {1, 0}},
                {{0, 0, 0}, {1, 0, 0}}, {{0, 0}, {0.5, 0}, {0.5, 0}}, {{0, 0, 0}, {0.5, 0, 0}, {0.5, 0, 0}},
                strato_dirk_block(), 2, 2, Structure::IMEX);
}

MethodTableau strato_dirk() {
    return make("StratoDIRK", Calculus::Stratonovich, 0.25, {1.0}, {0.0, 0.5, 0.5}, {{0.5}}, {{0.5, 0, 0}},
                {{0}, {0.5}, {0.5}}, {{0, 0, 0}, {0.5, 0, 0}, {0.5, 0, 0}}, strato_dirk_block(), 2, 2,
                Structure::DiagonallyImplicit);
}

MethodTableau euler_maruyama() {
    return make("EulerMaruyama", Calculus::Ito, 0.5, {1.0}, {1.0}, {{0}}, {{0}}, {{0}}, {{0}}, std::nullopt, 1, 1,
                Structure::Explicit);
}

using Factory = MethodTableau (*)();

const std::vector<std::pair<std::string, Factory>>& factories() {
    static const std::vector<std::pair<std::string, Factory>> list = {
        {"BDK1", bdk1},
        {"BDK2", bdk2},
        {"BDK3", bdk3},
        {"ItoImplicit12", ito_implicit12},
        {"StratoExplicit24", strato_explicit24},
        {"StratoImplicit12", strato_implicit12},
        {"StratoDetOrder3", strato_det_order3},
        {"ItoDIRKEX", ito_dirkex},
        {"ItoEXDIRK", ito_exdirk},
        {"StratoDIRKEX", strato_dirkex},
        {"StratoEXDIRK", strato_exdirk},
        {"StratoDIRK", strato_dirk},
        {"EulerMaruyama", euler_maruyama},
    };
    return list;
}

}  // namespace

const std::vector<std::string>& registry_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, f] : factories()) out.push_back(name);
        return out;
    }();
    return names;
}

MethodTableau registry_get(std::string_view name) {
    for (const auto& [n, f] : factories()) {
        if (n == name) return f();
    }
    std::string valid;
    for (const auto& n : registry_names()) {
        valid += (valid.empty() ? "" : ", ") + n;
    }
    throw LookupError("unknown method '" + std::string(name) + "'; valid names: " + valid);
}

}  // namespace srk
