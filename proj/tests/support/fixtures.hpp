// Copyright 2026 The gapq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAPQ_TESTS_SUPPORT_FIXTURES_HPP
#define GAPQ_TESTS_SUPPORT_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gapq/gapq.hpp>

namespace gapq::fixtures {

/// m = 0, d = 1, u = 1: integer amplitudes only. The smallest field the
/// machinery accepts; every h weight over it is 0 or +-1.
inline FieldPresentation trivial_field() {
    const Index unit{0, {}};
    auto f = [&](long long k) {
        return k == 0 ? CanonicalForm{} : CanonicalForm::single(unit, BigInt{k});
    };
    std::vector<AmplitudeEntry> amps = {{"0", f(0), Complex{0.0, 0.0}},
                                        {"1", f(1), Complex{1.0, 0.0}},
                                        {"-1", f(-1), Complex{-1.0, 0.0}}};
    return FieldPresentation(0, 1, {}, {Complex{1.0, 0.0}}, Complex{1.0, 0.0}, f(1), {f(1)},
                             std::move(amps));
}

/// m = 0, d = 2 with basis (1, sqrt2) and u = 2. Amplitude "1/r2" is
/// 1/sqrt2, whose u*delta form is the single term 1*beta_1.
inline FieldPresentation sqrt2_field() {
    const Index b0{0, {}}, b1{1, {}};
    auto at = [](const Index& i, long long k) {
        return k == 0 ? CanonicalForm{} : CanonicalForm::single(i, BigInt{k});
    };
    const double r2 = std::sqrt(2.0);
    std::vector<AmplitudeEntry> amps = {{"0", at(b0, 0), Complex{0.0, 0.0}},
                                        {"1", at(b0, 2), Complex{1.0, 0.0}},
                                        {"-1", at(b0, -2), Complex{-1.0, 0.0}},
                                        {"1/r2", at(b1, 1), Complex{1.0 / r2, 0.0}},
                                        {"-1/r2", at(b1, -1), Complex{-1.0 / r2, 0.0}}};
    return FieldPresentation(0, 2, {}, {Complex{1.0, 0.0}, Complex{r2, 0.0}}, Complex{2.0, 0.0},
                             at(b0, 2), {at(b0, 2), at(b1, 2), at(b1, 2), at(b0, 4)},
                             std::move(amps));
}

/// sqrt2_field with the beta_1 * beta_1 structure constant corrupted:
/// it declares 5 instead of 4, so exact arithmetic silently drifts away
/// from the numerics. Parsing accepts it; validation and the crosscheck
/// must not.
inline FieldPresentation bad_sqrt2_field() {
    const Index b0{0, {}}, b1{1, {}};
    auto at = [](const Index& i, long long k) {
        return k == 0 ? CanonicalForm{} : CanonicalForm::single(i, BigInt{k});
    };
    const double r2 = std::sqrt(2.0);
    std::vector<AmplitudeEntry> amps = {{"0", at(b0, 0), Complex{0.0, 0.0}},
                                        {"1", at(b0, 2), Complex{1.0, 0.0}},
                                        {"-1", at(b0, -2), Complex{-1.0, 0.0}},
                                        {"1/r2", at(b1, 1), Complex{1.0 / r2, 0.0}},
                                        {"-1/r2", at(b1, -1), Complex{-1.0 / r2, 0.0}}};
    return FieldPresentation(0, 2, {}, {Complex{1.0, 0.0}, Complex{r2, 0.0}}, Complex{2.0, 0.0},
                             at(b0, 2), {at(b0, 2), at(b1, 2), at(b1, 2), at(b0, 5)},
                             std::move(amps));
}

/// m = 1, d = 1, u = 1 with one unit-modulus transcendental alpha.
/// "a"/"a_inv" exercise positive and negative exponents.
inline FieldPresentation phase_field(double theta) {
    auto at = [](std::int32_t e, long long k) {
        return k == 0 ? CanonicalForm{} : CanonicalForm::single(Index{0, {e}}, BigInt{k});
    };
    const Complex a = std::polar(1.0, theta);
    std::vector<AmplitudeEntry> amps = {{"0", at(0, 0), Complex{0.0, 0.0}},
                                        {"1", at(0, 1), Complex{1.0, 0.0}},
                                        {"-1", at(0, -1), Complex{-1.0, 0.0}},
                                        {"a", at(1, 1), a},
                                        {"a_inv", at(-1, 1), std::conj(a)}};
    return FieldPresentation(1, 1, {a}, {Complex{1.0, 0.0}}, Complex{1.0, 0.0}, at(0, 1),
                             {at(0, 1)}, std::move(amps));
}

/// m = 2, d = 1, u = 1 with two unit-modulus alphas and a mixed monomial.
inline FieldPresentation phase2_field(double t1, double t2) {
    auto at = [](std::int32_t e1, std::int32_t e2, long long k) {
        return k == 0 ? CanonicalForm{} : CanonicalForm::single(Index{0, {e1, e2}}, BigInt{k});
    };
    const Complex a = std::polar(1.0, t1), b = std::polar(1.0, t2);
    std::vector<AmplitudeEntry> amps = {{"0", at(0, 0, 0), Complex{0.0, 0.0}},
                                        {"1", at(0, 0, 1), Complex{1.0, 0.0}},
                                        {"-1", at(0, 0, -1), Complex{-1.0, 0.0}},
                                        {"a", at(1, 0, 1), a},
                                        {"a_inv", at(-1, 0, 1), std::conj(a)},
                                        {"b", at(0, 1, 1), b},
                                        {"b_inv", at(0, -1, 1), std::conj(b)},
                                        {"ab", at(1, 1, 1), a * b}};
    return FieldPresentation(2, 1, {a, b}, {Complex{1.0, 0.0}}, Complex{1.0, 0.0}, at(0, 0, 1),
                             {at(0, 0, 1)}, std::move(amps));
}

/// d = 2 and m = 1 together: basis (1, sqrt2), u = 2, one phase alpha.
inline FieldPresentation mixed_field(double theta) {
    auto at = [](std::int32_t pos, std::int32_t e, long long k) {
        return k == 0 ? CanonicalForm{} : CanonicalForm::single(Index{pos, {e}}, BigInt{k});
    };
    const double r2 = std::sqrt(2.0);
    const Complex a = std::polar(1.0, theta);
    std::vector<AmplitudeEntry> amps = {{"0", at(0, 0, 0), Complex{0.0, 0.0}},
                                        {"1", at(0, 0, 2), Complex{1.0, 0.0}},
                                        {"-1", at(0, 0, -2), Complex{-1.0, 0.0}},
                                        {"1/r2", at(1, 0, 1), Complex{1.0 / r2, 0.0}},
                                        {"-1/r2", at(1, 0, -1), Complex{-1.0 / r2, 0.0}},
                                        {"a", at(0, 1, 2), a},
                                        {"a_inv", at(0, -1, 2), std::conj(a)}};
    return FieldPresentation(1, 2, {a}, {Complex{1.0, 0.0}, Complex{r2, 0.0}}, Complex{2.0, 0.0},
                             at(0, 0, 2), {at(0, 0, 2), at(1, 0, 2), at(1, 0, 2), at(0, 0, 4)},
                             std::move(amps));
}

/// The rational gate amplitudes plus 1/5: the value set of the broken
/// "one minus delta" reading of the rotation gates. The field itself is
/// honest; only the gate built from it fails unitarity.
inline FieldPresentation literal_gate_field() {
    const Index unit{0, {}};
    auto f = [&](long long k) {
        return k == 0 ? CanonicalForm{} : CanonicalForm::single(unit, BigInt{k});
    };
    std::vector<AmplitudeEntry> amps;
    const std::pair<const char*, long long> entries[] = {
        {"0", 0},    {"1", 5},    {"-1", -5},  {"3/5", 3}, {"-3/5", -3},
        {"4/5", 4},  {"-4/5", -4}, {"1/5", 1}, {"-1/5", -1}};
    for (const auto& [id, k] : entries)
        amps.push_back({id, f(k), Complex{static_cast<double>(k) / 5.0, 0.0}});
    return FieldPresentation(0, 1, {}, {Complex{1.0, 0.0}}, Complex{5.0, 0.0}, f(5), {f(5)},
                             std::move(amps));
}

inline std::vector<std::vector<std::string>> h_matrix() {
    return {{"4/5", "3/5"}, {"3/5", "-4/5"}};
}

inline std::vector<std::vector<std::string>> j_matrix() {
    return {{"3/5", "4/5"}, {"4/5", "-3/5"}};
}

/// Off-diagonal read literally as 1 - 4/5 rather than sqrt(1 - (4/5)^2):
/// columns have squared norm 17/25, so this matrix is not unitary.
inline std::vector<std::vector<std::string>> literal_h_matrix() {
    return {{"4/5", "1/5"}, {"1/5", "-4/5"}};
}

inline std::vector<std::vector<std::string>> sqrt2_h_matrix() {
    return {{"1/r2", "1/r2"}, {"1/r2", "-1/r2"}};
}

/// Two 4/5-rotations in a row over u = 5. The interference at |1> cancels
/// exactly; the final stored form at |0> is 125 (true amplitude 1).
inline Program hh_cancel_program() {
    Register reg{{2}};
    std::vector<Layer> layers = {{LayerKind::unitary, {0}, h_matrix(), {}},
                                 {LayerKind::unitary, {0}, h_matrix(), {}}};
    AcceptingSpec acc;
    acc.states.push_back(BasisState{{0}});
    return Program(reg, rational_gate_field(), std::move(layers), BasisState{{0}}, acc);
}

/// t layers of the sqrt2 Hadamard on a single 2-letter cell.
inline Program sqrt2_h_program(int t) {
    Register reg{{2}};
    std::vector<Layer> layers(static_cast<std::size_t>(t),
                              Layer{LayerKind::unitary, {0}, sqrt2_h_matrix(), {}});
    AcceptingSpec acc;
    acc.states.push_back(BasisState{{0}});
    return Program(reg, sqrt2_field(), std::move(layers), BasisState{{0}}, acc);
}

/// Permutations only: a swap on cell 1 followed by the identity on both
/// cells, over the integer field.
inline Program trivial_perm_program() {
    Register reg{{2, 2}};
    std::vector<Layer> layers = {{LayerKind::permutation, {1}, {}, {1, 0}},
                                 {LayerKind::permutation, {0, 1}, {}, {0, 1, 2, 3}}};
    AcceptingSpec acc;
    acc.use_constraints = true;
    acc.constraints.emplace_back(1, 1);
    return Program(reg, trivial_field(), std::move(layers), BasisState{{0, 0}}, acc);
}

/// Alternates a phase rotation diag(a, 1/a) with a bit flip; the stored
/// forms pick up alpha exponents of both signs.
inline Program phase_walk_program(int t, double theta = 0.73) {
    Register reg{{2}};
    std::vector<Layer> layers;
    for (int i = 0; i < t; ++i) {
        if (i % 2 == 0)
            layers.push_back({LayerKind::unitary, {0}, {{"a", "0"}, {"0", "a_inv"}}, {}});
        else
            layers.push_back({LayerKind::unitary, {0}, {{"0", "1"}, {"1", "0"}}, {}});
    }
    AcceptingSpec acc;
    acc.states.push_back(BasisState{{1}});
    return Program(reg, phase_field(theta), std::move(layers), BasisState{{0}}, acc);
}

/// Must throw validation_error: the layer matrix is the literal
/// non-unitary reading of the rotation gate.
inline Program literal_h_program_build() {
    Register reg{{2}};
    std::vector<Layer> layers = {{LayerKind::unitary, {0}, literal_h_matrix(), {}}};
    AcceptingSpec acc;
    acc.states.push_back(BasisState{{0}});
    return Program(reg, literal_gate_field(), std::move(layers), BasisState{{0}}, acc);
}

/// A program over the corrupted sqrt2 field. Parses and passes the layer
/// checks (unitarity sees only the honest numerics); the exact stepper
/// then diverges from the numeric one, which the crosscheck must flag.
inline Program bad_struct_program() {
    Register reg{{2}};
    std::vector<Layer> layers = {{LayerKind::unitary, {0}, sqrt2_h_matrix(), {}},
                                 {LayerKind::unitary, {0}, sqrt2_h_matrix(), {}}};
    AcceptingSpec acc;
    acc.states.push_back(BasisState{{0}});
    return Program(reg, bad_sqrt2_field(), std::move(layers), BasisState{{0}}, acc);
}

inline PredicateSpec random_predicate(std::mt19937_64& rng, int p) {
    PredicateSpec spec;
    spec.p = p;
    std::bernoulli_distribution bit(0.5);
    for (std::size_t i = 0; i < (std::size_t{1} << p); ++i) spec.table.push_back(bit(rng));
    return spec;
}

struct RandomOptions {
    int min_layers = 1;
    int max_layers = 6;
    std::uint64_t max_states = 8;
};

namespace detail {

struct GatePalette {
    FieldPresentation field;
    std::vector<std::vector<std::vector<std::string>>> gates2;  // 2x2 unitaries by id
};

inline GatePalette random_palette(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 4);
    std::uniform_real_distribution<double> theta(0.2, 1.4);
    switch (kind(rng)) {
        case 0:
            return {rational_gate_field(),
                    {h_matrix(), j_matrix(), {{"1", "0"}, {"0", "-1"}}, {{"0", "1"}, {"1", "0"}}}};
        case 1:
            return {sqrt2_field(),
                    {sqrt2_h_matrix(), {{"1", "0"}, {"0", "-1"}}, {{"0", "1"}, {"1", "0"}}}};
        case 2:
            return {phase_field(theta(rng)),
                    {{{"a", "0"}, {"0", "a_inv"}},
                     {{"a", "0"}, {"0", "1"}},
                     {{"0", "a"}, {"a_inv", "0"}},
                     {{"0", "1"}, {"1", "0"}}}};
        case 3:
            return {phase2_field(theta(rng), theta(rng)),
                    {{{"a", "0"}, {"0", "b"}},
                     {{"ab", "0"}, {"0", "a_inv"}},
                     {{"0", "b_inv"}, {"b", "0"}},
                     {{"0", "1"}, {"1", "0"}}}};
        default:
            return {mixed_field(theta(rng)),
                    {sqrt2_h_matrix(), {{"a", "0"}, {"0", "a_inv"}}, {{"0", "1"}, {"1", "0"}}}};
    }
}

inline std::vector<std::uint64_t> random_bijection(std::mt19937_64& rng, std::uint64_t n) {
    std::vector<std::uint64_t> table(n);
    std::iota(table.begin(), table.end(), 0);
    std::shuffle(table.begin(), table.end(), rng);
    return table;
}

}  // namespace detail

/// Draws a program from one of five field families (rational, sqrt2,
/// one- and two-alpha phase fields, mixed), with 2x2 unitaries on binary
/// cells and random bijections elsewhere. Presentations are honest by
/// construction; the draw is deterministic in the seed.
inline Program random_program(std::mt19937_64& rng, const RandomOptions& opts = {}) {
    detail::GatePalette palette = detail::random_palette(rng);

    std::vector<std::uint32_t> sizes;
    std::uint64_t prod = 1;
    const int want_cells = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < want_cells; ++i) {
        const std::uint32_t s =
            static_cast<std::uint32_t>(std::uniform_int_distribution<int>(2, 4)(rng));
        if (prod * s > opts.max_states) break;
        sizes.push_back(s);
        prod *= s;
    }
    if (sizes.empty()) {
        sizes = {2};
        prod = 2;
    }
    Register reg{sizes};

    BasisState initial;
    for (std::uint32_t s : sizes)
        initial.symbols.push_back(static_cast<std::uint32_t>(
            std::uniform_int_distribution<int>(0, static_cast<int>(s) - 1)(rng)));

    const int layer_count =
        std::uniform_int_distribution<int>(opts.min_layers, opts.max_layers)(rng);
    std::vector<Layer> layers;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int li = 0; li < layer_count; ++li) {
        const int c = std::uniform_int_distribution<int>(0, static_cast<int>(sizes.size()) - 1)(rng);
        if (sizes.size() >= 2 && coin(rng) < 0.2) {
            // Joint permutation of two cells, listed higher cell first to
            // exercise the sub-index convention.
            int c2 = std::uniform_int_distribution<int>(0, static_cast<int>(sizes.size()) - 1)(rng);
            if (c2 == c) c2 = (c + 1) % static_cast<int>(sizes.size());
            const std::uint64_t n = std::uint64_t{sizes[static_cast<std::size_t>(c)]} *
                                    sizes[static_cast<std::size_t>(c2)];
            layers.push_back({LayerKind::permutation, {std::max(c, c2), std::min(c, c2)}, {},
                              detail::random_bijection(rng, n)});
        } else if (sizes[static_cast<std::size_t>(c)] == 2 && coin(rng) < 0.7) {
            const auto& gate = palette.gates2[std::uniform_int_distribution<std::size_t>(
                0, palette.gates2.size() - 1)(rng)];
            layers.push_back({LayerKind::unitary, {c}, gate, {}});
        } else {
            layers.push_back({LayerKind::permutation, {c}, {},
                              detail::random_bijection(rng, sizes[static_cast<std::size_t>(c)])});
        }
    }

    AcceptingSpec acc;
    if (coin(rng) < 0.4) {
        acc.use_constraints = true;
        const int c = std::uniform_int_distribution<int>(0, static_cast<int>(sizes.size()) - 1)(rng);
        acc.constraints.emplace_back(
            c, static_cast<std::uint32_t>(std::uniform_int_distribution<int>(
                   0, static_cast<int>(sizes[static_cast<std::size_t>(c)]) - 1)(rng)));
    } else {
        const bool take_all = coin(rng) < 0.15;
        for (std::uint64_t r = 0; r < prod; ++r)
            if (take_all || coin(rng) < 0.3) acc.states.push_back(reg.unrank(r));
        if (acc.states.empty())
            acc.states.push_back(reg.unrank(std::uniform_int_distribution<std::uint64_t>(
                0, prod - 1)(rng)));
    }

    return Program(std::move(reg), std::move(palette.field), std::move(layers),
                   std::move(initial), std::move(acc));
}

}  // namespace gapq::fixtures

#endif  // GAPQ_TESTS_SUPPORT_FIXTURES_HPP
