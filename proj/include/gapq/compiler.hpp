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

#ifndef GAPQ_COMPILER_HPP
#define GAPQ_COMPILER_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gapq/common.hpp"
#include "gapq/counting.hpp"
#include "gapq/presentation.hpp"
#include "gapq/program.hpp"
#include "gapq/simulator.hpp"

namespace gapq {

using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// The three rotation gates used by the predicate-to-program translation,
/// all with entries in {0, +-1, +-3/5, +-4/5}. Convention throughout:
/// matrix[row][col] = <row|U|col>.
inline RationalMatrix gate_h() {
    return {{{4, 5}, {3, 5}}, {{3, 5}, {-4, 5}}};
}

inline RationalMatrix gate_j() {
    return {{{3, 5}, {4, 5}}, {{4, 5}, {-3, 5}}};
}

/// Two copies of the (3/5, 4/5) rotation interleaved on a 4-letter cell:
/// {0,2} and {1,3} are the invariant planes.
inline RationalMatrix gate_k() {
    return {{{3, 5}, 0, {4, 5}, 0},
            {0, {4, 5}, 0, {3, 5}},
            {{4, 5}, 0, {-3, 5}, 0},
            {0, {3, 5}, 0, {-4, 5}}};
}

/// gate_j acting on {0,1} of a 4-letter cell, identity on {2,3}.
inline RationalMatrix gate_j_ext() {
    return {{{3, 5}, {4, 5}, 0, 0}, {{4, 5}, {-3, 5}, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
}

inline RationalMatrix rational_matmul(const RationalMatrix& a, const RationalMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), cols = b.empty() ? 0 : b[0].size();
    RationalMatrix out(n, std::vector<Rational>(cols, 0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t m = 0; m < k; ++m) {
            if (a[r][m] == 0) continue;
            for (std::size_t c = 0; c < cols; ++c) out[r][c] += a[r][m] * b[m][c];
        }
    return out;
}

/// Exact check of U^T U = I for a real matrix. No tolerance is involved;
/// this is rational arithmetic.
inline bool is_exactly_orthogonal(const RationalMatrix& u) {
    const std::size_t n = u.size();
    for (const auto& row : u)
        if (row.size() != n) return false;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Rational acc = 0;
            for (std::size_t r = 0; r < n; ++r) acc += u[r][a] * u[r][b];
            if (acc != Rational(a == b ? 1 : 0)) return false;
        }
    return true;
}

/// Field presentation for programs whose amplitudes are the rational gate
/// entries: no transcendentals (m = 0), trivial basis (d = 1), u = 5. The
/// tabulated form of each amplitude is the integer 5*delta.
inline FieldPresentation rational_gate_field() {
    const Index unit{0, {}};
    auto form = [&](long long k) {
        return k == 0 ? CanonicalForm{} : CanonicalForm::single(unit, BigInt{k});
    };
    std::vector<AmplitudeEntry> amps;
    const std::pair<const char*, long long> entries[] = {
        {"0", 0}, {"1", 5}, {"-1", -5}, {"3/5", 3}, {"-3/5", -3}, {"4/5", 4}, {"-4/5", -4}};
    for (const auto& [id, k] : entries)
        amps.push_back({id, form(k), Complex{static_cast<double>(k) / 5.0, 0.0}});
    return FieldPresentation(/*m=*/0, /*d=*/1, {}, {Complex{1.0, 0.0}}, Complex{5.0, 0.0},
                             form(5), {form(5)}, std::move(amps));
}

namespace detail {

inline std::vector<std::vector<std::string>> matrix_ids(const RationalMatrix& u) {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : u) {
        std::vector<std::string> ids;
        for (const Rational& v : row) {
            if (v == 0)
                ids.push_back("0");
            else if (v == 1)
                ids.push_back("1");
            else if (v == -1)
                ids.push_back("-1");
            else if (v == Rational(3, 5))
                ids.push_back("3/5");
            else if (v == Rational(-3, 5))
                ids.push_back("-3/5");
            else if (v == Rational(4, 5))
                ids.push_back("4/5");
            else if (v == Rational(-4, 5))
                ids.push_back("-4/5");
            else
                throw lookup_error("gate entry outside the tabulated amplitude set");
        }
        out.push_back(std::move(ids));
    }
    return out;
}

}  // namespace detail

/// Translates a p-bit predicate R into a program whose final amplitude at
/// the designated state (0,...,0,1) encodes the acceptance gap of R:
///
///   amplitude = -(12/25)^(p+1) * (ones(R) - zeros(R)).
///
/// Register: p two-letter input cells, then one four-letter output cell.
/// Layer order: a rotation on every input cell, one reversible layer
/// XOR-ing R(y) into the low output bit, a second rotation on every input
/// cell, then the two output-cell rotations. 2p+3 layers in total.
inline Program compile_gap(const PredicateSpec& spec) {
    if (spec.p < 1 || spec.p > limits::kMaxCompileArity)
        throw validation_error("compile: predicate arity must be in [1, " +
                               std::to_string(limits::kMaxCompileArity) + "]");
    if (spec.table.size() != (std::size_t{1} << spec.p))
        throw validation_error("compile: predicate table must list 2^p bits");

    Register reg;
    reg.sizes.assign(static_cast<std::size_t>(spec.p), 2);
    reg.sizes.push_back(4);
    BasisState initial;
    initial.symbols.assign(reg.sizes.size(), 0);

    std::vector<Layer> layers;
    const auto h_ids = detail::matrix_ids(gate_h());
    const auto j_ids = detail::matrix_ids(gate_j());
    for (int c = 0; c < spec.p; ++c) layers.push_back({LayerKind::unitary, {c}, h_ids, {}});

    Layer xor_layer;
    xor_layer.kind = LayerKind::permutation;
    for (int c = 0; c <= spec.p; ++c) xor_layer.cells.push_back(c);
    const std::uint64_t inputs = std::uint64_t{1} << spec.p;
    xor_layer.perm.resize(inputs * 4);
    for (std::uint64_t y = 0; y < inputs; ++y) {
        for (std::uint64_t b = 0; b < 4; ++b) {
            const std::uint64_t image = b < 2 ? (b ^ (spec.table[y] ? 1 : 0)) : b;
            xor_layer.perm[y * 4 + b] = y * 4 + image;
        }
    }
    layers.push_back(std::move(xor_layer));

    for (int c = 0; c < spec.p; ++c) layers.push_back({LayerKind::unitary, {c}, j_ids, {}});
    layers.push_back({LayerKind::unitary, {spec.p}, detail::matrix_ids(gate_k()), {}});
    layers.push_back({LayerKind::unitary, {spec.p}, detail::matrix_ids(gate_j_ext()), {}});

    AcceptingSpec accepting;
    BasisState designated;
    designated.symbols.assign(static_cast<std::size_t>(spec.p), 0);
    designated.symbols.push_back(1);
    accepting.states.push_back(std::move(designated));

    return Program(std::move(reg), rational_gate_field(), std::move(layers), std::move(initial),
                   std::move(accepting));
}

struct CompilationCheck {
    BigInt gap = 0;
    BigInt expected_coefficient = 0;  // -12^(p+1) * gap * 5^(2p+3)
    BigInt actual_coefficient = 0;    // stored integer at the designated state
    bool identity_holds = false;
    bool accept = false;
    bool accept_matches_gap = false;  // accept == (gap != 0)
    double designated_numeric = 0.0;  // |amplitude| from the floating stepper
    bool pass() const { return identity_holds && accept_matches_gap; }
};

/// Compiles the predicate, runs the exact stepper and confirms the gap
/// identity on the stored integer: with T = 2p+3 layers the designated
/// coefficient is amplitude * 5^(2T-1), which the identity above reduces
/// to -12^(p+1) * gap * 5^(2p+3).
inline CompilationCheck verify_compilation(const PredicateSpec& spec) {
    using boost::multiprecision::pow;
    const Program program = compile_gap(spec);
    const SimulationResult sim = run(program);
    const Decision decision = decide_nqp(program, sim);

    CompilationCheck check;
    check.gap = gap_value(spec);
    check.expected_coefficient = -pow(BigInt{12}, static_cast<unsigned>(spec.p + 1)) * check.gap *
                                 pow(BigInt{5}, static_cast<unsigned>(2 * spec.p + 3));

    const std::uint64_t designated = program.reg().rank(program.accepting().states.front());
    const auto it = sim.exact.amplitudes.find(designated);
    check.actual_coefficient =
        it == sim.exact.amplitudes.end() ? BigInt{0} : it->second.coefficient(Index{0, {}});
    check.identity_holds = check.actual_coefficient == check.expected_coefficient;

    check.accept = decision.accept;
    check.accept_matches_gap = check.accept == (check.gap != 0);
    const auto nit = sim.numeric.amplitudes.find(designated);
    check.designated_numeric =
        nit == sim.numeric.amplitudes.end() ? 0.0 : std::abs(nit->second);
    return check;
}

}  // namespace gapq

#endif  // GAPQ_COMPILER_HPP
