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

#ifndef GAPQ_COMMON_HPP
#define GAPQ_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gapq {

// Integer coefficients are arbitrary precision: path sums over 2^p branches
// with products of gate coefficients overflow fixed width quickly.
using BigInt = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;

// Tolerances and caps. These are contract values, not tuning knobs.
namespace tol {

// Presentation consistency: separates double roundoff from genuinely
// inconsistent declared forms at desk scale.
inline constexpr double kConsistencyRel = 1e-9;
inline constexpr double kConsistencyAbsFloor = 1e-12;

// Max-entry deviation of U†U from the identity.
inline constexpr double kUnitarity = 1e-9;

// Numeric L2-norm drift allowed per layer, and the per-state agreement
// between the embedded exact form and the float amplitude.
inline constexpr double kNormDrift = 1e-6;
inline constexpr double kStepConsistency = 1e-6;

// Numeric amplitudes below this are dropped from the float superposition.
inline constexpr double kNumericPrune = 1e-15;

// Monomial evaluation refuses reciprocals of near-zero transcendentals.
inline constexpr double kAlphaMinMagnitude = 1e-300;

}  // namespace tol

namespace limits {

// Registers larger than this are refused rather than thrashed.
inline constexpr std::uint64_t kStateSpaceCap = std::uint64_t{1} << 24;

// Default (path x index) visit budget for path-sum enumeration.
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

// Predicate arity caps: gap computation vs. compiled-program simulation.
inline constexpr int kMaxGapArity = 20;
inline constexpr int kMaxCompileArity = 4;

}  // namespace limits

// Malformed input text: bad JSON, missing fields, out-of-range symbols,
// unknown amplitude ids. Messages carry the offending location.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Structurally well-formed input that fails a semantic check (non-unitary
// layer, non-bijective permutation, inconsistent presentation, cap excess).
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Two values built over different presentation dimensions were combined.
struct presentation_mismatch : std::runtime_error {
    explicit presentation_mismatch(const std::string& what) : std::runtime_error(what) {}
};

// An amplitude id that does not resolve against the presentation.
struct lookup_error : std::runtime_error {
    explicit lookup_error(const std::string& what) : std::runtime_error(what) {}
};

// A run-time invariant (e.g. the index growth bound) failed, which points
// at a dishonest presentation rather than at the caller.
struct invariant_error : std::runtime_error {
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

// Path enumeration would exceed the configured visit budget; no partial
// sums are returned.
struct budget_exceeded : std::runtime_error {
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

inline double big_to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace gapq

#endif  // GAPQ_COMMON_HPP
