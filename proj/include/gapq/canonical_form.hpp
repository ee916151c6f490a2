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

#ifndef GAPQ_CANONICAL_FORM_HPP
#define GAPQ_CANONICAL_FORM_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gapq/common.hpp"

namespace gapq {

/// Names one monomial (prod_i alpha_i^{exponents[i]}) * beta_{basis_pos}.
/// Exponents may be negative. basis_pos must lie in [0, d) of whatever
/// presentation the index is used with; the index itself only stores the
/// numbers.
struct Index {
    std::int32_t basis_pos = 0;
    std::vector<std::int32_t> exponents;

    Index() = default;
    Index(std::int32_t basis, std::vector<std::int32_t> exps)
        : basis_pos(basis), exponents(std::move(exps)) {}

    /// Largest |exponent|; 0 when there are no transcendentals. The basis
    /// position does not contribute.
    std::int32_t magnitude() const {
        std::int32_t mag = 0;
        for (std::int32_t k : exponents) mag = std::max(mag, std::abs(k));
        return mag;
    }

    friend bool operator==(const Index& a, const Index& b) = default;
    friend auto operator<=>(const Index& a, const Index& b) = default;

    std::string to_string() const {
        std::ostringstream os;
        os << "[" << basis_pos;
        for (std::int32_t k : exponents) os << "," << k;
        os << "]";
        return os.str();
    }
};

/// Integer-coefficient combination of indexed monomials, kept in normal
/// form: no stored coefficient is zero, and terms are ordered by index, so
/// two equal values always compare equal term-for-term.
///
/// A CanonicalForm does not know its presentation; callers must not mix
/// forms built over different (m, d). Operations that combine forms check
/// the exponent-tuple lengths and throw presentation_mismatch on disagreement.
class CanonicalForm {
  public:
    using TermMap = std::map<Index, BigInt>;

    CanonicalForm() = default;

    /// Builds a normal form from any term list: duplicate indices are
    /// accumulated, zero totals dropped. Construction order never matters.
    static CanonicalForm from_terms(const std::vector<std::pair<Index, BigInt>>& terms) {
        CanonicalForm f;
        for (const auto& [idx, coeff] : terms) f.add_term(idx, coeff);
        return f;
    }

    static CanonicalForm single(Index idx, BigInt coeff) {
        CanonicalForm f;
        f.add_term(std::move(idx), std::move(coeff));
        return f;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Coefficient at `idx` (the major sign with respect to that index);
    /// zero when the index is not principal.
    BigInt coefficient(const Index& idx) const {
        auto it = terms_.find(idx);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    /// Accumulates one term, preserving the normal form.
    void add_term(Index idx, BigInt coeff) {
        if (coeff == 0) return;
        check_arity(idx);
        auto [it, inserted] = terms_.try_emplace(std::move(idx), coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// Termwise sum. Both forms must share the exponent arity.
    friend CanonicalForm operator+(const CanonicalForm& a, const CanonicalForm& b) {
        CanonicalForm out = a;
        out += b;
        return out;
    }

    CanonicalForm& operator+=(const CanonicalForm& other) {
        for (const auto& [idx, coeff] : other.terms_) add_term(idx, coeff);
        return *this;
    }

    CanonicalForm operator-() const {
        CanonicalForm out = *this;
        for (auto& [idx, coeff] : out.terms_) coeff = -coeff;
        return out;
    }

    /// Max |exponent| over principal indices; 0 for the zero form (it has
    /// no principal index, and 0 keeps the growth bound monotone).
    std::int32_t ind() const {
        std::int32_t mag = 0;
        for (const auto& [idx, coeff] : terms_) mag = std::max(mag, idx.magnitude());
        return mag;
    }

    friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) = default;

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [idx, coeff] : terms_) {
            if (!first) os << " + ";
            os << coeff.str() << "*" << idx.to_string();
            first = false;
        }
        return os.str();
    }

  private:
    void check_arity(const Index& idx) const {
        if (!terms_.empty() && terms_.begin()->first.exponents.size() != idx.exponents.size()) {
            throw presentation_mismatch(
                "canonical form: mixed exponent arities " +
                std::to_string(terms_.begin()->first.exponents.size()) + " vs " +
                std::to_string(idx.exponents.size()));
        }
    }

    TermMap terms_;
};

/// Free-function spelling used throughout the counting machinery.
inline std::int32_t ind(const CanonicalForm& f) { return f.ind(); }

inline CanonicalForm cf_add(const CanonicalForm& a, const CanonicalForm& b) { return a + b; }

}  // namespace gapq

#endif  // GAPQ_CANONICAL_FORM_HPP
