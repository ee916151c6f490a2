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

#ifndef GAPQ_PRESENTATION_HPP
#define GAPQ_PRESENTATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gapq/canonical_form.hpp"
#include "gapq/common.hpp"

namespace gapq {

/// One named transition amplitude delta: the canonical form of u*delta
/// together with a floating witness of delta itself.
struct AmplitudeEntry {
    std::string id;
    CanonicalForm form;  // canonical form of u * value
    Complex numeric;     // value itself

    friend bool operator==(const AmplitudeEntry&, const AmplitudeEntry&) = default;
};

struct PresentationViolation {
    std::string kind;    // "beta0", "alpha_magnitude", "u", "struct", "amplitude", "e_bound"
    std::string where;   // which entry
    std::string detail;
    double error = 0.0;  // numeric discrepancy when applicable
};

struct PresentationReport {
    std::vector<PresentationViolation> violations;
    bool valid() const { return violations.empty(); }
};

/// User-declared presentation of the amplitude field: transcendentals
/// alpha_1..alpha_m, basis beta_0..beta_{d-1} with beta_0 = 1, a common
/// denominator u, structure constants (the forms of u*beta_i*beta_j), and
/// a named table of transition amplitudes.
///
/// The presentation is data, not a theorem: algebraic independence of the
/// alphas and basis-hood of the betas cannot be decided here, so symbolic
/// zero coincides with value zero only for honest presentations. validate()
/// checks everything that is numerically checkable.
class FieldPresentation {
  public:
    FieldPresentation() = default;

    FieldPresentation(int m, int d, std::vector<Complex> alpha, std::vector<Complex> beta,
                      Complex u_numeric, CanonicalForm u_form,
                      std::vector<CanonicalForm> structure_constants,
                      std::vector<AmplitudeEntry> amplitudes, std::int32_t e_bound = -1)
        : m_(m),
          d_(d),
          alpha_(std::move(alpha)),
          beta_(std::move(beta)),
          u_numeric_(u_numeric),
          u_form_(std::move(u_form)),
          struct_(std::move(structure_constants)),
          amplitudes_(std::move(amplitudes)) {
        if (m_ < 0 || d_ < 1) throw parse_error("field: need m >= 0 and d >= 1");
        if (static_cast<int>(alpha_.size()) != m_)
            throw parse_error("field: alpha must list exactly m numbers");
        if (static_cast<int>(beta_.size()) != d_)
            throw parse_error("field: beta must list exactly d numbers");
        if (static_cast<int>(struct_.size()) != d_ * d_)
            throw parse_error("field: structure constants must cover all d*d pairs");
        check_form_dims(u_form_, "u.form");
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                check_form_dims(struct_entry(i, j), "struct[" + struct_key(i, j) + "]");
        // Canonical slot order: sorted by id. Makes the layout independent
        // of construction order, so print/parse round trips compare equal.
        std::sort(amplitudes_.begin(), amplitudes_.end(),
                  [](const AmplitudeEntry& a, const AmplitudeEntry& b) { return a.id < b.id; });
        for (std::size_t s = 0; s < amplitudes_.size(); ++s) {
            check_form_dims(amplitudes_[s].form, "amplitudes[" + amplitudes_[s].id + "]");
            if (!slots_.emplace(amplitudes_[s].id, s).second)
                throw parse_error("field: duplicate amplitude id '" + amplitudes_[s].id + "'");
        }
        const std::int32_t required = required_e_bound();
        e_bound_ = (e_bound < 0) ? required : e_bound;
    }

    int m() const { return m_; }
    int d() const { return d_; }
    const std::vector<Complex>& alpha_numeric() const { return alpha_; }
    const std::vector<Complex>& beta_numeric() const { return beta_; }
    Complex u_numeric() const { return u_numeric_; }
    const CanonicalForm& u_form() const { return u_form_; }
    std::int32_t e_bound() const { return e_bound_; }

    const CanonicalForm& structure_constant(int i, int j) const {
        if (i < 0 || i >= d_ || j < 0 || j >= d_)
            throw lookup_error("structure constant (" + std::to_string(i) + "," +
                               std::to_string(j) + ") out of range for d=" + std::to_string(d_));
        return struct_entry(i, j);
    }

    std::size_t amplitude_count() const { return amplitudes_.size(); }
    const AmplitudeEntry& amplitude_at(std::size_t slot) const { return amplitudes_[slot]; }

    bool has_amplitude(const std::string& id) const { return slots_.count(id) != 0; }

    std::size_t amplitude_slot(const std::string& id) const {
        auto it = slots_.find(id);
        if (it == slots_.end()) throw lookup_error("unknown amplitude id '" + id + "'");
        return it->second;
    }

    const AmplitudeEntry& amplitude(const std::string& id) const {
        return amplitudes_[amplitude_slot(id)];
    }

    /// Smallest legal e bound: max of d and of ind over every stored form.
    std::int32_t required_e_bound() const {
        std::int32_t e = d_;
        e = std::max(e, u_form_.ind());
        for (const auto& f : struct_) e = std::max(e, f.ind());
        for (const auto& a : amplitudes_) e = std::max(e, a.form.ind());
        return e;
    }

    /// Value of one monomial (prod alpha_i^{k_i}) * beta_k in floating point.
    Complex monomial_value(const Index& idx) const {
        if (idx.basis_pos < 0 || idx.basis_pos >= d_)
            throw presentation_mismatch("index basis position " + std::to_string(idx.basis_pos) +
                                        " out of range for d=" + std::to_string(d_));
        if (static_cast<int>(idx.exponents.size()) != m_)
            throw presentation_mismatch("index arity " + std::to_string(idx.exponents.size()) +
                                        " does not match m=" + std::to_string(m_));
        Complex v = beta_[idx.basis_pos];
        for (int i = 0; i < m_; ++i) v *= int_pow(alpha_[i], idx.exponents[i], i);
        return v;
    }

    /// Floating witness of a form: sum of coefficient * monomial value.
    Complex numeric_embed(const CanonicalForm& f) const {
        Complex acc{0.0, 0.0};
        for (const auto& [idx, coeff] : f.terms())
            acc += big_to_double(coeff) * monomial_value(idx);
        return acc;
    }

    /// The induction step of the scaled-amplitude arithmetic: given `state`,
    /// the canonical form of u^{2t-1} * a, returns the canonical form of
    /// u^{2t+1} * (a * delta), i.e. of u^2 * value(state) * delta.
    ///
    /// Expansion per term: coefficient a at index (k, k_1..k_m) of `state`,
    /// coefficient b at (j, j_1..j_m) of the u*delta form, and coefficient c
    /// at (h, h_1..h_m) of the structure constant for u*beta_k*beta_j land
    /// a*b*c at index (h, k_1+j_1+h_1, ...).
    CanonicalForm scale_mul(const CanonicalForm& state, const AmplitudeEntry& amp) const {
        CanonicalForm out;
        for (const auto& [kidx, a] : state.terms()) {
            if (kidx.basis_pos < 0 || kidx.basis_pos >= d_)
                throw presentation_mismatch("state form uses basis position " +
                                            std::to_string(kidx.basis_pos) + " outside [0," +
                                            std::to_string(d_) + ")");
            for (const auto& [jidx, b] : amp.form.terms()) {
                const BigInt ab = a * b;
                const CanonicalForm& sc = struct_entry(kidx.basis_pos, jidx.basis_pos);
                for (const auto& [hidx, c] : sc.terms()) {
                    Index out_idx;
                    out_idx.basis_pos = hidx.basis_pos;
                    out_idx.exponents.resize(m_);
                    for (int i = 0; i < m_; ++i)
                        out_idx.exponents[i] =
                            kidx.exponents[i] + jidx.exponents[i] + hidx.exponents[i];
                    out.add_term(std::move(out_idx), ab * c);
                }
            }
        }
        return out;
    }

    CanonicalForm scale_mul(const CanonicalForm& state, const std::string& amplitude_id) const {
        return scale_mul(state, amplitude(amplitude_id));
    }

    /// Numeric consistency audit. Collects every violation instead of
    /// stopping at the first one.
    PresentationReport validate() const {
        PresentationReport report;
        if (beta_[0] != Complex{1.0, 0.0}) {
            report.violations.push_back({"beta0", "beta[0]",
                                         "basis must start with the exact constant 1", 0.0});
        }
        for (int i = 0; i < m_; ++i) {
            if (!(std::abs(alpha_[i]) >= tol::kAlphaMinMagnitude)) {
                report.violations.push_back({"alpha_magnitude", "alpha[" + std::to_string(i) + "]",
                                             "magnitude below reciprocal guard", 0.0});
            }
        }
        if (!(std::abs(u_numeric_) >= tol::kAlphaMinMagnitude)) {
            report.violations.push_back({"u", "u.numeric", "denominator numerically zero", 0.0});
            return report;  // every further check divides by u
        }
        check_consistency(report, "u", "u.form", u_form_, Complex{1.0, 0.0});
        for (int i = 0; i < d_; ++i) {
            for (int j = 0; j < d_; ++j) {
                check_consistency(report, "struct", "struct[" + struct_key(i, j) + "]",
                                  struct_entry(i, j), beta_[i] * beta_[j]);
            }
        }
        for (const auto& a : amplitudes_) {
            check_consistency(report, "amplitude", "amplitudes[" + a.id + "]", a.form, a.numeric);
        }
        const std::int32_t required = required_e_bound();
        if (e_bound_ < required) {
            report.violations.push_back(
                {"e_bound", "e_bound",
                 "declared " + std::to_string(e_bound_) + " but stored forms require " +
                     std::to_string(required),
                 0.0});
        }
        return report;
    }

    friend bool operator==(const FieldPresentation& a, const FieldPresentation& b) {
        return a.m_ == b.m_ && a.d_ == b.d_ && a.alpha_ == b.alpha_ && a.beta_ == b.beta_ &&
               a.u_numeric_ == b.u_numeric_ && a.u_form_ == b.u_form_ && a.struct_ == b.struct_ &&
               a.amplitudes_ == b.amplitudes_ && a.e_bound_ == b.e_bound_;
    }

    // --- file format -------------------------------------------------------

    static FieldPresentation from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    static FieldPresentation parse(const std::string& text) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw parse_error(std::string("field presentation: ") + e.what());
        }
        return from_json(j);
    }

  private:
    static std::string struct_key(int i, int j) {
        return std::to_string(i) + "," + std::to_string(j);
    }

    const CanonicalForm& struct_entry(int i, int j) const { return struct_[i * d_ + j]; }

    void check_form_dims(const CanonicalForm& f, const std::string& where) const {
        for (const auto& [idx, coeff] : f.terms()) {
            if (idx.basis_pos < 0 || idx.basis_pos >= d_)
                throw parse_error("field: " + where + ": basis position " +
                                  std::to_string(idx.basis_pos) + " outside [0," +
                                  std::to_string(d_) + ")");
            if (static_cast<int>(idx.exponents.size()) != m_)
                throw parse_error("field: " + where + ": index lists " +
                                  std::to_string(idx.exponents.size()) + " exponents, expected m=" +
                                  std::to_string(m_));
        }
    }

    Complex int_pow(Complex base, std::int32_t exp, int which_alpha) const {
        if (exp < 0) {
            if (std::abs(base) < tol::kAlphaMinMagnitude)
                throw invariant_error("alpha[" + std::to_string(which_alpha) +
                                      "] too close to zero for a negative exponent");
            base = Complex{1.0, 0.0} / base;
            exp = -exp;
        }
        Complex acc{1.0, 0.0};
        while (exp > 0) {
            if (exp & 1) acc *= base;
            base *= base;
            exp >>= 1;
        }
        return acc;
    }

    /// |embed(form)/u - direct| against the relative tolerance with an
    /// absolute floor. Embedding failures (guarded reciprocals, non-finite
    /// values) are reported as violations, never thrown.
    void check_consistency(PresentationReport& report, const std::string& kind,
                           const std::string& where, const CanonicalForm& form,
                           Complex direct) const {
        Complex embedded;
        try {
            embedded = numeric_embed(form);
        } catch (const std::exception& e) {
            report.violations.push_back({kind, where, e.what(), 0.0});
            return;
        }
        const double err = std::abs(embedded / u_numeric_ - direct);
        const double allowed = std::max(tol::kConsistencyAbsFloor,
                                        tol::kConsistencyRel * std::abs(direct));
        if (!(err <= allowed)) {
            report.violations.push_back(
                {kind, where,
                 "embedded value disagrees with declared value (err " + std::to_string(err) + ")",
                 err});
        }
    }

    int m_ = 0;
    int d_ = 1;
    std::vector<Complex> alpha_;
    std::vector<Complex> beta_{Complex{1.0, 0.0}};
    Complex u_numeric_{1.0, 0.0};
    CanonicalForm u_form_;
    std::vector<CanonicalForm> struct_;
    std::vector<AmplitudeEntry> amplitudes_;
    std::map<std::string, std::size_t> slots_;
    std::int32_t e_bound_ = 1;
};

/// Spec-level spellings.
inline Complex numeric_embed(const CanonicalForm& f, const FieldPresentation& fp) {
    return fp.numeric_embed(f);
}

inline CanonicalForm cf_scale_mul(const CanonicalForm& state, const std::string& delta_id,
                                  const FieldPresentation& fp) {
    return fp.scale_mul(state, delta_id);
}

inline PresentationReport validate_presentation(const FieldPresentation& fp) {
    return fp.validate();
}

// --- JSON details ----------------------------------------------------------

namespace detail {

inline Complex complex_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw parse_error(where + ": complex numbers are [re, im] pairs");
    return Complex{j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json complex_to_json(Complex z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline BigInt coeff_from_json(const nlohmann::json& j, const std::string& where) {
    try {
        if (j.is_string()) return BigInt(j.get<std::string>());
        if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    } catch (const std::exception&) {
        throw parse_error(where + ": malformed integer coefficient");
    }
    throw parse_error(where + ": coefficients are decimal strings");
}

inline Index index_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw parse_error(where + ": an index is [k, k_1, ..., k_m]");
    Index idx;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) throw parse_error(where + ": index entries are integers");
        if (i == 0)
            idx.basis_pos = j[i].get<std::int32_t>();
        else
            idx.exponents.push_back(j[i].get<std::int32_t>());
    }
    return idx;
}

inline nlohmann::json index_to_json(const Index& idx) {
    nlohmann::json out = nlohmann::json::array({idx.basis_pos});
    for (std::int32_t k : idx.exponents) out.push_back(k);
    return out;
}

inline CanonicalForm form_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) throw parse_error(where + ": a form is a list of [index, coeff] pairs");
    CanonicalForm f;
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 2)
            throw parse_error(where + ": a form term is an [index, coeff] pair");
        f.add_term(index_from_json(term[0], where), coeff_from_json(term[1], where));
    }
    return f;
}

inline nlohmann::json form_to_json(const CanonicalForm& f) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [idx, coeff] : f.terms())
        out.push_back(nlohmann::json::array({index_to_json(idx), coeff.str()}));
    return out;
}

}  // namespace detail

inline FieldPresentation FieldPresentation::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("field presentation: expected an object");
    for (const std::string key : {"m", "d", "alpha", "beta", "u", "struct", "amplitudes"})
        if (!j.contains(key)) throw parse_error("field presentation: missing '" + key + "'");
    if (!j["m"].is_number_integer() || !j["d"].is_number_integer())
        throw parse_error("field presentation: m and d are integers");
    const int m = j["m"].get<int>();
    const int d = j["d"].get<int>();

    if (!j["alpha"].is_array() || !j["beta"].is_array())
        throw parse_error("field presentation: alpha and beta are arrays");
    std::vector<Complex> alpha;
    for (std::size_t i = 0; i < j["alpha"].size(); ++i)
        alpha.push_back(detail::complex_from_json(j["alpha"][i], "alpha[" + std::to_string(i) + "]"));
    std::vector<Complex> beta;
    for (std::size_t i = 0; i < j["beta"].size(); ++i)
        beta.push_back(detail::complex_from_json(j["beta"][i], "beta[" + std::to_string(i) + "]"));

    if (!j["u"].is_object() || !j["u"].contains("numeric") || !j["u"].contains("form"))
        throw parse_error("field presentation: u is {numeric, form}");
    const Complex u_numeric = detail::complex_from_json(j["u"]["numeric"], "u.numeric");
    CanonicalForm u_form = detail::form_from_json(j["u"]["form"], "u.form");

    if (!j["struct"].is_object()) throw parse_error("field presentation: struct is an object");
    std::vector<CanonicalForm> sc(static_cast<std::size_t>(std::max(d, 1)) * std::max(d, 1));
    for (int i = 0; i < d; ++i) {
        for (int jj = 0; jj < d; ++jj) {
            const std::string key = struct_key(i, jj);
            if (!j["struct"].contains(key))
                throw parse_error("field presentation: struct missing pair \"" + key + "\"");
            sc[i * d + jj] = detail::form_from_json(j["struct"][key], "struct[" + key + "]");
        }
    }
    for (const auto& [key, value] : j["struct"].items()) {
        int pi = -1, pj = -1;
        if (std::sscanf(key.c_str(), "%d,%d", &pi, &pj) != 2 || pi < 0 || pi >= d || pj < 0 ||
            pj >= d)
            throw parse_error("field presentation: struct key \"" + key +
                              "\" is not a pair in [0,d)^2");
    }

    if (!j["amplitudes"].is_object())
        throw parse_error("field presentation: amplitudes is an object");
    std::vector<AmplitudeEntry> amplitudes;
    for (const auto& [id, entry] : j["amplitudes"].items()) {
        if (!entry.is_object() || !entry.contains("numeric") || !entry.contains("form"))
            throw parse_error("field presentation: amplitudes[" + id + "] is {numeric, form}");
        AmplitudeEntry a;
        a.id = id;
        a.numeric = detail::complex_from_json(entry["numeric"], "amplitudes[" + id + "].numeric");
        a.form = detail::form_from_json(entry["form"], "amplitudes[" + id + "].form");
        amplitudes.push_back(std::move(a));
    }

    std::int32_t e_bound = -1;
    if (j.contains("e_bound")) {
        if (!j["e_bound"].is_number_integer())
            throw parse_error("field presentation: e_bound is an integer");
        e_bound = j["e_bound"].get<std::int32_t>();
    }

    return FieldPresentation(m, d, std::move(alpha), std::move(beta), u_numeric,
                             std::move(u_form), std::move(sc), std::move(amplitudes), e_bound);
}

inline nlohmann::json FieldPresentation::to_json() const {
    nlohmann::json j;
    j["m"] = m_;
    j["d"] = d_;
    j["alpha"] = nlohmann::json::array();
    for (Complex a : alpha_) j["alpha"].push_back(detail::complex_to_json(a));
    j["beta"] = nlohmann::json::array();
    for (Complex b : beta_) j["beta"].push_back(detail::complex_to_json(b));
    j["u"] = {{"numeric", detail::complex_to_json(u_numeric_)},
              {"form", detail::form_to_json(u_form_)}};
    j["struct"] = nlohmann::json::object();
    for (int i = 0; i < d_; ++i)
        for (int jj = 0; jj < d_; ++jj)
            j["struct"][struct_key(i, jj)] = detail::form_to_json(struct_entry(i, jj));
    j["amplitudes"] = nlohmann::json::object();
    for (const auto& a : amplitudes_) {
        j["amplitudes"][a.id] = {{"numeric", detail::complex_to_json(a.numeric)},
                                 {"form", detail::form_to_json(a.form)}};
    }
    j["e_bound"] = e_bound_;
    return j;
}

}  // namespace gapq

#endif  // GAPQ_PRESENTATION_HPP
