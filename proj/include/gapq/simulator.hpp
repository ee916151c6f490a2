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

#ifndef GAPQ_SIMULATOR_HPP
#define GAPQ_SIMULATOR_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gapq/canonical_form.hpp"
#include "gapq/common.hpp"
#include "gapq/presentation.hpp"
#include "gapq/program.hpp"

namespace gapq {

/// Exact state after t layers. Each stored form represents the true
/// amplitude times u^(2t-1), so every coefficient stays an integer; the
/// scale is peeled off only when comparing against numerics. At t = 0 the
/// single entry carries the form of u as a scale seed and is not read
/// arithmetically. States whose form cancels to zero are dropped.
struct ExactSuperposition {
    int t = 0;
    std::map<std::uint64_t, CanonicalForm> amplitudes;

    std::int32_t max_ind() const {
        std::int32_t m = 0;
        for (const auto& [rank, form] : amplitudes) m = std::max(m, form.ind());
        return m;
    }
};

/// Floating-point companion state holding true amplitudes (no scale).
struct NumericSuperposition {
    std::map<std::uint64_t, Complex> amplitudes;

    double norm_squared() const {
        double n = 0.0;
        for (const auto& [rank, z] : amplitudes) n += std::norm(z);
        return n;
    }
};

inline ExactSuperposition initial_exact(const Program& p) {
    ExactSuperposition s;
    s.t = 0;
    s.amplitudes[p.reg().rank(p.initial())] = p.field().u_form();
    return s;
}

inline NumericSuperposition initial_numeric(const Program& p) {
    NumericSuperposition s;
    s.amplitudes[p.reg().rank(p.initial())] = Complex{1.0, 0.0};
    return s;
}

/// Applies layer t of the program exactly. The first layer seeds each
/// successor with the tabulated form of u*amplitude (true amplitudes start
/// at scale u^1); later layers multiply through the structure constants,
/// which raises the scale by u^2 per step. Permutation transitions at
/// t >= 1 use a unit amplitude whose u*delta form is the form of u itself,
/// so they consume the same u^2 as a unitary entry. Checks the index
/// growth bound ind <= 2*e*t and throws invariant_error on a breach.
inline ExactSuperposition step_exact(const ExactSuperposition& in, const Program& p,
                                     std::size_t layer_idx) {
    const FieldPresentation& fp = p.field();
    const LayerAction& action = p.action(layer_idx);
    ExactSuperposition out;
    out.t = in.t + 1;

    if (in.t == 0) {
        if (in.amplitudes.size() != 1)
            throw invariant_error("exact step: a t=0 state holds exactly one basis state");
        const auto& [rank, form] = *in.amplitudes.begin();
        if (!(form == fp.u_form()))
            throw invariant_error("exact step: the t=0 entry must carry the form of u");
        action.for_each_successor(rank, [&](std::uint64_t to, bool exact_one, std::size_t slot) {
            const CanonicalForm& seed = exact_one ? fp.u_form() : fp.amplitude_at(slot).form;
            auto [it, fresh] = out.amplitudes.try_emplace(to, seed);
            if (!fresh) it->second += seed;
        });
    } else {
        const AmplitudeEntry unit{"1", fp.u_form(), Complex{1.0, 0.0}};
        for (const auto& [rank, form] : in.amplitudes) {
            action.for_each_successor(
                rank, [&](std::uint64_t to, bool exact_one, std::size_t slot) {
                    const AmplitudeEntry& amp = exact_one ? unit : fp.amplitude_at(slot);
                    CanonicalForm contrib = fp.scale_mul(form, amp);
                    auto it = out.amplitudes.find(to);
                    if (it == out.amplitudes.end())
                        out.amplitudes.emplace(to, std::move(contrib));
                    else
                        it->second += contrib;
                });
        }
    }

    for (auto it = out.amplitudes.begin(); it != out.amplitudes.end();) {
        if (it->second.is_zero())
            it = out.amplitudes.erase(it);
        else
            ++it;
    }

    const std::int32_t bound = 2 * fp.e_bound() * out.t;
    for (const auto& [rank, form] : out.amplitudes) {
        if (form.ind() > bound)
            throw invariant_error("exact step: index bound breached at t=" +
                                  std::to_string(out.t) + ": state " +
                                  p.reg().unrank(rank).to_string() + " has ind " +
                                  std::to_string(form.ind()) + " > " + std::to_string(bound));
    }
    return out;
}

/// Floating-point application of layer t; contributions below the prune
/// threshold after accumulation are dropped.
inline NumericSuperposition step_numeric(const NumericSuperposition& in, const Program& p,
                                         std::size_t layer_idx) {
    const FieldPresentation& fp = p.field();
    const LayerAction& action = p.action(layer_idx);
    NumericSuperposition out;
    for (const auto& [rank, z] : in.amplitudes) {
        action.for_each_successor(rank, [&](std::uint64_t to, bool exact_one, std::size_t slot) {
            const Complex w = exact_one ? z : z * fp.amplitude_at(slot).numeric;
            out.amplitudes[to] += w;
        });
    }
    for (auto it = out.amplitudes.begin(); it != out.amplitudes.end();) {
        if (std::abs(it->second) <= tol::kNumericPrune)
            it = out.amplitudes.erase(it);
        else
            ++it;
    }
    return out;
}

struct StepStats {
    int t = 0;
    double norm = 0.0;  // numeric squared norm after this layer
    std::size_t live_states = 0;
    std::int32_t max_ind = 0;
    double consistency_max_err = 0.0;  // max |embed(form)/u^(2t-1) - numeric|
    bool norm_ok = true;
    bool consistency_ok = true;
};

struct TraceReport {
    std::vector<StepStats> steps;
    bool all_ok() const {
        for (const auto& s : steps)
            if (!s.norm_ok || !s.consistency_ok) return false;
        return true;
    }
};

struct SimulationResult {
    ExactSuperposition exact;
    NumericSuperposition numeric;
    TraceReport trace;
};

/// Runs the exact and floating-point steppers side by side, auditing after
/// every layer: numeric norm preservation and the agreement of the scaled
/// exact value with the numeric amplitude. Breaches are recorded in the
/// trace (and surfaced by callers), not fatal; an index bound breach in
/// the exact stepper still throws.
inline SimulationResult run(const Program& p) {
    SimulationResult r;
    r.exact = initial_exact(p);
    r.numeric = initial_numeric(p);

    const Complex u = p.field().u_numeric();
    Complex scale{1.0, 0.0};  // u^(2t-1) once t >= 1
    for (std::size_t li = 0; li < p.step_count(); ++li) {
        r.exact = step_exact(r.exact, p, li);
        r.numeric = step_numeric(r.numeric, p, li);
        scale = (li == 0) ? u : scale * u * u;

        StepStats st;
        st.t = r.exact.t;
        st.norm = r.numeric.norm_squared();
        st.live_states = r.exact.amplitudes.size();
        st.max_ind = r.exact.max_ind();
        double err = 0.0;
        for (const auto& [rank, form] : r.exact.amplitudes) {
            const Complex value = p.field().numeric_embed(form) / scale;
            const auto it = r.numeric.amplitudes.find(rank);
            const Complex z = it == r.numeric.amplitudes.end() ? Complex{0.0, 0.0} : it->second;
            err = std::max(err, std::abs(value - z));
        }
        for (const auto& [rank, z] : r.numeric.amplitudes) {
            if (!r.exact.amplitudes.count(rank)) err = std::max(err, std::abs(z));
        }
        st.consistency_max_err = err;
        st.norm_ok = std::abs(st.norm - 1.0) <= tol::kNormDrift;
        st.consistency_ok = err <= tol::kStepConsistency;
        r.trace.steps.push_back(st);
    }
    return r;
}

struct AcceptanceEvidence {
    BasisState state;
    CanonicalForm form;       // stored form at scale u^(2T-1); zero if the state died
    Complex exact_value;      // embed(form) / u^(2T-1)
    Complex numeric_value;    // from the floating-point stepper
};

struct Decision {
    bool accept = false;
    BigInt g = 0;  // sum of squared coefficients over accepting-state forms
    std::vector<AcceptanceEvidence> evidence;
};

/// Exact acceptance decision: the program accepts iff some accepting basis
/// state ends with a nonzero canonical form. g aggregates every stored
/// coefficient squared across accepting states, so accept == (g != 0).
/// Explicitly listed accepting states always appear in the evidence, even
/// with zero forms; constraint predicates report the live states matching.
inline Decision decide_nqp(const Program& p, const SimulationResult& r) {
    Decision d;
    const FieldPresentation& fp = p.field();
    Complex scale{1.0, 0.0};
    if (!p.layers().empty()) {
        scale = fp.u_numeric();
        for (std::size_t li = 1; li < p.step_count(); ++li)
            scale *= fp.u_numeric() * fp.u_numeric();
    }

    auto add_evidence = [&](const BasisState& s) {
        const std::uint64_t rank = p.reg().rank(s);
        AcceptanceEvidence ev;
        ev.state = s;
        const auto it = r.exact.amplitudes.find(rank);
        if (it != r.exact.amplitudes.end()) ev.form = it->second;
        ev.exact_value = ev.form.is_zero() ? Complex{0.0, 0.0} : fp.numeric_embed(ev.form) / scale;
        const auto nit = r.numeric.amplitudes.find(rank);
        ev.numeric_value = nit == r.numeric.amplitudes.end() ? Complex{0.0, 0.0} : nit->second;
        for (const auto& [index, coeff] : ev.form.terms()) d.g += coeff * coeff;
        if (!ev.form.is_zero()) d.accept = true;
        d.evidence.push_back(std::move(ev));
    };

    if (p.accepting().use_constraints) {
        for (const auto& [rank, form] : r.exact.amplitudes) {
            const BasisState s = p.reg().unrank(rank);
            if (p.accepting().accepts(s)) add_evidence(s);
        }
    } else {
        for (const BasisState& s : p.accepting().states) add_evidence(s);
    }
    return d;
}

inline Decision decide_nqp(const Program& p) { return decide_nqp(p, run(p)); }

}  // namespace gapq

#endif  // GAPQ_SIMULATOR_HPP
