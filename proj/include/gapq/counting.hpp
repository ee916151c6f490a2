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

#ifndef GAPQ_COUNTING_HPP
#define GAPQ_COUNTING_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gapq/canonical_form.hpp"
#include "gapq/common.hpp"
#include "gapq/presentation.hpp"
#include "gapq/program.hpp"
#include "gapq/simulator.hpp"

namespace gapq {

/// Boolean predicate on p bits, tabulated over all 2^p inputs. Inputs are
/// read big-endian: table[y] is the value at the bit string of y.
struct PredicateSpec {
    int p = 0;
    std::vector<bool> table;

    static PredicateSpec parse(const std::string& text) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw parse_error(std::string("predicate: ") + e.what());
        }
        return from_json(j);
    }

    static PredicateSpec from_json(const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("p") || !j.contains("table"))
            throw parse_error("predicate: expected {p, table}");
        PredicateSpec spec;
        try {
            spec.p = j["p"].get<int>();
            const std::string bits = j["table"].get<std::string>();
            if (spec.p < 1 || spec.p > limits::kMaxGapArity)
                throw parse_error("predicate: p must be in [1, " +
                                  std::to_string(limits::kMaxGapArity) + "]");
            if (bits.size() != (std::size_t{1} << spec.p))
                throw parse_error("predicate: table must list 2^p bits");
            for (char c : bits) {
                if (c != '0' && c != '1') throw parse_error("predicate: table is a 0/1 string");
                spec.table.push_back(c == '1');
            }
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(std::string("predicate: ") + e.what());
        }
        return spec;
    }

    nlohmann::json to_json() const {
        std::string bits;
        for (bool b : table) bits += b ? '1' : '0';
        return {{"p", p}, {"table", bits}};
    }

    bool operator()(std::uint64_t y) const { return table[y]; }
};

/// Number of accepted inputs minus number of rejected ones.
inline BigInt gap_value(const PredicateSpec& spec) {
    BigInt g = 0;
    for (bool b : spec.table) g += b ? 1 : -1;
    return g;
}

/// Transition weight of layer `layer_idx` between two indexed basis
/// states: the integer that the structure-constant expansion contributes
/// when a path moves from (C, k) to (C', k'). Zero when the layer has no
/// edge C -> C' or no index pairing reaches k'. At t >= 1 a permutation
/// edge behaves like a unitary entry with amplitude 1, whose u*delta form
/// is the form of u.
inline BigInt h_step(const Program& p, std::size_t layer_idx, const BasisState& from,
                     const Index& kfrom, const BasisState& to, const Index& kto) {
    const FieldPresentation& fp = p.field();
    if (kfrom.basis_pos < 0 || kfrom.basis_pos >= fp.d())
        throw presentation_mismatch("h: source index basis position out of range");
    const auto arity = static_cast<std::size_t>(fp.m());
    if (kfrom.exponents.size() != arity || kto.exponents.size() != arity)
        throw presentation_mismatch("h: index arity does not match the presentation");
    const LayerAction& action = p.action(layer_idx);
    const std::uint64_t to_rank = p.reg().rank(to);
    BigInt acc = 0;
    action.for_each_successor(p.reg().rank(from),
                              [&](std::uint64_t succ, bool exact_one, std::size_t slot) {
                                  if (succ != to_rank) return;
                                  const CanonicalForm& udelta =
                                      exact_one ? fp.u_form() : fp.amplitude_at(slot).form;
                                  for (const auto& [jidx, b] : udelta.terms()) {
                                      const CanonicalForm& sc =
                                          fp.structure_constant(kfrom.basis_pos, jidx.basis_pos);
                                      for (const auto& [hidx, c] : sc.terms()) {
                                          if (hidx.basis_pos != kto.basis_pos) continue;
                                          bool match = true;
                                          for (std::size_t i = 0; i < kto.exponents.size(); ++i) {
                                              if (kfrom.exponents[i] + jidx.exponents[i] +
                                                      hidx.exponents[i] !=
                                                  kto.exponents[i]) {
                                                  match = false;
                                                  break;
                                              }
                                          }
                                          if (match) acc += b * c;
                                      }
                                  }
                              });
    return acc;
}

/// Accumulated path sums after all layers: for each final (state, index)
/// pair, the sum over computation paths of the per-step integer weights.
/// This is the counting-theoretic reading of the run; it must agree
/// coefficient-for-coefficient with the exact stepper.
struct PathSumTable {
    std::size_t depth = 0;
    std::map<std::pair<std::uint64_t, Index>, BigInt> sums;
    std::uint64_t visited = 0;  // DFS expansions consumed

    BigInt at(std::uint64_t rank, const Index& idx) const {
        const auto it = sums.find({rank, idx});
        return it == sums.end() ? BigInt{0} : it->second;
    }
};

namespace detail {

class PathEnumerator {
  public:
    PathEnumerator(const Program& p, std::uint64_t budget) : p_(p), budget_(budget) {}

    PathSumTable run() {
        table_.depth = p_.step_count();
        Index start;
        start.basis_pos = 0;
        start.exponents.assign(static_cast<std::size_t>(p_.field().m()), 0);
        expand(p_.reg().rank(p_.initial()), start, BigInt{1}, 0);
        table_.visited = visited_;
        return std::move(table_);
    }

  private:
    bool in_lattice(const Index& idx, std::size_t level) const {
        const std::int64_t cap = std::int64_t{2} * p_.field().e_bound() *
                                 static_cast<std::int64_t>(level);
        for (std::int32_t e : idx.exponents)
            if (e > cap || e < -cap) return false;
        return true;
    }

    void expand(std::uint64_t rank, const Index& idx, const BigInt& weight,
                std::size_t steps_done) {
        if (++visited_ > budget_)
            throw budget_exceeded("path enumeration exceeded its budget of " +
                                  std::to_string(budget_) + " expansions");
        if (steps_done == p_.step_count()) {
            table_.sums[{rank, idx}] += weight;
            return;
        }
        const FieldPresentation& fp = p_.field();
        const LayerAction& action = p_.action(steps_done);
        action.for_each_successor(rank, [&](std::uint64_t to, bool exact_one, std::size_t slot) {
            const CanonicalForm& udelta = exact_one ? fp.u_form() : fp.amplitude_at(slot).form;
            if (steps_done == 0) {
                // First step: the path index jumps from the origin straight
                // to a term of the u*delta form, with that coefficient.
                for (const auto& [jidx, b] : udelta.terms()) {
                    if (!in_lattice(jidx, 1)) continue;
                    expand(to, jidx, weight * b, 1);
                }
                return;
            }
            for (const auto& [jidx, b] : udelta.terms()) {
                const CanonicalForm& sc =
                    fp.structure_constant(idx.basis_pos, jidx.basis_pos);
                for (const auto& [hidx, c] : sc.terms()) {
                    Index next;
                    next.basis_pos = hidx.basis_pos;
                    next.exponents.resize(idx.exponents.size());
                    for (std::size_t i = 0; i < idx.exponents.size(); ++i)
                        next.exponents[i] =
                            idx.exponents[i] + jidx.exponents[i] + hidx.exponents[i];
                    if (!in_lattice(next, steps_done + 1)) continue;
                    expand(to, next, weight * b * c, steps_done + 1);
                }
            }
        });
    }

    const Program& p_;
    const std::uint64_t budget_;
    std::uint64_t visited_ = 0;
    PathSumTable table_;
};

}  // namespace detail

inline PathSumTable enumerate_path_sums(const Program& p,
                                        std::uint64_t budget = limits::kDefaultBudget) {
    return detail::PathEnumerator(p, budget).run();
}

inline BigInt path_sum_f(const Program& p, const BasisState& state, const Index& idx,
                         std::uint64_t budget = limits::kDefaultBudget) {
    return enumerate_path_sums(p, budget).at(p.reg().rank(state), idx);
}

/// Sum of squared path sums over accepting final states and all reachable
/// indices. Positive iff some accepting amplitude is nonzero.
inline BigInt aggregate_g(const Program& p, std::uint64_t budget = limits::kDefaultBudget) {
    const PathSumTable table = enumerate_path_sums(p, budget);
    BigInt g = 0;
    for (const auto& [key, f] : table.sums) {
        if (p.accepting().accepts(p.reg().unrank(key.first))) g += f * f;
    }
    return g;
}

struct Discrepancy {
    BasisState state;
    Index index;
    BigInt simulator_value;
    BigInt counting_value;
};

struct CrosscheckReport {
    bool match = false;          // every coefficient equal across both routes
    BigInt g_counting = 0;       // accepting-state aggregate from path sums
    BigInt g_simulator = 0;      // same aggregate from the exact stepper
    std::vector<Discrepancy> discrepancies;
    double exact_numeric_drift = 0.0;  // final-layer stepper consistency error
    std::uint64_t visited = 0;         // DFS expansions consumed
    bool accept = false;
    bool pass() const { return match && g_counting == g_simulator; }
};

/// Runs the breadth-first exact stepper and the depth-first path
/// enumeration and compares them coefficient by coefficient over every
/// live (state, index) pair. The two routes share only the presentation
/// tables, so agreement is a genuine end-to-end consistency witness.
inline CrosscheckReport crosscheck(const Program& p,
                                   std::uint64_t budget = limits::kDefaultBudget) {
    CrosscheckReport report;
    const SimulationResult sim = run(p);
    const PathSumTable table = enumerate_path_sums(p, budget);
    report.visited = table.visited;

    std::set<std::pair<std::uint64_t, Index>> keys;
    for (const auto& [rank, form] : sim.exact.amplitudes)
        for (const auto& [idx, coeff] : form.terms()) keys.insert({rank, idx});
    for (const auto& [key, f] : table.sums)
        if (f != 0) keys.insert(key);

    report.match = true;
    for (const auto& key : keys) {
        const auto sit = sim.exact.amplitudes.find(key.first);
        const BigInt sv =
            sit == sim.exact.amplitudes.end() ? BigInt{0} : sit->second.coefficient(key.second);
        const BigInt cv = table.at(key.first, key.second);
        if (sv != cv) {
            report.match = false;
            report.discrepancies.push_back({p.reg().unrank(key.first), key.second, sv, cv});
        }
    }

    for (const auto& [key, f] : table.sums)
        if (p.accepting().accepts(p.reg().unrank(key.first))) report.g_counting += f * f;
    const Decision d = decide_nqp(p, sim);
    report.g_simulator = d.g;
    report.accept = d.accept;
    if (!sim.trace.steps.empty())
        report.exact_numeric_drift = sim.trace.steps.back().consistency_max_err;
    return report;
}

}  // namespace gapq

#endif  // GAPQ_COUNTING_HPP
