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

#ifndef GAPQ_PROGRAM_HPP
#define GAPQ_PROGRAM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gapq/common.hpp"
#include "gapq/presentation.hpp"

namespace gapq {

/// Assignment of one symbol to every cell of a register.
struct BasisState {
    std::vector<std::uint32_t> symbols;

    BasisState() = default;
    explicit BasisState(std::vector<std::uint32_t> syms) : symbols(std::move(syms)) {}

    friend bool operator==(const BasisState&, const BasisState&) = default;
    friend auto operator<=>(const BasisState&, const BasisState&) = default;

    std::string to_string() const {
        std::string out = "(";
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(symbols[i]);
        }
        return out + ")";
    }
};

/// Ordered list of per-cell alphabet sizes. States are ranked in mixed
/// radix with cell 0 as the most significant digit.
struct Register {
    std::vector<std::uint32_t> sizes;

    std::size_t cell_count() const { return sizes.size(); }

    std::uint64_t total_states() const {
        std::uint64_t total = 1;
        for (std::uint32_t s : sizes) {
            if (s == 0) return 0;
            if (total > limits::kStateSpaceCap / s + 1) return std::uint64_t(-1);
            total *= s;
        }
        return total;
    }

    std::uint64_t rank(const BasisState& state) const {
        std::uint64_t r = 0;
        for (std::size_t c = 0; c < sizes.size(); ++c) r = r * sizes[c] + state.symbols[c];
        return r;
    }

    BasisState unrank(std::uint64_t r) const {
        BasisState s;
        s.symbols.resize(sizes.size());
        for (std::size_t c = sizes.size(); c-- > 0;) {
            s.symbols[c] = static_cast<std::uint32_t>(r % sizes[c]);
            r /= sizes[c];
        }
        return s;
    }

    bool contains(const BasisState& state) const {
        if (state.symbols.size() != sizes.size()) return false;
        for (std::size_t c = 0; c < sizes.size(); ++c)
            if (state.symbols[c] >= sizes[c]) return false;
        return true;
    }

    friend bool operator==(const Register&, const Register&) = default;
};

enum class LayerKind { unitary, permutation };

/// One step of the program: a local unitary over the product alphabet of
/// the target cells (entries name amplitudes in the field presentation),
/// or a classical reversible permutation of that product alphabet.
struct Layer {
    LayerKind kind = LayerKind::unitary;
    std::vector<int> cells;
    /// matrix[row][col] is the amplitude id of <row|U|col> over the target
    /// sub-space, row-major with the first listed cell most significant.
    std::vector<std::vector<std::string>> matrix;
    /// perm[x] is the image of sub-state x.
    std::vector<std::uint64_t> perm;

    friend bool operator==(const Layer&, const Layer&) = default;
};

/// Accepting predicate: an explicit state list or a conjunction of
/// per-cell value constraints.
struct AcceptingSpec {
    bool use_constraints = false;
    std::vector<BasisState> states;
    std::vector<std::pair<int, std::uint32_t>> constraints;

    bool accepts(const BasisState& s) const {
        if (use_constraints) {
            for (const auto& [cell, value] : constraints)
                if (s.symbols[static_cast<std::size_t>(cell)] != value) return false;
            return true;
        }
        return std::find(states.begin(), states.end(), s) != states.end();
    }

    friend bool operator==(const AcceptingSpec&, const AcceptingSpec&) = default;
};

struct UnitarityReport {
    std::size_t dim = 0;
    double max_deviation = 0.0;  // max entry of |U†U - I|
    bool pass = false;
};

/// Numeric unitarity audit of one layer. Permutations pass exactly;
/// unitary matrices are resolved through the amplitude table and checked
/// against U†U = I at the contract tolerance. No symbolic unitarity is
/// claimed: amplitudes may be transcendental.
inline UnitarityReport check_unitarity(const Layer& layer, const FieldPresentation& fp) {
    UnitarityReport report;
    if (layer.kind == LayerKind::permutation) {
        report.dim = layer.perm.size();
        report.pass = true;
        return report;
    }
    const std::size_t n = layer.matrix.size();
    report.dim = n;
    std::vector<Complex> u(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) u[r * n + c] = fp.amplitude(layer.matrix[r][c]).numeric;
    double dev = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            Complex acc{0.0, 0.0};
            for (std::size_t r = 0; r < n; ++r) acc += std::conj(u[r * n + a]) * u[r * n + b];
            if (a == b) acc -= Complex{1.0, 0.0};
            dev = std::max(dev, std::abs(acc));
        }
    }
    report.max_deviation = dev;
    report.pass = dev <= tol::kUnitarity;
    return report;
}

/// One outgoing transition of a layer at a particular basis state.
struct Transition {
    BasisState to;
    bool exact_one = false;    // permutations carry amplitude exactly 1
    std::size_t amp_slot = 0;  // else: slot into the presentation's table
    std::string amp_id;
};

/// Tensor embedding of a local layer into the full register: cells outside
/// the target list pass through unchanged. Built once per layer, then
/// queried per state (or per rank by the steppers). Holds its own copies
/// of the routing data, so it stays valid when the owning program moves.
class LayerAction {
  public:
    LayerAction(const Layer& layer, const Register& reg, const FieldPresentation& fp)
        : kind_(layer.kind), cells_(layer.cells), perm_(layer.perm), reg_(reg) {
        const auto& cells = layer.cells;
        strides_.assign(reg.cell_count(), 1);
        for (std::size_t c = reg.cell_count(); c-- > 1;)
            strides_[c - 1] = strides_[c] * reg.sizes[c];
        substrides_.assign(cells.size(), 1);
        subdim_ = 1;
        for (std::size_t i = cells.size(); i-- > 0;) {
            substrides_[i] = subdim_;
            subdim_ *= reg.sizes[static_cast<std::size_t>(cells[i])];
        }
        if (layer.kind == LayerKind::unitary) {
            columns_.resize(subdim_);
            for (std::uint64_t col = 0; col < subdim_; ++col) {
                for (std::uint64_t row = 0; row < subdim_; ++row) {
                    const std::string& id = layer.matrix[row][col];
                    const std::size_t slot = fp.amplitude_slot(id);
                    const AmplitudeEntry& amp = fp.amplitude_at(slot);
                    if (amp.form.is_zero() && amp.numeric == Complex{0.0, 0.0}) continue;
                    columns_[col].push_back({row, slot});
                }
            }
        }
    }

    std::uint64_t subdim() const { return subdim_; }

    /// Sub-state of the target cells inside a full-register rank.
    std::uint64_t sub_of_rank(std::uint64_t rank) const {
        std::uint64_t sub = 0;
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const auto c = static_cast<std::size_t>(cells_[i]);
            const std::uint64_t sym = (rank / strides_[c]) % reg_.sizes[c];
            sub += sym * substrides_[i];
        }
        return sub;
    }

    std::uint64_t replace_sub(std::uint64_t rank, std::uint64_t old_sub,
                              std::uint64_t new_sub) const {
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const auto c = static_cast<std::size_t>(cells_[i]);
            const std::uint64_t oldsym = (old_sub / substrides_[i]) % reg_.sizes[c];
            const std::uint64_t newsym = (new_sub / substrides_[i]) % reg_.sizes[c];
            rank += (newsym - oldsym) * strides_[c];
        }
        return rank;
    }

    /// Rank-level successor walk used by the steppers.
    template <typename Fn>  // Fn(uint64_t successor_rank, bool exact_one, std::size_t amp_slot)
    void for_each_successor(std::uint64_t rank, Fn&& fn) const {
        const std::uint64_t sub = sub_of_rank(rank);
        if (kind_ == LayerKind::permutation) {
            fn(replace_sub(rank, sub, perm_[sub]), true, std::size_t{0});
            return;
        }
        for (const auto& [row, slot] : columns_[sub])
            fn(replace_sub(rank, sub, row), false, slot);
    }

    /// State-level view: every successor with its transition amplitude.
    std::vector<Transition> successors(const BasisState& from,
                                       const FieldPresentation& fp) const {
        if (!reg_.contains(from))
            throw lookup_error("basis state " + from.to_string() + " not in register");
        std::vector<Transition> out;
        for_each_successor(reg_.rank(from),
                           [&](std::uint64_t to, bool exact_one, std::size_t slot) {
                               Transition t;
                               t.to = reg_.unrank(to);
                               t.exact_one = exact_one;
                               t.amp_slot = slot;
                               if (!exact_one) t.amp_id = fp.amplitude_at(slot).id;
                               out.push_back(std::move(t));
                           });
        return out;
    }

  private:
    LayerKind kind_;
    std::vector<int> cells_;
    std::vector<std::uint64_t> perm_;
    Register reg_;
    std::vector<std::uint64_t> strides_;
    std::vector<std::uint64_t> substrides_;
    std::uint64_t subdim_ = 1;
    std::vector<std::vector<std::pair<std::uint64_t, std::size_t>>> columns_;
};

struct ProgramCheck {
    std::vector<std::string> problems;            // semantic failures, human-readable
    std::vector<UnitarityReport> layer_unitarity; // one per layer, in order
    bool pass() const { return problems.empty(); }
};

/// Loads a referenced field presentation file; the CLI installs one that
/// resolves paths relative to the program file.
using FieldLoader = std::function<std::string(const std::string& path)>;

/// A fully resolved program: register, field presentation, ordered layers,
/// initial basis state and accepting predicate. Immutable after parsing;
/// concurrent reads are safe.
class Program {
  public:
    Program() = default;

    Program(Register reg, FieldPresentation field, std::vector<Layer> layers, BasisState initial,
            AcceptingSpec accepting)
        : register_(std::move(reg)),
          field_(std::move(field)),
          layers_(std::move(layers)),
          initial_(std::move(initial)),
          accepting_(std::move(accepting)) {
        ProgramCheck check;
        resolve_and_check(check, /*strict=*/true);
    }

    const Register& reg() const { return register_; }
    const FieldPresentation& field() const { return field_; }
    const std::vector<Layer>& layers() const { return layers_; }
    std::size_t step_count() const { return layers_.size(); }
    const BasisState& initial() const { return initial_; }
    const AcceptingSpec& accepting() const { return accepting_; }
    const LayerAction& action(std::size_t layer_idx) const { return actions_[layer_idx]; }

    friend bool operator==(const Program& a, const Program& b) {
        return a.register_ == b.register_ && a.field_ == b.field_ && a.layers_ == b.layers_ &&
               a.initial_ == b.initial_ && a.accepting_ == b.accepting_;
    }

    static Program parse(const std::string& text, const FieldLoader& loader = {});

    /// Like parse, but gathers semantic failures (unitarity, bijection,
    /// state-space cap) into `check` instead of throwing. Syntax and
    /// resolution errors still throw.
    static Program parse_checked(const std::string& text, ProgramCheck& check,
                                 const FieldLoader& loader = {});

    nlohmann::json to_json() const;
    std::string print() const { return to_json().dump(2) + "\n"; }

  private:
    static Program parse_impl(const std::string& text, ProgramCheck* check,
                              const FieldLoader& loader);
    static Program build(const nlohmann::json& j, ProgramCheck* check, const FieldLoader& loader);

    void resolve_and_check(ProgramCheck& check, bool strict);

    Register register_;
    FieldPresentation field_;
    std::vector<Layer> layers_;
    BasisState initial_;
    AcceptingSpec accepting_;
    std::vector<LayerAction> actions_;
};

/// Spec-level spellings.
inline Program parse_program(const std::string& text, const FieldLoader& loader = {}) {
    return Program::parse(text, loader);
}

inline LayerAction expand_layer(const Layer& layer, const Register& reg,
                                const FieldPresentation& fp) {
    return LayerAction(layer, reg, fp);
}

// --- implementation --------------------------------------------------------

inline void Program::resolve_and_check(ProgramCheck& check, bool strict) {
    auto fail = [&](const std::string& msg) {
        if (strict) throw validation_error(msg);
        check.problems.push_back(msg);
    };

    const std::uint64_t total = register_.total_states();
    if (register_.cell_count() == 0) throw parse_error("program: register must have cells");
    for (std::uint32_t s : register_.sizes)
        if (s < 2) throw parse_error("program: cell alphabet sizes must be at least 2");
    if (total > limits::kStateSpaceCap)
        fail("program: register spans more than 2^24 basis states; refusing");

    if (initial_.symbols.size() != register_.cell_count())
        throw parse_error("program: initial state arity does not match the register");
    if (!register_.contains(initial_))
        throw parse_error("program: initial state symbol out of range");

    if (layers_.empty()) throw parse_error("program: at least one layer is required");

    for (std::size_t li = 0; li < layers_.size(); ++li) {
        Layer& layer = layers_[li];
        const std::string where = "layer " + std::to_string(li);
        if (layer.cells.empty()) throw parse_error("program: " + where + ": no target cells");
        std::vector<int> sorted_cells = layer.cells;
        std::sort(sorted_cells.begin(), sorted_cells.end());
        if (std::adjacent_find(sorted_cells.begin(), sorted_cells.end()) != sorted_cells.end())
            throw parse_error("program: " + where + ": duplicate target cell");
        for (int c : layer.cells)
            if (c < 0 || static_cast<std::size_t>(c) >= register_.cell_count())
                throw parse_error("program: " + where + ": cell index out of range");
        std::uint64_t subdim = 1;
        for (int c : layer.cells) subdim *= register_.sizes[static_cast<std::size_t>(c)];

        if (layer.kind == LayerKind::unitary) {
            if (subdim > 256)
                throw parse_error("program: " + where +
                                  ": unitary sub-space larger than 256 is not supported");
            if (layer.matrix.size() != subdim)
                throw parse_error("program: " + where + ": matrix must have " +
                                  std::to_string(subdim) + " rows");
            for (const auto& row : layer.matrix) {
                if (row.size() != subdim)
                    throw parse_error("program: " + where + ": matrix must be square");
                for (const auto& id : row)
                    if (!field_.has_amplitude(id))
                        throw parse_error("program: " + where + ": unknown amplitude id '" + id +
                                          "'");
            }
            const UnitarityReport rep = check_unitarity(layer, field_);
            check.layer_unitarity.push_back(rep);
            if (!rep.pass)
                fail("program: " + where + ": not unitary (max |U†U - I| entry " +
                     std::to_string(rep.max_deviation) + ")");
        } else {
            if (layer.perm.size() != subdim)
                throw parse_error("program: " + where + ": permutation table must have " +
                                  std::to_string(subdim) + " entries");
            std::vector<bool> seen(subdim, false);
            bool bijective = true;
            for (std::uint64_t image : layer.perm) {
                if (image >= subdim || seen[image]) {
                    bijective = false;
                    break;
                }
                seen[image] = true;
            }
            check.layer_unitarity.push_back({subdim, 0.0, bijective});
            if (!bijective) fail("program: " + where + ": permutation table is not a bijection");
        }
    }

    if (accepting_.use_constraints) {
        for (const auto& [cell, value] : accepting_.constraints) {
            if (cell < 0 || static_cast<std::size_t>(cell) >= register_.cell_count())
                throw parse_error("program: accepting constraint cell out of range");
            if (value >= register_.sizes[static_cast<std::size_t>(cell)])
                throw parse_error("program: accepting constraint value out of range");
        }
    } else {
        for (const auto& s : accepting_.states)
            if (!register_.contains(s))
                throw parse_error("program: accepting state out of range");
    }

    actions_.clear();
    actions_.reserve(layers_.size());
    for (const Layer& layer : layers_) actions_.emplace_back(layer, register_, field_);
}

inline Program Program::parse_impl(const std::string& text, ProgramCheck* check,
                                   const FieldLoader& loader) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("program: ") + e.what());
    }
    if (!j.is_object()) throw parse_error("program: expected an object");
    for (const std::string key : {"field", "register", "initial", "layers", "accepting"})
        if (!j.contains(key)) throw parse_error("program: missing '" + key + "'");
    try {
        return build(j, check, loader);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("program: ") + e.what());
    }
}

inline Program Program::build(const nlohmann::json& j, ProgramCheck* check,
                              const FieldLoader& loader) {
    Program p;

    if (j["field"].is_string()) {
        if (!loader)
            throw parse_error("program: field given as a path but no loader is available");
        p.field_ = FieldPresentation::parse(loader(j["field"].get<std::string>()));
    } else if (j["field"].is_object()) {
        p.field_ = FieldPresentation::from_json(j["field"]);
    } else {
        throw parse_error("program: field must be an object or a file path");
    }

    if (!j["register"].is_array() || j["register"].empty())
        throw parse_error("program: register is a non-empty array of alphabet sizes");
    for (const auto& s : j["register"]) {
        if (!s.is_number_integer() || s.get<std::int64_t>() < 1)
            throw parse_error("program: register sizes are positive integers");
        p.register_.sizes.push_back(s.get<std::uint32_t>());
    }

    if (!j["initial"].is_array())
        throw parse_error("program: initial is an array of symbols");
    for (const auto& s : j["initial"]) {
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0)
            throw parse_error("program: initial symbols are nonnegative integers");
        p.initial_.symbols.push_back(s.get<std::uint32_t>());
    }

    if (!j["layers"].is_array()) throw parse_error("program: layers is an array");
    for (std::size_t li = 0; li < j["layers"].size(); ++li) {
        const auto& lj = j["layers"][li];
        const std::string where = "layers[" + std::to_string(li) + "]";
        if (!lj.is_object() || !lj.contains("kind") || !lj.contains("cells"))
            throw parse_error("program: " + where + " needs kind and cells");
        Layer layer;
        const std::string kind = lj["kind"].get<std::string>();
        if (kind == "unitary")
            layer.kind = LayerKind::unitary;
        else if (kind == "permutation")
            layer.kind = LayerKind::permutation;
        else
            throw parse_error("program: " + where + ": kind must be unitary or permutation");
        if (!lj["cells"].is_array() || lj["cells"].empty())
            throw parse_error("program: " + where + ": cells is a non-empty array");
        for (const auto& c : lj["cells"]) {
            if (!c.is_number_integer())
                throw parse_error("program: " + where + ": cells are integers");
            layer.cells.push_back(c.get<int>());
        }
        if (layer.kind == LayerKind::unitary) {
            if (!lj.contains("matrix") || !lj["matrix"].is_array())
                throw parse_error("program: " + where + ": unitary layers need a matrix");
            for (const auto& row : lj["matrix"]) {
                if (!row.is_array())
                    throw parse_error("program: " + where + ": matrix rows are arrays");
                std::vector<std::string> ids;
                for (const auto& id : row) {
                    if (!id.is_string())
                        throw parse_error("program: " + where +
                                          ": matrix entries are amplitude ids");
                    ids.push_back(id.get<std::string>());
                }
                layer.matrix.push_back(std::move(ids));
            }
        } else {
            if (!lj.contains("perm") || !lj["perm"].is_array())
                throw parse_error("program: " + where + ": permutation layers need a perm table");
            for (const auto& img : lj["perm"]) {
                if (!img.is_number_integer() || img.get<std::int64_t>() < 0)
                    throw parse_error("program: " + where +
                                      ": perm entries are nonnegative integers");
                layer.perm.push_back(img.get<std::uint64_t>());
            }
        }
        p.layers_.push_back(std::move(layer));
    }

    const auto& aj = j["accepting"];
    if (!aj.is_object() || (aj.contains("states") == aj.contains("constraints")))
        throw parse_error("program: accepting needs exactly one of states or constraints");
    if (aj.contains("states")) {
        p.accepting_.use_constraints = false;
        if (!aj["states"].is_array())
            throw parse_error("program: accepting states is an array of states");
        for (const auto& sj : aj["states"]) {
            if (!sj.is_array()) throw parse_error("program: accepting states are symbol arrays");
            BasisState s;
            for (const auto& v : sj) s.symbols.push_back(v.get<std::uint32_t>());
            p.accepting_.states.push_back(std::move(s));
        }
    } else {
        p.accepting_.use_constraints = true;
        for (const auto& cj : aj["constraints"]) {
            if (!cj.is_object() || !cj.contains("cell") || !cj.contains("value"))
                throw parse_error("program: accepting constraints are {cell, value} pairs");
            p.accepting_.constraints.emplace_back(cj["cell"].get<int>(),
                                                  cj["value"].get<std::uint32_t>());
        }
    }

    ProgramCheck local;
    p.resolve_and_check(check ? *check : local, /*strict=*/check == nullptr);
    return p;
}

inline Program Program::parse(const std::string& text, const FieldLoader& loader) {
    return parse_impl(text, nullptr, loader);
}

inline Program Program::parse_checked(const std::string& text, ProgramCheck& check,
                                      const FieldLoader& loader) {
    return parse_impl(text, &check, loader);
}

inline nlohmann::json Program::to_json() const {
    nlohmann::json j;
    j["field"] = field_.to_json();
    j["register"] = register_.sizes;
    j["initial"] = initial_.symbols;
    j["layers"] = nlohmann::json::array();
    for (const Layer& layer : layers_) {
        nlohmann::json lj;
        lj["kind"] = layer.kind == LayerKind::unitary ? "unitary" : "permutation";
        lj["cells"] = layer.cells;
        if (layer.kind == LayerKind::unitary)
            lj["matrix"] = layer.matrix;
        else
            lj["perm"] = layer.perm;
        j["layers"].push_back(std::move(lj));
    }
    if (accepting_.use_constraints) {
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& [cell, value] : accepting_.constraints)
            cs.push_back({{"cell", cell}, {"value", value}});
        j["accepting"] = {{"constraints", std::move(cs)}};
    } else {
        nlohmann::json ss = nlohmann::json::array();
        for (const auto& s : accepting_.states) ss.push_back(s.symbols);
        j["accepting"] = {{"states", std::move(ss)}};
    }
    return j;
}

}  // namespace gapq

#endif  // GAPQ_PROGRAM_HPP
