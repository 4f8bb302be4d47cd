#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "montest/errors.hpp"
#include "montest/zp.hpp"

namespace montest {

enum class GateKind { Input, Const, Add, Mul };

struct Gate {
  GateKind kind = GateKind::Const;
  u32 var = 0;       // Input only
  i64 value = 0;     // Const only, reduced mod p when used
  std::vector<u32> children;  // Add: >= 1, Mul: exactly 2 (left, right)
};

/// Arithmetic circuit over named variables. Gates are stored in topological order,
/// so every child id is smaller than its parent's id.
class Circuit {
 public:
  u32 input(const std::string& name) {
    Gate g;
    g.kind = GateKind::Input;
    g.var = variable(name);
    return push(std::move(g));
  }
  u32 input_var(u32 var) {
    if (var >= var_names_.size()) throw UsageError("input references unknown variable id " + std::to_string(var));
    Gate g;
    g.kind = GateKind::Input;
    g.var = var;
    return push(std::move(g));
  }
  u32 constant(i64 value) {
    Gate g;
    g.kind = GateKind::Const;
    g.value = value;
    return push(std::move(g));
  }
  u32 add(std::vector<u32> children) {
    if (children.empty()) throw ValidationError("add gate needs at least one input");
    Gate g;
    g.kind = GateKind::Add;
    g.children = std::move(children);
    return push(std::move(g));
  }
  u32 mul(u32 left, u32 right) {
    Gate g;
    g.kind = GateKind::Mul;
    g.children = {left, right};
    return push(std::move(g));
  }
  void set_output(u32 gate) {
    if (gate >= gates_.size()) throw ValidationError("output references missing gate " + std::to_string(gate));
    output_ = gate;
  }

  /// Variable id for a name, creating it on first use.
  u32 variable(const std::string& name) {
    auto it = var_ids_.find(name);
    if (it != var_ids_.end()) return it->second;
    const u32 id = static_cast<u32>(var_names_.size());
    var_names_.push_back(name);
    var_ids_.emplace(name, id);
    return id;
  }
  std::optional<u32> find_variable(const std::string& name) const {
    auto it = var_ids_.find(name);
    if (it == var_ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const Gate& gate(u32 id) const { return gates_.at(id); }
  std::size_t size() const noexcept { return gates_.size(); }
  std::size_t num_vars() const noexcept { return var_names_.size(); }
  const std::vector<std::string>& var_names() const noexcept { return var_names_; }
  bool has_output() const noexcept { return output_.has_value(); }
  u32 output() const {
    if (!output_) throw ValidationError("circuit has no output gate");
    return *output_;
  }

  std::size_t mul_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return g.kind == GateKind::Mul; }));
  }

  /// Number of parents referencing each gate (a gate listed twice by one parent counts twice).
  std::vector<std::size_t> fanout() const {
    std::vector<std::size_t> out(gates_.size(), 0);
    for (const Gate& g : gates_)
      for (u32 c : g.children) ++out[c];
    return out;
  }

  /// True iff every gate has fan-out at most one.
  bool is_formula() const {
    auto f = fanout();
    return std::all_of(f.begin(), f.end(), [](std::size_t x) { return x <= 1; });
  }

  /// Gates reachable from the output.
  std::vector<bool> live() const {
    std::vector<bool> on(gates_.size(), false);
    if (!output_) return on;
    on[*output_] = true;
    for (std::size_t i = gates_.size(); i-- > 0;)
      if (on[i])
        for (u32 c : gates_[i].children) on[c] = true;
    return on;
  }

 private:
  u32 push(Gate g) {
    const u32 id = static_cast<u32>(gates_.size());
    if (g.kind == GateKind::Mul && g.children.size() != 2) throw ValidationError("mul gate needs exactly two inputs");
    for (u32 c : g.children) {
      if (c >= id) throw ValidationError("gate " + std::to_string(id) + " references gate " + std::to_string(c) +
                                         " which does not precede it");
    }
    gates_.push_back(std::move(g));
    return id;
  }

  std::vector<Gate> gates_;
  std::optional<u32> output_;
  std::vector<std::string> var_names_;
  std::map<std::string, u32> var_ids_;
};

namespace detail {

inline u64 sat_add(u64 a, u64 b) { return a > std::numeric_limits<u64>::max() - b ? std::numeric_limits<u64>::max() : a + b; }

}  // namespace detail

/// Interval bound on the degree in the variables selected by `counts` (all when empty).
/// Saturates instead of overflowing.
inline u64 degree_bound(const Circuit& c, const std::vector<bool>& counts = {}) {
  std::vector<u64> deg(c.size(), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gates()[i];
    switch (g.kind) {
      case GateKind::Input: deg[i] = counts.empty() || counts.at(g.var) ? 1 : 0; break;
      case GateKind::Const: deg[i] = 0; break;
      case GateKind::Add:
        for (u32 ch : g.children) deg[i] = std::max(deg[i], deg[ch]);
        break;
      case GateKind::Mul: deg[i] = detail::sat_add(deg[g.children[0]], deg[g.children[1]]); break;
    }
  }
  return c.has_output() ? deg[c.output()] : 0;
}

/// How fresh y-variables mark the circuit before identity testing.
///   MulGates: one y per multiplication gate, multiplied onto the gate's output.
///   Inputs:   one y per x-variable, multiplied onto every leaf of that variable.
enum class Marking { MulGates, Inputs };

inline const char* marking_name(Marking m) { return m == Marking::MulGates ? "gates" : "inputs"; }

/// The marked circuit. Variables [0, n) are the base x's, [n, n + h) the y's.
struct AugmentedCircuit {
  Circuit circuit;
  std::size_t n = 0;
  std::size_t h = 0;
  Marking marking = Marking::MulGates;
  std::map<u32, u32> y_of_mul;  // base Mul gate id -> y variable id (MulGates only)

  bool is_y(u32 var) const noexcept { return var >= n; }

  std::vector<bool> y_mask() const {
    std::vector<bool> m(circuit.num_vars(), false);
    for (std::size_t v = n; v < m.size(); ++v) m[v] = true;
    return m;
  }
  std::vector<bool> x_mask() const {
    std::vector<bool> m(circuit.num_vars(), false);
    for (std::size_t v = 0; v < n && v < m.size(); ++v) m[v] = true;
    return m;
  }
};

/// Fresh name not clashing with existing variables.
inline std::string fresh_name(const Circuit& c, const std::string& stem, std::size_t i) {
  std::string name = stem + std::to_string(i);
  while (c.find_variable(name)) name = "_" + name;
  return name;
}

/// Attach y-markers. Setting every y to 1 gives back the base circuit's value.
inline AugmentedCircuit augment_circuit(const Circuit& base, Marking marking = Marking::MulGates) {
  AugmentedCircuit ac;
  ac.marking = marking;
  ac.n = base.num_vars();
  Circuit& out = ac.circuit;
  for (const std::string& name : base.var_names()) out.variable(name);
  std::vector<u32> y_names;
  if (marking == Marking::Inputs) {
    ac.h = ac.n;
    for (std::size_t i = 0; i < ac.n; ++i) y_names.push_back(out.variable(fresh_name(base, "y", i + 1)));
  }
  std::vector<u32> remap(base.size());
  std::size_t next_y = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Gate& g = base.gates()[i];
    switch (g.kind) {
      case GateKind::Input: {
        const u32 leaf = out.input_var(g.var);
        remap[i] = marking == Marking::Inputs ? out.mul(leaf, out.input_var(y_names[g.var])) : leaf;
        break;
      }
      case GateKind::Const: remap[i] = out.constant(g.value); break;
      case GateKind::Add: {
        std::vector<u32> ch;
        for (u32 c : g.children) ch.push_back(remap[c]);
        remap[i] = out.add(std::move(ch));
        break;
      }
      case GateKind::Mul: {
        const u32 prod = out.mul(remap[g.children[0]], remap[g.children[1]]);
        if (marking == Marking::MulGates) {
          const u32 y = out.variable(fresh_name(base, "y", ++next_y));
          ac.y_of_mul.emplace(static_cast<u32>(i), y);
          remap[i] = out.mul(prod, out.input_var(y));
        } else {
          remap[i] = prod;
        }
        break;
      }
    }
  }
  if (marking == Marking::MulGates) ac.h = next_y;
  if (base.has_output()) out.set_output(remap[base.output()]);
  return ac;
}

/// Multiply by fresh variables z1..zr so the degree bound reaches k.
inline Circuit pad_degree(const Circuit& c, u64 k) {
  Circuit out = c;
  u64 deg = degree_bound(c);
  u32 top = out.output();
  for (std::size_t i = 1; deg < k; ++i, ++deg) top = out.mul(top, out.input(fresh_name(c, "z", i)));
  out.set_output(top);
  return out;
}

}  // namespace montest
