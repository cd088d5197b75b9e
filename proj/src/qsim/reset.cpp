#include <algorithm>

#include "qts/errors.hpp"
#include "qts/qsim/program.hpp"

namespace qts::qsim {

// A reset to |0> on a pure-state simulator is compiled away by rerouting all
// later gates on that wire to a fresh ancilla starting in |0>. The original
// wire keeps its (now unobserved) state, so expectations on the remapped
// measured qubits match a true reset exactly.
GateProgram reset_qubits_fresh(const GateProgram& program, const std::vector<ResetPoint>& resets) {
  if (resets.empty()) return program;

  std::vector<const ResetPoint*> ordered;
  ordered.reserve(resets.size());
  for (const ResetPoint& r : resets) {
    if (r.gate_position > program.gates.size()) throw ConfigError("reset position beyond program end");
    ordered.push_back(&r);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ResetPoint* a, const ResetPoint* b) { return a->gate_position < b->gate_position; });

  GateProgram out = program;
  out.gates.clear();

  std::vector<int> cur(program.n_qubits);
  for (int q = 0; q < program.n_qubits; ++q) cur[q] = q;
  int next_fresh = program.n_qubits;

  std::size_t ri = 0;
  for (std::size_t gi = 0; gi <= program.gates.size(); ++gi) {
    while (ri < ordered.size() && ordered[ri]->gate_position == gi) {
      for (int q : ordered[ri]->qubits) {
        if (q < 0 || q >= program.n_qubits) throw ConfigError("reset qubit out of range");
        if (next_fresh >= 16) throw ResourceError("qubit reset expansion exceeds 16 qubits");
        cur[q] = next_fresh++;
      }
      ++ri;
    }
    if (gi == program.gates.size()) break;
    Gate g = program.gates[gi];
    g.target = cur[g.target];
    if (g.control >= 0) g.control = cur[g.control];
    out.gates.push_back(g);
  }

  out.n_qubits = next_fresh;
  for (int& q : out.measured_qubits) q = cur[q];
  return out;
}

}  // namespace qts::qsim
