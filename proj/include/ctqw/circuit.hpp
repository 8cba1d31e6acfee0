#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ctqw {

enum class Axis { Y, Z };

// Qubits are 1-based; qubit 1 is the most significant bit of a basis index.

struct CnotGate {
  int control;
  int target;
  bool operator==(const CnotGate&) const = default;
};

/// R_y(t) = [[cos t, sin t], [-sin t, cos t]], R_z(t) = diag(e^{it}, e^{-it}).
struct RotationGate {
  Axis axis;
  int target;
  double angle;
  bool operator==(const RotationGate&) const = default;
};

/// diag(e^{i phases[k]}) over all 2^n basis states.
struct DiagonalPhaseGate {
  std::vector<double> phases;
  bool operator==(const DiagonalPhaseGate&) const = default;
};

struct GlobalPhaseGate {
  double angle;
  bool operator==(const GlobalPhaseGate&) const = default;
};

using Gate = std::variant<CnotGate, RotationGate, DiagonalPhaseGate, GlobalPhaseGate>;

/// Ordered gate list; gates[0] acts first.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int qubits) : qubits_(qubits) {}

  int qubits() const { return qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  /// Throws std::invalid_argument if the gate references a qubit outside [1, n].
  void append(Gate g);
  void append(const Circuit& other);

  /// Reversed order with negated angles and phases.
  Circuit inverse() const;

  std::size_t cnot_count() const;
  std::size_t rotation_count() const;

  bool operator==(const Circuit&) const = default;

 private:
  int qubits_ = 0;
  std::vector<Gate> gates_;
};

void to_json(nlohmann::json& out, const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& in);

/// One gate per line: "CNOT c t", "RZ q angle", "RY q angle", "DIAG [...]",
/// "GPHASE angle". Angles use shortest round-trip formatting.
std::string disassemble(const Circuit& c);

}  // namespace ctqw
