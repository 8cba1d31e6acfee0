#include "ctqw/circuit.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ctqw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_qubit(int q, int n) {
  if (q < 1 || q > n) throw std::invalid_argument(fmt::format("circuit: qubit {} outside [1, {}]", q, n));
}

const char* axis_name(Axis a) { return a == Axis::Y ? "Y" : "Z"; }

Axis parse_axis(const std::string& s) {
  if (s == "Y") return Axis::Y;
  if (s == "Z") return Axis::Z;
  throw std::invalid_argument("circuit json: unknown axis '" + s + "'");
}

}  // namespace

void Circuit::append(Gate g) {
  std::visit(overloaded{
                 [&](const CnotGate& c) {
                   check_qubit(c.control, qubits_);
                   check_qubit(c.target, qubits_);
                   if (c.control == c.target) throw std::invalid_argument("circuit: CNOT control equals target");
                 },
                 [&](const RotationGate& r) { check_qubit(r.target, qubits_); },
                 [&](const DiagonalPhaseGate& d) {
                   if (d.phases.size() != (std::size_t{1} << qubits_))
                     throw std::invalid_argument("circuit: DIAG_PHASE needs 2^n phases");
                 },
                 [](const GlobalPhaseGate&) {},
             },
             g);
  gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
  if (other.qubits_ != qubits_) throw std::invalid_argument("circuit: cannot append circuits of different width");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

Circuit Circuit::inverse() const {
  Circuit inv(qubits_);
  inv.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    inv.gates_.push_back(std::visit(overloaded{
                                        [](const CnotGate& c) -> Gate { return c; },
                                        [](const RotationGate& r) -> Gate { return RotationGate{r.axis, r.target, -r.angle}; },
                                        [](const DiagonalPhaseGate& d) -> Gate {
                                          DiagonalPhaseGate neg{d.phases};
                                          for (auto& p : neg.phases) p = -p;
                                          return neg;
                                        },
                                        [](const GlobalPhaseGate& g) -> Gate { return GlobalPhaseGate{-g.angle}; },
                                    },
                                    *it));
  }
  return inv;
}

std::size_t Circuit::cnot_count() const {
  return std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return std::holds_alternative<CnotGate>(g); });
}

std::size_t Circuit::rotation_count() const {
  return std::count_if(gates_.begin(), gates_.end(),
                       [](const Gate& g) { return std::holds_alternative<RotationGate>(g); });
}

void to_json(nlohmann::json& out, const Circuit& c) {
  out = nlohmann::json::object();
  out["n"] = c.qubits();
  auto& gates = out["gates"] = nlohmann::json::array();
  for (const auto& g : c.gates()) {
    gates.push_back(std::visit(
        overloaded{
            [](const CnotGate& x) -> nlohmann::json {
              return {{"kind", "CNOT"}, {"control", x.control}, {"target", x.target}};
            },
            [](const RotationGate& x) -> nlohmann::json {
              return {{"kind", "ROT"}, {"axis", axis_name(x.axis)}, {"target", x.target}, {"angle", x.angle}};
            },
            [](const DiagonalPhaseGate& x) -> nlohmann::json { return {{"kind", "DIAG_PHASE"}, {"phases", x.phases}}; },
            [](const GlobalPhaseGate& x) -> nlohmann::json { return {{"kind", "GLOBAL_PHASE"}, {"angle", x.angle}}; },
        },
        g));
  }
}

Circuit circuit_from_json(const nlohmann::json& in) {
  Circuit c(in.at("n").get<int>());
  for (const auto& g : in.at("gates")) {
    const auto kind = g.at("kind").get<std::string>();
    if (kind == "CNOT")
      c.append(CnotGate{g.at("control").get<int>(), g.at("target").get<int>()});
    else if (kind == "ROT")
      c.append(RotationGate{parse_axis(g.at("axis").get<std::string>()), g.at("target").get<int>(),
                            g.at("angle").get<double>()});
    else if (kind == "DIAG_PHASE")
      c.append(DiagonalPhaseGate{g.at("phases").get<std::vector<double>>()});
    else if (kind == "GLOBAL_PHASE")
      c.append(GlobalPhaseGate{g.at("angle").get<double>()});
    else
      throw std::invalid_argument("circuit json: unknown gate kind '" + kind + "'");
  }
  return c;
}

std::string disassemble(const Circuit& c) {
  std::string out;
  for (const auto& g : c.gates()) {
    out += std::visit(overloaded{
                          [](const CnotGate& x) { return fmt::format("CNOT {} {}", x.control, x.target); },
                          [](const RotationGate& x) {
                            return fmt::format("R{} {} {}", axis_name(x.axis), x.target, x.angle);
                          },
                          [](const DiagonalPhaseGate& x) { return fmt::format("DIAG [{}]", fmt::join(x.phases, ", ")); },
                          [](const GlobalPhaseGate& x) { return fmt::format("GPHASE {}", x.angle); },
                      },
                      g);
    out += '\n';
  }
  return out;
}

}  // namespace ctqw
