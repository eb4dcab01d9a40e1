#pragma once

#include <stdexcept>
#include <string>

namespace ringsq {

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pump field went non-finite during the Ikeda iteration.
struct DivergedError : SimulationError {
  DivergedError(int round_trip, const std::string& what)
      : SimulationError(what), round_trip(round_trip) {}
  int round_trip;
};

// Q = I - T Gamma E U is (numerically) singular: the pump drives the system
// past the oscillation threshold where the steady-state model is invalid.
struct SingularQError : SimulationError {
  SingularQError(double pump_energy, const std::string& what)
      : SimulationError(what), pump_energy(pump_energy) {}
  double pump_energy;
};

struct IntegrationAccuracyError : SimulationError {
  using SimulationError::SimulationError;
};

struct NumericalIntegrityError : SimulationError {
  using SimulationError::SimulationError;
};

// Optimizer bracket did not contain an interior maximum.
struct BracketError : SimulationError {
  using SimulationError::SimulationError;
};

}  // namespace ringsq
