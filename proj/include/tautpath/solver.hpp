#pragma once

#include <string>
#include <vector>

#include "tautpath/truss.hpp"

namespace tautpath {

struct SolverParams {
  double stiffness = 1.0;       // axial force per unit strain
  double mass = 1.0;            // uniform nodal mass
  double damping = 0.0;         // per-velocity drag; 0 = derive default
  double dt = 0.0;              // time step; 0 = derive default
  double residual_tol = 0.0;    // max net nodal force at equilibrium; 0 = 1e-8 * stiffness
  int max_iters = 200000;       // per relaxation phase
  double pull_increment = 0.02; // fraction of current separation per phase
  double taut_strain = 0.01;    // strain threshold declaring the chain taut
  double max_total_stretch = 4.0;
  int max_phases = 500;

  // Fill damping/dt/residual_tol defaults from the network's stiffest element.
  SolverParams resolved(const TrussNetwork& net) const;
  void validate() const;

  static SolverParams from_json(const std::string& text);
  std::string to_json() const;
};

struct SimState {
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  std::vector<double> strains;   // per element, len/rest - 1
  double separation = 0.0;       // current anchor separation
  int phase = 0;
  double residual = 0.0;         // max net force magnitude over free nodes
  int iterations = 0;            // iterations spent in the last relax()
};

enum class Termination { Taut, SeparationCap, IterationCap };

struct PhaseRecord {
  double separation = 0.0;
  double residual = 0.0;
  double max_strain = 0.0;
  int iterations = 0;
};

struct SolveResult {
  SimState state;
  std::vector<double> peak_strains;  // per element, max over the run
  Termination cause = Termination::IterationCap;
  std::vector<PhaseRecord> history;
  double initial_separation = 0.0;

  static SolveResult from_json(const std::string& text);
  std::string to_json() const;
};

const char* termination_name(Termination t);

SimState init_state(const TrussNetwork& network);
void relax(SimState& state, const TrussNetwork& network, const SolverParams& params);
void pull_phase(SimState& state, const TrussNetwork& network, const SolverParams& params);
SolveResult solve_taut(const TrussNetwork& network, const SolverParams& params);

}  // namespace tautpath
