#include "tautpath/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "tautpath/errors.hpp"
#include "tautpath/oracle.hpp"

namespace tautpath {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Taut:
      return "taut";
    case Termination::SeparationCap:
      return "separation_cap";
    case Termination::IterationCap:
      return "iteration_cap";
  }
  return "unknown";
}

void SolverParams::validate() const {
  if (!(stiffness > 0.0) || !(mass > 0.0)) throw InvalidSpec("stiffness and mass must be > 0");
  if (damping < 0.0 || dt < 0.0 || residual_tol < 0.0) {
    throw InvalidSpec("damping, dt and residual_tol must be >= 0");
  }
  if (max_iters <= 0 || max_phases <= 0) throw InvalidSpec("iteration caps must be > 0");
  if (!(pull_increment > 0.0) || pull_increment > 0.2) {
    throw InvalidSpec("pull_increment must be in (0, 0.2]");
  }
  if (!(taut_strain > 0.0) || taut_strain >= 0.5) throw InvalidSpec("taut_strain must be in (0, 0.5)");
  if (!(max_total_stretch > 1.0)) throw InvalidSpec("max_total_stretch must be > 1");
}

SolverParams SolverParams::resolved(const TrussNetwork& net) const {
  validate();
  SolverParams p = *this;
  double min_rest = std::numeric_limits<double>::infinity();
  for (const auto& e : net.elements) min_rest = std::min(min_rest, e.rest_length);
  if (!std::isfinite(min_rest) || min_rest <= 0.0) throw InvalidSpec("network has no valid elements");
  double k_max = p.stiffness / min_rest;
  if (p.dt == 0.0) p.dt = 0.5 * std::sqrt(p.mass / k_max);
  // Viscous damping defaults to zero: convergence comes from the
  // kinetic-energy resets in relax(), and any steady drag starves them.
  if (p.residual_tol == 0.0) p.residual_tol = 1e-8 * p.stiffness;
  if (!(p.dt < 2.0 * std::sqrt(p.mass / k_max))) {
    throw InvalidSpec("dt violates the stability bound 2*sqrt(mass/k_max)");
  }
  return p;
}

SimState init_state(const TrussNetwork& network) {
  SimState state;
  state.positions = network.nodes;
  state.velocities.assign(network.nodes.size(), Vec3{});
  state.strains.assign(network.elements.size(), 0.0);
  state.separation = distance(network.nodes[network.anchor_a], network.nodes[network.anchor_b]);
  return state;
}

namespace {

// One force pass: fills forces and strains, returns max net force over free nodes.
double accumulate_forces(const SimState& state, const TrussNetwork& net, double stiffness,
                         std::vector<Vec3>& forces, std::vector<double>& strains) {
  std::fill(forces.begin(), forces.end(), Vec3{});
  for (size_t e = 0; e < net.elements.size(); ++e) {
    const TrussElement& el = net.elements[e];
    Vec3 d = state.positions[el.node_j] - state.positions[el.node_i];
    double len = d.norm();
    double strain = len / el.rest_length - 1.0;
    strains[e] = strain;
    if (len > 0.0) {
      Vec3 f = d * (stiffness * strain / len);
      forces[el.node_i] += f;
      forces[el.node_j] += f * -1.0;
    }
  }
  double residual = 0.0;
  for (size_t i = 0; i < forces.size(); ++i) {
    if (static_cast<int>(i) == net.anchor_a || static_cast<int>(i) == net.anchor_b) continue;
    residual = std::max(residual, forces[i].norm());
  }
  return residual;
}

}  // namespace

void relax(SimState& state, const TrussNetwork& net, const SolverParams& raw) {
  SolverParams p = raw.resolved(net);
  const int n = static_cast<int>(net.nodes.size());
  std::vector<Vec3> forces(n);
  const double decay = std::exp(-p.damping * p.dt);
  const double dt_over_m = p.dt / p.mass;

  state.iterations = 0;
  double residual = accumulate_forces(state, net, p.stiffness, forces, state.strains);
  double prev_kinetic = 0.0;
  for (int iter = 0; iter < p.max_iters && residual >= p.residual_tol; ++iter) {
    double kinetic = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == net.anchor_a || i == net.anchor_b) continue;
      Vec3& v = state.velocities[i];
      v += forces[i] * dt_over_m;
      v *= decay;
      kinetic += v.norm2();
    }
    if (kinetic < prev_kinetic) {
      // Kinetic energy peaked: the system just passed through an energy
      // minimum. Restart from rest there instead of overshooting.
      std::fill(state.velocities.begin(), state.velocities.end(), Vec3{});
      prev_kinetic = 0.0;
    } else {
      for (int i = 0; i < n; ++i) {
        if (i == net.anchor_a || i == net.anchor_b) continue;
        state.positions[i] += state.velocities[i] * p.dt;
      }
      prev_kinetic = kinetic;
    }
    residual = accumulate_forces(state, net, p.stiffness, forces, state.strains);
    state.iterations = iter + 1;
    if (!std::isfinite(residual)) throw NumericalBlowup("non-finite residual during relaxation");
  }
  for (const auto& pos : state.positions) {
    if (!std::isfinite(pos.x) || !std::isfinite(pos.y) || !std::isfinite(pos.z)) {
      throw NumericalBlowup("non-finite node position");
    }
  }
  if (residual >= 10.0 * p.residual_tol) {
    throw NonConvergence("relaxation hit max_iters with residual " + std::to_string(residual));
  }
  state.residual = residual;
  // Velocities are stale once converged; zero them so the equilibrium is a
  // fixed point of the next phase.
  if (residual < p.residual_tol) {
    std::fill(state.velocities.begin(), state.velocities.end(), Vec3{});
  }
}

void pull_phase(SimState& state, const TrussNetwork& net, const SolverParams& params) {
  Vec3& pa = state.positions[net.anchor_a];
  Vec3& pb = state.positions[net.anchor_b];
  Vec3 dir = pb - pa;
  double sep = dir.norm();
  // Displace b radially away from a by pull_increment of the separation.
  pb += dir * params.pull_increment;
  state.separation = sep * (1.0 + params.pull_increment);
  ++state.phase;
  relax(state, net, params);
}

SolveResult solve_taut(const TrussNetwork& net, const SolverParams& raw) {
  SolverParams p = raw.resolved(net);
  if (!dijkstra(net, net.anchor_a, net.anchor_b).reachable()) {
    throw AnchorsDisconnected("no element path between the anchors");
  }

  SolveResult result;
  result.state = init_state(net);
  result.peak_strains.assign(net.elements.size(), 0.0);
  result.initial_separation = result.state.separation;
  const double cap = p.max_total_stretch * result.initial_separation;

  result.cause = Termination::IterationCap;
  for (int phase = 0; phase < p.max_phases; ++phase) {
    pull_phase(result.state, net, p);
    double max_strain = 0.0;
    for (size_t e = 0; e < result.state.strains.size(); ++e) {
      result.peak_strains[e] = std::max(result.peak_strains[e], result.state.strains[e]);
      max_strain = std::max(max_strain, result.state.strains[e]);
    }
    result.history.push_back({result.state.separation, result.state.residual, max_strain,
                              result.state.iterations});
    if (max_strain >= p.taut_strain) {
      result.cause = Termination::Taut;
      break;
    }
    if (result.state.separation > cap) {
      result.cause = Termination::SeparationCap;
      break;
    }
  }
  return result;
}

SolverParams SolverParams::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SolverParams p;
  p.stiffness = j.at("stiffness").get<double>();
  p.mass = j.at("mass").get<double>();
  p.damping = j.at("damping").get<double>();
  p.dt = j.at("dt").get<double>();
  p.residual_tol = j.at("residual_tol").get<double>();
  p.max_iters = j.at("max_iters").get<int>();
  p.pull_increment = j.at("pull_increment").get<double>();
  p.taut_strain = j.at("taut_strain").get<double>();
  p.max_total_stretch = j.at("max_total_stretch").get<double>();
  p.max_phases = j.at("max_phases").get<int>();
  return p;
}

std::string SolverParams::to_json() const {
  nlohmann::json j;
  j["stiffness"] = stiffness;
  j["mass"] = mass;
  j["damping"] = damping;
  j["dt"] = dt;
  j["residual_tol"] = residual_tol;
  j["max_iters"] = max_iters;
  j["pull_increment"] = pull_increment;
  j["taut_strain"] = taut_strain;
  j["max_total_stretch"] = max_total_stretch;
  j["max_phases"] = max_phases;
  return j.dump(2);
}

SolveResult SolveResult::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SolveResult r;
  r.state.strains = j.at("final_strains").get<std::vector<double>>();
  r.peak_strains = j.at("peak_strains").get<std::vector<double>>();
  std::string cause = j.at("cause").get<std::string>();
  if (cause == "taut") {
    r.cause = Termination::Taut;
  } else if (cause == "separation_cap") {
    r.cause = Termination::SeparationCap;
  } else {
    r.cause = Termination::IterationCap;
  }
  r.initial_separation = j.at("initial_separation").get<double>();
  r.state.separation = j.at("separation").get<double>();
  r.state.residual = j.at("residual").get<double>();
  r.state.phase = j.at("phases").get<int>();
  for (const auto& h : j.at("history")) {
    r.history.push_back({h.at("separation").get<double>(), h.at("residual").get<double>(),
                         h.at("max_strain").get<double>(), h.at("iterations").get<int>()});
  }
  if (j.contains("positions")) {
    for (const auto& pos : j.at("positions")) {
      r.state.positions.push_back({pos.at(0).get<double>(), pos.at(1).get<double>(),
                                   pos.at(2).get<double>()});
    }
  }
  return r;
}

std::string SolveResult::to_json() const {
  nlohmann::json j;
  j["final_strains"] = state.strains;
  j["peak_strains"] = peak_strains;
  j["cause"] = termination_name(cause);
  j["initial_separation"] = initial_separation;
  j["separation"] = state.separation;
  j["residual"] = state.residual;
  j["phases"] = state.phase;
  auto& hist = j["history"] = nlohmann::json::array();
  for (const auto& h : history) {
    hist.push_back({{"separation", h.separation},
                    {"residual", h.residual},
                    {"max_strain", h.max_strain},
                    {"iterations", h.iterations}});
  }
  auto& pos_j = j["positions"] = nlohmann::json::array();
  for (const auto& pos : state.positions) pos_j.push_back({pos.x, pos.y, pos.z});
  return j.dump();
}

}  // namespace tautpath
