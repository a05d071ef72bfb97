#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cssr/energy.hpp"
#include "cssr/spectral_core.hpp"

namespace cssr {

enum class SeedProfile { gaussian, noisy_gaussian, file };

SeedProfile parse_seed_profile(const std::string& name);
std::string to_string(SeedProfile p);

struct FlowConfig {
  double tau = 0.1;
  double tol_energy = 1e-12;
  double tol_residual = 1e-9;
  int max_iters = 20000;
  SeedProfile seed_profile = SeedProfile::gaussian;
  std::string seed_file;  // snapshot path for SeedProfile::file
  std::uint64_t seed = 1;  // noise for SeedProfile::noisy_gaussian

  void validate() const;
};

template <class Field>
struct GroundStateResult {
  Field state;
  EnergyBreakdown energy;
  double chemical_potential = 0.0;
  double residual = 0.0;  // |gradient - mu phi| / |gradient|
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;  // accepted steps, starting with the seed
};

using GroundState1D = GroundStateResult<Field1D>;
using GroundState2D = GroundStateResult<Field2D>;

// Normalized gradient flow, preconditioned by exp(-tau L) with L the linear part
// (H_x, and H_y / eps in 2D) shifted to its ground level. `initial` overrides the seed.
GroundState1D minimize_1d(double beta, const FlowConfig& cfg, const SpectralWorkspace& ws,
                          const Field1D* initial = nullptr);
GroundState2D minimize_2d(double beta, double eps, const FlowConfig& cfg,
                          const SpectralWorkspace& ws, const Field2D* initial = nullptr);

Field1D seed_state_1d(const FlowConfig& cfg, const SpectralWorkspace& ws);
Field2D seed_state_2d(const FlowConfig& cfg, const SpectralWorkspace& ws);

}  // namespace cssr
