#pragma once

#include <string>

#include "foamlab/errors.hpp"

namespace foamlab {

// Every numeric threshold used by the checkers, rank decisions and finite
// differences lives here so that one profile switch changes them together.
struct TolerancePolicy {
  // Central-difference step, relative to the cluster length scale.
  double fd_step = 1e-6;
  // Singular values below rank_cut * sigma_max count as zero.
  double rank_cut = 1e-6;
  // Required ratio between the smallest kept and largest dropped singular
  // value; smaller gaps are reported as ambiguous.
  double gap_factor = 100.0;
  // Dimensionless residual threshold for classify().
  double equilibrium = 1e-9;
  // Pressure path-defect threshold relative to the curvature scale.
  double pressure_defect = 1e-6;
  // Eigenvalue zero band relative to max |lambda| in stability reports.
  double eigen_rel = 1e-4;

  static TolerancePolicy strict() {
    TolerancePolicy p;
    p.equilibrium = 1e-11;
    p.pressure_defect = 1e-9;
    return p;
  }
  static TolerancePolicy standard() { return {}; }
  static TolerancePolicy loose() {
    TolerancePolicy p;
    p.equilibrium = 1e-6;
    p.pressure_defect = 1e-4;
    p.rank_cut = 1e-5;
    return p;
  }
  static TolerancePolicy from_profile(const std::string& name) {
    if (name == "strict") return strict();
    if (name == "default") return standard();
    if (name == "loose") return loose();
    throw DomainError("unknown tolerance profile '" + name + "'");
  }
};

}  // namespace foamlab
