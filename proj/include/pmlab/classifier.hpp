#pragma once
// Regime classification: maps exponents, absorption strength, kernel bounds,
// and geometry constants to a global-existence / blow-up verdict, carrying
// the hypothesis that fired and the numbers it compared. Pure functions;
// thread-safe.

#include <map>
#include <string>

#include "pmlab/geometry.hpp"
#include "pmlab/model.hpp"
#include "pmlab/solver.hpp"

namespace pmlab {

struct RegimeInputs {
  double mu = 2.0;
  double nu = 1.0;
  double l = 1.0;
  double a = 1.0;
  double K_inf = 0.0;  // ess-sup of the boundary kernel
  double k0 = 0.0;     // ess-inf of the boundary kernel
  GeometryConstants geom{};
  double theta = 1.0;  // max(2^(l/mu - 1), 1), the critical-case constant
};

// Build inputs from a validated spec. Geometry constants are evaluated at the
// given boundary-layer depth; pass 0 (the default) for 0.2 * inradius. The
// depth used is reported in geom.layer_depth.
RegimeInputs regime_inputs(const ValidatedSpec& vs, double layer_depth = 0.0);

// ConfigError("bad_regime_inputs") on violated invariants
void check_inputs(const RegimeInputs& in);

enum class Verdict {
  GlobalForAllData,
  BlowUpForLargeData,
  CriticalUndetermined,
  OutsideTheorems,
};

const char* to_string(Verdict v);

struct RegimeVerdict {
  Verdict verdict = Verdict::OutsideTheorems;
  // content-named hypothesis that fired; empty exactly for OutsideTheorems
  std::string clause;
  std::map<std::string, double> thresholds_evaluated;
};

// Total on valid inputs; exactly one verdict. Critical-balance ratios are
// compared with the same relative tolerance as the exponent relations, so a
// ratio within rounding of a threshold is neither "large enough" nor "small
// enough" and lands in CriticalUndetermined, scale-coherently.
RegimeVerdict classify(const RegimeInputs& in);

// Critical-balance thresholds (nu = mu + l - 1 with l + mu > 2):
// a/K_inf strictly above global_threshold forces boundedness for all data;
// a/k0 strictly below blowup_threshold admits escaping data.
double global_threshold(const RegimeInputs& in);
double blowup_threshold(const RegimeInputs& in);

enum class Consistency { Consistent, Contradiction, ConsistentSmallData };

const char* to_string(Consistency c);

struct ConsistencyReport {
  Consistency flag = Consistency::Consistent;
  std::string note;
};

// Compares the verdict against what a simulation of the same problem did.
// Contradiction only when boundedness was guaranteed but the run escaped;
// a bounded run under a blow-up verdict merely means the datum was small.
// Throws spec_mismatch when the outcome was not produced by solve().
ConsistencyReport cross_check(const RegimeInputs& in, const SimulationOutcome& sim);

}  // namespace pmlab
