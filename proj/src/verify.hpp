#ifndef SPINBERRY_VERIFY_HPP
#define SPINBERRY_VERIFY_HPP

#include <string>
#include <vector>

#include <spinberry/contour.hpp>
#include <spinberry/dirac.hpp>
#include <spinberry/quadrature.hpp>

#include "config.hpp"
#include "emit.hpp"

// Acceptance suite: each criterion checks a library result against an oracle
// that does not share its code path.  Criteria use a pinned reference family
// (unit mass, unit-width Gaussian profile); the configuration supplies
// resolutions and the random seed only.  Wall times are advisory and never
// enter emitted reports, which must be bit-identical across reruns.

namespace spinberry {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0;
  double tolerance = 0;
  double seconds = 0;  // advisory only
  std::string detail;
};

std::vector<CriterionResult> run_acceptance(const RunConfig& cfg);
bool all_pass(const std::vector<CriterionResult>& results);
void append_criteria(Report& report,
                     const std::vector<CriterionResult>& results);
std::string criterion_line(const CriterionResult& r);

DiracFamily<double> family_from_config(const RunConfig& cfg);
QuadratureSpec quadrature_from_config(const RunConfig& cfg);
ParameterContour<double> contour_from_config(const RunConfig& cfg);

}  // namespace spinberry

#endif
