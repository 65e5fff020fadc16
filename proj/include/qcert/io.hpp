#pragma once

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "qcert/bundle.hpp"
#include "qcert/entropy.hpp"
#include "qcert/markov.hpp"
#include "qcert/planner.hpp"
#include "qcert/recovery.hpp"
#include "qcert/tomo.hpp"

namespace qcert::io {

using nlohmann::json;

// File formats
//
//   state   {"format":"qstate-v1","kind":"density"|"pure","labels":[...],
//            "dims":[...],"data":[[re,im],...]}
//           data row-major for densities, amplitude-ordered for pure states.
//   bundle  {"format":"qbundle-v1","labels":[...],"dims":[...],
//            "entries":[{"sites":[...],"state":<qstate-v1>}]}
//   plan    {"ordering":[...],"shields":[{"site":k,"m":[...],"m_prime":[...]}]}
//   grid    {"width":w,"height":h,"periodic":b,"alpha":a,"gamma":g,"slack":s}
//   mplan   {"regions":[[...],...],"shots":n,"scheme":"pauli","seed":n}
//
// Readers reject structurally invalid states (ValidationError) unless
// `repair` is set, which routes the matrix through project_to_density.

json state_to_json(const DensityMatrix& state);
json state_to_json(const StateVector& psi);

// Pure inputs are converted to density matrices; callers needing amplitudes
// use pure_from_json.
DensityMatrix state_from_json(const json& j, bool repair = false, const Tolerances& tol = {});
StateVector pure_from_json(const json& j, bool repair = false, double norm_tol = 1e-9);

SystemLayout layout_from_json(const json& labels, const json& dims);

json bundle_to_json(const RdmBundle& bundle);
RdmBundle bundle_from_json(const json& j, bool repair = false, const Tolerances& tol = {});

json plan_to_json(const ShieldPlan& plan);
ShieldPlan plan_from_json(const json& j);

json grid_model_to_json(const GridLayout& grid, const EntropyModel& model);
std::pair<GridLayout, EntropyModel> grid_model_from_json(const json& j);

json measurement_plan_to_json(const MeasurementPlan& plan);
MeasurementPlan measurement_plan_from_json(const json& j);

// Epsilon files: either a plain array aligned with the plan ordering or
// {"epsilons":[...]}.
std::vector<double> epsilons_from_json(const json& j);

json entropy_report_to_json(const EntropyReport& report);
json certificate_to_json(const CertificateReport& report);
json trace_to_json(const ReconstructionTrace& trace);
json verdict_to_json(const VerificationVerdict& verdict);
json predicted_bound_to_json(const PredictedBound& bound);
json violations_to_json(const std::vector<PlanViolation>& violations);

// Read/parse with errors mapped to ParseError ("<path>: <reason>").
json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

}  // namespace qcert::io
