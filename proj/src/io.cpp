#include "qcert/io.hpp"

#include <fstream>

namespace qcert::io {

namespace {

const json& require_field(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(std::string(what) + ": complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<long> longs_from_json(const json& j, const char* what) {
  if (!j.is_array())
    throw ParseError(std::string(what) + ": expected an array of integers");
  std::vector<long> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer())
      throw ParseError(std::string(what) + ": expected an array of integers");
    out.push_back(v.get<long>());
  }
  return out;
}

json region_to_json(const Region& r) { return json(r.sites()); }

Region region_from_json(const json& j, const char* what) {
  return Region::of(longs_from_json(j, what));
}

}  // namespace

SystemLayout layout_from_json(const json& labels, const json& dims) {
  if (!labels.is_array() || !dims.is_array() || labels.size() != dims.size())
    throw ParseError("state: \"labels\" and \"dims\" must be arrays of equal length");
  std::vector<Site> sites;
  sites.reserve(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string() || !dims[i].is_number_integer())
      throw ParseError("state: labels must be strings and dims integers");
    sites.push_back({labels[i].get<std::string>(), dims[i].get<long>()});
  }
  return SystemLayout::make(std::move(sites));
}

json state_to_json(const DensityMatrix& state) {
  json j;
  j["format"] = "qstate-v1";
  j["kind"] = "density";
  json labels = json::array(), dims = json::array();
  for (const auto& s : state.layout().sites()) {
    labels.push_back(s.label);
    dims.push_back(s.dim);
  }
  j["labels"] = std::move(labels);
  j["dims"] = std::move(dims);
  json data = json::array();
  const Matrix& m = state.matrix();
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) data.push_back(complex_to_json(m(r, c)));
  j["data"] = std::move(data);
  return j;
}

json state_to_json(const StateVector& psi) {
  json j;
  j["format"] = "qstate-v1";
  j["kind"] = "pure";
  json labels = json::array(), dims = json::array();
  for (const auto& s : psi.layout().sites()) {
    labels.push_back(s.label);
    dims.push_back(s.dim);
  }
  j["labels"] = std::move(labels);
  j["dims"] = std::move(dims);
  json data = json::array();
  for (long i = 0; i < psi.dim(); ++i) data.push_back(complex_to_json(psi.vector()[i]));
  j["data"] = std::move(data);
  return j;
}

namespace {

void check_state_header(const json& j) {
  if (!j.is_object() || require_field(j, "format", "state") != "qstate-v1")
    throw ParseError("state: expected format \"qstate-v1\"");
}

}  // namespace

StateVector pure_from_json(const json& j, bool repair, double norm_tol) {
  check_state_header(j);
  if (require_field(j, "kind", "state") != "pure")
    throw ParseError("state: expected kind \"pure\"");
  SystemLayout layout =
      layout_from_json(require_field(j, "labels", "state"), require_field(j, "dims", "state"));
  const json& data = require_field(j, "data", "state");
  if (!data.is_array() || static_cast<long>(data.size()) != layout.total_dim())
    throw ParseError("state: pure data must hold " + std::to_string(layout.total_dim()) +
                     " amplitudes");
  CVector v(layout.total_dim());
  for (long i = 0; i < layout.total_dim(); ++i)
    v[i] = complex_from_json(data[static_cast<size_t>(i)], "state");
  if (repair) {
    double norm = v.norm();
    if (!(norm > 0)) throw DegenerateError("state: zero amplitude vector cannot be repaired");
    return StateVector(std::move(layout), v / norm);
  }
  return StateVector::validated(std::move(layout), std::move(v), norm_tol);
}

DensityMatrix state_from_json(const json& j, bool repair, const Tolerances& tol) {
  check_state_header(j);
  const json& kind = require_field(j, "kind", "state");
  if (kind == "pure") return to_density(pure_from_json(j, repair));
  if (kind != "density")
    throw ParseError("state: unknown kind \"" + kind.dump() + "\"");
  SystemLayout layout =
      layout_from_json(require_field(j, "labels", "state"), require_field(j, "dims", "state"));
  const long d = layout.total_dim();
  const json& data = require_field(j, "data", "state");
  if (!data.is_array() || static_cast<long>(data.size()) != d * d)
    throw ParseError("state: density data must hold " + std::to_string(d * d) + " entries");
  Matrix m(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c)
      m(r, c) = complex_from_json(data[static_cast<size_t>(r * d + c)], "state");
  if (repair) return project_to_density(layout, m);
  return DensityMatrix::validated(std::move(layout), std::move(m), tol);
}

json bundle_to_json(const RdmBundle& bundle) {
  json j;
  j["format"] = "qbundle-v1";
  json labels = json::array(), dims = json::array();
  for (const auto& s : bundle.layout.sites()) {
    labels.push_back(s.label);
    dims.push_back(s.dim);
  }
  j["labels"] = std::move(labels);
  j["dims"] = std::move(dims);
  json entries = json::array();
  for (const auto& e : bundle.entries)
    entries.push_back({{"sites", region_to_json(e.region)}, {"state", state_to_json(e.state)}});
  j["entries"] = std::move(entries);
  return j;
}

RdmBundle bundle_from_json(const json& j, bool repair, const Tolerances& tol) {
  if (!j.is_object() || require_field(j, "format", "bundle") != "qbundle-v1")
    throw ParseError("bundle: expected format \"qbundle-v1\"");
  RdmBundle out;
  out.layout =
      layout_from_json(require_field(j, "labels", "bundle"), require_field(j, "dims", "bundle"));
  const json& entries = require_field(j, "entries", "bundle");
  if (!entries.is_array()) throw ParseError("bundle: \"entries\" must be an array");
  for (const auto& e : entries) {
    Region region = region_from_json(require_field(e, "sites", "bundle entry"), "bundle entry");
    DensityMatrix state = state_from_json(require_field(e, "state", "bundle entry"), repair, tol);
    out.entries.push_back({std::move(region), std::move(state)});
  }
  out.require_consistent_layouts();
  return out;
}

json plan_to_json(const ShieldPlan& plan) {
  json j;
  j["ordering"] = json(plan.ordering);
  json shields = json::array();
  for (long i = 0; i < plan.n_sites(); ++i)
    shields.push_back({{"site", plan.ordering[i]},
                       {"m", region_to_json(plan.shields[i].m)},
                       {"m_prime", region_to_json(plan.shields[i].m_prime)}});
  j["shields"] = std::move(shields);
  return j;
}

ShieldPlan plan_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("plan: expected an object");
  ShieldPlan plan;
  plan.ordering = longs_from_json(require_field(j, "ordering", "plan"), "plan ordering");
  plan.shields.resize(plan.ordering.size());
  if (!j.contains("shields")) return plan;  // empty shields everywhere
  const json& shields = j["shields"];
  if (!shields.is_array()) throw ParseError("plan: \"shields\" must be an array");
  std::vector<char> seen(plan.ordering.size(), 0);
  for (const auto& s : shields) {
    long site = require_field(s, "site", "plan shield").get<long>();
    long position = -1;
    for (size_t i = 0; i < plan.ordering.size(); ++i)
      if (plan.ordering[i] == site) position = static_cast<long>(i);
    if (position < 0)
      throw ParseError("plan: shield for site " + std::to_string(site) + " not in the ordering");
    if (seen[static_cast<size_t>(position)])
      throw ParseError("plan: duplicate shield for site " + std::to_string(site));
    seen[static_cast<size_t>(position)] = 1;
    plan.shields[static_cast<size_t>(position)] = {
        region_from_json(require_field(s, "m", "plan shield"), "plan shield"),
        region_from_json(require_field(s, "m_prime", "plan shield"), "plan shield")};
  }
  return plan;
}

json grid_model_to_json(const GridLayout& grid, const EntropyModel& model) {
  return json{{"width", grid.width},   {"height", grid.height}, {"periodic", grid.periodic},
              {"alpha", model.alpha},  {"gamma", model.gamma},  {"slack", model.slack}};
}

std::pair<GridLayout, EntropyModel> grid_model_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("grid: expected an object");
  GridLayout grid;
  grid.width = require_field(j, "width", "grid").get<long>();
  grid.height = require_field(j, "height", "grid").get<long>();
  grid.periodic = j.value("periodic", false);
  grid.require_valid();
  EntropyModel model;
  model.alpha = j.value("alpha", 0.0);
  model.gamma = j.value("gamma", 0.0);
  model.slack = j.value("slack", 0.0);
  model.require_valid();
  return {grid, model};
}

json measurement_plan_to_json(const MeasurementPlan& plan) {
  json regions = json::array();
  for (const auto& r : plan.regions) regions.push_back(region_to_json(r));
  return json{{"regions", std::move(regions)},
              {"shots", plan.shots},
              {"scheme", plan.scheme},
              {"seed", plan.seed}};
}

MeasurementPlan measurement_plan_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("measurement plan: expected an object");
  MeasurementPlan plan;
  const json& regions = require_field(j, "regions", "measurement plan");
  if (!regions.is_array()) throw ParseError("measurement plan: \"regions\" must be an array");
  for (const auto& r : regions) plan.regions.push_back(region_from_json(r, "measurement plan"));
  plan.shots = j.value("shots", MeasurementPlan{}.shots);
  if (plan.shots < 1) throw ParseError("measurement plan: shots must be at least 1");
  plan.scheme = j.value("scheme", std::string("pauli"));
  plan.seed = j.value("seed", std::uint64_t{0});
  return plan;
}

std::vector<double> epsilons_from_json(const json& j) {
  const json* arr = &j;
  if (j.is_object()) arr = &require_field(j, "epsilons", "epsilons");
  if (!arr->is_array()) throw ParseError("epsilons: expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : *arr) {
    if (!v.is_number()) throw ParseError("epsilons: expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json entropy_report_to_json(const EntropyReport& report) {
  json regions = json::array();
  for (const auto& r : report.regions)
    regions.push_back({{"sites", region_to_json(r.region)}, {"entropy_nats", r.entropy_nats}});
  json quantities = json::array();
  for (const auto& q : report.quantities)
    quantities.push_back({{"kind", q.kind},
                          {"a", region_to_json(q.a)},
                          {"b", region_to_json(q.b)},
                          {"c", region_to_json(q.c)},
                          {"value", q.value},
                          {"raw", q.raw}});
  return json{{"regions", std::move(regions)}, {"quantities", std::move(quantities)}};
}

json certificate_to_json(const CertificateReport& report) {
  json sites = json::array();
  for (const auto& s : report.sites)
    sites.push_back({{"site", s.site},
                     {"cond_m_nats", s.cond_m},
                     {"cond_m_prime_nats", s.cond_m_prime},
                     {"term_nats", s.term},
                     {"negative_term", s.negative_term},
                     {"epsilon", s.epsilon},
                     {"correction_nats", s.correction}});
  return json{{"sites", std::move(sites)},
              {"term_sum_nats", report.term_sum},
              {"correction_sum_nats", report.correction_sum},
              {"radicand_nats", report.radicand},
              {"radicand_clamped", report.radicand_clamped},
              {"bound_raw", report.bound_raw},
              {"bound_capped", report.bound_capped},
              {"nontrivial", report.nontrivial}};
}

json trace_to_json(const ReconstructionTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    json step{{"site", s.site},
              {"region", region_to_json(s.region)},
              {"repair", s.repair},
              {"borderline_eigenvalues", s.borderline}};
    if (s.term) step["term_nats"] = *s.term;
    if (s.reference_distance) step["reference_distance"] = *s.reference_distance;
    steps.push_back(std::move(step));
  }
  json j{{"steps", std::move(steps)}};
  if (trace.final_reference_distance) j["final_reference_distance"] = *trace.final_reference_distance;
  if (trace.certificate_bound) {
    j["certificate_bound"] = *trace.certificate_bound;
    if (trace.final_reference_distance) j["bound_holds"] = trace.bound_holds;
  }
  return j;
}

json verdict_to_json(const VerificationVerdict& verdict) {
  json epsilons = json::array();
  for (const auto& e : verdict.epsilons)
    epsilons.push_back(
        {{"site", e.site}, {"region", region_to_json(e.region)}, {"epsilon", e.epsilon}});
  json j{{"verdict", verdict.certified ? "certified-close" : "not-certified"},
         {"bound", verdict.bound},
         {"epsilons", std::move(epsilons)},
         {"certificate", certificate_to_json(verdict.certificate)}};
  if (!verdict.certified) j["reason"] = verdict.reason;
  return j;
}

json predicted_bound_to_json(const PredictedBound& bound) {
  return json{{"score_sum", bound.score_sum},
              {"slack_width", bound.slack_width},
              {"value", bound.value},
              {"lower", bound.lower},
              {"upper", bound.upper}};
}

json violations_to_json(const std::vector<PlanViolation>& violations) {
  json j = json::array();
  for (const auto& v : violations) j.push_back({{"site", v.site}, {"what", v.what}});
  return j;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace qcert::io
