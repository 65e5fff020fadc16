// qcert: local-marginal certificates, reconstruction and verification for
// small multipartite quantum states. Batch-only; all reports are JSON on
// stdout (or --output), human-readable summaries go to stderr.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcert/io.hpp"

namespace {

using qcert::Region;
using json = nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tol = 1e-9;
  std::string unit = "nats";
  bool repair = false;
  std::string output;
};

qcert::Tolerances tolerances(const GlobalOpts& g) {
  // PSD checks are an order of magnitude looser than entry-wise ones; tiny
  // negative eigenvalues are endemic to traced-down matrices.
  return {g.tol, g.tol, 10.0 * g.tol};
}

void emit(const json& j, const GlobalOpts& g) {
  if (g.output.empty())
    std::cout << j.dump(2) << '\n';
  else
    qcert::io::save_json(g.output, j);
}

// Entropic values are computed in nats; --unit bits only rescales the
// stderr summary, never the stored report.
double display(double nats, const GlobalOpts& g) {
  return g.unit == "bits" ? nats / std::numbers::ln2 : nats;
}

void note(const std::string& line) { std::cerr << "# " << line << '\n'; }

Region parse_region(const std::string& text) {
  std::vector<long> sites;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    try {
      sites.push_back(std::stol(token));
    } catch (const std::exception&) {
      throw qcert::ParseError("region '" + text + "': bad site index '" + token + "'");
    }
  }
  return Region::of(std::move(sites));
}

// "A/B" or "A/B/C" with comma-separated sites per part; parts may be empty.
std::vector<Region> parse_region_tuple(const std::string& text, size_t parts) {
  std::vector<std::string> segments(1);
  for (char c : text) {
    if (c == '/')
      segments.emplace_back();
    else
      segments.back() += c;
  }
  if (segments.size() != parts)
    throw qcert::ParseError("expected " + std::to_string(parts) + " '/'-separated regions in '" +
                            text + "'");
  std::vector<Region> out;
  for (const auto& s : segments) out.push_back(parse_region(s));
  return out;
}

int run_entropy(const GlobalOpts& g, const std::string& state_file,
                const std::vector<std::string>& regions, const std::vector<std::string>& conds,
                const std::vector<std::string>& cmis, const std::vector<std::string>& wms) {
  qcert::DensityMatrix state =
      qcert::io::state_from_json(qcert::io::load_json(state_file), g.repair, tolerances(g));
  qcert::EntropyReport report;
  for (const auto& text : regions) {
    Region r = parse_region(text);
    double s = qcert::clamp_small_negative(qcert::entropy(qcert::partial_trace(state, r)));
    report.regions.push_back({r, s});
    note("S" + r.to_string() + " = " + std::to_string(display(s, g)) + " " + g.unit);
  }
  for (const auto& text : conds) {
    auto t = parse_region_tuple(text, 2);
    double raw = qcert::conditional_entropy(state, t[0], t[1]);
    report.quantities.push_back({"conditional", t[0], t[1], Region(), raw, raw});
    note("S(" + t[0].to_string() + "|" + t[1].to_string() + ") = " +
         std::to_string(display(raw, g)) + " " + g.unit);
  }
  for (const auto& text : cmis) {
    auto t = parse_region_tuple(text, 3);
    double raw = qcert::cmi(state, t[0], t[1], t[2]);
    report.quantities.push_back(
        {"cmi", t[0], t[1], t[2], qcert::clamp_small_negative(raw), raw});
    note("I(" + t[0].to_string() + ":" + t[2].to_string() + "|" + t[1].to_string() + ") = " +
         std::to_string(display(raw, g)) + " " + g.unit);
  }
  for (const auto& text : wms) {
    auto t = parse_region_tuple(text, 3);
    double raw = qcert::weak_monotonicity(state, t[0], t[1], t[2]);
    report.quantities.push_back(
        {"weak_monotonicity", t[0], t[1], t[2], qcert::clamp_small_negative(raw), raw});
    note("S(" + t[0].to_string() + "|" + t[1].to_string() + ") + S(" + t[0].to_string() + "|" +
         t[2].to_string() + ") = " + std::to_string(display(raw, g)) + " " + g.unit);
  }
  emit(qcert::io::entropy_report_to_json(report), g);
  return 0;
}

int run_certify(const GlobalOpts& g, const std::string& bundle_file, const std::string& plan_file,
                const std::string& eps_file) {
  qcert::RdmBundle bundle =
      qcert::io::bundle_from_json(qcert::io::load_json(bundle_file), g.repair, tolerances(g));
  qcert::ShieldPlan plan = qcert::io::plan_from_json(qcert::io::load_json(plan_file));
  std::vector<double> eps;
  if (!eps_file.empty()) eps = qcert::io::epsilons_from_json(qcert::io::load_json(eps_file));
  qcert::CertificateReport report = qcert::certificate(bundle, plan, eps);
  note("term sum = " + std::to_string(display(report.term_sum, g)) + " " + g.unit);
  note("bound raw = " + std::to_string(report.bound_raw) + ", capped = " +
       std::to_string(report.bound_capped) + (report.nontrivial ? " (nontrivial)" : " (trivial)"));
  emit(qcert::io::certificate_to_json(report), g);
  return 0;
}

int run_reconstruct(const GlobalOpts& g, const std::string& bundle_file,
                    const std::string& plan_file, const std::string& reference_file,
                    const std::string& state_out) {
  qcert::RdmBundle bundle =
      qcert::io::bundle_from_json(qcert::io::load_json(bundle_file), g.repair, tolerances(g));
  qcert::ShieldPlan plan = qcert::io::plan_from_json(qcert::io::load_json(plan_file));
  std::optional<qcert::DensityMatrix> reference;
  if (!reference_file.empty())
    reference =
        qcert::io::state_from_json(qcert::io::load_json(reference_file), g.repair, tolerances(g));
  qcert::ReconstructionTrace trace = qcert::reconstruct(bundle, plan, reference);
  if (trace.final_reference_distance)
    note("final distance to reference = " + std::to_string(*trace.final_reference_distance));
  if (trace.certificate_bound)
    note("certificate bound = " + std::to_string(*trace.certificate_bound));
  if (!state_out.empty())
    qcert::io::save_json(state_out, qcert::io::state_to_json(trace.final_state));
  emit(qcert::io::trace_to_json(trace), g);
  return 0;
}

int run_plan(const GlobalOpts& g, const std::string& grid_file, long radius) {
  auto [grid, model] = qcert::io::grid_model_from_json(qcert::io::load_json(grid_file));
  qcert::PlanResult result = qcert::generate_plan(grid, radius);
  qcert::PredictedBound bound = qcert::predict_bound(result.plan, model, grid);
  json j = qcert::io::plan_to_json(result.plan);
  j["predicted_bound"] = qcert::io::predicted_bound_to_json(bound);
  j["uncertifiable"] = json(result.uncertifiable);
  note("predicted bound = " + std::to_string(bound.value) + " (interval [" +
       std::to_string(bound.lower) + ", " + std::to_string(bound.upper) + "])");
  if (!result.uncertifiable.empty())
    note(std::to_string(result.uncertifiable.size()) +
         " sites are uncertifiable under this sweep");
  emit(j, g);
  return 0;
}

int run_simulate(const GlobalOpts& g, const std::string& state_file, const std::string& mplan_file) {
  qcert::DensityMatrix state =
      qcert::io::state_from_json(qcert::io::load_json(state_file), g.repair, tolerances(g));
  qcert::MeasurementPlan mplan =
      qcert::io::measurement_plan_from_json(qcert::io::load_json(mplan_file));
  if (g.seed_given) mplan.seed = g.seed;
  emit(qcert::io::bundle_to_json(qcert::simulate_bundle(state, mplan)), g);
  return 0;
}

int run_verify(const GlobalOpts& g, const std::string& measured_file,
               const std::string& target_file, const std::string& plan_file) {
  qcert::RdmBundle measured =
      qcert::io::bundle_from_json(qcert::io::load_json(measured_file), g.repair, tolerances(g));
  qcert::ShieldPlan plan = qcert::io::plan_from_json(qcert::io::load_json(plan_file));

  // The target may arrive as a full state (exact marginals are then derived)
  // or as a ready-made bundle of target RDMs.
  json target_json = qcert::io::load_json(target_file);
  qcert::RdmBundle target;
  if (target_json.is_object() && target_json.value("format", "") == "qstate-v1") {
    qcert::DensityMatrix state =
        qcert::io::state_from_json(target_json, g.repair, tolerances(g));
    std::vector<Region> supports;
    for (long i = 0; i < plan.n_sites(); ++i) supports.push_back(plan.support(i));
    target = qcert::exact_bundle(state, supports);
  } else {
    target = qcert::io::bundle_from_json(target_json, g.repair, tolerances(g));
  }

  qcert::VerificationVerdict verdict = qcert::verify(measured, target, plan);
  note(std::string("verdict: ") + (verdict.certified ? "certified-close" : "not-certified") +
       ", bound = " + std::to_string(verdict.bound));
  emit(qcert::io::verdict_to_json(verdict), g);
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const qcert::NonConvergenceError*>(&e)) return 4;
  if (dynamic_cast<const qcert::CoverageError*>(&e)) return 3;
  if (dynamic_cast<const qcert::ConsistencyError*>(&e)) return 3;
  if (dynamic_cast<const qcert::Error*>(&e)) return 2;  // parse/validation family
  if (dynamic_cast<const json::exception*>(&e)) return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local-marginal certificates for multipartite quantum states"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "override the random seed of seeded commands");
  app.add_option("--tol", g.tol, "validation tolerance for state inputs")->capture_default_str();
  app.add_option("--unit", g.unit, "display unit for the stderr summary")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();
  app.add_flag("--repair", g.repair, "repair invalid input states instead of rejecting them");
  app.add_option("--output", g.output, "write the JSON report here instead of stdout");

  int rc = 0;

  auto* entropy = app.add_subcommand("entropy", "entropies and entropic inequalities of a state");
  {
    static std::string state_file;
    static std::vector<std::string> regions, conds, cmis, wms;
    entropy->add_option("state", state_file, "qstate-v1 file")->required();
    entropy->add_option("--region", regions, "sites, e.g. 0,1");
    entropy->add_option("--cond", conds, "conditional entropy S(A|B), e.g. 0/1,2");
    entropy->add_option("--cmi", cmis, "conditional mutual information I(A:C|B), e.g. 0/1/2");
    entropy->add_option("--wm", wms, "weak monotonicity S(A|B)+S(A|C), e.g. 0/1/2");
    entropy->callback([&] { rc = run_entropy(g, state_file, regions, conds, cmis, wms); });
  }

  auto* certify = app.add_subcommand("certify", "trace-distance certificate from an RDM bundle");
  {
    static std::string bundle_file, plan_file, eps_file;
    certify->add_option("bundle", bundle_file, "qbundle-v1 file")->required();
    certify->add_option("plan", plan_file, "shield plan file")->required();
    certify->add_option("--epsilons", eps_file, "per-site marginal accuracies");
    certify->callback([&] { rc = run_certify(g, bundle_file, plan_file, eps_file); });
  }

  auto* reconstruct = app.add_subcommand("reconstruct", "rebuild a global state from an RDM bundle");
  {
    static std::string bundle_file, plan_file, reference_file, state_out;
    reconstruct->add_option("bundle", bundle_file, "qbundle-v1 file")->required();
    reconstruct->add_option("plan", plan_file, "shield plan file")->required();
    reconstruct->add_option("--reference", reference_file, "state to compare each prefix against");
    reconstruct->add_option("--output-state", state_out, "write the final state here");
    reconstruct->callback(
        [&] { rc = run_reconstruct(g, bundle_file, plan_file, reference_file, state_out); });
  }

  auto* plan = app.add_subcommand("plan", "sweep plan and predicted bound for a grid model");
  {
    static std::string grid_file;
    static long radius = 1;
    plan->add_option("grid", grid_file, "grid/model file")->required();
    plan->add_option("--radius", radius, "Chebyshev neighbourhood radius")->capture_default_str();
    plan->callback([&] { rc = run_plan(g, grid_file, radius); });
  }

  auto* simulate = app.add_subcommand("simulate", "simulated tomography of a state's marginals");
  {
    static std::string state_file, mplan_file;
    simulate->add_option("state", state_file, "qstate-v1 file")->required();
    simulate->add_option("measurements", mplan_file, "measurement plan file")->required();
    simulate->callback([&] {
      g.seed_given = app.count("--seed") > 0;
      rc = run_simulate(g, state_file, mplan_file);
    });
  }

  auto* verify = app.add_subcommand("verify", "verdict on measured marginals against a target");
  {
    static std::string measured_file, target_file, plan_file;
    verify->add_option("measured", measured_file, "measured qbundle-v1 file")->required();
    verify->add_option("target", target_file, "target state or RDM bundle")->required();
    verify->add_option("plan", plan_file, "shield plan file")->required();
    verify->callback([&] { rc = run_verify(g, measured_file, target_file, plan_file); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return rc;
}
