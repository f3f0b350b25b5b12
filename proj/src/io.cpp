#include "pax/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pax {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

const json& need(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where + ": missing field '" + key + "'");
  return *it;
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + ": expected a number");
  return j.get<double>();
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<double> num_array(const json& j, const std::string& where, size_t want = 0) {
  if (!j.is_array()) fail(where + ": expected an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (size_t k = 0; k < j.size(); ++k) v.push_back(num(j[k], where + "[" + std::to_string(k) + "]"));
  if (want != 0 && v.size() != want)
    fail(where + ": expected " + std::to_string(want) + " entries");
  return v;
}

Table parse_table(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + ": expected a non-empty array of rows");
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(where + ": expected non-empty rows");
  Table t(static_cast<int>(j.size()), static_cast<int>(cols));
  for (size_t r = 0; r < j.size(); ++r) {
    const auto row = num_array(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols) fail(where + ": ragged rows");
    for (size_t c = 0; c < cols; ++c) t.at(static_cast<int>(r), static_cast<int>(c)) = row[c];
  }
  return t;
}

BeliefDistribution parse_distribution(const json* j, TypeSpace ts, const std::string& where) {
  if (!j) return BeliefDistribution::uniform(ts);
  const std::string kind = str(need(*j, "kind", where), where + ".kind");
  const json params = j->value("params", json::object());
  if (kind == "uniform") return BeliefDistribution::uniform(ts);
  if (kind == "beta")
    return BeliefDistribution::beta(ts, num(need(params, "a", where + ".params"), where + ".params.a"),
                                    num(need(params, "b", where + ".params"), where + ".params.b"));
  if (kind == "truncated-normal")
    return BeliefDistribution::truncated_normal(
        ts, num(need(params, "mu", where + ".params"), where + ".params.mu"),
        num(need(params, "sigma", where + ".params"), where + ".params.sigma"));
  fail(where + ": unknown distribution kind '" + kind + "'");
}

AudienceCostRule parse_audience(const json* j, const std::string& where) {
  if (!j) return AudienceCostRule::zero();
  const std::string kind = str(need(*j, "kind", where), where + ".kind");
  const json params = j->value("params", json::object());
  if (kind == "zero") return AudienceCostRule::zero();
  if (kind == "affine")
    return AudienceCostRule::affine(
        num(need(params, "slope", where + ".params"), where + ".params.slope"),
        num(need(params, "intercept", where + ".params"), where + ".params.intercept"));
  if (kind == "tabulated")
    return AudienceCostRule::tabulated(
        num_array(need(params, "x_nodes", where + ".params"), where + ".params.x_nodes"),
        num_array(need(params, "theta_nodes", where + ".params"), where + ".params.theta_nodes"),
        parse_table(need(params, "values", where + ".params"), where + ".params.values"));
  fail(where + ": unknown audience cost kind '" + kind + "'");
}

ComponentFn parse_component(const json& j, const std::string& where) {
  const std::string kind = str(need(j, "kind", where), where + ".kind");
  if (kind == "affine")
    return ComponentFn::affine(num(need(j, "slope", where), where + ".slope"),
                               j.contains("intercept") ? num(j["intercept"], where + ".intercept")
                                                       : 0.0);
  if (kind == "tabulated")
    return ComponentFn::tabulated(num_array(need(j, "x", where), where + ".x"),
                                  num_array(need(j, "y", where), where + ".y"));
  fail(where + ": unknown component kind '" + kind + "'");
}

json component_json(const ComponentFn& c) {
  json j;
  if (c.kind == ComponentFn::Kind::affine) {
    j["kind"] = "affine";
    j["slope"] = c.slope;
    j["intercept"] = c.intercept;
  } else {
    j["kind"] = "tabulated";
    j["x"] = c.xs;
    j["y"] = c.ys;
  }
  return j;
}

json table_json(const Table& t) {
  json rows = json::array();
  for (int r = 0; r < t.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < t.cols; ++c) row.push_back(t.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw ParseError("cannot read '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw WriteError("cannot write '" + path + "'");
  f << content;
  f.flush();
  if (!f) throw WriteError("cannot write '" + path + "'");
}

const char* pass_str(bool b) { return b ? "pass" : "fail"; }
const char* yes_str(bool b) { return b ? "yes" : "no"; }

json plausibility_json(const PlausibilityReport& r) {
  json j;
  j["lhs"] = r.lhs;
  j["plausible"] = r.plausible;
  j["boundary"] = boundary_plausible(r);
  j["verdict"] = r.plausible ? (boundary_plausible(r) ? "plausible (boundary)" : "plausible")
                             : "implausible";
  j["has_candidate"] = r.has_candidate;
  json states = json::array();
  for (int i = 0; i < 2; ++i) {
    json s;
    s["state"] = i + 1;
    s["W_top"] = r.w_top[i];
    s["Wc_top"] = r.wc_top[i];
    s["leader_term"] = r.leader_component[i];
    s["citizen_term"] = r.citizen_component[i];
    s["price_of_peace"] = r.price_of_peace[i];
    states.push_back(std::move(s));
  }
  j["states"] = std::move(states);
  return j;
}

json audit_json(const AuditReport& r) {
  json j;
  {
    json f;
    f["feasible"] = r.feas.feasible;
    f["worst_violation"] = r.feas.worst_violation;
    f["node"] = {r.feas.violation_node1, r.feas.violation_node2};
    f["peaceful"] = r.feas.peaceful;
    f["max_pi"] = r.feas.max_pi;
    f["min_pi"] = r.feas.min_pi;
    f["feas_tol"] = r.feas.feas_tol;
    f["peace_tol"] = r.feas.peace_tol;
    j["feasibility"] = std::move(f);
  }
  {
    json ic;
    ic["max_gain"] = r.ic.max_gain;
    ic["state"] = r.ic.state + 1;
    ic["true_type"] = r.ic.true_type;
    ic["best_report"] = r.ic.best_report;
    ic["tol"] = r.ic.tol;
    ic["passed"] = r.ic.passed;
    j["incentive_compatibility"] = std::move(ic);
  }
  {
    json e;
    e["max_residual"] = r.envelope.max_residual;
    e["residual_state"] = r.envelope.residual_state + 1;
    e["residual_theta"] = r.envelope.residual_theta;
    e["marginal_monotone"] = r.envelope.marginal_monotone;
    e["monotone_state"] = r.envelope.monotone_state + 1;
    e["monotone_pair"] = {r.envelope.monotone_theta_lo, r.envelope.monotone_theta_hi};
    e["worst_marginal_drop"] = r.envelope.worst_marginal_drop;
    e["tol"] = r.envelope.tol;
    e["passed"] = r.envelope.passed;
    j["envelope"] = std::move(e);
  }
  {
    json p;
    p["leader_slack_peace"] = r.participation.leader_v_worst;
    p["leader_slack_peace_state"] = r.participation.leader_v_state + 1;
    p["leader_slack_peace_theta"] = r.participation.leader_v_theta;
    p["leader_slack_menu"] = r.participation.leader_u_worst;
    p["leader_slack_menu_state"] = r.participation.leader_u_state + 1;
    p["leader_slack_menu_theta"] = r.participation.leader_u_theta;
    p["operative_reading"] = r.participation.peaceful_reading ? "peace" : "menu";
    p["citizen_slack"] = r.participation.citizen_worst;
    p["citizen_state"] = r.participation.citizen_state + 1;
    p["citizen_theta"] = r.participation.citizen_theta;
    p["citizen_vacuous"] = r.participation.citizen_vacuous;
    p["tol"] = r.participation.tol;
    p["passed"] = r.participation.passed;
    j["participation"] = std::move(p);
  }
  if (r.spread) {
    json s;
    s["spread"] = {r.spread->spread[0], r.spread->spread[1]};
    s["v_mean"] = {r.spread->v_mean[0], r.spread->v_mean[1]};
    s["tol"] = r.spread->tol;
    s["passed"] = r.spread->passed;
    j["constant_peace_payoff"] = std::move(s);
  } else {
    j["constant_peace_payoff"] = nullptr;
  }
  j["passes"] = r.passes();
  return j;
}

}  // namespace


CrisisModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("model: ") + e.what());
  }
  CrisisModel m;
  const json& jstates = need(j, "states", "model");
  if (!jstates.is_array() || jstates.size() != 2) fail("model.states: expected exactly 2 entries");
  for (int i = 0; i < 2; ++i) {
    const std::string where = "model.states[" + std::to_string(i) + "]";
    const json& js = jstates[i];
    if (!js.is_object()) fail(where + ": expected an object");
    StateSpec& s = m.states[i];
    const json& ts = need(js, "type_space", where);
    s.types.lo = num(need(ts, "lo", where + ".type_space"), where + ".type_space.lo");
    s.types.hi = num(need(ts, "hi", where + ".type_space"), where + ".type_space.hi");
    if (js.contains("gamma")) s.gamma = num(js["gamma"], where + ".gamma");
    if (js.contains("lambda")) s.lambda = num(js["lambda"], where + ".lambda");
    const json* jd = js.contains("distribution") ? &js["distribution"] : nullptr;
    s.belief = parse_distribution(jd, s.types, where + ".distribution");
    const json* ja = js.contains("audience_cost") ? &js["audience_cost"] : nullptr;
    s.audience = parse_audience(ja, where + ".audience_cost");
  }
  const json& jt = need(j, "war_technology", "model");
  const std::string kind = str(need(jt, "kind", "model.war_technology"), "model.war_technology.kind");
  const json params = jt.value("params", json::object());
  if (kind == "one-sided-cost") {
    m.tech.kind = WarTechnology::Kind::one_sided_cost;
    const auto wp = num_array(need(params, "win_prob", "model.war_technology.params"),
                              "model.war_technology.params.win_prob", 2);
    m.tech.win_prob = {wp[0], wp[1]};
  } else if (kind == "two-sided-difference") {
    m.tech.kind = WarTechnology::Kind::two_sided_difference;
    const json& jh = need(params, "h", "model.war_technology.params");
    const json& jg = need(params, "g", "model.war_technology.params");
    if (!jh.is_array() || jh.size() != 2 || !jg.is_array() || jg.size() != 2)
      fail("model.war_technology.params: h and g must each list 2 components");
    for (int i = 0; i < 2; ++i) {
      m.tech.h[i] = parse_component(jh[i], "model.war_technology.params.h[" + std::to_string(i) + "]");
      m.tech.g[i] = parse_component(jg[i], "model.war_technology.params.g[" + std::to_string(i) + "]");
    }
    if (params.contains("base")) {
      const auto b = num_array(params["base"], "model.war_technology.params.base", 2);
      m.tech.base = {b[0], b[1]};
    }
    if (params.contains("citizen_costs")) {
      const auto c = num_array(params["citizen_costs"], "model.war_technology.params.citizen_costs", 2);
      m.tech.citizen_cost = {c[0], c[1]};
    }
  } else {
    fail("model.war_technology: unknown kind '" + kind + "'");
  }
  return m;
}

CrisisModel load_model(const std::string& path) { return parse_model(read_file(path)); }

std::string model_to_json(const CrisisModel& m) {
  json j;
  json states = json::array();
  for (int i = 0; i < 2; ++i) {
    const StateSpec& s = m.states[i];
    json js;
    js["type_space"] = {{"lo", s.types.lo}, {"hi", s.types.hi}};
    js["gamma"] = s.gamma;
    js["lambda"] = s.lambda;
    json jd;
    switch (s.belief.kind) {
      case BeliefDistribution::Kind::uniform:
        jd["kind"] = "uniform";
        break;
      case BeliefDistribution::Kind::beta:
        jd["kind"] = "beta";
        jd["params"] = {{"a", s.belief.a}, {"b", s.belief.b}};
        break;
      case BeliefDistribution::Kind::truncated_normal:
        jd["kind"] = "truncated-normal";
        jd["params"] = {{"mu", s.belief.mu}, {"sigma", s.belief.sigma}};
        break;
    }
    js["distribution"] = std::move(jd);
    json ja;
    switch (s.audience.kind) {
      case AudienceCostRule::Kind::zero:
        ja["kind"] = "zero";
        break;
      case AudienceCostRule::Kind::affine:
        ja["kind"] = "affine";
        ja["params"] = {{"slope", s.audience.slope}, {"intercept", s.audience.intercept}};
        break;
      case AudienceCostRule::Kind::tabulated:
        ja["kind"] = "tabulated";
        ja["params"] = {{"x_nodes", s.audience.x_nodes},
                        {"theta_nodes", s.audience.theta_nodes},
                        {"values", table_json(s.audience.values)}};
        break;
    }
    js["audience_cost"] = std::move(ja);
    states.push_back(std::move(js));
  }
  j["states"] = std::move(states);
  json jt;
  if (m.tech.kind == WarTechnology::Kind::one_sided_cost) {
    jt["kind"] = "one-sided-cost";
    jt["params"] = {{"win_prob", {m.tech.win_prob[0], m.tech.win_prob[1]}}};
  } else {
    jt["kind"] = "two-sided-difference";
    json p;
    p["h"] = {component_json(m.tech.h[0]), component_json(m.tech.h[1])};
    p["g"] = {component_json(m.tech.g[0]), component_json(m.tech.g[1])};
    p["base"] = {m.tech.base[0], m.tech.base[1]};
    p["citizen_costs"] = {m.tech.citizen_cost[0], m.tech.citizen_cost[1]};
    jt["params"] = std::move(p);
  }
  j["war_technology"] = std::move(jt);
  return j.dump(2) + "\n";
}

void save_model(const std::string& path, const CrisisModel& m) {
  write_file(path, model_to_json(m));
}

DirectMechanism parse_mechanism(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("mechanism: ") + e.what());
  }
  const auto g1 = num_array(need(j, "grid1", "mechanism"), "mechanism.grid1");
  const auto g2 = num_array(need(j, "grid2", "mechanism"), "mechanism.grid2");
  Table pi = parse_table(need(j, "pi", "mechanism"), "mechanism.pi");
  Table x1 = parse_table(need(j, "x1", "mechanism"), "mechanism.x1");
  Table x2 = parse_table(need(j, "x2", "mechanism"), "mechanism.x2");
  try {
    return DirectMechanism(g1, g2, std::move(pi), std::move(x1), std::move(x2));
  } catch (const PreconditionError& e) {
    fail(e.what());
  }
}

DirectMechanism load_mechanism(const std::string& path) {
  return parse_mechanism(read_file(path));
}

std::string mechanism_to_json(const DirectMechanism& mech) {
  json j;
  j["grid1"] = mech.grid1;
  j["grid2"] = mech.grid2;
  j["pi"] = table_json(mech.pi);
  j["x1"] = table_json(mech.x1);
  j["x2"] = table_json(mech.x2);
  return j.dump(2) + "\n";
}

void save_mechanism(const std::string& path, const DirectMechanism& mech) {
  write_file(path, mechanism_to_json(mech));
}

std::string to_text(const PlausibilityReport& r) {
  std::ostringstream os;
  os << "peace plausibility\n";
  os << "  lhs: " << fmt12(r.lhs) << "\n";
  os << "  verdict: " << (r.plausible ? (boundary_plausible(r) ? "plausible (boundary)" : "plausible")
                                      : "implausible")
     << "\n";
  for (int i = 0; i < 2; ++i) {
    os << "  state " << (i + 1) << ": W_top " << fmt12(r.w_top[i]) << ", Wc_top "
       << fmt12(r.wc_top[i]) << ", leader_term " << fmt12(r.leader_component[i])
       << ", citizen_term " << fmt12(r.citizen_component[i]) << ", price_of_peace "
       << fmt12(r.price_of_peace[i]) << "\n";
  }
  return os.str();
}

std::string to_json(const PlausibilityReport& r) { return plausibility_json(r).dump(2) + "\n"; }

std::string to_text(const AuditReport& r) {
  std::ostringstream os;
  os << "mechanism audit\n";
  os << "  feasibility: " << pass_str(r.feas.feasible) << " (worst violation "
     << fmt12(r.feas.worst_violation) << " at node (" << r.feas.violation_node1 << ","
     << r.feas.violation_node2 << "))\n";
  os << "  peaceful: " << yes_str(r.feas.peaceful) << " (max pi " << fmt12(r.feas.max_pi)
     << ", min pi " << fmt12(r.feas.min_pi) << ")\n";
  os << "  incentive compatibility: " << pass_str(r.ic.passed) << " (max gain "
     << fmt12(r.ic.max_gain) << ", state " << (r.ic.state + 1) << ", true type "
     << fmt12(r.ic.true_type) << ", best report " << fmt12(r.ic.best_report) << ", tol "
     << fmt12(r.ic.tol) << ")\n";
  os << "  envelope residual: " << pass_str(r.envelope.max_residual <= r.envelope.tol) << " (max "
     << fmt12(r.envelope.max_residual) << ", state " << (r.envelope.residual_state + 1)
     << ", theta " << fmt12(r.envelope.residual_theta) << ", tol " << fmt12(r.envelope.tol)
     << ")\n";
  os << "  marginal monotonicity: " << pass_str(r.envelope.marginal_monotone) << " (worst drop "
     << fmt12(r.envelope.worst_marginal_drop) << ", state " << (r.envelope.monotone_state + 1)
     << ", between " << fmt12(r.envelope.monotone_theta_lo) << " and "
     << fmt12(r.envelope.monotone_theta_hi) << ")\n";
  os << "  participation: " << pass_str(r.participation.passed) << " (operative reading: "
     << (r.participation.peaceful_reading ? "peace" : "menu") << ")\n";
  os << "    leader slack, peace payoff: " << fmt12(r.participation.leader_v_worst) << " (state "
     << (r.participation.leader_v_state + 1) << ", theta "
     << fmt12(r.participation.leader_v_theta) << ")\n";
  os << "    leader slack, menu value: " << fmt12(r.participation.leader_u_worst) << " (state "
     << (r.participation.leader_u_state + 1) << ", theta "
     << fmt12(r.participation.leader_u_theta) << ")\n";
  os << "    citizen slack: " << fmt12(r.participation.citizen_worst) << " (state "
     << (r.participation.citizen_state + 1) << ", theta " << fmt12(r.participation.citizen_theta)
     << ")" << (r.participation.citizen_vacuous ? " [vacuous: settlement never occurs]" : "")
     << "\n";
  if (r.spread) {
    os << "  constant peace payoff: " << pass_str(r.spread->passed) << " (spread state 1 "
       << fmt12(r.spread->spread[0]) << ", state 2 " << fmt12(r.spread->spread[1]) << ")\n";
  }
  os << "  overall: " << pass_str(r.passes()) << "\n";
  return os.str();
}

std::string to_json(const AuditReport& r) { return audit_json(r).dump(2) + "\n"; }

std::string to_text(const ConstructionResult& r) {
  std::ostringstream os;
  os << "peaceful construction\n";
  os << "  lhs: " << fmt12(r.certificate.lhs) << "\n";
  os << "  verdict: " << (r.mechanism ? "constructed" : "infeasible") << "\n";
  os << "  demands: state 1 " << fmt12(r.demands[0]) << ", state 2 " << fmt12(r.demands[1])
     << " (sum " << fmt12(r.demand_sum) << ")\n";
  if (r.mechanism) {
    os << "  shares: state 1 " << fmt12(r.mechanism->x1.at(0, 0)) << ", state 2 "
       << fmt12(r.mechanism->x2.at(0, 0)) << "\n";
  }
  if (r.discrepancy)
    os << "  note: weighted plausibility holds but unweighted demands exceed the budget\n";
  return os.str();
}

std::string to_json(const ConstructionResult& r) {
  json j;
  j["constructed"] = bool(r.mechanism);
  j["verdict"] = r.mechanism ? "constructed" : "infeasible";
  j["demands"] = {r.demands[0], r.demands[1]};
  j["demand_sum"] = r.demand_sum;
  j["discrepancy"] = r.discrepancy;
  j["plausibility"] = plausibility_json(r.certificate);
  if (r.mechanism) {
    j["shares"] = {r.mechanism->x1.at(0, 0), r.mechanism->x2.at(0, 0)};
  } else {
    j["shares"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string to_text(const WarRegionReport& r) {
  std::ostringstream os;
  os << "war region\n";
  os << "  cells: " << r.cells1 << " x " << r.cells2 << "\n";
  os << "  mass: " << fmt12(r.mass) << "\n";
  return os.str();
}

std::string to_json(const WarRegionReport& r) {
  json j;
  j["cells1"] = r.cells1;
  j["cells2"] = r.cells2;
  j["mass"] = r.mass;
  return j.dump(2) + "\n";
}

std::string to_text(const SolveResult& r) {
  std::ostringstream os;
  os << "war minimization\n";
  os << "  grid: " << r.mechanism.n1() << " x " << r.mechanism.n2() << "\n";
  os << "  objective: " << fmt12(r.objective) << "\n";
  os << "  simplex iterations: phase 1 " << r.iterations_phase1 << ", phase 2 "
     << r.iterations_phase2 << "\n";
  os << "  node ic residual: " << fmt12(r.node_ic_residual) << "\n";
  os << "  max recovery clamp: " << fmt12(r.max_clamp) << "\n";
  os << "  discretization tol: " << fmt12(r.discretization_tol) << "\n";
  for (int i = 0; i < 2; ++i) {
    os << "  interim utility state " << (i + 1) << ":";
    for (double u : r.interim_utility[i]) os << ' ' << fmt12(u);
    os << "\n";
  }
  os << "  audit overall: " << pass_str(r.audit_report.passes()) << " (ic gain "
     << fmt12(r.audit_report.ic.max_gain) << ", envelope residual "
     << fmt12(r.audit_report.envelope.max_residual) << ", leader slack "
     << fmt12(r.audit_report.participation.operative_leader_worst()) << ", citizen slack "
     << fmt12(r.audit_report.participation.citizen_worst) << ")\n";
  return os.str();
}

std::string to_json(const SolveResult& r) {
  json j;
  j["grid"] = {r.mechanism.n1(), r.mechanism.n2()};
  j["objective"] = r.objective;
  j["iterations_phase1"] = r.iterations_phase1;
  j["iterations_phase2"] = r.iterations_phase2;
  j["node_ic_residual"] = r.node_ic_residual;
  j["max_clamp"] = r.max_clamp;
  j["discretization_tol"] = r.discretization_tol;
  j["interim_utility_state1"] = r.interim_utility[0];
  j["interim_utility_state2"] = r.interim_utility[1];
  j["audit"] = audit_json(r.audit_report);
  return j.dump(2) + "\n";
}

}  // namespace pax
