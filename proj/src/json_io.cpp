#include "sfpde/json_io.hpp"

#include <cmath>

namespace sfpde {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json to_json(cplx z) { return Json::array({json_number(z.real()), json_number(z.imag())}); }

Json to_json(const CaseClass& cc) {
  Json j;
  j["schema"] = "classify-v1";
  j["case"] = cc.case_id;
  if (cc.case_id >= 2) j["p"] = cc.p;
  j["euler_form"] = cc.euler_form;
  j["shape_supported"] = cc.shape_supported;
  j["convention"] = cc.convention;
  j["dF_dv_at_origin"] = print(cc.g);
  j["lambda"] = print(cc.lambda_expr);
  j["b"] = print(cc.b_expr);
  j["lambda00"] = to_json(cc.lambda00);
  if (cc.case_id >= 2) j["c00"] = to_json(cc.c00);
  Json coeffs = Json::array();
  for (double m : cc.coeff_max) coeffs.push_back(json_number(m));
  j["taylor_max"] = coeffs;
  j["tol"] = cc.tol;
  Json f;
  f["re_lambda_negative"] = cc.flags.re_lambda_negative;
  if (cc.flags.re_c_nonpositive) f["re_c_nonpositive"] = *cc.flags.re_c_nonpositive;
  if (cc.flags.c00_negative) f["c00_negative"] = *cc.flags.c00_negative;
  if (cc.flags.rotation_theta) f["rotation_theta"] = *cc.flags.rotation_theta;
  f["alpha_order_mu"] = cc.flags.a2_alpha_bounded;
  f["b_order_mu"] = cc.flags.a2_b_bounded;
  j["flags"] = f;
  return j;
}

Json to_json(const A2Report& r) {
  Json j;
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.times.size(); ++k)
    rows.push_back({json_number(r.times[k]), json_number(r.alpha_ratio[k]), json_number(r.b_ratio[k])});
  j["columns"] = {"t", "alpha_ratio", "b_ratio"};
  j["rows"] = rows;
  j["alpha_bounded"] = r.alpha_bounded;
  j["b_bounded"] = r.b_bounded;
  return j;
}

Json to_json(const DoubleSeries& s) { return Json::parse(series_to_json(s)); }

Json to_json(const AuditReport& r) {
  Json j;
  j["schema"] = "audit-v1";
  j["kind"] = r.kind;
  j["solution"] = r.solution;
  Json lad;
  lad[r.kind == "disc" ? "R" : "eta"] = r.space_ladder;
  lad["sigma"] = r.sigma_ladder;
  j["ladders"] = lad;
  Json q = Json::array();
  for (const auto& row : r.Q) {
    Json jr = Json::array();
    for (double v : row) jr.push_back(json_number(v));
    q.push_back(jr);
  }
  j["Q"] = q;
  Json inner = Json::array();
  for (double v : r.inner) inner.push_back(json_number(v));
  j["inner"] = inner;
  Json mono = Json::array();
  for (bool b : r.sigma_monotone) mono.push_back(b);
  j["sigma_monotone"] = mono;
  j["trend"] = to_string(r.trend);
  j["estimate"] = json_number(r.estimate);
  if (!r.failure.empty()) j["failure"] = r.failure;
  Json side;
  side["sup_tends_to_zero"] = r.sup_tends_to_zero;
  side["decay_exponent"] = json_number(r.decay_exponent);
  j["side_flags"] = side;
  Json flags;
  flags["hypotheses_ok"] = r.hypotheses_ok;
  flags["notes"] = r.hypothesis_notes;
  if (r.classification) {
    flags["case"] = r.classification->case_id;
    flags["lambda00"] = to_json(r.classification->lambda00);
  }
  j["flags"] = flags;
  if (r.sup_diff) j["sup_diff"] = json_number(*r.sup_diff);
  j["verdict"] = to_string(r.verdict);
  j["notes"] = r.notes;
  return j;
}

std::string audit_to_json(const AuditReport& r) { return dump(to_json(r)); }

Json to_json(const DecayReport& r) {
  Json j;
  j["pairs_checked"] = r.pairs_checked;
  j["violations"] = static_cast<long>(r.violations.size());
  Json v = Json::array();
  for (std::size_t k = 0; k < std::min<std::size_t>(r.violations.size(), 20); ++k) {
    const auto& p = r.violations[k];
    v.push_back({{"t1", p.t1}, {"tau", p.tau}, {"w", p.w_fails}, {"q", p.q_fails}});
  }
  j["first_violations"] = v;
  j["Gamma"] = json_number(r.gamma);
  j["step5_bound"] = json_number(r.step5_bound);
  j["pass"] = r.pass();
  return j;
}

Json to_json(const PositionReport& r) {
  Json j;
  j["bound_holds"] = r.bound_holds;
  j["drift_bound_holds"] = r.drift_bound_holds;
  j["helper1_max"] = json_number(r.helper1_max);
  j["helper2_max"] = json_number(r.helper2_max);
  j["helpers_hold"] = r.helpers_hold;
  j["pass"] = r.pass();
  return j;
}

Json to_json(const PhiReport& r) {
  Json j;
  double mn = 1e300, mx = 0.0;
  for (const cplx& p : r.phi) {
    mn = std::min(mn, std::abs(p));
    mx = std::max(mx, std::abs(p));
  }
  j["min_abs_phi"] = json_number(r.phi.empty() ? 0.0 : mn);
  j["max_abs_phi"] = json_number(mx);
  j["theta_phi"] = json_number(r.theta_phi);
  j["delta"] = json_number(r.delta);
  j["observed_delta"] = json_number(r.observed_delta);
  j["applicable"] = r.applicable;
  j["modulus_ok"] = r.modulus_ok;
  j["angle_ok"] = r.angle_ok;
  j["pass"] = r.pass();
  return j;
}

Json to_json(const ReconstructReport& r) {
  Json j;
  j["max_rel_dev"] = json_number(r.max_rel_dev);
  long flagged = 0;
  for (bool b : r.branch_flag) flagged += b ? 1 : 0;
  j["branch_flagged"] = flagged;
  j["C0"] = json_number(r.C0);
  j["eps1"] = json_number(r.eps1);
  j["theta_phi"] = json_number(r.theta_phi);
  j["envelope_applicable"] = r.envelope_applicable;
  j["lower_ok"] = r.lower_ok;
  j["upper_ok"] = r.upper_ok;
  j["arg_ok"] = r.arg_ok;
  j["nonzero"] = r.nonzero;
  return j;
}

Json to_json(const EscapeReport& r) {
  Json j;
  j["A"] = json_number(r.A);
  j["L"] = json_number(r.L);
  j["Gamma"] = json_number(r.Gamma);
  j["radius_lhs"] = json_number(r.lhs);
  j["half_radius"] = json_number(r.half_radius);
  j["radius_budget"] = r.radius_budget;
  j["rate_budget"] = r.rate_budget;
  j["budget_holds"] = r.budget_holds();
  Json st = Json::array();
  for (auto s : r.statuses) st.push_back(to_string(s));
  j["statuses"] = st;
  j["all_confined"] = r.all_confined;
  j["pass"] = r.pass();
  return j;
}

Json trace_summary(const CharTrace& tr) {
  Json j;
  j["status"] = to_string(tr.status);
  j["t0"] = tr.t0;
  j["xi"] = to_json(tr.xi);
  j["samples"] = static_cast<long>(tr.t.size());
  if (!tr.t.empty()) {
    j["t_last"] = tr.t.back();
    j["x_last"] = to_json(tr.x.back());
  }
  if (tr.exit_t) {
    j["exit_t"] = *tr.exit_t;
    j["exit_x"] = to_json(*tr.exit_x);
  }
  if (!tr.message.empty()) j["message"] = tr.message;
  return j;
}

}  // namespace sfpde
