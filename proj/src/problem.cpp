#include "sfpde/problem.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace sfpde {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw SchemaError(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw SchemaError("unknown key '" + it.key() + "' in " + where);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + " must be a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& where) {
  const double v = number(j, where);
  if (!(v > 0.0)) throw SchemaError(where + " must be positive");
  return v;
}

std::string string_of(const json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + " must be a string");
  return j.get<std::string>();
}

std::vector<double> ladder(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + " must be a non-empty array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(positive(v, where));
  for (std::size_t k = 1; k < out.size(); ++k)
    if (!(out[k] < out[k - 1])) throw SchemaError(where + " must be strictly descending");
  return out;
}

Expr checked_expr(const std::string& text, const std::string& where, bool t_x_only) {
  Expr e;
  try {
    e = parse(text);
  } catch (const ParseError& err) {
    throw SchemaError(where + ": " + err.what());
  }
  if (t_x_only && (depends_on(e, Var::u) || depends_on(e, Var::v)))
    throw SchemaError(where + " may use t and x only");
  return e;
}

}  // namespace

FieldSpec make_field(const FieldDef& def) {
  if (def.case_id < 1 || def.case_id > 3) throw DomainError("field case must be 1, 2 or 3");
  if (def.case_id == 3 && def.p < 1) throw DomainError("Case 3 field needs p >= 1");
  if (!(def.a_decay > 0.0)) throw DomainError("a_decay must be positive");
  const Expr b = parse(def.b), c = parse(def.c), lam = parse(def.lambda), a = parse(def.a);
  const Expr X = Expr::variable(Var::x);
  Expr ell, gamma = diff(lam, Var::x) + diff(a, Var::x);
  switch (def.case_id) {
    case 1: ell = diff(b, Var::x); break;
    case 2: ell = diff(b, Var::x) + X * diff(c, Var::x); break;
    default:
      ell = X * diff(b + pow(X, def.p) * c, Var::x);
      gamma = X * gamma;
      break;
  }
  auto ev = [](const Expr& e) { return [e](double t, cplx x) { return eval(e, t, x, 0.0, 0.0); }; };
  FieldSpec f;
  f.case_id = def.case_id;
  f.p = def.case_id == 3 ? def.p : 0;
  f.b = ev(b);
  f.c = ev(c);
  f.lambda = ev(lam);
  f.a = ev(a);
  f.ell = ev(ell);
  f.gamma = ev(gamma);
  f.a_decay = def.a_decay;
  return f;
}

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "problem", {"schema", "rhs", "euler_form", "weight", "domain", "sector", "solutions",
                           "base_solution", "ladders", "tolerances", "field"});
  if (j.contains("schema") && j["schema"] != "problem-v1")
    throw SchemaError("schema must be \"problem-v1\"");
  if (!j.contains("rhs")) throw SchemaError("missing required key 'rhs'");

  Problem pb;
  PdeSpec& pde = pb.pde;
  pde.rhs = checked_expr(string_of(j["rhs"], "rhs"), "rhs", false);
  if (j.contains("euler_form")) {
    if (!j["euler_form"].is_boolean()) throw SchemaError("euler_form must be a boolean");
    pde.euler_form = j["euler_form"].get<bool>();
  }

  pde.T0 = 0.5;
  pde.R0 = 0.1;
  pde.rho0 = 1.0;
  if (j.contains("domain")) {
    const auto& d = j["domain"];
    only_keys(d, "domain", {"T0", "R0", "rho0"});
    if (d.contains("T0")) pde.T0 = positive(d["T0"], "domain.T0");
    if (d.contains("R0")) pde.R0 = positive(d["R0"], "domain.R0");
    if (d.contains("rho0")) pde.rho0 = positive(d["rho0"], "domain.rho0");
  }

  pde.weight = WeightFn::power(1.0, std::max(1.0, pde.T0));
  if (j.contains("weight")) {
    const auto& w = j["weight"];
    only_keys(w, "weight", {"kind", "alpha", "beta"});
    const std::string kind = w.contains("kind") ? string_of(w["kind"], "weight.kind") : "power";
    try {
      if (kind == "power") {
        if (w.contains("beta")) throw SchemaError("power weight takes 'alpha'");
        const double alpha = w.contains("alpha") ? number(w["alpha"], "weight.alpha") : 1.0;
        pde.weight = WeightFn::power(alpha, std::max(1.0, pde.T0));
      } else if (kind == "log-power") {
        if (w.contains("alpha")) throw SchemaError("log-power weight takes 'beta'");
        if (!w.contains("beta")) throw SchemaError("log-power weight needs 'beta'");
        pde.weight = WeightFn::log_power(number(w["beta"], "weight.beta"), pde.T0);
      } else {
        throw SchemaError("weight.kind must be \"power\" or \"log-power\"");
      }
    } catch (const DomainError& e) {
      throw SchemaError(std::string("weight: ") + e.what());
    }
  }

  if (j.contains("sector")) {
    const auto& s = j["sector"];
    only_keys(s, "sector", {"theta", "R"});
    if (!s.contains("theta") || !s.contains("R")) throw SchemaError("sector needs theta and R");
    try {
      pde.sector = Sector(number(s["theta"], "sector.theta"), number(s["R"], "sector.R"));
    } catch (const DomainError& e) {
      throw SchemaError(std::string("sector: ") + e.what());
    }
  }
  try {
    pde.validate();
  } catch (const DomainError& e) {
    throw SchemaError(e.what());
  }

  if (j.contains("solutions")) {
    const auto& arr = j["solutions"];
    if (!arr.is_array()) throw SchemaError("solutions must be an array");
    std::set<std::string> names;
    for (const auto& s : arr) {
      only_keys(s, "solutions[]", {"name", "expr"});
      if (!s.contains("name") || !s.contains("expr")) throw SchemaError("a solution needs name and expr");
      NamedExpr ne{string_of(s["name"], "solutions[].name"), string_of(s["expr"], "solutions[].expr")};
      checked_expr(ne.expr, "solution '" + ne.name + "'", true);
      if (!names.insert(ne.name).second) throw SchemaError("duplicate solution name '" + ne.name + "'");
      pb.solutions.push_back(ne);
    }
  }

  if (j.contains("base_solution")) {
    pb.base_solution = string_of(j["base_solution"], "base_solution");
    if (pb.base_solution != "series" && pb.base_solution != "zero")
      checked_expr(pb.base_solution, "base_solution", true);
  }

  if (j.contains("ladders")) {
    const auto& l = j["ladders"];
    only_keys(l, "ladders", {"R", "sigma", "eta", "density"});
    if (l.contains("R")) pb.audit.R_ladder = ladder(l["R"], "ladders.R");
    else pb.audit.R_ladder = halving_ladder(pde.R0);
    if (l.contains("sigma")) pb.audit.sigma_ladder = ladder(l["sigma"], "ladders.sigma");
    if (l.contains("eta")) pb.audit.eta_ladder = ladder(l["eta"], "ladders.eta");
    if (l.contains("density")) {
      if (!l["density"].is_number_integer() || l["density"].get<int>() < 2)
        throw SchemaError("ladders.density must be an integer >= 2");
      pb.audit.density = l["density"].get<int>();
    }
  } else {
    pb.audit.R_ladder = halving_ladder(pde.R0);
  }

  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    only_keys(t, "tolerances", {"classify", "resonance", "trace", "audit", "zero"});
    if (t.contains("classify")) pb.classify_tol = positive(t["classify"], "tolerances.classify");
    if (t.contains("resonance")) pb.resonance_tol = positive(t["resonance"], "tolerances.resonance");
    if (t.contains("trace")) pb.trace_tol = positive(t["trace"], "tolerances.trace");
    if (t.contains("audit")) pb.audit.tol = positive(t["audit"], "tolerances.audit");
    if (t.contains("zero")) pb.audit.zero_tol = positive(t["zero"], "tolerances.zero");
  }

  if (j.contains("field")) {
    const auto& f = j["field"];
    only_keys(f, "field", {"case", "p", "b", "c", "lambda", "a", "a_decay"});
    FieldDef def;
    if (f.contains("case")) {
      if (!f["case"].is_number_integer()) throw SchemaError("field.case must be an integer");
      def.case_id = f["case"].get<int>();
    }
    if (f.contains("p")) {
      if (!f["p"].is_number_integer()) throw SchemaError("field.p must be an integer");
      def.p = f["p"].get<int>();
    }
    auto ex = [&](const char* key, std::string& dst) {
      if (f.contains(key)) {
        dst = string_of(f[key], std::string("field.") + key);
        checked_expr(dst, std::string("field.") + key, true);
      }
    };
    ex("b", def.b);
    ex("c", def.c);
    ex("lambda", def.lambda);
    ex("a", def.a);
    if (f.contains("a_decay")) def.a_decay = positive(f["a_decay"], "field.a_decay");
    try {
      make_field(def);
    } catch (const DomainError& e) {
      throw SchemaError(std::string("field: ") + e.what());
    }
    pb.field = def;
  }
  return pb;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open problem file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

}  // namespace sfpde
