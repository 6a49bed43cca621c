#include "sfpde/audit.hpp"
#include "sfpde/characteristics.hpp"
#include "sfpde/classify.hpp"
#include "sfpde/cli.hpp"
#include "sfpde/gallery.hpp"
#include "sfpde/json_io.hpp"
#include "sfpde/problem.hpp"
#include "sfpde/series.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sfpde;

namespace {

PdeSpec make_spec(const std::string& rhs, bool euler_form, double T0, double R0) {
  PdeSpec p = make_pde(rhs, euler_form);
  p.T0 = T0;
  p.R0 = R0;
  p.validate();
  return p;
}

// Python sees JSON text; the package wrapper decodes it.
std::string classify_json(const std::string& rhs, bool euler_form, double T0, double R0, double tol) {
  return dump(to_json(classify(make_spec(rhs, euler_form, T0, R0), 8, 16, tol)));
}

std::string series_json(const std::string& rhs, int M, int N, double T0, double R0) {
  const PdeSpec p = make_spec(rhs, false, T0, R0);
  const DoubleSeries s = build_solution(p, classify(p), M, N);
  Json j = to_json(s);
  j["residual"] = json_number(
      residual(p, s, Grid{geometric_times(1e-3, std::min(0.1, T0), 8), disc_points(Disc(R0 / 2), 2, 16)}));
  return dump(j);
}

std::string audit_json(const std::string& u, std::optional<std::pair<double, double>> sector) {
  const SolutionField f = solution_from_expr("u", parse(u));
  return audit_to_json(sector ? audit_sector(f, Sector(sector->first, sector->second)) : audit_disc(f));
}

std::string gallery_json(const std::string& id) { return gallery_report_json({gallery_run(id)}); }

std::vector<std::string> gallery_ids() {
  std::vector<std::string> ids;
  for (const auto& e : gallery_list()) ids.push_back(e.id);
  return ids;
}

py::dict trace_field(int case_id, int p, const std::string& b, const std::string& c, const std::string& lambda,
                     cplx xi, double t0, double t_min, double radius, std::optional<double> theta, cplx w0,
                     cplx q0) {
  FieldDef def;
  def.case_id = case_id;
  def.p = p;
  def.b = b;
  def.c = c;
  def.lambda = lambda;
  const FieldSpec f = make_field(def);
  Domain dom = Disc(radius);
  if (theta) dom = Sector(*theta, radius);
  const CharTrace tr = transport(f, trace(f, t0, xi, t_min, dom), w0, q0);
  py::dict out;
  out["t"] = tr.t;
  out["x"] = tr.x;
  out["w"] = tr.w;
  out["q"] = tr.q;
  out["status"] = to_string(tr.status);
  if (tr.exit_t) out["exit_t"] = *tr.exit_t;
  return out;
}

py::tuple cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Singular first-order PDE laboratory (native core)";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IndeterminateError>(m, "IndeterminateError", PyExc_RuntimeError);
  // Translators run newest first, so the derived type goes after its base.
  auto series_error = py::register_exception<SeriesError>(m, "SeriesError", PyExc_RuntimeError);
  py::register_exception<ResonanceError>(m, "ResonanceError", series_error.ptr());
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);

  m.def("normalize", [](const std::string& text) { return print(parse(text)); }, py::arg("text"),
        "Fully parenthesized form of an expression.");
  m.def("eval_expr",
        [](const std::string& text, double t, cplx x, cplx u, cplx v) { return eval(parse(text), t, x, u, v); },
        py::arg("text"), py::arg("t") = 0.0, py::arg("x") = cplx{}, py::arg("u") = cplx{}, py::arg("v") = cplx{});
  m.def("diff", [](const std::string& text, char var) {
    const Var which = var == 't' ? Var::t : var == 'x' ? Var::x : var == 'u' ? Var::u : Var::v;
    if (std::string("txuv").find(var) == std::string::npos) throw DomainError("variable must be t, x, u or v");
    return print(diff(parse(text), which));
  });
  m.def("classify_json", &classify_json, py::arg("rhs"), py::arg("euler_form") = false, py::arg("T0") = 0.5,
        py::arg("R0") = 0.1, py::arg("tol") = 1e-9);
  m.def("series_json", &series_json, py::arg("rhs"), py::arg("M") = 6, py::arg("N") = 6, py::arg("T0") = 0.5,
        py::arg("R0") = 0.1);
  m.def("audit_json", &audit_json, py::arg("u"), py::arg("sector") = std::nullopt);
  m.def("gallery_ids", &gallery_ids);
  m.def("gallery_json", &gallery_json, py::arg("id"));
  m.def("trace_field", &trace_field, py::arg("case_id"), py::arg("p") = 0, py::arg("b") = "0", py::arg("c") = "0",
        py::arg("lambda_") = "0", py::arg("xi") = cplx(0.01), py::arg("t0") = 0.1, py::arg("t_min") = 1e-8,
        py::arg("radius") = 0.1, py::arg("theta") = std::nullopt, py::arg("w0") = cplx(1.0),
        py::arg("q0") = cplx(0.0));
  m.def("run_cli", &cli, py::arg("args"), "Runs the command line; returns (exit code, stdout, stderr).");
}
