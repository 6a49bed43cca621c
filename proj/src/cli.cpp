#include "sfpde/cli.hpp"

#include "sfpde/audit.hpp"
#include "sfpde/characteristics.hpp"
#include "sfpde/classify.hpp"
#include "sfpde/gallery.hpp"
#include "sfpde/json_io.hpp"
#include "sfpde/problem.hpp"
#include "sfpde/series.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace sfpde {

namespace {

struct Globals {
  std::optional<double> tol;
  std::optional<int> grid_density;
  bool seedless = false;
};

cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("complex value", "expected 're' or 're,im', got '" + s + "'");
  }
}

Problem load(const std::string& path, const Globals& g) {
  Problem pb = load_problem(path);
  if (g.tol) pb.classify_tol = *g.tol;
  if (g.grid_density) pb.audit.density = *g.grid_density;
  return pb;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::uniqueness_applies: return kExitOk;
    case Verdict::criterion_fails: return kExitCriterionFails;
    case Verdict::hypotheses_fail: return kExitHypothesesFail;
    case Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitFailure;
}

Grid series_grid(const PdeSpec& pde) {
  return Grid{geometric_times(1e-3, std::min(0.1, pde.T0), 8), disc_points(Disc(pde.R0 / 2), 2, 16)};
}

Json resonance_json(const ResonanceError& e) {
  Json j;
  j["error"] = "resonance";
  Json arr = Json::array();
  for (const auto& r : e.log()) arr.push_back({{"i", r.i}, {"j", r.j}, {"modulus", r.modulus}});
  j["resonances"] = arr;
  return j;
}

SolutionField base_for(const Problem& pb, const CaseClass& cc, std::vector<std::string>& notes) {
  if (pb.base_solution == "zero" || (pb.base_solution == "series" && cc.case_id == 3)) {
    SolutionField z = zero_solution();
    z.name = "u0";
    if (pb.base_solution == "series") notes.push_back("Case 3: zero solution used as u0");
    return z;
  }
  if (pb.base_solution == "series") {
    try {
      return solution_from_series("u0", build_solution(pb.pde, cc, 6, 6, pb.resonance_tol));
    } catch (const SeriesError& e) {
      notes.push_back(std::string("series u0 unavailable (") + e.what() + "); zero used");
      SolutionField z = zero_solution();
      z.name = "u0";
      return z;
    }
  }
  return solution_from_expr("u0", parse(pb.base_solution));
}

const NamedExpr& pick_solution(const Problem& pb, const std::string& name) {
  if (pb.solutions.empty()) throw SchemaError("the problem lists no solutions");
  if (name.empty()) return pb.solutions.front();
  for (const auto& s : pb.solutions)
    if (s.name == name) return s;
  throw SchemaError("no solution named '" + name + "'");
}

AuditReport audit_problem(const Problem& pb, const CaseClass& cc, const NamedExpr& sol) {
  std::vector<std::string> notes;
  const SolutionField u0 = base_for(pb, cc, notes);
  AuditReport rep = verdict(pb.pde, cc, solution_from_expr(sol.name, parse(sol.expr)), u0, pb.audit);
  rep.notes.insert(rep.notes.begin(), notes.begin(), notes.end());
  return rep;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification laboratory for singular first-order PDEs t u_t = F(t,x,u,u_x)", "sfpde"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  double tol_value = 0.0;
  int density_value = 0;
  auto* tol_opt = app.add_option("--tol", tol_value, "classification tolerance");
  auto* den_opt = app.add_option("--grid-density", density_value, "audit grid density n (circles at R(1-1/n))");
  app.add_flag("--seedless", g.seedless, "assert that no random numbers are used");

  std::string file, solution, csv_path, xi_text = "0.01", w0_text = "1", q0_text = "0", gallery_id;
  std::vector<int> order{6, 6};
  int x_order = 8, t_samples = 16;
  double t0 = -1.0, tmin = 1e-8, max_ds = 0.1;
  std::optional<double> B0, B1, B2;
  bool all = false, as_json = false, export_catalogue = false;

  auto* classify_cmd = app.add_subcommand("classify", "classify the equation into Case 1/2/3");
  classify_cmd->add_option("file", file, "problem-v1 JSON file")->required();
  classify_cmd->add_option("--x-order", x_order, "Taylor order in x")->check(CLI::Range(2, 64));
  classify_cmd->add_option("--t-samples", t_samples, "time samples on [0,T0]")->check(CLI::PositiveNumber);

  auto* solve_cmd = app.add_subcommand("solve", "build the truncated series solution u0");
  solve_cmd->add_option("file", file, "problem-v1 JSON file")->required();
  solve_cmd->add_option("--order", order, "truncation orders M N")->expected(2)->check(CLI::Range(0, 64));

  auto* trace_cmd = app.add_subcommand("trace", "integrate a characteristic toward t = 0");
  trace_cmd->add_option("file", file, "problem-v1 JSON file")->required();
  trace_cmd->add_option("--xi", xi_text, "initial point 're' or 're,im'");
  trace_cmd->add_option("--t0", t0, "initial time (default min(0.1, T0))");
  trace_cmd->add_option("--tmin", tmin, "final time");
  trace_cmd->add_option("--csv", csv_path, "write the CSV trace to this file");
  trace_cmd->add_option("--w0", w0_text, "initial w*");
  trace_cmd->add_option("--q0", q0_text, "initial q*");
  trace_cmd->add_option("--solution", solution, "use the field of w = solution - u0");
  trace_cmd->add_option("--max-ds", max_ds, "largest log-time step")->check(CLI::PositiveNumber);
  trace_cmd->add_option("--B0", B0, "position bound coefficient B0");
  trace_cmd->add_option("--B1", B1, "position bound coefficient B1");
  trace_cmd->add_option("--B2", B2, "position bound coefficient B2");

  auto* audit_cmd = app.add_subcommand("audit", "estimate the uniqueness criterion and give a verdict");
  audit_cmd->add_option("file", file, "problem-v1 JSON file")->required();
  audit_cmd->add_option("--solution", solution, "solution name (default: first)");

  auto* gallery_cmd = app.add_subcommand("gallery", "run the built-in catalogue");
  gallery_cmd->add_option("id", gallery_id, "entry id, e.g. G2");
  gallery_cmd->add_flag("--all", all, "run every entry");
  gallery_cmd->add_flag("--json", as_json, "JSON instead of a table");
  gallery_cmd->add_flag("--export", export_catalogue, "print the catalogue as JSON");

  auto* report_cmd = app.add_subcommand("report", "classification, series and audits in one report");
  report_cmd->add_option("file", file, "problem-v1 JSON file")->required();
  report_cmd->add_option("--order", order, "truncation orders M N")->expected(2)->check(CLI::Range(0, 64));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (*tol_opt) {
    if (!(tol_value > 0.0)) {
      err << "error: --tol must be positive\n";
      return kExitUsage;
    }
    g.tol = tol_value;
  }
  if (*den_opt) {
    if (density_value < 2) {
      err << "error: --grid-density must be at least 2\n";
      return kExitUsage;
    }
    g.grid_density = density_value;
  }

  try {
    if (*classify_cmd) {
      const Problem pb = load(file, g);
      const CaseClass cc = classify(pb.pde, x_order, t_samples, pb.classify_tol);
      Json j = to_json(cc);
      const double hi = std::min(pb.pde.T0, pb.pde.weight.T0());
      j["order_mu"] = to_json(check_A2(pb.pde, cc, Grid{geometric_times(hi * 1e-8, hi, 9),
                                                        disc_points(Disc(pb.pde.R0), 4, 16)}));
      out << dump(j);
      return kExitOk;
    }

    if (*solve_cmd) {
      const Problem pb = load(file, g);
      const CaseClass cc = classify(pb.pde, 8, 16, pb.classify_tol);
      try {
        const DoubleSeries s = build_solution(pb.pde, cc, order[0], order[1], pb.resonance_tol);
        Json j = to_json(s);
        j["residual"] = json_number(residual(pb.pde, s, series_grid(pb.pde)));
        Json near = Json::array();
        for (const auto& r : s.near_resonances) near.push_back({{"i", r.i}, {"j", r.j}, {"modulus", r.modulus}});
        j["near_resonances"] = near;
        out << dump(j);
        return kExitOk;
      } catch (const ResonanceError& e) {
        out << dump(resonance_json(e));
        err << "error: " << e.what() << "\n";
        return kExitResonance;
      }
    }

    if (*trace_cmd) {
      const Problem pb = load(file, g);
      FieldSpec f;
      std::optional<CaseClass> cc;
      if (!solution.empty()) {
        cc = classify(pb.pde, 8, 16, pb.classify_tol);
        std::vector<std::string> notes;
        const SolutionField u0 = base_for(pb, *cc, notes);
        const NamedExpr& s = pick_solution(pb, solution);
        f = hadamard_fields(pb.pde, *cc, u0, solution_from_expr(s.name, parse(s.expr)));
      } else if (pb.field) {
        f = make_field(*pb.field);
      } else {
        throw SchemaError("trace needs a 'field' in the problem or --solution");
      }
      Domain dom = Disc(pb.pde.R0);
      if (f.case_id == 3 && pb.pde.sector) dom = *pb.pde.sector;
      const double start = t0 > 0.0 ? t0 : std::min(0.1, pb.pde.T0);
      TraceOptions topt;
      topt.tol = pb.trace_tol;
      topt.max_ds = max_ds;
      const CharTrace tr0 = trace(f, start, parse_complex(xi_text), tmin, dom, topt);
      const CharTrace tr = transport(f, tr0, parse_complex(w0_text), parse_complex(q0_text), topt);

      Json rep;
      rep["schema"] = "trace-report-v1";
      rep["domain"] = describe(dom);
      rep["trace"] = trace_summary(tr0);
      double gam = 0.0;
      for (std::size_t k = 0; k < tr.t.size(); ++k) gam = std::max(gam, std::abs(f.gamma_at(tr.t[k], tr.x[k])));
      if (tr.transported()) rep["decay"] = to_json(verify_decay(tr, f.a_decay, gam));
      if (B0 || B1 || B2) {
        const PhiWeight phi(pb.pde.weight);
        rep["position"] = to_json(verify_position(f, tr, B0.value_or(0.0), B1.value_or(0.0),
                                                  B2.value_or(0.0), phi, gam));
      }
      if (f.case_id == 3) {
        rep["phi"] = to_json(phi_factor(f, tr0));
        rep["reconstruct"] = to_json(sector_reconstruct(f, tr0, f.p));
      }
      const std::string csv = trace_csv(tr);
      if (!csv_path.empty()) {
        std::ofstream os(csv_path);
        if (!os) throw std::runtime_error("cannot write '" + csv_path + "'");
        os << csv;
        out << dump(rep);
      } else {
        out << csv;
        err << dump(rep);
      }
      return kExitOk;
    }

    if (*audit_cmd) {
      const Problem pb = load(file, g);
      const CaseClass cc = classify(pb.pde, 8, 16, pb.classify_tol);
      const AuditReport rep = audit_problem(pb, cc, pick_solution(pb, solution));
      out << dump(to_json(rep));
      return verdict_exit(rep.verdict);
    }

    if (*gallery_cmd) {
      if (export_catalogue) {
        out << gallery_catalogue_json();
        return kExitOk;
      }
      std::vector<std::string> ids;
      if (all) {
        for (const auto& e : gallery_list()) ids.push_back(e.id);
      } else if (!gallery_id.empty()) {
        try {
          gallery_get(gallery_id);
        } catch (const std::out_of_range& e) {
          err << "error: " << e.what() << "\n";
          return kExitUsage;
        }
        ids.push_back(gallery_id);
      } else {
        err << "error: gallery needs an id, --all or --export\n";
        return kExitUsage;
      }
      std::vector<GalleryReport> reports;
      for (const auto& id : ids) reports.push_back(gallery_run(id));
      out << (as_json ? gallery_report_json(reports) : gallery_report_table(reports));
      const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass(); });
      return ok ? kExitOk : kExitFailure;
    }

    if (*report_cmd) {
      const Problem pb = load(file, g);
      const CaseClass cc = classify(pb.pde, 8, 16, pb.classify_tol);
      Json j;
      j["schema"] = "report-v1";
      j["classification"] = to_json(cc);
      if (cc.case_id == 3) {
        j["series"] = nullptr;
      } else {
        try {
          const DoubleSeries s = build_solution(pb.pde, cc, order[0], order[1], pb.resonance_tol);
          Json sj = to_json(s);
          sj["residual"] = json_number(residual(pb.pde, s, series_grid(pb.pde)));
          j["series"] = sj;
        } catch (const ResonanceError& e) {
          j["series"] = resonance_json(e);
        } catch (const SeriesError& e) {
          j["series"] = {{"error", e.what()}};
        }
      }
      Json audits = Json::array();
      for (const auto& s : pb.solutions) audits.push_back(to_json(audit_problem(pb, cc, s)));
      j["audits"] = audits;
      out << dump(j);
      return kExitOk;
    }
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IndeterminateError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIndeterminate;
  } catch (const ResonanceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResonance;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sfpde
