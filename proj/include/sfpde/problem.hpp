#pragma once

#include "sfpde/audit.hpp"
#include "sfpde/characteristics.hpp"
#include "sfpde/expr.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfpde {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient field given directly as expressions in t and x.
struct FieldDef {
  int case_id = 1;
  int p = 0;
  std::string b = "0";
  std::string c = "0";
  std::string lambda = "0";
  std::string a = "0";
  double a_decay = 0.1;
};

/// Builds a FieldSpec whose ell and gamma are exact symbolic derivatives.
FieldSpec make_field(const FieldDef& def);

struct NamedExpr {
  std::string name;
  std::string expr;
};

/// A "problem-v1" document.
struct Problem {
  PdeSpec pde;
  std::vector<NamedExpr> solutions;
  /// "series", "zero", or an expression in t and x.
  std::string base_solution = "series";
  AuditOptions audit;
  double classify_tol = 1e-9;
  double resonance_tol = 1e-8;
  double trace_tol = 1e-10;
  std::optional<FieldDef> field;
};

/// Validates against the schema; unknown keys are rejected at every level.
Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& path);

}  // namespace sfpde
