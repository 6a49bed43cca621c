#pragma once

#include "sfpde/audit.hpp"
#include "sfpde/classify.hpp"
#include "sfpde/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sfpde {

struct GallerySolution {
  std::string name;
  std::string expr;  // in t and x
  Verdict expected;
};

enum class BaseKind { series, zero };

struct ExampleCase {
  std::string id;
  std::string description;
  bool synthetic = false;
  std::string rhs;
  bool euler_form = false;
  std::optional<Sector> sector;
  std::vector<GallerySolution> solutions;
  BaseKind base = BaseKind::series;
  int expected_case = 1;
  int expected_p = 0;
  cplx expected_lambda00{};
  std::optional<cplx> expected_c00;
  bool expect_hypotheses_ok = true;

  PdeSpec pde() const;
  /// Residual grid: t in [1e-3, 0.3] (30 geometric samples) x 64 points with |x| <= 0.1.
  Grid test_grid() const;
};

const std::vector<ExampleCase>& gallery_list();
/// Throws std::out_of_range for an unknown id.
const ExampleCase& gallery_get(const std::string& id);

/// The base solution u0: truncated series (orders 6, 6) or zero.
SolutionField gallery_base(const ExampleCase& ex);
std::vector<SolutionField> gallery_solutions(const ExampleCase& ex);

struct GalleryCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

struct GalleryReport {
  std::string id;
  std::vector<GalleryCheck> checks;
  std::vector<AuditReport> audits;
  bool pass() const;
};

struct GalleryRunOptions {
  bool residuals = true;
  bool classification = true;
  bool audits = true;
  bool hadamard = true;
  bool characteristics = true;
};

GalleryReport gallery_run(const std::string& id, const GalleryRunOptions& opt = {});

std::string gallery_catalogue_json();
std::string gallery_report_json(const std::vector<GalleryReport>& reports);
std::string gallery_report_table(const std::vector<GalleryReport>& reports);

}  // namespace sfpde
