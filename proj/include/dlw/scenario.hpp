#pragma once

// Scenario configuration (JSON), evaluation on a grid, and export.
// The document layout is described in docs/scenario.md.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlw/residual.hpp"
#include "dlw/seed.hpp"
#include "dlw/transform.hpp"

namespace dlw {

/// Invalid configuration or expression; the CLI maps it to exit code 2.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolutionPath { Transform, Exact, ExactConst };

struct ExactConstParams {
  double a = 1.0;
  double c = 1.0;
  double d = 0.0;
};

struct ExportSpec {
  enum class Format { Csv, Report };
  Format format = Format::Csv;
  std::string path;
};

struct Scenario {
  std::string name;
  Branch branch = Branch::Plus;
  std::string seedKind = "kernels";  // constant | kernels | poly | mixed
  SeedSpec seed;
  SolutionPath solutionPath = SolutionPath::Transform;
  ExactConstParams exactConst;
  GridSpec grid;
  StencilConfig stencil;
  double maxResidual = 1e-5;
  std::vector<ExportSpec> outputs;
  double perturbH = 0.0;  // debug: h += perturbH * x^2
  unsigned threads = 1;
};

/// Parses and validates a scenario document. Errors name the offending key.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/// One scenario document per sweep entry: the base document with the entry
/// applied as a JSON merge patch. Throws ScenarioError if "sweep" is absent.
std::vector<Scenario> load_sweep(const std::string& path);

/// The seed phi whose transform (or closed form) the scenario evaluates.
SeedField scenario_seed(const Scenario& sc);
FieldSampler make_sampler(const Scenario& sc);

struct RunOutcome {
  std::vector<PointResidual> points;
  std::vector<double> phi;  // seed value at each grid point
  ResidualReport report;
  bool passed = false;
};

RunOutcome run_scenario(const Scenario& sc);

/// CSV with header x,y,t,phi,u,h,res1,res2, one row per grid point in
/// x-fastest order, 17 significant digits, "nan" for pole-skipped rows.
std::string render_csv(const RunOutcome& out);
std::string render_report_json(const Scenario& sc, const RunOutcome& out);

/// Writes the requested export; throws std::runtime_error naming the path on
/// I/O failure.
void export_grid(const Scenario& sc, const RunOutcome& out, const ExportSpec& spec);

/// Formats a double with 17 significant digits; negative zero prints as 0.
std::string format_number(double v);

}  // namespace dlw
