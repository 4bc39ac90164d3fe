#include "dlw/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dlw {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& msg) {
  throw ScenarioError(key + ": " + msg);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  const json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    bad(where + "." + key, "missing");
  }
  if (!v->is_number()) bad(where + "." + key, "expected a number");
  return v->get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& where,
                       std::optional<std::string> fallback = {}) {
  const json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    bad(where + "." + key, "missing");
  }
  if (!v->is_string()) bad(where + "." + key, "expected a string");
  return v->get<std::string>();
}

CoeffExpr get_expr(const json& obj, const char* key, const std::string& where) {
  const std::string text = get_string(obj, key, where);
  try {
    return parse_coeff_expr(text);
  } catch (const ExprParseError& e) {
    bad(where + "." + key, "\"" + text + "\": " + e.what());
  }
}

Branch parse_branch(const std::string& s, const std::string& where) {
  if (s == "plus") return Branch::Plus;
  if (s == "minus") return Branch::Minus;
  bad(where, "expected \"plus\" or \"minus\", got \"" + s + "\"");
}

Axis parse_axis(const json& grid, const char* key) {
  const std::string where = std::string("grid.") + key;
  const json* v = find(grid, key);
  if (!v) bad(where, "missing");
  if (!v->is_array() || v->size() != 3 || !(*v)[0].is_number() || !(*v)[1].is_number() ||
      !(*v)[2].is_number_integer()) {
    bad(where, "expected [lo, hi, count]");
  }
  Axis a{(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<int>()};
  if (a.count < 1) bad(where, "count must be at least 1");
  if (!(a.lo <= a.hi)) bad(where, "lo must not exceed hi");
  return a;
}

void parse_seed(const json& doc, Scenario& sc) {
  sc.seed.branch = sc.branch;
  const json* seed = find(doc, "seed");
  if (!seed) {
    if (sc.solutionPath == SolutionPath::ExactConst) return;
    bad("seed", "missing");
  }
  if (!seed->is_object()) bad("seed", "expected an object");
  sc.seedKind = get_string(*seed, "kind", "seed");
  const std::string& kind = sc.seedKind;
  if (kind != "constant" && kind != "kernels" && kind != "poly" && kind != "mixed") {
    bad("seed.kind", "expected constant, kernels, poly or mixed");
  }
  sc.seed.constantTerm = get_number(*seed, "constant", "seed", kind == "kernels" ? 1.0 : 0.0);

  if (const json* ks = find(*seed, "kernels")) {
    if (!ks->is_array()) bad("seed.kernels", "expected an array");
    for (std::size_t n = 0; n < ks->size(); ++n) {
      const std::string where = "seed.kernels[" + std::to_string(n) + "]";
      const json& k = (*ks)[n];
      if (!k.is_object()) bad(where, "expected an object");
      sc.seed.kernels.push_back(
          Kernel{get_number(k, "amplitude", where, 1.0), get_expr(k, "a", where), get_expr(k, "b", where)});
    }
  }
  if (const json* poly = find(*seed, "poly")) {
    if (!poly->is_object()) bad("seed.poly", "expected an object");
    auto coeff = [&](const char* key) {
      return find(*poly, key) ? get_expr(*poly, key, "seed.poly") : CoeffExpr::literal(0.0);
    };
    sc.seed.polyPart = HeatPolynomial{coeff("c2"), coeff("c1"), coeff("c0")};
  }

  const bool has_kernels = !sc.seed.kernels.empty();
  const bool has_poly = sc.seed.polyPart.has_value();
  if (kind == "constant" && (has_kernels || has_poly)) bad("seed", "kind constant takes no kernels or poly");
  if (kind == "kernels" && (!has_kernels || has_poly)) bad("seed", "kind kernels needs kernels and no poly");
  if (kind == "poly" && (!has_poly || has_kernels)) bad("seed", "kind poly needs poly and no kernels");
  if (kind == "constant" && sc.seed.constantTerm == 0.0) bad("seed.constant", "the zero seed is not allowed");
}

Scenario parse_document(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario: expected a JSON object");
  Scenario sc;
  sc.name = get_string(doc, "name", "scenario", std::string("scenario"));
  sc.branch = parse_branch(get_string(doc, "branch", "scenario", std::string("plus")), "branch");

  const std::string path = get_string(doc, "solutionPath", "scenario", std::string("transform"));
  if (path == "transform") {
    sc.solutionPath = SolutionPath::Transform;
  } else if (path == "exact") {
    sc.solutionPath = SolutionPath::Exact;
  } else if (path == "exact-const") {
    sc.solutionPath = SolutionPath::ExactConst;
    const json* ec = find(doc, "exactConst");
    if (!ec || !ec->is_object()) bad("exactConst", "required for solutionPath exact-const");
    sc.exactConst = ExactConstParams{get_number(*ec, "a", "exactConst"), get_number(*ec, "c", "exactConst"),
                                     get_number(*ec, "d", "exactConst", 0.0)};
  } else {
    bad("solutionPath", "expected transform, exact or exact-const");
  }

  parse_seed(doc, sc);
  if (sc.solutionPath == SolutionPath::Exact) {
    const SeedSpec& s = sc.seed;
    if (s.constantTerm != 1.0 || s.kernels.size() != 1 || s.kernels[0].amplitude != 1.0 || s.polyPart) {
      bad("solutionPath", "exact needs a seed of the form 1 + exp(a(y) x - sigma a(y)^2 t + b(y))");
    }
  }

  const json* grid = find(doc, "grid");
  if (!grid || !grid->is_object()) bad("grid", "missing");
  sc.grid = GridSpec{parse_axis(*grid, "x"), parse_axis(*grid, "y"), parse_axis(*grid, "t")};

  if (const json* st = find(doc, "stencil")) sc.stencil.step = get_number(*st, "step", "stencil", 5e-3);
  if (!(sc.stencil.step > 0.0)) bad("stencil.step", "must be positive");
  if (const json* th = find(doc, "thresholds")) sc.maxResidual = get_number(*th, "maxResidual", "thresholds", 1e-5);
  if (!(sc.maxResidual > 0.0)) bad("thresholds.maxResidual", "must be positive");

  if (const json* outs = find(doc, "outputs")) {
    if (!outs->is_array()) bad("outputs", "expected an array");
    for (std::size_t n = 0; n < outs->size(); ++n) {
      const std::string where = "outputs[" + std::to_string(n) + "]";
      const json& o = (*outs)[n];
      if (!o.is_object()) bad(where, "expected an object");
      const std::string fmt = get_string(o, "format", where);
      ExportSpec spec;
      if (fmt == "csv") {
        spec.format = ExportSpec::Format::Csv;
      } else if (fmt == "report") {
        spec.format = ExportSpec::Format::Report;
      } else {
        bad(where + ".format", "expected csv or report");
      }
      spec.path = get_string(o, "path", where);
      sc.outputs.push_back(spec);
    }
  }

  if (const json* dbg = find(doc, "debug")) sc.perturbH = get_number(*dbg, "perturbH", "debug", 0.0);
  if (const json* th = find(doc, "threads")) {
    if (!th->is_number_integer() || th->get<int>() < 1) bad("threads", "expected a positive integer");
    sc.threads = th->get<unsigned>();
  }
  return sc;
}

json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  return parse_document(doc);
}

Scenario load_scenario(const std::string& path) { return parse_document(read_document(path)); }

std::vector<Scenario> load_sweep(const std::string& path) {
  json doc = read_document(path);
  if (!doc.is_object()) throw ScenarioError(path + ": expected a JSON object");
  const json* sweep = find(doc, "sweep");
  if (!sweep || !sweep->is_array() || sweep->empty()) bad("sweep", "expected a nonempty array of patches");
  const json patches = *sweep;
  doc.erase("sweep");
  std::vector<Scenario> out;
  for (std::size_t n = 0; n < patches.size(); ++n) {
    if (!patches[n].is_object()) bad("sweep[" + std::to_string(n) + "]", "expected an object");
    json entry = doc;
    entry.merge_patch(patches[n]);
    try {
      out.push_back(parse_document(entry));
    } catch (const ScenarioError& e) {
      throw ScenarioError("sweep[" + std::to_string(n) + "] " + e.what());
    }
  }
  return out;
}

SeedField scenario_seed(const Scenario& sc) {
  if (sc.solutionPath == SolutionPath::ExactConst) {
    const auto& p = sc.exactConst;
    CoeffExpr b = CoeffExpr::binary(BinaryOp::Add,
                                    CoeffExpr::binary(BinaryOp::Mul, CoeffExpr::literal(p.c), CoeffExpr::variable()),
                                    CoeffExpr::literal(p.d));
    return make_seed(single_kernel_seed(sc.branch, CoeffExpr::literal(p.a), std::move(b)));
  }
  try {
    return make_seed(sc.seed);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("seed: ") + e.what());
  }
}

FieldSampler make_sampler(const Scenario& sc) {
  FieldSampler base;
  switch (sc.solutionPath) {
    case SolutionPath::Transform: {
      TransformOptions opts;
      opts.guardRadius = stencil_radius(sc.stencil);
      base = [field = scenario_seed(sc), opts](const Point& p) { return transform_point(field, p, opts); };
      break;
    }
    case SolutionPath::Exact: {
      ExactParams params{sc.seed.kernels[0].a, sc.seed.kernels[0].b, sc.branch};
      base = [params](const Point& p) { return exact_uh(params, p); };
      break;
    }
    case SolutionPath::ExactConst: {
      const ExactConstParams c = sc.exactConst;
      const Branch b = sc.branch;
      base = [c, b](const Point& p) { return exact_uh_const(c.a, c.c, c.d, b, p); };
      break;
    }
  }
  if (sc.perturbH == 0.0) return base;
  return [base, eps = sc.perturbH](const Point& p) {
    FieldPair f = base(p);
    f.h += eps * p.x * p.x;
    return f;
  };
}

RunOutcome run_scenario(const Scenario& sc) {
  validate(sc.grid);
  RunOutcome out;
  const SeedField seed = scenario_seed(sc);
  const FieldSampler sampler = make_sampler(sc);
  try {
    out.points = grid_evaluate(sampler, sc.grid, sc.stencil, sc.threads);
  } catch (const ExprEvalError& e) {
    throw ScenarioError(std::string("seed evaluation: ") + e.what());
  }
  out.phi.reserve(out.points.size());
  for (const auto& pr : out.points) out.phi.push_back(seed.evaluate(pr.point).phi);
  out.report = summarize(out.points, sc.grid, sc.stencil);
  out.passed = out.report.evaluated > 0 && out.report.max_abs() <= sc.maxResidual;
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_csv(const RunOutcome& out) {
  std::string s = "x,y,t,phi,u,h,res1,res2\n";
  for (std::size_t n = 0; n < out.points.size(); ++n) {
    const PointResidual& pr = out.points[n];
    s += format_number(pr.point.x) + ',' + format_number(pr.point.y) + ',' + format_number(pr.point.t) + ',' +
         format_number(out.phi[n]) + ',';
    if (pr.skipped) {
      s += "nan,nan,nan,nan\n";
    } else {
      s += format_number(pr.fields.u) + ',' + format_number(pr.fields.h) + ',' + format_number(pr.residual.r1) +
           ',' + format_number(pr.residual.r2) + '\n';
    }
  }
  return s;
}

std::string render_report_json(const Scenario& sc, const RunOutcome& out) {
  using nlohmann::ordered_json;
  const ResidualReport& r = out.report;
  ordered_json j;
  j["name"] = sc.name;
  j["branch"] = to_string(sc.branch);
  j["passed"] = out.passed;
  j["threshold"] = sc.maxResidual;
  ordered_json eqs = ordered_json::array();
  for (int e = 0; e < 2; ++e) {
    const auto& st = r.equations[e];
    eqs.push_back({{"equation", e + 1},
                   {"maxAbs", st.maxAbs},
                   {"meanAbs", st.meanAbs},
                   {"worst", {st.worst.x, st.worst.y, st.worst.t}}});
  }
  j["equations"] = eqs;
  j["evaluated"] = r.evaluated;
  j["skipped"] = r.skipped;
  j["total"] = r.grid.size();
  j["grid"] = {{"x", {r.grid.x.lo, r.grid.x.hi, r.grid.x.count}},
               {"y", {r.grid.y.lo, r.grid.y.hi, r.grid.y.count}},
               {"t", {r.grid.t.lo, r.grid.t.hi, r.grid.t.count}}};
  j["stencil"] = {{"step", r.stencil.step}};
  return j.dump(2) + "\n";
}

void export_grid(const Scenario& sc, const RunOutcome& out, const ExportSpec& spec) {
  std::ofstream f(spec.path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(spec.path + ": cannot open for writing");
  f << (spec.format == ExportSpec::Format::Csv ? render_csv(out) : render_report_json(sc, out));
  f.flush();
  if (!f) throw std::runtime_error(spec.path + ": write failed");
}

}  // namespace dlw
