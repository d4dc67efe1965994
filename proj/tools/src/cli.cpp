#include "fracphi/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "fracphi/enumerate.hpp"
#include "fracphi/error.hpp"
#include "fracphi/forest.hpp"
#include "fracphi/integrator.hpp"
#include "fracphi/io.hpp"
#include "fracphi/perturbation.hpp"
#include "fracphi/power_counting.hpp"
#include "fracphi/routing.hpp"
#include "fracphi/spectral.hpp"

namespace fracphi::cli {

namespace {

using io::json;

unsigned default_workers() {
  if (const char* env = std::getenv("FRACPHI_WORKERS")) {
    try {
      const long w = std::stol(env);
      if (w >= 1) return static_cast<unsigned>(w);
    } catch (const std::exception&) {
    }
    throw InvalidArgument("FRACPHI_WORKERS must be a positive integer");
  }
  return 1;
}

std::string error_line(const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  return j.dump();
}

class Output {
 public:
  Output(std::ostream& out, std::ostream& err, std::string command)
      : out_(out), err_(err), command_(std::move(command)) {}

  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::string path;

  std::ostream& err() { return err_; }

  void warn(const std::string& msg) { err_ << "warning: " << msg << '\n'; }

  io::Metadata metadata() const {
    io::Metadata m{{"tool", "fracphi"}, {"version", io::library_version()}, {"command", command_}};
    if (seed) m.emplace_back("seed", std::to_string(*seed));
    m.emplace_back("config", config.dump());
    return m;
  }

  void csv(io::CsvTable table) {
    auto meta = metadata();
    meta.insert(meta.end(), table.metadata.begin(), table.metadata.end());
    table.metadata = std::move(meta);
    with_stream([&](std::ostream& os) { io::write_csv(os, table); });
  }

  void json_doc(const json& doc) {
    json meta;
    for (const auto& [k, v] : metadata()) meta[k] = k == "config" ? json::parse(v) : json(v);
    err_ << "# " << meta.dump() << '\n';
    with_stream([&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    if (!path.empty()) {
      std::ofstream side(path + ".meta.json");
      side << meta.dump(2) << '\n';
    }
  }

 private:
  void with_stream(const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
      fn(out_);
      return;
    }
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write '" + path + "'");
    fn(f);
  }

  std::ostream& out_;
  std::ostream& err_;
  std::string command_;
};

Alpha parse_alpha(const std::string& text, Output& o) {
  bool decimal = false;
  const Alpha a = Alpha::parse(text, &decimal);
  if (decimal) {
    o.warn("decimal alpha " + text + " read as " + to_string(a) + "; use p/q for exact boundaries");
  }
  return a;
}

CutoffGeometry parse_geometry(const std::string& s) {
  if (s == "per-line") return CutoffGeometry::kPerLine;
  if (s == "box") return CutoffGeometry::kBox;
  throw InvalidArgument("unknown cutoff geometry '" + s + "' (per-line, box)");
}

std::vector<double> lag_grid(double max_lag, double step) {
  if (!(step > 0.0) || !(max_lag >= 0.0)) throw InvalidArgument("lag grid needs step > 0 and max >= 0");
  std::vector<double> lags;
  const auto count = static_cast<int>(std::floor(max_lag / step + 1e-9));
  for (int i = 0; i <= count; ++i) lags.push_back(i * step);
  return lags;
}

struct Args {
  // shared
  std::string alpha = "3/4";
  std::string out;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  double m = 1.0;
  // enumerate
  int order = 1;
  int legs = 4;
  bool raw = false;
  bool proper = false;
  bool collapse = false;
  // classify
  int max_order = 5;
  bool all = false;
  bool counterterms = false;
  // forests / integrate / renormalize
  std::string diagram = "sunset";
  bool recipe = false;
  std::vector<double> kappas{1e2, 1e3, 1e4};
  double p = 0.0;
  std::string method = "auto";
  double target_error = 1e-3;
  std::string geometry = "per-line";
  bool renormalized = false;
  double kappa_start = 1e3;
  double tolerance = 1e-2;
  int max_doublings = 6;
  bool bare = false;
  // scaling
  std::string input;
  // sample / perturbcheck
  double kappa = 50.0;
  double sample_alpha = 0.0;
  std::string sample_alpha_text;
  std::uint64_t count = 100000;
  double max_lag = 2.0;
  double lag_step = 0.1;
  double spacing = 0.0;
  std::uint64_t dump = 0;
  double lambda = 0.01;
  std::vector<double> window{-1.0, 1.0};
  std::string profile = "indicator";
  std::vector<double> times{-0.5, -0.2, 0.2, 0.5};
  int nodes = 160;
  double stat_tolerance = 0.0;
  // reproduce
  std::string case_id;
};

int cmd_enumerate(const Args& a, Output& o) {
  o.config = {{"order", a.order}, {"legs", a.legs}, {"normalOrdered", !a.raw},
              {"properOnly", a.proper}, {"collapseLegs", a.collapse}};
  EnumerationOptions opts;
  opts.normal_ordered = !a.raw;
  opts.proper_only = a.proper;
  opts.legs = a.collapse ? LegLabels::kCollapsed : LegLabels::kDistinct;
  o.json_doc(io::enumeration_json(enumerate_diagrams(a.order, a.legs, opts)));
  return kOk;
}

int cmd_classify(const Args& a, Output& o) {
  const Alpha alpha = parse_alpha(a.alpha, o);
  if (a.max_order < 2) throw InvalidArgument("max order must be at least 2");
  o.config = {{"alpha", to_string(alpha)}, {"maxOrder", a.max_order}, {"all", a.all},
              {"counterterms", a.counterterms}};
  const TopologyCatalog catalog(a.max_order);
  const ClassificationTable table = classify(alpha, catalog, a.max_order);
  if (a.counterterms) {
    const CountertermReport rep = counterterm_report(table);
    io::CsvTable t = io::counterterm_csv(rep);
    t.metadata.emplace_back("regime", to_string(rep.regime));
    if (!rep.offending.empty()) {
      t.metadata.emplace_back("offending", std::to_string(rep.offending.size()) +
                                               " divergent diagrams with E > 4");
    }
    o.csv(std::move(t));
    return kOk;
  }
  std::vector<ClassifiedDiagram> rows;
  if (a.all) {
    for (int n = 2; n <= a.max_order; ++n) {
      for (const auto& w : catalog.at_order(n)) rows.push_back({w.diagram, w.form, power_count(w.diagram, alpha)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
      return std::tie(x.report.n, x.report.E, x.form) < std::tie(y.report.n, y.report.E, y.form);
    });
  } else {
    rows = table.divergent;
  }
  io::CsvTable t = io::classification_csv(alpha, rows);
  t.metadata.emplace_back("regime", to_string(table.regime));
  t.metadata.emplace_back("divergent", std::to_string(table.divergent.size()));
  o.csv(std::move(t));
  return kOk;
}

int cmd_forests(const Args& a, Output& o) {
  const Alpha alpha = parse_alpha(a.alpha, o);
  const Diagram d = io::resolve_diagram(a.diagram);
  o.config = {{"diagram", a.diagram}, {"alpha", to_string(alpha)}, {"recipe", a.recipe}};
  if (a.recipe) {
    o.json_doc(io::recipe_json(build_renormalized_integrand(d, alpha), route_momenta(d)));
  } else {
    o.json_doc(io::forests_json(d, alpha, enumerate_forests(d, alpha)));
  }
  return kOk;
}

IntegrationOptions integration_options(const Args& a) {
  IntegrationOptions opts;
  opts.method = parse_method(a.method);
  opts.target_error = a.target_error;
  opts.seed = a.seed;
  opts.workers = a.workers;
  if (!(a.target_error > 0.0)) throw InvalidArgument("target error must be positive");
  return opts;
}

int cmd_integrate(const Args& a, Output& o) {
  const Alpha alpha = parse_alpha(a.alpha, o);
  const Diagram d = io::resolve_diagram(a.diagram);
  if (a.kappas.empty()) throw InvalidArgument("at least one cutoff required");
  o.seed = a.seed;
  o.config = {{"diagram", a.diagram}, {"alpha", to_string(alpha)}, {"kappa", a.kappas},
              {"p", a.p}, {"m", a.m}, {"method", a.method}, {"targetError", a.target_error},
              {"geometry", a.geometry}, {"renormalized", a.renormalized}};
  PropagatorSpec spec;
  spec.alpha = alpha;
  spec.m = a.m;
  spec.geometry = parse_geometry(a.geometry);
  const auto ext = external_momenta(route_momenta(d), a.p);
  const KappaScan scan = scan_kappa(d, spec, a.kappas, ext, a.renormalized, integration_options(a));
  io::CsvTable t = io::integration_csv(scan.points, scan.results);
  if (!scan.results.empty()) t.metadata.emplace_back("method", to_string(scan.results.front().method));
  o.csv(std::move(t));
  return kOk;
}

int cmd_scaling(const Args& a, Output& o) {
  o.config = {{"input", a.input}};
  std::vector<ScalingPoint> pts;
  if (a.input.empty() || a.input == "-") {
    throw InvalidArgument("scaling needs --in <integrate CSV>");
  }
  std::ifstream in(a.input);
  if (!in) throw InvalidArgument("cannot open '" + a.input + "'");
  pts = io::scaling_points(io::read_csv(in));
  o.json_doc(io::scaling_json(scaling_fit(pts)));
  return kOk;
}

int cmd_renormalize(const Args& a, Output& o) {
  const Alpha alpha = parse_alpha(a.alpha, o);
  const Diagram d = io::resolve_diagram(a.diagram);
  o.seed = a.seed;
  o.config = {{"diagram", a.diagram}, {"alpha", to_string(alpha)}, {"p", a.p}, {"m", a.m},
              {"kappaStart", a.kappa_start}, {"tolerance", a.tolerance},
              {"maxDoublings", a.max_doublings}, {"bare", a.bare}, {"geometry", a.geometry},
              {"targetError", a.target_error}};
  PropagatorSpec spec;
  spec.alpha = alpha;
  spec.m = a.m;
  spec.geometry = parse_geometry(a.geometry);
  StabilizationOptions s;
  s.kappa_start = a.kappa_start;
  s.relative_tolerance = a.tolerance;
  s.max_doublings = a.max_doublings;
  const auto ext = external_momenta(route_momenta(d), a.p);
  const StabilizedValue v = stabilize_in_kappa(d, spec, ext, !a.bare, s, integration_options(a));
  json doc;
  doc["value"] = v.value;
  doc["error"] = v.error;
  doc["stabilized"] = v.stabilized;
  doc["sequence"] = json::array();
  for (const auto& p : v.sequence) doc["sequence"].push_back({{"kappa", p.kappa}, {"value", p.value}, {"error", p.error}});
  o.json_doc(doc);
  if (!v.stabilized) {
    o.err() << error_line("nonconvergence", a.bare ? "integral did not stabilize"
                                                  : "renormalized integral did not stabilize")
            << '\n';
    return kNonConvergence;
  }
  return kOk;
}

int cmd_sample(const Args& a, Output& o) {
  double alpha = 0.0;
  if (!a.sample_alpha_text.empty()) alpha = parse_alpha(a.sample_alpha_text, o).as_double();
  o.seed = a.seed;
  o.config = {{"m", a.m}, {"kappa", a.kappa}, {"alpha", alpha}, {"count", a.count},
              {"maxLag", a.max_lag}, {"lagStep", a.lag_step}, {"spacing", a.spacing}, {"dump", a.dump}};
  const SpectralSampler sampler(a.m, a.kappa, a.seed, a.spacing);
  if (sampler.coarse_grid()) o.warn(sampler.warning());
  if (a.count < 2) throw InvalidArgument("path count must be at least 2");
  const auto lags = lag_grid(a.max_lag, a.lag_step);
  const CovarianceEstimate est = estimate_covariance(sampler, lags, a.count, alpha, a.workers);
  io::CsvTable t = io::covariance_csv(est);
  t.metadata.emplace_back("frequencies", std::to_string(sampler.frequencies().size()));
  t.metadata.emplace_back("spacing", io::format_double(sampler.spacing()));
  t.metadata.emplace_back("tailBound", io::format_double(kernel_tail_bound(a.kappa)));
  if (sampler.coarse_grid()) t.metadata.emplace_back("warning", sampler.warning());
  if (a.dump > 0) {
    if (a.out.empty()) throw InvalidArgument("--dump needs --out <paths.csv>");
    std::vector<PathSample> paths;
    for (std::uint64_t i = 0; i < std::min(a.dump, a.count); ++i) {
      PathSample s = sampler.sample(i, lags);
      if (alpha != 0.0) s = fractional_path(sampler, s, alpha);
      paths.push_back(std::move(s));
    }
    Output file(o.err(), o.err(), "sample");
    file.config = o.config;
    file.seed = o.seed;
    file.path = a.out;
    file.csv(io::paths_csv(paths));
    Output screen = o;
    screen.path.clear();
    screen.csv(std::move(t));
    return kOk;
  }
  o.csv(std::move(t));
  return kOk;
}

int cmd_perturbcheck(const Args& a, Output& o) {
  PerturbationSetting setting;
  setting.lambda = a.lambda;
  if (a.window.size() != 2) throw InvalidArgument("--window needs two values a,b");
  setting.window = {a.window[0], a.window[1], parse_window_profile(a.profile)};
  PerturbationOptions opts;
  opts.alpha = parse_alpha(a.sample_alpha_text.empty() ? "0.3" : a.sample_alpha_text, o).as_double();
  if (opts.alpha >= 5.0 / 8.0) {
    o.warn("alpha >= 5/8 needs counterterms; the first-order check assumes a finite theory");
  }
  opts.m = a.m;
  opts.kappa = a.kappa;
  if (a.times.size() != 4) throw InvalidArgument("--times needs four values");
  std::copy(a.times.begin(), a.times.end(), opts.times.begin());
  opts.samples = a.count;
  opts.seed = a.seed;
  opts.quadrature_nodes = a.nodes;
  opts.tolerance = a.stat_tolerance;
  opts.workers = a.workers;
  o.seed = a.seed;
  o.config = {{"lambda", a.lambda}, {"alpha", opts.alpha}, {"m", a.m}, {"kappa", a.kappa},
              {"window", a.window}, {"profile", a.profile}, {"times", a.times},
              {"samples", a.count}, {"nodes", a.nodes}, {"tolerance", a.stat_tolerance}};
  const PerturbationReport rep = perturbative_check(setting, opts);
  if (!rep.warning.empty()) o.warn(rep.warning);
  o.json_doc(io::perturbation_json(rep));
  return kOk;
}

int cmd_reproduce(const Args& a, Output& o) {
  o.seed = a.seed;
  o.config = {{"case", a.case_id}};
  const ScenarioResult r = reproduce_case(a.case_id, a.workers, a.seed);
  json doc;
  doc["case"] = r.id;
  doc["pass"] = r.pass();
  doc["checks"] = json::array();
  for (const auto& c : r.checks) {
    doc["checks"].push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    o.err() << (c.pass ? "PASS " : "FAIL ") << r.id << ": " << c.name << " (" << c.detail << ")\n";
  }
  doc["fits"] = json::array();
  for (const auto& f : r.fits) doc["fits"].push_back(io::scaling_json(f));
  o.json_doc(doc);
  return r.pass() ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diagrams, power counting and cutoff integrals of the fractional x^4 process", "fracphi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::library_version());
  Args a;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", a.out, "Write results to this file"); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", a.seed, "Random seed"); };
  auto add_workers = [&](CLI::App* c) {
    c->add_option("--workers", a.workers, "Worker threads (default: FRACPHI_WORKERS or 1)");
  };

  auto* en = app.add_subcommand("enumerate", "Enumerate diagram classes with contraction counts (JSON)");
  en->add_option("--order", a.order, "Vertex count n")->required();
  en->add_option("--legs", a.legs, "External leg count E")->required();
  en->add_flag("--no-normal-order", a.raw, "Allow same-vertex pairings");
  en->add_flag("--proper", a.proper, "Keep one-particle-irreducible diagrams only");
  en->add_flag("--collapse-legs", a.collapse, "Ignore external leg labels");
  add_out(en);

  auto* cl = app.add_subcommand("classify", "Divergent proper diagrams up to a given order (CSV)");
  cl->add_option("--alpha", a.alpha, "Fractional order, p/q")->required();
  cl->add_option("--max-order", a.max_order, "Largest vertex count");
  cl->add_flag("--all", a.all, "List every proper diagram, not only divergent ones");
  cl->add_flag("--counterterms", a.counterterms, "Emit the counterterm report instead");
  add_out(cl);

  auto* fo = app.add_subcommand("forests", "Forests of renormalization parts (JSON)");
  fo->add_option("--diagram", a.diagram, "sunset|fish|nut|tree|triangle or a diagram JSON file");
  fo->add_option("--alpha", a.alpha, "Fractional order, p/q")->required();
  fo->add_flag("--recipe", a.recipe, "Emit the subtraction recipe instead");
  add_out(fo);

  auto* in = app.add_subcommand("integrate", "Cutoff integrals over a kappa grid (CSV)");
  in->add_option("--diagram", a.diagram, "sunset|fish|nut|tree|triangle or a diagram JSON file");
  in->add_option("--alpha", a.alpha, "Fractional order, p/q")->required();
  in->add_option("--kappa", a.kappas, "Cutoffs, comma separated")->delimiter(',');
  in->add_option("--p", a.p, "External momentum");
  in->add_option("--m", a.m, "Mass");
  in->add_option("--method", a.method, "auto|adaptive|qmc");
  in->add_option("--target-error", a.target_error, "Relative target error");
  in->add_option("--geometry", a.geometry, "per-line|box");
  in->add_flag("--renormalized", a.renormalized, "Integrate R_Gamma instead of I_Gamma");
  add_seed(in);
  add_workers(in);
  add_out(in);

  auto* sc = app.add_subcommand("scaling", "Fit power and log models to an integrate CSV (JSON)");
  sc->add_option("--in", a.input, "CSV produced by integrate")->required();
  add_out(sc);

  auto* rn = app.add_subcommand("renormalize", "Renormalized value on a doubling kappa grid (JSON)");
  rn->add_option("--diagram", a.diagram, "sunset|fish|nut|tree|triangle or a diagram JSON file");
  rn->add_option("--alpha", a.alpha, "Fractional order, p/q")->required();
  rn->add_option("--p", a.p, "External momentum");
  rn->add_option("--m", a.m, "Mass");
  rn->add_option("--kappa-start", a.kappa_start, "First cutoff");
  rn->add_option("--tolerance", a.tolerance, "Relative change accepted per doubling");
  rn->add_option("--max-doublings", a.max_doublings, "Doublings before giving up");
  rn->add_option("--target-error", a.target_error, "Relative target error per integral");
  rn->add_option("--method", a.method, "auto|adaptive|qmc");
  rn->add_option("--geometry", a.geometry, "per-line|box");
  rn->add_flag("--bare", a.bare, "Use the unsubtracted integrand");
  add_seed(rn);
  add_workers(rn);
  add_out(rn);

  auto* sa = app.add_subcommand("sample", "Sample paths and estimate the covariance (CSV)");
  sa->add_option("--m", a.m, "Mass");
  sa->add_option("--kappa", a.kappa, "Spectral cutoff");
  sa->add_option("--alpha", a.sample_alpha_text, "Fractional order of the estimated covariance");
  sa->add_option("--count", a.count, "Number of paths");
  sa->add_option("--max-lag", a.max_lag, "Largest lag");
  sa->add_option("--lag-step", a.lag_step, "Lag spacing");
  sa->add_option("--spacing", a.spacing, "Frequency spacing (default m/20)");
  sa->add_option("--dump", a.dump, "Write this many paths to --out");
  add_seed(sa);
  add_workers(sa);
  add_out(sa);

  auto* pc = app.add_subcommand("perturbcheck", "First-order Monte-Carlo check against quadrature (JSON)");
  pc->add_option("--lambda", a.lambda, "Coupling");
  pc->add_option("--alpha", a.sample_alpha_text, "Fractional order (default 0.3)");
  pc->add_option("--m", a.m, "Mass");
  pc->add_option("--kappa", a.kappa, "Spectral cutoff")->default_val(20.0);
  pc->add_option("--window", a.window, "Window support a,b")->delimiter(',');
  pc->add_option("--profile", a.profile, "indicator|bump");
  pc->add_option("--times", a.times, "Four external times")->delimiter(',');
  pc->add_option("--samples", a.count, "Number of paths");
  pc->add_option("--nodes", a.nodes, "Gauss-Legendre nodes for U");
  pc->add_option("--tolerance", a.stat_tolerance, "Flag results with larger standard error");
  add_seed(pc);
  add_workers(pc);
  add_out(pc);

  auto* rp = app.add_subcommand("reproduce", "Run a reference scaling scenario with pass/fail checks");
  rp->add_option("--case", a.case_id, "sunset-3/4|sunset-2/3|nut-5/8")->required();
  add_seed(rp);
  add_workers(rp);
  add_out(rp);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << io::library_version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << error_line("invalid_config", e.what()) << '\n';
    return kInvalidConfig;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Output o(out, err, cmd->get_name());
  o.path = a.out;
  try {
    if (a.workers == 0) a.workers = default_workers();
    const std::string& name = cmd->get_name();
    if (name == "enumerate") return cmd_enumerate(a, o);
    if (name == "classify") return cmd_classify(a, o);
    if (name == "forests") return cmd_forests(a, o);
    if (name == "integrate") return cmd_integrate(a, o);
    if (name == "scaling") return cmd_scaling(a, o);
    if (name == "renormalize") return cmd_renormalize(a, o);
    if (name == "sample") return cmd_sample(a, o);
    if (name == "perturbcheck") return cmd_perturbcheck(a, o);
    if (name == "reproduce") return cmd_reproduce(a, o);
  } catch (const NonConvergence& e) {
    json j = json::parse(error_line("nonconvergence", e.what()));
    j["bestValue"] = e.best_value();
    j["bestError"] = e.best_error();
    err << j.dump() << '\n';
    return kNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << error_line("invalid_config", e.what()) << '\n';
    return kInvalidConfig;
  }
  return kInvalidConfig;
}

}  // namespace fracphi::cli
