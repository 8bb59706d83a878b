#include "cli/commands.hpp"

#include "surfspline/mollifier.hpp"
#include "surfspline/report.hpp"
#include "surfspline/spline.hpp"
#include "surfspline/text.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace surfspline::cli {

namespace fs = std::filesystem;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"fit", "study", "mollifier", "instability", "metrics"};
  return names;
}

std::vector<KeySpec> schema_for(const std::string& command) {
  std::vector<KeySpec> s{{"seed", "0", "generator seed"}, {"out", "out", "output directory"}};
  if (command == "fit") {
    s.insert(s.end(), {
        {"d", "2", "dimension"},
        {"k", "2", "spline order"},
        {"points", "", "node CSV; empty generates a quasi-uniform set"},
        {"values", "", "value CSV, one per line; empty samples `function`"},
        {"function", "sine", "catalog function used when values is empty"},
        {"domain", "unit_cube", "unit_cube or unit_ball, for generated nodes"},
        {"target_h", "0.2", "fill distance target for generated nodes"},
        {"fill_resolution", "0", "probe grid points per axis; 0 is the default"},
    });
  } else if (command == "study") {
    s.insert(s.end(), {
        {"function", "sine", "catalog function"},
        {"d", "1", "dimension"},
        {"k", "2", "spline order"},
        {"m", "0", "smoothness order for rough functions; 0 derives it"},
        {"domain", "unit_cube", "unit_cube or unit_ball"},
        {"p", "inf", "L_p exponents"},
        {"h", "0.2,0.1,0.05,0.025", "target fill distances"},
        {"fill_resolution", "0", "probe grid points per axis; 0 is the default"},
        {"halton_samples", "16384", "error samples for d >= 2"},
        {"grid_points", "1025", "error samples for d = 1"},
        {"parallel", "false", "run levels concurrently"},
    });
  } else if (command == "mollifier") {
    s.insert(s.end(), {
        {"d", "1", "dimension"},
        {"m", "2", "moment order"},
        {"quad_nodes", "0", "construction nodes per axis; 0 is the default"},
    });
  } else if (command == "instability") {
    s.insert(s.end(), {
        {"function", "abs_power:1.5", "catalog function"},
        {"d", "2", "dimension"},
        {"k", "2", "spline order"},
        {"domain", "unit_cube", "unit_cube or unit_ball"},
        {"base_h", "0.1", "fill distance target of the base set"},
        {"factors", "1,4,16,64,256", "cluster factors"},
        {"fill_resolution", "0", "probe grid points per axis; 0 is the default"},
        {"halton_samples", "16384", "L_1 samples for d >= 2"},
        {"grid_points", "1025", "L_1 samples for d = 1"},
    });
  } else if (command == "metrics") {
    s.insert(s.end(), {
        {"points", "", "node CSV; empty generates a set"},
        {"d", "2", "dimension, for generated nodes"},
        {"domain", "unit_cube", "unit_cube or unit_ball, for generated nodes"},
        {"target_h", "0.2", "fill distance target for generated nodes"},
        {"cluster_factor", "0", "adds a satellite when >= 1"},
        {"fill_resolution", "0", "probe grid points per axis; 0 is the default"},
    });
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return s;
}

RunConfig load_config(const std::string& command, const std::string& path) {
  Overrides o;
  o.config_path = path;
  o.out_flag = true;
  return resolve_config(command, schema_for(command), o);
}

namespace {

DomainKind domain_of(const RunConfig& cfg) {
  try {
    return parse_domain_kind(cfg.str("domain"));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

LpSampler sampler_of(const RunConfig& cfg) {
  LpSampler s;
  s.halton_samples = cfg.integer("halton_samples");
  s.grid_points = cfg.integer("grid_points");
  if (s.halton_samples < 1 || s.grid_points < 2) throw ConfigError("sample counts too small");
  return s;
}

void check_dimension(int d) {
  if (d < 1 || d > kMaxDimension) throw ConfigError("d must be between 1 and 3");
}

}  // namespace

StudyConfig study_config_from(const RunConfig& cfg) {
  StudyConfig s;
  s.function = cfg.str("function");
  s.d = cfg.integer("d");
  check_dimension(s.d);
  s.k = cfg.integer("k");
  s.m = cfg.integer("m");
  s.domain = domain_of(cfg);
  s.p_values = cfg.numbers("p");
  s.h_levels = cfg.numbers("h");
  s.seed = cfg.seed();
  s.fill_resolution = cfg.integer("fill_resolution");
  s.sampler = sampler_of(cfg);
  s.parallel = cfg.flag("parallel");
  for (double p : s.p_values) {
    if (!(p >= 1.0)) throw ConfigError("p values must lie in [1, inf]");
  }
  for (double h : s.h_levels) {
    if (!(h > 0.0 && h < 1.0)) throw ConfigError("h values must lie in (0, 1)");
  }
  return s;
}

InstabilityConfig instability_config_from(const RunConfig& cfg) {
  InstabilityConfig s;
  s.function = cfg.str("function");
  s.d = cfg.integer("d");
  check_dimension(s.d);
  s.k = cfg.integer("k");
  s.domain = domain_of(cfg);
  s.base_h = cfg.number("base_h");
  s.factors = cfg.numbers("factors");
  s.seed = cfg.seed();
  s.fill_resolution = cfg.integer("fill_resolution");
  s.sampler = sampler_of(cfg);
  for (double f : s.factors) {
    if (!(f >= 1.0)) throw ConfigError("cluster factors must be >= 1");
  }
  return s;
}

std::string output_stem(const RunConfig& cfg) {
  return (fs::path(cfg.str("out")) / (cfg.command() + "_" + cfg.hash())).string();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << content;
    out.close();
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot rename onto '" + path + "': " + ec.message());
  }
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Vector read_values_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<double> v;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::vector<double> row = parse_csv_row(body, line_no);
    if (row.size() != 1) throw ParseError("expected one value per line", line_no);
    v.push_back(row[0]);
  }
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

PointSet nodes_from(const RunConfig& cfg, int d, bool* generated) {
  const std::string path = cfg.str("points");
  if (!path.empty()) {
    std::istringstream in(read_file(path));
    const PointSet p = read_points_csv(in);
    if (p.dim() != d) throw ConfigError("points file has d=" + std::to_string(p.dim()) + ", config has d=" +
                                        std::to_string(d));
    *generated = false;
    return p;
  }
  *generated = true;
  QuasiUniformOptions gen;
  gen.fill_resolution = cfg.integer("fill_resolution");
  return generate_quasi_uniform(Domain(domain_of(cfg), d), cfg.number("target_h"), cfg.seed(), gen);
}

std::string points_text(const PointSet& p) {
  std::ostringstream s;
  write_points_csv(s, p);
  return s.str();
}

int cmd_fit(const RunConfig& cfg, const std::string& stem, std::ostream& out) {
  const int d = cfg.integer("d");
  check_dimension(d);
  const int k = cfg.integer("k");
  bool generated = false;
  const PointSet nodes = nodes_from(cfg, d, &generated);
  Vector values;
  if (!cfg.str("values").empty()) {
    values = read_values_csv(cfg.str("values"));
    if (values.size() != nodes.size()) {
      throw ConfigError("values file has " + std::to_string(values.size()) + " entries for " +
                        std::to_string(nodes.size()) + " nodes");
    }
  } else {
    const TestFunction f = make_test_function(cfg.str("function"), d);
    values.resize(nodes.size());
    for (int i = 0; i < nodes.size(); ++i) values(i) = f(nodes.point(i));
  }
  const SurfaceSplineModel model = fit(nodes, values, k);
  const SolveDiagnostics& diag = model.diagnostics();
  const double mu_norm = model.mu().size() ? model.mu().cwiseAbs().maxCoeff() : 0.0;

  std::ostringstream model_text;
  write_model(model_text, model);
  write_file_atomic(stem + ".model", model_text.str());
  if (generated) write_file_atomic(stem + "_points.csv", points_text(nodes));
  std::ostringstream csv;
  csv << "key,value\n"
      << "N," << nodes.size() << '\n'
      << "ell," << model.tail().space().size() << '\n'
      << "rcond," << format_exact(diag.rcond) << '\n'
      << "condition," << format_exact(diag.condition()) << '\n'
      << "nbc_residual," << format_exact(diag.nbc_residual) << '\n'
      << "max_residual," << format_exact(diag.interpolation_residual) << '\n'
      << "mu_norm," << format_exact(mu_norm) << '\n'
      << "method," << diag.method << '\n';
  write_file_atomic(stem + "_diagnostics.csv", csv.str());

  out << "N: " << nodes.size() << '\n'
      << "ell: " << model.tail().space().size() << '\n'
      << "condition: " << format_g(diag.condition(), 6) << '\n'
      << "nbc_residual: " << format_g(diag.nbc_residual, 6) << '\n'
      << "max_residual: " << format_g(diag.interpolation_residual, 6) << '\n'
      << "mu_norm: " << format_g(mu_norm, 6) << '\n'
      << "method: " << diag.method << '\n'
      << "model: " << stem << ".model\n";
  return kExitOk;
}

int cmd_study(const RunConfig& cfg, const std::string& stem, std::ostream& out) {
  const StudyReport report = convergence_study(study_config_from(cfg));
  std::ostringstream csv, summary;
  write_study_csv(csv, report);
  write_study_summary(summary, report);
  write_file_atomic(stem + ".csv", csv.str());
  write_file_atomic(stem + "_summary.txt", summary.str());
  out << summary.str();
  if (report.successful_levels() < 3) {
    throw InsufficientLevelsError("only " + std::to_string(report.successful_levels()) +
                                  " levels succeeded; need 3");
  }
  return kExitOk;
}

int cmd_mollifier(const RunConfig& cfg, const std::string& stem, std::ostream& out, std::ostream& err) {
  const int d = cfg.integer("d");
  check_dimension(d);
  const Mollifier phi = build_mollifier(d, cfg.integer("m"), cfg.integer("quad_nodes"));
  const std::vector<MomentRow> rows = verify_moments(phi);
  std::ostringstream csv;
  write_moment_csv(csv, rows);
  write_file_atomic(stem + ".csv", csv.str());
  out << csv.str();
  for (const MomentRow& r : rows) {
    if (!r.pass) {
      err << "error: mollifier_gate: moment " << to_string(r.alpha) << " = " << format_g(r.value, 6)
          << " misses target " << format_g(r.target, 6) << " by more than " << format_g(r.tolerance, 6) << '\n';
      return kExitMollifierGate;
    }
  }
  return kExitOk;
}

int cmd_instability(const RunConfig& cfg, const std::string& stem, std::ostream& out) {
  const InstabilityReport report = instability_study(instability_config_from(cfg));
  std::ostringstream csv;
  write_instability_csv(csv, report);
  write_file_atomic(stem + ".csv", csv.str());
  out << csv.str();
  return kExitOk;
}

int cmd_metrics(const RunConfig& cfg, const std::string& stem, std::ostream& out) {
  const int d = cfg.integer("d");
  check_dimension(d);
  bool generated = false;
  PointSet nodes = nodes_from(cfg, d, &generated);
  const double factor = cfg.number("cluster_factor");
  if (factor >= 1.0) {
    if (!generated) throw ConfigError("cluster_factor applies to generated nodes only");
    QuasiUniformOptions gen;
    gen.fill_resolution = cfg.integer("fill_resolution");
    nodes = generate_clustered(nodes.domain(), cfg.number("target_h"), factor, cfg.seed(), gen);
  }
  int res = cfg.integer("fill_resolution");
  if (res == 0) res = default_fill_resolution(d);
  const double h = fill_distance(nodes, res);
  const double q = separation(nodes);
  std::ostringstream csv;
  csv << "h,q,rho,N,probe_bound\n"
      << format_exact(h) << ',' << format_exact(q) << ',' << format_exact(h / q) << ',' << nodes.size() << ','
      << format_exact(probe_discretization_bound(nodes.domain(), res)) << '\n';
  write_file_atomic(stem + ".csv", csv.str());
  if (generated) write_file_atomic(stem + "_points.csv", points_text(nodes));
  out << "h: " << format_g(h, 6) << '\n'
      << "q: " << format_g(q, 6) << '\n'
      << "rho: " << format_g(h / q, 6) << '\n'
      << "N: " << nodes.size() << '\n';
  return kExitOk;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const std::string stem = output_stem(cfg);
    write_file_atomic(stem + ".cfg", cfg.resolved_text());
    const std::string& c = cfg.command();
    if (c == "fit") return cmd_fit(cfg, stem, out);
    if (c == "study") return cmd_study(cfg, stem, out);
    if (c == "mollifier") return cmd_mollifier(cfg, stem, out, err);
    if (c == "instability") return cmd_instability(cfg, stem, out);
    if (c == "metrics") return cmd_metrics(cfg, stem, out);
    throw ConfigError("unknown command '" + c + "'");
  } catch (const UnisolvenceError& e) {
    err << "error: unisolvency: " << e.what() << '\n';
    return kExitUnisolvency;
  } catch (const ConditioningError& e) {
    err << "error: conditioning: " << e.what() << '\n';
    return kExitConditioning;
  } catch (const InsufficientLevelsError& e) {
    err << "error: insufficient_levels: " << e.what() << '\n';
    return kExitInsufficientLevels;
  } catch (const ParseError& e) {
    err << "error: input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace surfspline::cli
