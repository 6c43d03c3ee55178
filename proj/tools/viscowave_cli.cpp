// viscowave command-line front end.
//
//   viscowave eval        --model M.json [--omega-min .. --omega-max .. --omega-points .. --omega-log]
//   viscowave classify    --model M.json
//   viscowave green       --model M.json --t T --x-min .. --x-max .. --x-points .. --dim {1,3}
//   viscowave fit         --samples S.csv [--r-min .. --r-max .. --r-per-decade ..] [--convert]
//   viscowave convert     --spectrum S.json | --model M.json
//   viscowave admissible  --model M.json
//   viscowave cm-check    --model M.json [--t-min .. --t-max .. --t-points .. --max-order ..]
//
// Exit codes: 0 success, 2 input error, 3 numerical failure. Every output starts with (CSV) or
// contains (JSON) the tool version and the FNV-1a hash of the run configuration.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "viscowave/viscowave.hpp"

namespace vw = viscowave;
using vw::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct RunConfig {
  std::string subcommand;
  std::string model_path;
  std::string samples_path;
  std::string spectrum_path;
  std::string out_path;

  double omega_min = 1e-3;
  double omega_max = 1e3;
  int omega_points = 64;
  bool omega_log = false;

  double t = 1.0;
  double x_min = 0.05;
  double x_max = 4.0;
  int x_points = 80;
  int dim = 3;

  std::optional<double> tol;
  unsigned threads = 0;
  std::optional<double> contour_eps;
  std::optional<double> contour_pmax;
  int contour_nodes = 2;
  std::string source = "equation";
  bool no_fast_path = false;

  std::optional<double> r_min;
  std::optional<double> r_max;
  int r_per_decade = 10;
  bool convert = false;
  double rho = 1.0;
  double c0 = 1.0;

  double t_min = 0.1;
  double t_max = 10.0;
  int t_points = 50;
  int max_order = 4;

  json to_json() const {
    json j;
    j["subcommand"] = subcommand;
    j["omega"] = {omega_min, omega_max, omega_points, omega_log};
    j["t"] = t;
    j["x"] = {x_min, x_max, x_points};
    j["dim"] = dim;
    j["tol"] = tol ? json(*tol) : json(nullptr);
    j["contour"] = {contour_eps ? json(*contour_eps) : json(nullptr),
                    contour_pmax ? json(*contour_pmax) : json(nullptr), contour_nodes};
    j["source"] = source;
    j["fast_path"] = !no_fast_path;
    j["r"] = {r_min ? json(*r_min) : json(nullptr), r_max ? json(*r_max) : json(nullptr),
              r_per_decade};
    j["convert"] = convert;
    j["rho"] = rho;
    j["c0"] = c0;
    j["cm"] = {t_min, t_max, t_points, max_order};
    return j;
  }
};

// Inputs are folded into the hash by content, so identical runs get identical hashes.
json hashed_config(const RunConfig& cfg, const json& inputs) {
  json j = cfg.to_json();
  j["inputs"] = inputs;
  return j;
}

json metadata(const std::string& hash) {
  return {{"tool", "viscowave"}, {"version", vw::kVersion}, {"config", hash}};
}

std::string file_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw vw::InvalidArgument("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit_text(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw vw::InvalidArgument("cannot write '" + cfg.out_path + "'");
  out << text;
}

void emit_json(const RunConfig& cfg, json doc, const std::string& hash) {
  doc["metadata"] = metadata(hash);
  emit_text(cfg, doc.dump(2) + "\n");
}

std::string csv_text(const std::string& hash, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  vw::write_csv(os, vw::metadata_line(hash), header, rows);
  return os.str();
}

vw::MaterialModel load_model(const RunConfig& cfg, json& inputs) {
  if (cfg.model_path.empty()) throw vw::InvalidArgument("--model is required");
  const json j = vw::read_json_file(cfg.model_path);
  inputs["model"] = j;
  return vw::model_from_json(j);
}

vw::AttenuationLaw law_or_zero(const vw::MaterialModel& m) {
  return m.law ? *m.law : vw::AttenuationLaw{vw::MeasureBacked{}};
}

vw::ContourParams contour(const RunConfig& cfg) {
  vw::ContourParams cp;
  cp.shift = cfg.contour_eps;
  cp.omega_max = cfg.contour_pmax;
  cp.nodes = cfg.contour_nodes;
  if (cfg.tol) cp.rel_tol = *cfg.tol;
  return cp;
}

// ---- subcommands ----

int cmd_eval(const RunConfig& cfg) {
  json inputs;
  const auto m = load_model(cfg, inputs);
  const auto law = law_or_zero(m);
  const auto grid = vw::make_frequency_grid(cfg.omega_min, cfg.omega_max, cfg.omega_points,
                                            cfg.omega_log);
  auto row = [&](double w) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double ve = nan;
    if (w > 1.0 && vw::eval_b(law, w).real() > 0.0) ve = vw::variable_exponent(law, w);
    const auto ps = vw::phase_speed(m, w);
    return std::vector<double>{w, vw::attenuation(law, w), vw::dispersion_fn(law, w), ps.speed, ve};
  };
  const auto rows = vw::parallel_map(grid.omega, row, cfg.threads);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < 4; ++i)
      if (!std::isfinite(r[i]) && !(i == 3 && std::isinf(r[i])))
        throw vw::NumericError("eval: non-finite value at omega = " + std::to_string(r[0]));
  const auto hash = vw::config_hash(hashed_config(cfg, inputs));
  emit_text(cfg, csv_text(hash, {"omega", "attenuation", "dispersion", "phase_speed",
                                 "variable_exponent"},
                          rows));
  return kExitOk;
}

int cmd_classify(const RunConfig& cfg) {
  json inputs;
  const auto m = load_model(cfg, inputs);
  vw::ClassifyOptions opts;
  if (cfg.tol) opts.pw.rel_tol = *cfg.tol;
  const auto v = vw::classify(law_or_zero(m), opts);
  emit_json(cfg, vw::to_json(v), vw::config_hash(hashed_config(cfg, inputs)));
  return kExitOk;
}

int cmd_green(const RunConfig& cfg) {
  json inputs;
  const auto m = load_model(cfg, inputs);
  if (cfg.dim != 1 && cfg.dim != 3) throw vw::InvalidArgument("--dim must be 1 or 3");
  if (!(cfg.x_points >= 2)) throw vw::InvalidArgument("--x-points must be >= 2");
  if (!(cfg.x_max > cfg.x_min)) throw vw::InvalidArgument("--x-max must exceed --x-min");
  if (cfg.source != "equation" && cfg.source != "constitutive")
    throw vw::InvalidArgument("--source must be 'equation' or 'constitutive'");
  std::vector<double> grid(cfg.x_points);
  for (int i = 0; i < cfg.x_points; ++i)
    grid[i] = cfg.x_min + (cfg.x_max - cfg.x_min) * i / (cfg.x_points - 1);
  vw::GreenOptions go;
  go.contour = contour(cfg);
  go.source = cfg.source == "equation" ? vw::GreenSource::equation : vw::GreenSource::constitutive;
  go.fast_path = !cfg.no_fast_path;
  const auto snap = vw::snapshot(m, cfg.t, grid, cfg.dim, go, cfg.threads);

  const auto hash = vw::config_hash(hashed_config(cfg, inputs));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i], snap.values[i]});
  emit_text(cfg, csv_text(hash, {"x", "value"}, rows));

  json side;
  side["metadata"] = metadata(hash);
  side["model"] = vw::to_json(m);
  side["t"] = cfg.t;
  side["dimension"] = cfg.dim;
  side["source"] = cfg.source;
  side["contour"] = {
      {"shift_override", snap.shift_override ? json(*snap.shift_override) : json(nullptr)},
      {"omega_max_override",
       snap.omega_max_override ? json(*snap.omega_max_override) : json(nullptr)},
      {"nodes", snap.nodes},
      {"max_shift_used", snap.max_shift_used},
      {"max_omega_reached", snap.max_omega_reached}};
  json routes = json::array();
  for (auto r : snap.routes) routes.push_back(vw::to_string(r));
  side["routes"] = routes;
  side["errors"] = snap.errors;
  double peak = 0.0;
  double max_err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    peak = std::max(peak, std::abs(snap.values[i]));
    max_err = std::max(max_err, snap.errors[i]);
  }
  side["peak"] = peak;
  side["max_error"] = max_err;
  const std::string text = side.dump(2) + "\n";
  if (cfg.out_path.empty()) {
    std::cerr << text;
  } else {
    std::ofstream out(cfg.out_path + ".json");
    if (!out) throw vw::InvalidArgument("cannot write '" + cfg.out_path + ".json'");
    out << text;
  }
  return kExitOk;
}

json conversion_json(const vw::RelaxationConversion& conv) {
  json j;
  j["atomic"] = conv.atomic;
  j["q_inf"] = conv.q_inf;
  json poles = json::array();
  for (const auto& p : conv.poles) {
    json c = json::array();
    for (const auto& k : p.coefficients) c.push_back({k.real(), k.imag()});
    poles.push_back({{"s", {p.s.real(), p.s.imag()}}, {"multiplicity", p.multiplicity},
                     {"coefficients", c}});
  }
  j["poles"] = poles;
  j["messages"] = conv.diagnostics;
  return j;
}

int cmd_fit(const RunConfig& cfg) {
  if (cfg.samples_path.empty()) throw vw::InvalidArgument("--samples is required");
  json inputs;
  inputs["samples"] = vw::fnv1a64(file_text(cfg.samples_path));
  const auto samples = vw::samples_from_csv(vw::read_csv_file(cfg.samples_path));
  const double lo = cfg.r_min.value_or(samples.omega.front() / 10.0);
  const double hi = cfg.r_max.value_or(samples.omega.back() * 10.0);
  if (!(lo > 0.0) || !(hi > lo)) throw vw::InvalidArgument("invalid candidate range");
  if (cfg.r_per_decade < 1) throw vw::InvalidArgument("--r-per-decade must be >= 1");
  const auto cand = vw::detail::log_grid(lo, hi, cfg.r_per_decade);
  const auto fit = vw::fit_atoms(samples, cand);

  std::vector<std::string> msgs;
  msgs.push_back("candidates: " + std::to_string(cand.size()));
  json doc = vw::to_json(fit.spectrum, msgs);
  doc["diagnostics"]["residual_norm"] = fit.residual_norm;
  doc["diagnostics"]["sample_norm"] = fit.sample_norm;
  doc["diagnostics"]["iterations"] = fit.iterations;
  if (cfg.convert) {
    const auto conv = vw::attenuation_to_relaxation(fit.spectrum.atoms, cfg.rho, cfg.c0);
    json rel = conversion_json(conv);
    if (conv.atomic) rel["spectrum"] = vw::to_json(conv.relaxation);
    doc["relaxation"] = rel;
  }
  emit_json(cfg, doc, vw::config_hash(hashed_config(cfg, inputs)));
  return kExitOk;
}

int cmd_convert(const RunConfig& cfg) {
  json inputs;
  json doc;
  if (!cfg.spectrum_path.empty()) {
    const json j = vw::read_json_file(cfg.spectrum_path);
    inputs["spectrum"] = j;
    const auto s = vw::spectrum_from_json(j);
    if (s.side == vw::SpectrumSide::attenuation) {
      const auto conv = vw::attenuation_to_relaxation(s.atoms, cfg.rho, cfg.c0);
      if (conv.atomic) {
        doc = vw::to_json(conv.relaxation, conv.diagnostics);
      } else {
        doc = {{"atoms", json::array()}, {"density", nullptr}, {"side", "relaxation"}};
      }
      doc["diagnostics"]["conversion"] = conversion_json(conv);
    } else {
      auto grid = vw::default_r_grid(s, std::max(cfg.r_per_decade, 80));
      if (cfg.r_min || cfg.r_max)
        grid = vw::detail::log_grid(cfg.r_min.value_or(grid.front()), cfg.r_max.value_or(grid.back()),
                                    std::max(cfg.r_per_decade, 80));
      vw::PerronOptions po;
      po.threads = cfg.threads;
      const auto rec = vw::relaxation_to_attenuation(
          s, cfg.rho, grid, po);
      vw::SpectralMeasure nu{{}, rec.nu.table()};
      doc = vw::to_json(nu);
      doc["side"] = "attenuation";
      doc["c0"] = rec.c0;
      doc["diagnostics"] = {{"messages", json::array({"Stieltjes-Perron recovery"})},
                            {"eta", rec.nu.eta},
                            {"branch_violation", rec.branch_violation}};
    }
  } else {
    const auto m = load_model(cfg, inputs);
    if (!m.law) throw vw::InvalidArgument("convert: model has no attenuation law");
    const double lo = cfg.r_min.value_or(1e-2);
    const double hi = cfg.r_max.value_or(1e2);
    vw::PerronOptions po;
    po.threads = cfg.threads;
    const auto rec = vw::recover_density(*m.law, vw::detail::log_grid(lo, hi, cfg.r_per_decade), po);
    doc = vw::to_json(vw::SpectralMeasure{{}, rec.table()});
    doc["side"] = "attenuation";
    doc["diagnostics"] = {{"messages", json::array({"Stieltjes-Perron recovery"})},
                          {"eta", rec.eta}};
  }
  emit_json(cfg, doc, vw::config_hash(hashed_config(cfg, inputs)));
  return kExitOk;
}

json verdict_json(const vw::Verdict& v) { return {{"pass", v.pass}, {"detail", v.detail}}; }

int cmd_admissible(const RunConfig& cfg) {
  json inputs;
  const auto m = load_model(cfg, inputs);
  vw::AdmissibilityGrid grid;
  if (cfg.tol) grid.tol = *cfg.tol;
  const auto rep = vw::admissibility_check(law_or_zero(m), grid);
  json doc;
  doc["pass"] = rep.pass;
  doc["upper_half_plane"] = verdict_json(rep.upper_half_plane);
  doc["positive_monotone"] = verdict_json(rep.positive_monotone);
  doc["sublinear"] = verdict_json(rep.sublinear);
  doc["vanishes_at_zero"] = verdict_json(rep.vanishes_at_zero);
  emit_json(cfg, doc, vw::config_hash(hashed_config(cfg, inputs)));
  return kExitOk;
}

int cmd_cm_check(const RunConfig& cfg) {
  json inputs;
  const auto m = load_model(cfg, inputs);
  if (!(cfg.t_min > 0.0) || !(cfg.t_max > cfg.t_min) || cfg.t_points < 2)
    throw vw::InvalidArgument("cm-check needs 0 < t-min < t-max and t-points >= 2");
  std::vector<double> grid(cfg.t_points);
  for (int i = 0; i < cfg.t_points; ++i)
    grid[i] = cfg.t_min * std::pow(cfg.t_max / cfg.t_min, static_cast<double>(i) / (cfg.t_points - 1));
  vw::RelaxationOptions ro;
  ro.contour = contour(cfg);
  auto G = [&](double t) { return vw::relaxation_modulus(m, t, ro); };
  vw::CmOptions co;
  co.max_order = cfg.max_order;
  co.threads = cfg.threads;
  const auto v = vw::cm_check(G, grid, co);
  json doc;
  doc["pass"] = v.pass;
  doc["evaluations"] = v.evaluations;
  if (v.first_violation) {
    const auto& f = *v.first_violation;
    doc["first_violation"] = {
        {"order", f.order}, {"t", f.t}, {"value", f.value}, {"uncertainty", f.uncertainty}};
  } else {
    doc["first_violation"] = nullptr;
  }
  emit_json(cfg, doc, vw::config_hash(hashed_config(cfg, inputs)));
  return kExitOk;
}

void add_model(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model_path, "Material model JSON file")->required();
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.out_path, "Output file (default: standard output)");
  sub->add_option("--tol", cfg.tol, "Relative tolerance override");
  sub->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)");
}

void add_contour(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--contour-eps", cfg.contour_eps, "Bromwich contour abscissa")
      ->check(CLI::PositiveNumber);
  sub->add_option("--contour-pmax", cfg.contour_pmax, "Bromwich contour truncation |Im p|")
      ->check(CLI::PositiveNumber);
  sub->add_option("--contour-nodes", cfg.contour_nodes, "Quadrature subpanels per half period")
      ->check(CLI::Range(1, 64));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"viscowave: wave propagation in media with complete-Bernstein attenuation"};
  app.set_version_flag("--version", std::string("viscowave ") + vw::kVersion);
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Attenuation, dispersion, phase speed on a frequency grid");
  add_model(eval, cfg);
  add_common(eval, cfg);
  eval->add_option("--omega-min", cfg.omega_min, "Lowest frequency");
  eval->add_option("--omega-max", cfg.omega_max, "Highest frequency");
  eval->add_option("--omega-points", cfg.omega_points, "Number of frequencies");
  eval->add_flag("--omega-log", cfg.omega_log, "Logarithmic frequency spacing");

  auto* classify = app.add_subcommand("classify", "Finite/infinite propagation speed verdict");
  add_model(classify, cfg);
  add_common(classify, cfg);

  auto* green = app.add_subcommand("green", "Green's function snapshot u(t, x)");
  add_model(green, cfg);
  add_common(green, cfg);
  add_contour(green, cfg);
  green->add_option("--t", cfg.t, "Time of the snapshot")->required();
  green->add_option("--x-min", cfg.x_min, "First position");
  green->add_option("--x-max", cfg.x_max, "Last position");
  green->add_option("--x-points", cfg.x_points, "Number of positions");
  green->add_option("--dim", cfg.dim, "Spatial dimension (1 or 3)");
  green->add_option("--source", cfg.source, "3-D source normalisation: equation|constitutive");
  green->add_flag("--no-fast-path", cfg.no_fast_path, "Always use the Bromwich route");

  auto* fit = app.add_subcommand("fit", "Nonnegative atomic fit of attenuation samples");
  add_common(fit, cfg);
  fit->add_option("--samples", cfg.samples_path, "CSV with omega, attenuation[, weight]")->required();
  fit->add_option("--r-min", cfg.r_min, "Smallest candidate atom location");
  fit->add_option("--r-max", cfg.r_max, "Largest candidate atom location");
  fit->add_option("--r-per-decade", cfg.r_per_decade, "Candidate locations per decade");
  fit->add_flag("--convert", cfg.convert, "Also convert the fit to a relaxation spectrum");
  fit->add_option("--rho", cfg.rho, "Density used by --convert");
  fit->add_option("--c0", cfg.c0, "Front speed used by --convert");

  auto* convert = app.add_subcommand("convert", "Convert between attenuation and relaxation spectra");
  add_common(convert, cfg);
  auto* spec_opt = convert->add_option("--spectrum", cfg.spectrum_path, "Spectrum JSON file");
  auto* model_opt = convert->add_option("--model", cfg.model_path, "Model JSON (density recovery)");
  spec_opt->excludes(model_opt);
  convert->add_option("--rho", cfg.rho, "Density");
  convert->add_option("--c0", cfg.c0, "Front speed (attenuation side)");
  convert->add_option("--r-min", cfg.r_min, "Lowest recovery location");
  convert->add_option("--r-max", cfg.r_max, "Highest recovery location");
  convert->add_option("--r-per-decade", cfg.r_per_decade, "Recovery points per decade");

  auto* admissible = app.add_subcommand("admissible", "Complete-Bernstein admissibility report");
  add_model(admissible, cfg);
  add_common(admissible, cfg);

  auto* cm = app.add_subcommand("cm-check", "Complete monotonicity of the relaxation modulus");
  add_model(cm, cfg);
  add_common(cm, cfg);
  add_contour(cm, cfg);
  cm->add_option("--t-min", cfg.t_min, "Smallest time");
  cm->add_option("--t-max", cfg.t_max, "Largest time");
  cm->add_option("--t-points", cfg.t_points, "Number of times");
  cm->add_option("--max-order", cfg.max_order, "Highest derivative order")->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  const std::vector<std::pair<CLI::App*, int (*)(const RunConfig&)>> table = {
      {eval, cmd_eval},   {classify, cmd_classify},     {green, cmd_green},
      {fit, cmd_fit},     {convert, cmd_convert},       {admissible, cmd_admissible},
      {cm, cmd_cm_check}};
  try {
    for (const auto& [sub, fn] : table) {
      if (!sub->parsed()) continue;
      cfg.subcommand = sub->get_name();
      if (sub == convert && cfg.spectrum_path.empty() && cfg.model_path.empty())
        throw vw::InvalidArgument("convert needs --spectrum or --model");
      return fn(cfg);
    }
  } catch (const vw::InvalidArgument& e) {
    std::cerr << "viscowave: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const vw::DomainError& e) {
    std::cerr << "viscowave: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const vw::json::exception& e) {
    std::cerr << "viscowave: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "viscowave: numerical error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitInput;
}
