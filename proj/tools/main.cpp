/*
   Copyright 2026 The fdrlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fdrlab/criticality.hpp"
#include "fdrlab/io.hpp"
#include "fdrlab/pi0.hpp"
#include "fdrlab/simulation.hpp"
#include "fdrlab/ttest.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

struct ModelSpec {
  std::string family = "gaussian";
  std::optional<double> theta;
  double gamma = 2.0;
  std::optional<int> df;
  std::optional<double> delta;
  std::optional<int> n_x, n_y;
  double pi0 = 0.5;
  std::string sided = "one";

  fdrlab::MixtureModel build() const {
    double th;
    std::optional<int> k = df;
    if (delta) {
      if (!n_x || !n_y) {
        throw ConfigError("model: delta requires n_x and n_y");
      }
      const fdrlab::EffectSpec effect{*delta, *n_x, *n_y};
      th = effect.theta();
      k = effect.df();
    } else if (theta) {
      th = *theta;
    } else {
      throw ConfigError("model: provide theta or (delta, n_x, n_y)");
    }
    fdrlab::AlternativeFamily fam = [&] {
      if (family == "gaussian") return fdrlab::AlternativeFamily::gaussian(th);
      if (family == "laplace") return fdrlab::AlternativeFamily::laplace(th);
      if (family == "subbotin")
        return fdrlab::AlternativeFamily::subbotin(th, gamma);
      if (family == "student") {
        if (!k) throw ConfigError("model: student family requires df");
        return fdrlab::AlternativeFamily::student(*k, th);
      }
      throw ConfigError("model: unknown family '" + family + "'");
    }();
    fdrlab::Sidedness sid;
    if (sided == "one") {
      sid = fdrlab::Sidedness::OneSided;
    } else if (sided == "two") {
      sid = fdrlab::Sidedness::TwoSided;
    } else {
      throw ConfigError("model: sided must be 'one' or 'two'");
    }
    return fdrlab::MixtureModel(pi0, fam, sid);
  }

  static ModelSpec from_json(const json& j) {
    reject_unknown_keys(j, "model",
                        {"family", "theta", "gamma", "df", "delta", "n_x",
                         "n_y", "pi0", "sided"});
    ModelSpec spec;
    if (j.contains("family")) spec.family = j.at("family").get<std::string>();
    if (j.contains("theta")) spec.theta = j.at("theta").get<double>();
    if (j.contains("gamma")) spec.gamma = j.at("gamma").get<double>();
    if (j.contains("df")) spec.df = j.at("df").get<int>();
    if (j.contains("delta")) spec.delta = j.at("delta").get<double>();
    if (j.contains("n_x")) spec.n_x = j.at("n_x").get<int>();
    if (j.contains("n_y")) spec.n_y = j.at("n_y").get<int>();
    if (j.contains("pi0")) spec.pi0 = j.at("pi0").get<double>();
    if (j.contains("sided")) spec.sided = j.at("sided").get<std::string>();
    return spec;
  }

  json to_json() const {
    json j;
    j["family"] = family;
    if (theta) j["theta"] = *theta;
    if (family == "subbotin") j["gamma"] = gamma;
    if (df) j["df"] = *df;
    if (delta) j["delta"] = *delta;
    if (n_x) j["n_x"] = *n_x;
    if (n_y) j["n_y"] = *n_y;
    j["pi0"] = pi0;
    j["sided"] = sided;
    return j;
  }
};

fdrlab::Pi0Estimator estimator_from_json(const json& j) {
  reject_unknown_keys(j, "estimator", {"kind", "lambda", "order", "eta_c", "eta"});
  fdrlab::Pi0Estimator est;
  const std::string kind = j.value("kind", std::string("storey_fixed"));
  if (kind == "storey_fixed") {
    est = fdrlab::Pi0Estimator::storey(j.value("lambda", 0.5));
  } else if (kind == "storey_bandwidth" || kind == "kernel") {
    fdrlab::EtaRule eta;
    if (j.contains("eta")) {
      eta = fdrlab::EtaRule::explicit_eta(j.at("eta").get<double>());
    } else if (j.contains("eta_c")) {
      eta = fdrlab::EtaRule::power_log(j.at("eta_c").get<double>());
    }
    const int order = j.value("order", 1);
    est = kind == "storey_bandwidth"
              ? fdrlab::Pi0Estimator::storey_bandwidth(order, eta)
              : fdrlab::Pi0Estimator::kernel(order, eta);
  } else {
    throw ConfigError("estimator: unknown kind '" + kind + "'");
  }
  return est;
}

json estimator_to_json(const fdrlab::Pi0Estimator& est) {
  json j;
  j["kind"] = est.name();
  if (est.kind == fdrlab::Pi0Estimator::Kind::StoreyFixed) {
    j["lambda"] = est.lambda;
  } else {
    j["order"] = est.order;
    if (est.eta.kind == fdrlab::EtaRule::Kind::Explicit) {
      j["eta"] = est.eta.value;
    } else {
      j["eta_c"] = est.eta.value;
    }
  }
  return j;
}

std::vector<double> alpha_grid_from_json(const json& j) {
  if (j.is_array()) {
    return j.get<std::vector<double>>();
  }
  reject_unknown_keys(j, "alpha_grid", {"count", "max"});
  const int count = j.value("count", 50);
  const double max = j.value("max", 0.5);
  if (count < 1 || !(max > 0.0 && max <= 1.0)) {
    throw ConfigError("alpha_grid: invalid generator");
  }
  std::vector<double> grid(count);
  for (int i = 1; i <= count; ++i) {
    grid[i - 1] = max * i / count;
  }
  return grid;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_config(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at byte " + std::to_string(e.byte) +
                      ": " + e.what());
  }
}

std::filesystem::path out_path(const std::string& dir, const char* name) {
  return std::filesystem::path(dir) / name;
}

// ---------------------------------------------------------------------------
// Subcommand payloads
// ---------------------------------------------------------------------------

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 20260809;
  int threads = 1;
};

int run_crit(const ModelSpec& spec, const CommonArgs& common) {
  const auto model = spec.build();
  const auto report = fdrlab::purity_report(model);
  const std::string payload = fdrlab::report_to_json(report);
  std::cout << payload << "\n";
  if (!common.out_dir.empty() && common.out_dir != "-") {
    fdrlab::io::atomic_write(out_path(common.out_dir, "crit.json").string(),
                             payload + "\n");
  }
  return kExitOk;
}

int run_dist(const ModelSpec& spec, const CommonArgs& common, int grid_points) {
  const auto model = spec.build();
  std::string stat = "t,f0_pdf,f1_pdf,f0_cdf,f1_cdf\n";
  const double t_max = 8.0 + model.family.theta();
  for (int i = 0; i <= grid_points; ++i) {
    const double t = -t_max + 2.0 * t_max * i / grid_points;
    stat += fdrlab::io::format_double(t);
    stat += ',';
    stat += fdrlab::io::format_double(f0_pdf(model.family, t));
    stat += ',';
    stat += fdrlab::io::format_double(f1_pdf(model.family, t));
    stat += ',';
    stat += fdrlab::io::format_double(f0_cdf(model.family, t));
    stat += ',';
    stat += fdrlab::io::format_double(f1_cdf(model.family, t));
    stat += '\n';
  }
  fdrlab::io::atomic_write(out_path(common.out_dir, "dist_statistic.csv").string(),
                           stat);

  std::string pv = "u,g1_pdf,g1_cdf,g_pdf,g_cdf\n";
  for (int i = 1; i <= grid_points; ++i) {
    const double u = static_cast<double>(i) / grid_points;
    pv += fdrlab::io::format_double(u);
    pv += ',';
    pv += fdrlab::io::format_double(g1_pdf(model, u));
    pv += ',';
    pv += fdrlab::io::format_double(g1_cdf(model, u));
    pv += ',';
    pv += fdrlab::io::format_double(mixture_pdf(model, u));
    pv += ',';
    pv += fdrlab::io::format_double(mixture_cdf(model, u));
    pv += '\n';
  }
  fdrlab::io::atomic_write(out_path(common.out_dir, "dist_pvalue.csv").string(),
                           pv);
  return kExitOk;
}

int run_simulate(const json& cfg, const CommonArgs& common) {
  reject_unknown_keys(
      cfg, "config",
      {"version", "command", "model", "experiment", "output", "seed_rule"});
  const auto spec = ModelSpec::from_json(cfg.at("model"));
  const json& exp = cfg.at("experiment");
  reject_unknown_keys(exp, "experiment",
                      {"m", "B", "seed", "alpha_grid", "quantiles",
                       "procedure", "estimator", "bernoulli_labels"});
  fdrlab::SimulationConfig sim(spec.build());
  sim.m = exp.value("m", 1000);
  sim.B = exp.value("B", 1000);
  sim.seed = exp.value("seed", common.seed);
  sim.threads = common.threads;
  sim.alpha_grid = alpha_grid_from_json(
      exp.contains("alpha_grid") ? exp.at("alpha_grid") : json::object());
  if (exp.contains("quantiles")) {
    sim.quantiles = exp.at("quantiles").get<std::vector<double>>();
  }
  sim.bernoulli_labels = exp.value("bernoulli_labels", false);
  const std::string procedure = exp.value("procedure", std::string("standard"));
  if (procedure == "plug_in") {
    sim.procedure = fdrlab::ProcedureKind::PlugIn;
    if (exp.contains("estimator")) {
      sim.estimator = estimator_from_json(exp.at("estimator"));
    }
  } else if (procedure != "standard") {
    throw ConfigError("experiment: procedure must be standard or plug_in");
  }

  const auto summary = fdrlab::run(sim);
  fdrlab::write_summary_csv(out_path(common.out_dir, "summary.csv").string(),
                            summary);

  json sidecar;
  sidecar["version"] = 1;
  sidecar["command"] = "simulate";
  sidecar["model"] = spec.to_json();
  json expj;
  expj["m"] = sim.m;
  expj["B"] = sim.B;
  expj["seed"] = sim.seed;
  expj["alpha_grid"] = sim.alpha_grid;
  expj["quantiles"] = sim.quantiles;
  expj["procedure"] = procedure;
  if (sim.procedure == fdrlab::ProcedureKind::PlugIn) {
    expj["estimator"] = estimator_to_json(sim.estimator);
  }
  expj["bernoulli_labels"] = sim.bernoulli_labels;
  sidecar["experiment"] = expj;
  sidecar["seed_rule"] = summary.seed_rule;
  fdrlab::io::atomic_write(out_path(common.out_dir, "summary.json").string(),
                           sidecar.dump(2) + "\n");
  return kExitOk;
}

int run_pi0(const json& cfg, const CommonArgs& common,
            const std::string& pvalues_path) {
  fdrlab::Pi0Estimator estimator;
  std::vector<double> pvalues;
  json sidecar;
  sidecar["version"] = 1;
  sidecar["command"] = "pi0";
  if (!pvalues_path.empty()) {
    std::ifstream in(pvalues_path);
    if (!in) {
      throw ConfigError("cannot open p-value file " + pvalues_path);
    }
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (first && line.find("p_value") != std::string::npos) {
        first = false;
        continue;
      }
      first = false;
      // Either bare values or index,p_value(,is_null) rows.
      const auto comma = line.find(',');
      const std::string field =
          comma == std::string::npos
              ? line
              : line.substr(comma + 1, line.find(',', comma + 1) - comma - 1);
      pvalues.push_back(std::stod(field));
    }
    if (cfg.contains("estimator")) {
      estimator = estimator_from_json(cfg.at("estimator"));
    }
  } else {
    reject_unknown_keys(cfg, "config",
                        {"version", "command", "model", "experiment", "output"});
    const auto spec = ModelSpec::from_json(cfg.at("model"));
    const json& exp = cfg.at("experiment");
    reject_unknown_keys(exp, "experiment", {"m", "seed", "estimator"});
    const int m = exp.value("m", 100000);
    const auto sample = fdrlab::sample_pvalues(
        spec.build(), m, exp.value("seed", common.seed), 0);
    pvalues = sample.pvalues;
    if (exp.contains("estimator")) {
      estimator = estimator_from_json(exp.at("estimator"));
    }
    sidecar["model"] = spec.to_json();
  }
  const auto estimate = fdrlab::estimate_pi0(estimator, pvalues);
  const std::string payload = fdrlab::estimate_to_json(estimator, estimate);
  std::cout << payload << "\n";
  fdrlab::io::atomic_write(out_path(common.out_dir, "pi0.json").string(),
                           payload + "\n");
  return kExitOk;
}

int run_fdp_law(const json& cfg, const CommonArgs& common) {
  reject_unknown_keys(cfg, "config",
                      {"version", "command", "model", "experiment", "output"});
  const auto spec = ModelSpec::from_json(cfg.at("model"));
  const json& exp = cfg.at("experiment");
  reject_unknown_keys(exp, "experiment",
                      {"alpha", "m_list", "B", "seed", "estimator"});
  const double alpha = exp.value("alpha", 0.45);
  const auto m_list = exp.value("m_list", std::vector<int>{100000});
  const int B = exp.value("B", 2000);
  fdrlab::Pi0Estimator estimator;
  if (exp.contains("estimator")) {
    estimator = estimator_from_json(exp.at("estimator"));
  }
  const auto rows = fdrlab::fdp_law_experiment(
      spec.build(), alpha, estimator, m_list, B, exp.value("seed", common.seed),
      common.threads);
  fdrlab::write_fdp_law_csv(out_path(common.out_dir, "fdp_law.csv").string(),
                            rows);
  json sidecar;
  sidecar["version"] = 1;
  sidecar["command"] = "fdp-law";
  sidecar["model"] = spec.to_json();
  sidecar["experiment"] = {{"alpha", alpha},
                           {"m_list", m_list},
                           {"B", B},
                           {"seed", exp.value("seed", common.seed)},
                           {"estimator", estimator_to_json(estimator)}};
  fdrlab::io::atomic_write(out_path(common.out_dir, "fdp_law.json").string(),
                           sidecar.dump(2) + "\n");
  return kExitOk;
}

struct TtestArgs {
  std::string data_path;
  std::string labels_path;
  bool synthetic = false;
  double delta = 0.9;
  double pi0 = 0.5;
  int m = 3051;
  int n_x = 27;
  int n_y = 11;
  double sigma = 1.0;
  std::vector<double> rates{1.0, 0.6, 0.3};
  int B = 100;
  int alpha_count = 50;
  double alpha_max = 0.5;
};

int run_ttest(const TtestArgs& args, const CommonArgs& common) {
  fdrlab::TwoSampleDataset data;
  if (args.synthetic) {
    data = fdrlab::synthetic_dataset(args.delta, args.pi0, args.m, args.n_x,
                                     args.n_y, args.sigma, common.seed);
  } else {
    if (args.data_path.empty() || args.labels_path.empty()) {
      throw ConfigError("ttest: provide --data and --labels, or --synthetic");
    }
    data = fdrlab::load_dataset_csv(args.data_path, args.labels_path);
  }
  std::vector<double> grid(args.alpha_count);
  for (int i = 1; i <= args.alpha_count; ++i) {
    grid[i - 1] = args.alpha_max * i / args.alpha_count;
  }
  fdrlab::ResamplingPlan plan;
  plan.rates = args.rates;
  plan.B = args.B;
  plan.seed = common.seed;
  const fdrlab::StudentAsymptote asym{args.delta, args.pi0};
  const auto curve =
      fdrlab::rejection_curve(data, grid, plan, asym, common.threads);
  fdrlab::write_rejection_csv(
      out_path(common.out_dir, "rejection.csv").string(), curve);
  fdrlab::write_asymptote_csv(
      out_path(common.out_dir, "asymptote.csv").string(), curve);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-testing laboratory: criticality, FDR procedures, "
               "pi0 estimation, and Monte Carlo studies"};
  app.require_subcommand(1);
  app.fallthrough(); // --out/--seed/--threads may follow the subcommand

  CommonArgs common;
  app.add_option("--out", common.out_dir, "Output directory");
  app.add_option("--seed", common.seed, "Base seed for counter streams");
  app.add_option("--threads", common.threads,
                 "Worker threads (affects wall time only, never results)");

  ModelSpec spec;
  auto add_model_flags = [&spec](CLI::App* cmd) {
    cmd->add_option("--family", spec.family, "gaussian|laplace|subbotin|student");
    cmd->add_option_function<double>(
        "--theta", [&spec](double v) { spec.theta = v; }, "Non-centrality");
    cmd->add_option("--gamma", spec.gamma, "Subbotin exponent");
    cmd->add_option_function<int>(
        "--df", [&spec](int v) { spec.df = v; }, "Student degrees of freedom");
    cmd->add_option_function<double>(
        "--delta", [&spec](double v) { spec.delta = v; }, "Effect size");
    cmd->add_option_function<int>(
        "--nx", [&spec](int v) { spec.n_x = v; }, "Group X size");
    cmd->add_option_function<int>(
        "--ny", [&spec](int v) { spec.n_y = v; }, "Group Y size");
    cmd->add_option("--pi0", spec.pi0, "Fraction of true nulls");
    cmd->add_option("--sided", spec.sided, "one|two");
  };

  auto* crit = app.add_subcommand("crit", "Criticality / purity report");
  add_model_flags(crit);

  auto* dist = app.add_subcommand("dist", "Tabulate F0/F1/G1/G on a grid");
  add_model_flags(dist);
  int grid_points = 200;
  dist->add_option("--grid", grid_points, "Grid points");

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Power/FDP study over alpha");
  simulate->add_option("--config", config_path, "JSON config")->required();

  auto* pi0cmd = app.add_subcommand("pi0", "Estimate the null proportion");
  std::string pvalues_path;
  pi0cmd->add_option("--config", config_path, "JSON config");
  pi0cmd->add_option("--pvalues", pvalues_path, "CSV of p-values");

  auto* fdp = app.add_subcommand("fdp-law", "Plug-in FDP limit law experiment");
  fdp->add_option("--config", config_path, "JSON config")->required();

  TtestArgs targs;
  auto* ttest = app.add_subcommand("ttest", "Two-sample resampling study");
  ttest->add_option("--data", targs.data_path, "Data matrix CSV");
  ttest->add_option("--labels", targs.labels_path, "sample_id,group CSV");
  ttest->add_flag("--synthetic", targs.synthetic, "Generate synthetic data");
  ttest->add_option("--delta", targs.delta, "Effect size");
  ttest->add_option("--pi0", targs.pi0, "Fraction of true nulls");
  ttest->add_option("--m", targs.m, "Synthetic feature count");
  ttest->add_option("--nx", targs.n_x, "Synthetic group X size");
  ttest->add_option("--ny", targs.n_y, "Synthetic group Y size");
  ttest->add_option("--sigma", targs.sigma, "Synthetic noise scale");
  ttest->add_option("--rates", targs.rates, "Sampling rates");
  ttest->add_option("--B", targs.B, "Resamples per rate");
  ttest->add_option("--alpha-count", targs.alpha_count, "Alpha grid points");
  ttest->add_option("--alpha-max", targs.alpha_max, "Alpha grid maximum");

  CLI11_PARSE(app, argc, argv);

  try {
    if (crit->parsed()) {
      return run_crit(spec, common);
    }
    if (dist->parsed()) {
      return run_dist(spec, common, grid_points);
    }
    if (simulate->parsed()) {
      return run_simulate(parse_config(config_path), common);
    }
    if (pi0cmd->parsed()) {
      json cfg = config_path.empty() ? json::object() : parse_config(config_path);
      return run_pi0(cfg, common, pvalues_path);
    }
    if (fdp->parsed()) {
      return run_fdp_law(parse_config(config_path), common);
    }
    if (ttest->parsed()) {
      return run_ttest(targs, common);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
