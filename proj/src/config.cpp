#include "manp/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "manp/errors.hpp"

namespace manp {

Preset preset_from_string(const std::string& s) {
  if (s == "uniform") return Preset::uniform;
  if (s == "janus") return Preset::janus;
  if (s == "mms") return Preset::mms;
  throw ConfigError("unknown preset: " + s);
}

Integrator integrator_from_string(const std::string& s) {
  if (s == "euler") return Integrator::euler;
  if (s == "bdf2") return Integrator::bdf2;
  throw ConfigError("unknown integrator: " + s);
}

void RunConfig::finalize() {
  if (finalized) return;

  if (preset == Preset::mms) {
    kappa = 1.0;
    if (!chi) chi = 0.0;
    if (!v0) v0 = 1.0;
    eps_uniform = 0.5;
    if (species.empty())
      species = {SpeciesParams{+1, 0.0, 0.0}, SpeciesParams{-1, 0.0, 0.0}};
    if (!eps_tol) eps_tol = 1e-6;
  } else if (preset == Preset::janus) {
    if (!chi) chi = 198.9437;
    if (!v0) v0 = 0.275 * 0.275 * 0.275;
    if (species.empty()) {
      const double v1 = 0.716 * 0.716 * 0.716;
      const double v2 = 0.676 * 0.676 * 0.676;
      species = {SpeciesParams{+1, v1, 0.716 / 2.0},
                 SpeciesParams{-1, v2, 0.676 / 2.0}};
    }
    if (!eps_tol) eps_tol = 1e-5;
  } else {
    if (!chi) chi = 0.0;
    if (!v0) v0 = 1.0;
    if (species.empty())
      species = {SpeciesParams{+1, 0.0, 0.0}, SpeciesParams{-1, 0.0, 0.0}};
    if (!eps_tol) eps_tol = 1e-6;
  }
  if (init_c.empty()) init_c.assign(species.size(), 0.1);

  if (nx < 2 || ny < 2) throw ConfigError("grid.nx and grid.ny must be >= 2");
  if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("grid lengths must be positive");
  if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (t_final < 0.0) throw ConfigError("time.t_final must be nonnegative");
  if (!(kappa > 0.0)) throw ConfigError("model.kappa must be positive");
  if (!(*v0 > 0.0)) throw ConfigError("model.v0 must be positive");
  if (*chi < 0.0) throw ConfigError("model.chi must be nonnegative");
  if (species.empty()) throw ConfigError("at least one species required");
  if (init_c.size() != species.size())
    throw ConfigError("init.c.* count must match species.count");
  if (preset != Preset::mms)
    for (double c : init_c)
      if (!(c > 0.0)) throw ConfigError("initial concentrations must be positive");
  if (*chi != 0.0)
    for (const SpeciesParams& sp : species)
      if (!(sp.a > 0.0))
        throw ConfigError("species Born radius must be positive when chi != 0");
  if (!(*eps_tol > 0.0)) throw ConfigError("relax.eps_tol must be positive");
  if (max_sweeps < 1) throw ConfigError("relax.max_sweeps must be >= 1");
  if (!(solver_tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (theta_reset_every < 0) throw ConfigError("scheme.theta_reset_every must be >= 0");
  if (mms_dt_rule != "h2" && mms_dt_rule != "h10")
    throw ConfigError("mms.dt_rule must be h2 or h10");

  finalized = true;
}

GridSpec RunConfig::make_grid() const { return GridSpec(nx, ny, lx, ly, x0, y0); }

ModelParams RunConfig::make_model_params(const GridSpec& g) const {
  ModelParams p;
  p.kappa = kappa;
  p.chi = chi.value_or(0.0);
  p.v0 = v0.value_or(1.0);
  p.species = species;
  p.mean_kind = mean_kind;
  p.eps_tol = eps_tol.value_or(1e-6);
  p.solver_tol = solver_tol;
  p.max_sweeps = max_sweeps;
  switch (preset) {
    case Preset::uniform:
      p.dielectric = Dielectric::uniform(eps_uniform);
      break;
    case Preset::mms:
      p.dielectric = Dielectric::uniform(0.5);
      break;
    case Preset::janus:
      p.dielectric = Dielectric::janus(eps_m, eps_w);
      p.fixed_charge = janus_fixed_charge(g);
      break;
  }
  return p;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  const int i = static_cast<int>(std::lround(d));
  if (std::abs(d - i) > 1e-9) throw ConfigError(key + " must be an integer");
  return i;
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(conv(key, item));
  }
  if (out.empty()) throw ConfigError(key + " must be a non-empty list");
  return out;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
    kv[key] = val;
  }

  RunConfig cfg;
  if (auto it = kv.find("model.preset"); it != kv.end())
    cfg.preset = preset_from_string(it->second);

  int species_count = -1;
  if (auto it = kv.find("species.count"); it != kv.end())
    species_count = to_int("species.count", it->second);

  // Fill preset defaults first so individual species/init keys override them.
  {
    RunConfig defaults = cfg;
    defaults.species.clear();
    defaults.init_c.clear();
    defaults.finalize();
    cfg.species = defaults.species;
    cfg.init_c = defaults.init_c;
    if (species_count > 0) {
      cfg.species.resize(species_count);
      cfg.init_c.resize(species_count, 0.1);
    }
  }

  auto species_index = [&](const std::string& key, const std::string& mid) {
    const int k = to_int(key, mid);
    if (k < 1 || k > static_cast<int>(cfg.species.size()))
      throw ConfigError(key + ": species index out of range");
    return k - 1;
  };

  for (const auto& [key, val] : kv) {
    if (key == "model.preset" || key == "species.count") continue;
    if (key == "grid.nx") cfg.nx = to_int(key, val);
    else if (key == "grid.ny") cfg.ny = to_int(key, val);
    else if (key == "grid.lx") cfg.lx = to_double(key, val);
    else if (key == "grid.ly") cfg.ly = to_double(key, val);
    else if (key == "grid.x0") cfg.x0 = to_double(key, val);
    else if (key == "grid.y0") cfg.y0 = to_double(key, val);
    else if (key == "model.kappa") cfg.kappa = to_double(key, val);
    else if (key == "model.chi") cfg.chi = to_double(key, val);
    else if (key == "model.v0") cfg.v0 = to_double(key, val);
    else if (key == "model.eps") cfg.eps_uniform = to_double(key, val);
    else if (key == "model.eps_m") cfg.eps_m = to_double(key, val);
    else if (key == "model.eps_w") cfg.eps_w = to_double(key, val);
    else if (key == "time.dt") cfg.dt = to_double(key, val);
    else if (key == "time.t_final") cfg.t_final = to_double(key, val);
    else if (key == "scheme.integrator") cfg.integrator = integrator_from_string(val);
    else if (key == "scheme.theta_reset_every") cfg.theta_reset_every = to_int(key, val);
    else if (key == "scheme.mean") cfg.mean_kind = mean_kind_from_string(val);
    else if (key == "relax.eps_tol") cfg.eps_tol = to_double(key, val);
    else if (key == "relax.max_sweeps") cfg.max_sweeps = to_int(key, val);
    else if (key == "solver.tol") cfg.solver_tol = to_double(key, val);
    else if (key == "output.dir") cfg.output_dir = val;
    else if (key == "output.snapshot_every") cfg.snapshot_every = to_int(key, val);
    else if (key == "mms.h_list") cfg.mms_h_list = to_list<double>(key, val, to_double);
    else if (key == "mms.dt_rule") cfg.mms_dt_rule = val;
    else if (key == "mms.t_final") cfg.mms_t_final = to_double(key, val);
    else if (key == "bench.sizes") cfg.bench_sizes = to_list<int>(key, val, to_int);
    else if (key == "bench.repeats") cfg.bench_repeats = to_int(key, val);
    else if (key == "bench.warm_steps") cfg.bench_warm_steps = to_int(key, val);
    else if (key.rfind("species.", 0) == 0 || key.rfind("init.c.", 0) == 0) {
      if (key.rfind("init.c.", 0) == 0) {
        cfg.init_c.at(species_index(key, key.substr(7))) = to_double(key, val);
      } else {
        const auto dot = key.find('.', 8);
        if (dot == std::string::npos) throw ConfigError("unknown key: " + key);
        const int idx = species_index(key, key.substr(8, dot - 8));
        const std::string field = key.substr(dot + 1);
        if (field == "q") cfg.species[idx].q = to_int(key, val);
        else if (field == "v") cfg.species[idx].v = to_double(key, val);
        else if (field == "a") cfg.species[idx].a = to_double(key, val);
        else throw ConfigError("unknown key: " + key);
      }
    } else {
      throw ConfigError("unknown key: " + key);
    }
  }

  cfg.finalize();
  return cfg;
}

}  // namespace manp
