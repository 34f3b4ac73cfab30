#include "sphere_trace/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sphere_trace {

namespace {

const std::vector<std::string> kKeys = {
    "equation",      "scheme",        "quantity",     "kappa",
    "T",             "N",             "M",            "seed",
    "levy.kind",     "levy.gamma_spectrum", "levy.complex", "initial.kind",
    "initial.gamma", "monopole",      "record_every", "out_dir",
    "snapshot.n_theta", "snapshot.n_phi"};

const std::vector<std::string> kDefaults = {
    "wave",          "exp",           "energy",       "16",
    "3",             "200",           "2000",         "12345",
    "compensated",   "1 4",           "false",        "paper",
    "3.00001",       "on",            "1",            "out",
    "0",             "0"};

int key_index(const std::string& key) {
  const auto it = std::find(kKeys.begin(), kKeys.end(), key);
  if (it == kKeys.end()) throw std::invalid_argument("unknown config key: " + key);
  return static_cast<int>(it - kKeys.begin());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("invalid value for " + key + ": '" + value + "'");
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  bad_value(key, value);
}

}  // namespace

RunConfig::RunConfig() : values_(kDefaults) {}

const std::vector<std::string>& RunConfig::keys() { return kKeys; }

void RunConfig::set(const std::string& key, const std::string& value) {
  values_[key_index(key)] = trim(value);
}

const std::string& RunConfig::get(const std::string& key) const {
  return values_[key_index(key)];
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + t);
    set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < kKeys.size(); ++i) os << kKeys[i] << "=" << values_[i] << "\n";
  return os.str();
}

int RunConfig::snapshot_n_theta() const {
  return static_cast<int>(parse_int("snapshot.n_theta", get("snapshot.n_theta")));
}
int RunConfig::snapshot_n_phi() const {
  return static_cast<int>(parse_int("snapshot.n_phi", get("snapshot.n_phi")));
}

ExperimentConfig RunConfig::experiment() const {
  ExperimentConfig cfg;

  const std::string& eq = get("equation");
  if (eq == "wave") cfg.equation = EquationId::Wave;
  else if (eq == "schrodinger") cfg.equation = EquationId::Schrodinger;
  else if (eq == "maxwell") cfg.equation = EquationId::Maxwell;
  else bad_value("equation", eq);

  const std::string& sch = get("scheme");
  if (sch == "fem") cfg.scheme = SchemeId::ForwardEM;
  else if (sch == "bem") cfg.scheme = SchemeId::BackwardEM;
  else if (sch == "exp") cfg.scheme = SchemeId::ExpEuler;
  else if (sch == "adapted-exp") cfg.scheme = SchemeId::AdaptedExpEuler;
  else bad_value("scheme", sch);

  const std::string& qt = get("quantity");
  if (qt == "energy") {
    cfg.quantity = cfg.equation == EquationId::Wave ? QuantityId::WaveEnergy
                   : cfg.equation == EquationId::Schrodinger ? QuantityId::SchrodingerEnergy
                                                             : QuantityId::MaxwellEnergy;
  } else if (qt == "mass") {
    if (cfg.equation != EquationId::Schrodinger) bad_value("quantity", qt);
    cfg.quantity = QuantityId::SchrodingerMass;
  } else {
    bad_value("quantity", qt);
  }

  cfg.kappa = static_cast<int>(parse_int("kappa", get("kappa")));
  cfg.T = parse_real("T", get("T"));
  cfg.steps = static_cast<int>(parse_int("N", get("N")));
  cfg.samples = static_cast<int>(parse_int("M", get("M")));
  cfg.record_every = static_cast<int>(parse_int("record_every", get("record_every")));
  cfg.monopole = parse_bool("monopole", get("monopole"));

  const std::string& kind = get("levy.kind");
  if (kind == "gaussian") cfg.levy.kind = LevyKind::GaussianOnly;
  else if (kind == "compensated") cfg.levy.kind = LevyKind::CompensatedMix;
  else if (kind == "noncompensated") cfg.levy.kind = LevyKind::NonCompensatedMix;
  else bad_value("levy.kind", kind);

  {
    std::string sp = get("levy.gamma_spectrum");
    std::replace(sp.begin(), sp.end(), ',', ' ');
    std::istringstream is(sp);
    double a0 = 0.0, decay = 0.0;
    if (!(is >> a0 >> decay)) bad_value("levy.gamma_spectrum", get("levy.gamma_spectrum"));
    cfg.levy.spectrum = power_law_spectrum(std::max(cfg.kappa, 0), a0, decay);
  }
  cfg.levy.complex_noise = parse_bool("levy.complex", get("levy.complex"));
  cfg.levy.master_seed = static_cast<std::uint64_t>(parse_int("seed", get("seed")));

  const std::string& init = get("initial.kind");
  if (init == "zero") cfg.initial.kind = InitialSpec::Kind::Zero;
  else if (init == "paper") {
    cfg.initial.kind = cfg.equation == EquationId::Wave ? InitialSpec::Kind::PaperWave
                       : cfg.equation == EquationId::Schrodinger
                           ? InitialSpec::Kind::PaperSchrodinger
                           : InitialSpec::Kind::PaperMaxwell;
  } else {
    bad_value("initial.kind", init);
  }
  cfg.initial.gamma = parse_real("initial.gamma", get("initial.gamma"));

  validate_config(cfg);
  return cfg;
}

namespace {

std::vector<Preset> make_presets() {
  using P = std::vector<std::pair<std::string, std::string>>;
  std::vector<Preset> out;
  // Desk-scale presets run M=2000; --paper-scale restores the published M.
  out.push_back({"wave-fig1", "wave energy, T=3, kappa=2^6, N=500",
                 P{{"equation", "wave"}, {"quantity", "energy"}, {"kappa", "64"},
                   {"T", "3"}, {"N", "500"}, {"M", "2000"}},
                 10000});
  out.push_back({"wave-longtime", "wave energy, T=100, tau=0.2",
                 P{{"equation", "wave"}, {"quantity", "energy"}, {"kappa", "64"},
                   {"T", "100"}, {"N", "500"}, {"M", "2000"}},
                 10000});
  out.push_back({"wave-nonzero-mean", "wave energy, non-compensated noise, adapted scheme",
                 P{{"equation", "wave"}, {"quantity", "energy"}, {"kappa", "64"},
                   {"T", "3"}, {"N", "500"}, {"M", "2000"},
                   {"levy.kind", "noncompensated"}, {"scheme", "adapted-exp"}},
                 10000});
  out.push_back({"wave-nonzero-mean-longtime",
                 "wave energy, non-compensated noise, T=100",
                 P{{"equation", "wave"}, {"quantity", "energy"}, {"kappa", "64"},
                   {"T", "100"}, {"N", "500"}, {"M", "2000"},
                   {"levy.kind", "noncompensated"}, {"scheme", "adapted-exp"}},
                 10000});
  out.push_back({"schrodinger-fig", "schrodinger mass, T=3, kappa=2^3, N=300",
                 P{{"equation", "schrodinger"}, {"quantity", "mass"}, {"kappa", "8"},
                   {"T", "3"}, {"N", "300"}, {"M", "2000"}},
                 10000});
  out.push_back({"schrodinger-mass-longtime", "schrodinger mass, T=100",
                 P{{"equation", "schrodinger"}, {"quantity", "mass"}, {"kappa", "8"},
                   {"T", "100"}, {"N", "300"}, {"M", "2000"}},
                 10000});
  out.push_back({"schrodinger-mass-bem", "schrodinger mass, backward Euler-Maruyama",
                 P{{"equation", "schrodinger"}, {"quantity", "mass"}, {"kappa", "8"},
                   {"T", "3"}, {"N", "300"}, {"M", "2000"}, {"scheme", "bem"}},
                 10000});
  out.push_back({"schrodinger-energy", "schrodinger energy, T=3",
                 P{{"equation", "schrodinger"}, {"quantity", "energy"}, {"kappa", "8"},
                   {"T", "3"}, {"N", "300"}, {"M", "2000"}},
                 10000});
  out.push_back({"schrodinger-energy-longtime", "schrodinger energy, T=100",
                 P{{"equation", "schrodinger"}, {"quantity", "energy"}, {"kappa", "8"},
                   {"T", "100"}, {"N", "300"}, {"M", "2000"}},
                 10000});
  out.push_back({"maxwell-fig", "maxwell TE energy, T=3, kappa=2^5, N=300",
                 P{{"equation", "maxwell"}, {"quantity", "energy"}, {"kappa", "32"},
                   {"T", "3"}, {"N", "300"}, {"M", "2000"}},
                 10000});
  out.push_back({"maxwell-longtime", "maxwell TE energy, T=100",
                 P{{"equation", "maxwell"}, {"quantity", "energy"}, {"kappa", "32"},
                   {"T", "100"}, {"N", "300"}, {"M", "2000"}},
                 10000});
  out.push_back({"zero-noise", "all noise amplitudes zero; expected quantities are constant",
                 P{{"equation", "schrodinger"}, {"quantity", "mass"}, {"kappa", "8"},
                   {"T", "3"}, {"N", "100"}, {"M", "8"},
                   {"levy.gamma_spectrum", "0 4"}},
                 0});
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = make_presets();
  return table;
}

RunConfig preset_config(const std::string& name, bool paper_scale) {
  for (const Preset& p : presets()) {
    if (p.name != name) continue;
    RunConfig cfg;
    for (const auto& [k, v] : p.overrides) cfg.set(k, v);
    if (paper_scale && p.paper_samples > 0) cfg.set("M", std::to_string(p.paper_samples));
    return cfg;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

std::uint64_t config_hash(const std::string& echo) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : echo) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace sphere_trace
