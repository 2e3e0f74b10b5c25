#include "config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mcf::cli {

namespace {

template <class T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(std::string("config: missing \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: \"") + key + "\" has the wrong type");
  }
}

template <class T>
T field_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

} // namespace

BuildConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  BuildConfig cfg;
  cfg.n = field<int>(j, "N");
  cfg.k = field<int>(j, "K");
  if (cfg.n < 3) {
    throw ConfigError("config: N must be at least 3");
  }
  if (cfg.k < 1) {
    throw ConfigError("config: K must be at least 1");
  }
  const double lambda0 = field_or<double>(j, "lambda0", 0.0);
  const int jet_len = field_or<int>(j, "jet_len", cfg.k + 4);
  if (jet_len < cfg.k + 2) {
    throw ConfigError("config: jet_len " + std::to_string(jet_len) + " is below K+2");
  }
  if (!j.contains("H00")) {
    throw ConfigError("config: missing \"H00\"");
  }
  const auto& h = j.at("H00");
  std::string kind;
  double scale = 1.0;
  std::vector<double> coeffs;
  if (h.is_string()) {
    kind = h.get<std::string>();
  } else if (h.is_object()) {
    kind = field<std::string>(h, "kind");
    scale = field_or<double>(h, "scale", 1.0);
    if (kind == "poly") {
      coeffs = field<std::vector<double>>(h, "coeffs");
    }
  } else {
    throw ConfigError("config: H00 must be a string or an object");
  }
  const int kappa_count = max_kappa_index(cfg.n, cfg.k);
  if (kind == "exp") {
    cfg.seed = SeedSpec::exponential(scale, lambda0, jet_len, kappa_count);
  } else if (kind == "kinetic_exp") {
    cfg.seed = kinetic_exponential_seed(scale, lambda0, jet_len, kappa_count);
  } else if (kind == "poly") {
    if (coeffs.empty()) {
      throw ConfigError("config: poly H00 needs coefficients");
    }
    cfg.seed = SeedSpec::polynomial(coeffs, lambda0, jet_len);
  } else {
    throw ConfigError("config: unknown H00 kind \"" + kind + "\"");
  }
  if (j.contains("kappas") && !(j.at("kappas").is_string() && j.at("kappas") == "auto")) {
    cfg.seed.kappas = field<std::vector<double>>(j, "kappas");
  }
  cfg.seed.supplementary = field_or<std::vector<double>>(j, "c", {});
  return cfg;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path);
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write " + path);
  }
  out << text;
}

CoefficientLattice load_lattice(const std::string& path) {
  const nlohmann::json j = read_json(path);
  if (j.contains("H00")) {
    const BuildConfig cfg = parse_config(j);
    return build_lattice(cfg.seed, cfg.n, cfg.k);
  }
  try {
    return j.get<CoefficientLattice>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": not a lattice file (" + e.what() + ")");
  }
}

std::string seed_hash(const SeedSpec& seed) {
  const std::string text = nlohmann::json(seed).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace mcf::cli
