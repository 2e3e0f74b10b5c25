#pragma once

#include "mcf/error.hpp"
#include "mcf/lattice.hpp"

#include <json.hpp>

#include <string>

namespace mcf::cli {

/// Malformed or inconsistent input (exit code 2).
class ConfigError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

struct BuildConfig {
  int n = 0;
  int k = 0;
  SeedSpec seed;
};

/// {N, K, lambda0?, jet_len?, H00, kappas?, c?}
///   H00: "exp" | "kinetic_exp" | {"kind": "exp"|"kinetic_exp", "scale": a}
///        | {"kind": "poly", "coeffs": [...]}
///   kappas: "auto" (family constants, or zeros for poly) | [kappa_1, ...]
BuildConfig parse_config(const nlohmann::json& j);

nlohmann::json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// A lattice file, or a build config that is built on the fly.
CoefficientLattice load_lattice(const std::string& path);

/// FNV-1a of the serialized seed, as 16 hex digits.
std::string seed_hash(const SeedSpec& seed);

} // namespace mcf::cli
