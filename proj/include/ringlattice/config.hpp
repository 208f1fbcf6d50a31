#pragma once

#include <map>
#include <string>
#include <vector>

#include "ringlattice/angular.hpp"
#include "ringlattice/bands.hpp"
#include "ringlattice/radial.hpp"

// Flat key = value run configuration. Every key has a typed default; values
// are stored in canonical text form so that equal settings print equally.

namespace ringlattice::app {

enum class KeyKind { integer, real, text };

struct KeySpec {
  std::string name;
  KeyKind kind;
  std::string fallback;  // canonical default
  std::string unit;
  std::string help;
};

/// All accepted keys, in manifest order.
const std::vector<KeySpec>& config_keys();

class SimConfig {
 public:
  SimConfig();

  /// Sets one key; unknown keys and unparsable values raise config errors.
  void set(const std::string& key, const std::string& value);
  /// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
  void load_text(const std::string& text, const std::string& origin = "config");
  void load_file(const std::string& path);

  const std::string& text(const std::string& key) const;
  int integer(const std::string& key) const;
  double real(const std::string& key) const;

  /// Resolved key/value pairs in canonical form.
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  angular::KickParams kick() const;
  bands::LatticeSpec lattice() const;
  radial::BoxParams box() const;
  /// Runs the module validators so that bad combinations fail before any output.
  void validate() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Shortest round-trip decimal form of a double.
std::string canonical_real(double v);

}  // namespace ringlattice::app
