#ifndef KNOWHOW_FIXTURES_HPP
#define KNOWHOW_FIXTURES_HPP

#include <string>
#include <string_view>
#include <vector>

#include "knowhow/system.hpp"

namespace knowhow {

/// A satisfaction claim about a bundled system: `formula` evaluates to
/// `expected` at every listed history.
struct Claim {
  std::string description;
  std::vector<std::string> histories;
  std::string formula;
  bool expected;
};

/// Names of the bundled systems ("t1", "t2").
std::vector<std::string> fixture_names();
/// Raw model-file text. Throws std::invalid_argument for unknown names.
std::string_view fixture_text(std::string_view name);
System fixture_system(std::string_view name);
const std::vector<Claim>& fixture_claims(std::string_view name);

}  // namespace knowhow

#endif  // KNOWHOW_FIXTURES_HPP
