#pragma once

// Machine-readable verification reports:
//   {check, paper_ref, params, pass, margin, rows}
// "paper_ref" carries the inequality being checked. Non-finite numbers are
// written as null.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dirac/annulus.hpp"
#include "dirac/glued_model.hpp"
#include "dirac/gronwall.hpp"
#include "dirac/neck.hpp"
#include "dirac/spectral_flow.hpp"

namespace dirac {

using Json = nlohmann::ordered_json;

/// Finite doubles as numbers, everything else as null.
Json number(double x);

struct Report {
  std::string check;
  std::string paper_ref;
  Json params = Json::object();
  bool pass = true;
  double margin = 0;
  Json rows = Json::array();

  Json to_json() const;
  /// Pretty-printed JSON followed by a newline.
  void write(std::ostream& os) const;
};

Json to_json(const RatioReport& r);
Json to_json(const CorollaryReport& r);
Json to_json(const Prop33Report& r);
Json to_json(const ClosenessReport& r);
Json to_json(const ClaimReport& r);
Json to_json(const RayleighReport& r);
Json to_json(const SignedCount& c);
Json to_json(const CrossingReport& r);
Json to_json(const ComparisonReport& r);  // summary without the sampled columns

}  // namespace dirac
