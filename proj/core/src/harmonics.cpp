#include "lightcone/harmonics.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace lightcone {

int HarmonicSpec::max_degree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.l);
  return d;
}

void HarmonicSpec::validate() const {
  for (const auto& t : terms) {
    if (t.l < 0 || t.l > kMaxHarmonicDegree || std::abs(t.m) > t.l)
      throw GeometryError(ErrorCode::InvalidArgument,
                          "harmonic term (" + std::to_string(t.l) + "," + std::to_string(t.m) +
                              ") outside 0 <= |m| <= l <= 4");
    if (!std::isfinite(t.amplitude))
      throw GeometryError(ErrorCode::InvalidArgument, "non-finite harmonic amplitude");
  }
}

HarmonicSpec parse_harmonic_spec(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw GeometryError(ErrorCode::InvalidArgument, std::string("harmonic spec: ") + e.what());
  }
  if (!doc.is_array())
    throw GeometryError(ErrorCode::InvalidArgument, "harmonic spec must be an array of [l, m, a]");
  HarmonicSpec spec;
  for (const auto& item : doc) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() ||
        !item[1].is_number_integer() || !item[2].is_number())
      throw GeometryError(ErrorCode::InvalidArgument,
                          "harmonic spec entry must be [int l, int m, number amplitude], got " +
                              item.dump());
    spec.terms.push_back({item[0].get<int>(), item[1].get<int>(), item[2].get<double>()});
  }
  spec.validate();
  return spec;
}

std::string to_json(const HarmonicSpec& spec) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& t : spec.terms) doc.push_back({t.l, t.m, t.amplitude});
  return doc.dump();
}

}  // namespace lightcone
