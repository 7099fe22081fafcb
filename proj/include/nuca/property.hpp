#pragma once

#include <string>

#include "nuca/errors.hpp"

namespace nuca {

enum class Property {
  nilpotent,
  periodic,
  eventually_periodic,
  cayley_hamilton,
  injective,
  post_surjective,
};

inline std::string property_name(Property p) {
  switch (p) {
    case Property::nilpotent: return "nilpotent";
    case Property::periodic: return "periodic";
    case Property::eventually_periodic: return "eventually-periodic";
    case Property::cayley_hamilton: return "cayley-hamilton";
    case Property::injective: return "injective";
    case Property::post_surjective: return "post-surjective";
  }
  throw SpecError("unknown property");
}

inline Property property_from_name(const std::string& s) {
  if (s == "nilpotent") return Property::nilpotent;
  if (s == "periodic") return Property::periodic;
  if (s == "eventually-periodic") return Property::eventually_periodic;
  if (s == "cayley-hamilton") return Property::cayley_hamilton;
  if (s == "injective") return Property::injective;
  if (s == "post-surjective") return Property::post_surjective;
  throw SpecError("unknown property name: " + s);
}

}  // namespace nuca
