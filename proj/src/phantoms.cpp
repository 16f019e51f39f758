#include "manitomo/phantoms.hpp"

namespace manitomo {

AnglePhantom parse_angle_phantom(std::string_view name) {
  if (name == "two-region") return AnglePhantom::two_region;
  if (name == "four-region") return AnglePhantom::four_region;
  throw std::invalid_argument("unknown angle phantom '" + std::string(name) + "'");
}

VectorPhantomKind parse_vector_phantom(std::string_view name) {
  if (name == "length-jump") return VectorPhantomKind::length_jump;
  if (name == "direction-jump") return VectorPhantomKind::direction_jump;
  if (name == "curl") return VectorPhantomKind::curl;
  throw std::invalid_argument("unknown vector phantom '" + std::string(name) + "'");
}

}  // namespace manitomo
