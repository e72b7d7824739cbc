#include "weilscope/error.hpp"

namespace weilscope {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::NonPrimitiveRoot: return "NonPrimitiveRoot";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidElement: return "InvalidElement";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::CharacteristicMismatch: return "CharacteristicMismatch";
    case Errc::NotRational: return "NotRational";
    case Errc::NonUnit: return "NonUnit";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::ZeroScalar: return "ZeroScalar";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::CacheCorrupt: return "CacheCorrupt";
    case Errc::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace weilscope
