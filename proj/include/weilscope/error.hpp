#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weilscope {

enum class Errc {
  NotPrime,
  ReducibleModulus,
  NonPrimitiveRoot,
  DegreeMismatch,
  InvalidArgument,
  InvalidElement,
  IndexOutOfRange,
  LengthMismatch,
  CharacteristicMismatch,
  NotRational,
  NonUnit,
  NotInvertible,
  ZeroScalar,
  FieldTooLarge,
  CacheCorrupt,
  ConfigInvalid,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace weilscope
