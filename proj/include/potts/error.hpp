#pragma once

#include <stdexcept>
#include <string>

namespace potts {

enum class Errc {
  InvalidArgument,
  ShapeMismatch,
  LengthMismatch,
  LengthCapExceeded,
  OutOfGrid,
  EmptySearch,
  BoxFlowUnsupported,
  NonfinitePixel,
  InvariantViolation,
  UnsupportedFormat,
  CorruptHeader,
  BadMagic,
  SizeMismatch,
  Io,
};

const char *to_string(Errc code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error
{
public:
  Error(Errc code, const std::string &what)
    : std::runtime_error(what)
    , code_(code)
  {
  }

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

} // namespace potts
