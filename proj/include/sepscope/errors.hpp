#pragma once

#include <stdexcept>
#include <string>

namespace sepscope {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct NotHermitian : Error {
  using Error::Error;
};

struct NotAState : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct UnknownState : Error {
  using Error::Error;
};

struct NotIsometry : Error {
  using Error::Error;
};

struct NotSameState : Error {
  using Error::Error;
};

struct InternalInconsistency : Error {
  using Error::Error;
};

struct CertificateFailure : Error {
  using Error::Error;
};

}  // namespace sepscope
