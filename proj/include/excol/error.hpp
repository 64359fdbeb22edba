#pragma once

#include <stdexcept>
#include <string>

namespace excol {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class InvalidFan : public Error {
 public:
  using Error::Error;
};

class UnknownRay : public Error {
 public:
  using Error::Error;
};

class NotACone : public Error {
 public:
  using Error::Error;
};

class DegenerateCenter : public Error {
 public:
  using Error::Error;
};

class TorsionPresent : public Error {
 public:
  using Error::Error;
};

// A chamber touching the search-box boundary carried cohomology. For a
// complete fan this cannot happen, so it points at a bug upstream.
class UnboundedContribution : public Error {
 public:
  using Error::Error;
};

class KOutOfRange : public Error {
 public:
  using Error::Error;
};

class UnsupportedExt : public Error {
 public:
  using Error::Error;
};

class NonLineBundlePresent : public Error {
 public:
  using Error::Error;
};

}  // namespace excol
