#pragma once

#include <stdexcept>
#include <string>

namespace hamext {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HAMEXT_DEFINE_ERROR(Name)             \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

HAMEXT_DEFINE_ERROR(DimensionError);
HAMEXT_DEFINE_ERROR(InvalidMatrix);
HAMEXT_DEFINE_ERROR(InvalidArgument);
HAMEXT_DEFINE_ERROR(LogDomainError);
HAMEXT_DEFINE_ERROR(SeriesDivergence);
HAMEXT_DEFINE_ERROR(SingularMatrix);
HAMEXT_DEFINE_ERROR(StageSolveError);
HAMEXT_DEFINE_ERROR(NonConvergence);
HAMEXT_DEFINE_ERROR(NotSymplectic);
HAMEXT_DEFINE_ERROR(NotApplicable);
HAMEXT_DEFINE_ERROR(EmptyInput);
HAMEXT_DEFINE_ERROR(ConfigError);

#undef HAMEXT_DEFINE_ERROR

}  // namespace hamext
