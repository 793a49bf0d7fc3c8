#pragma once

#include <stdexcept>
#include <string>

namespace dynperc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DYNPERC_DEFINE_ERROR(Name)             \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  }

DYNPERC_DEFINE_ERROR(InvalidWindow);
DYNPERC_DEFINE_ERROR(UnknownComponent);
DYNPERC_DEFINE_ERROR(NoKernel);
DYNPERC_DEFINE_ERROR(EmptyCore);
DYNPERC_DEFINE_ERROR(InvalidSpec);
DYNPERC_DEFINE_ERROR(DomainError);
DYNPERC_DEFINE_ERROR(BadPartition);
DYNPERC_DEFINE_ERROR(Unsatisfiable);
DYNPERC_DEFINE_ERROR(InstanceTooLarge);
DYNPERC_DEFINE_ERROR(TooLarge);
DYNPERC_DEFINE_ERROR(TooLargeForExact);
DYNPERC_DEFINE_ERROR(NotACorrespondence);
DYNPERC_DEFINE_ERROR(MissingSurplus);
DYNPERC_DEFINE_ERROR(InvalidSpace);
DYNPERC_DEFINE_ERROR(ConfigError);
DYNPERC_DEFINE_ERROR(FormatError);

#undef DYNPERC_DEFINE_ERROR

}  // namespace dynperc
