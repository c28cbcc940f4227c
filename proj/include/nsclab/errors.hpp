#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nsclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NSCLAB_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  };

NSCLAB_DEFINE_ERROR(InvalidParams)
NSCLAB_DEFINE_ERROR(VacuumBreach)
NSCLAB_DEFINE_ERROR(NegativeTemperature)
NSCLAB_DEFINE_ERROR(Degenerate)
NSCLAB_DEFINE_ERROR(BoundViolation)
NSCLAB_DEFINE_ERROR(EigenvalueCollision)
NSCLAB_DEFINE_ERROR(OutOfBand)
NSCLAB_DEFINE_ERROR(QuadratureFailure)
NSCLAB_DEFINE_ERROR(DivergentIntegral)
NSCLAB_DEFINE_ERROR(AmplitudeTooLarge)
NSCLAB_DEFINE_ERROR(CFLViolation)
NSCLAB_DEFINE_ERROR(NonPositiveValue)
NSCLAB_DEFINE_ERROR(WindowTooSmall)
NSCLAB_DEFINE_ERROR(ConfigError)

#undef NSCLAB_DEFINE_ERROR

/// Configuration error tied to one key; section is empty for file-level problems.
class ConfigKeyError : public ConfigError {
 public:
  ConfigKeyError(std::string section, std::string key, const std::string& what)
      : ConfigError(what), section_(std::move(section)), key_(std::move(key)) {}
  const std::string& section() const { return section_; }
  const std::string& key() const { return key_; }

 private:
  std::string section_;
  std::string key_;
};

}  // namespace nsclab
