#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace radialwave {

/// Base of every error raised by the library. `module()` names the component
/// that detected the problem so the CLI can report provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

#define RADIALWAVE_DEFINE_ERROR(Name)                                       \
  class Name : public Error {                                               \
   public:                                                                  \
    Name(std::string module, const std::string& what)                       \
        : Error(std::move(module), std::string(#Name) + ": " + what) {}     \
  };

RADIALWAVE_DEFINE_ERROR(DomainError)
RADIALWAVE_DEFINE_ERROR(InterpolationError)
RADIALWAVE_DEFINE_ERROR(ConvergenceError)
RADIALWAVE_DEFINE_ERROR(SingularError)
RADIALWAVE_DEFINE_ERROR(RootError)
RADIALWAVE_DEFINE_ERROR(ResolutionError)
RADIALWAVE_DEFINE_ERROR(TruncationError)
RADIALWAVE_DEFINE_ERROR(TailError)
RADIALWAVE_DEFINE_ERROR(CFLError)
RADIALWAVE_DEFINE_ERROR(BoundaryTouchError)
RADIALWAVE_DEFINE_ERROR(ConfigError)
RADIALWAVE_DEFINE_ERROR(IOError)

#undef RADIALWAVE_DEFINE_ERROR

}  // namespace radialwave
