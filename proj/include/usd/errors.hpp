#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace usd {

// Base class for toolkit errors. kind() is a stable machine-readable tag;
// the CLI maps it into {"error": {"kind": ..., "detail": ...}} reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define USD_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  }

USD_DEFINE_ERROR(NotHermitian);
USD_DEFINE_ERROR(NoConvergence);
USD_DEFINE_ERROR(NotPSD);
USD_DEFINE_ERROR(DependentStates);
USD_DEFINE_ERROR(Infeasible);
USD_DEFINE_ERROR(WrongArity);
USD_DEFINE_ERROR(DomainError);
USD_DEFINE_ERROR(ZeroCoefficient);
USD_DEFINE_ERROR(TooLarge);
USD_DEFINE_ERROR(ParseError);

#undef USD_DEFINE_ERROR

}  // namespace usd
