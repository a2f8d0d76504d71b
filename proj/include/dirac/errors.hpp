#pragma once
#include <stdexcept>
#include <string>

namespace dirac {

// Domain errors carry a stable name and a distinct process exit code so the
// CLI can map them onto machine-parsable diagnostics.
class DomainError : public std::runtime_error {
public:
  DomainError(const char* name, int exit_code, const std::string& what)
      : std::runtime_error(what), name_(name), exit_code_(exit_code) {}
  const char* name() const noexcept { return name_; }
  int exit_code() const noexcept { return exit_code_; }

private:
  const char* name_;
  int exit_code_;
};

#define DIRAC_DEFINE_ERROR(Type, Code)                        \
  class Type : public DomainError {                           \
  public:                                                     \
    explicit Type(const std::string& what)                    \
        : DomainError(#Type, Code, what) {}                   \
  }

DIRAC_DEFINE_ERROR(SupNormExceeded, 3);
DIRAC_DEFINE_ERROR(CriticalAnomalous, 4);
DIRAC_DEFINE_ERROR(QuadratureFailure, 5);
DIRAC_DEFINE_ERROR(NoDeficiency, 6);
DIRAC_DEFINE_ERROR(EnergyOutsideGap, 7);
DIRAC_DEFINE_ERROR(MatchingIllConditioned, 8);
DIRAC_DEFINE_ERROR(IllConditionedFit, 9);
DIRAC_DEFINE_ERROR(NonConvergent, 10);
DIRAC_DEFINE_ERROR(DegenerateRelation, 11);
DIRAC_DEFINE_ERROR(NotUnitary, 12);
DIRAC_DEFINE_ERROR(ValidationFailed, 13);
DIRAC_DEFINE_ERROR(ChannelMismatch, 14);

#undef DIRAC_DEFINE_ERROR

}  // namespace dirac
