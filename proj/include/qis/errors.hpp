#pragma once

#include <stdexcept>
#include <string>

namespace qis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QIS_DEFINE_ERROR(Name)            \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// core-dynamics
QIS_DEFINE_ERROR(InvalidParams);
QIS_DEFINE_ERROR(OverdampedRegime);
QIS_DEFINE_ERROR(NegativeTime);
QIS_DEFINE_ERROR(StepTooLarge);
QIS_DEFINE_ERROR(InvalidBloch);

// measurement-sim
QIS_DEFINE_ERROR(InvalidBand);
QIS_DEFINE_ERROR(InvalidPlan);
QIS_DEFINE_ERROR(OddM);

// reconstruction
QIS_DEFINE_ERROR(KernelSingular);
QIS_DEFINE_ERROR(PlanMismatch);

// spectral-fit
QIS_DEFINE_ERROR(EmptyWindow);
QIS_DEFINE_ERROR(PeakAtEdge);
QIS_DEFINE_ERROR(NoPeakInBand);

// harness
QIS_DEFINE_ERROR(WindowMismatch);
QIS_DEFINE_ERROR(ConfigError);

#undef QIS_DEFINE_ERROR

}  // namespace qis
