#pragma once

#include <stdexcept>
#include <string>

namespace psdo {

enum class Err {
  NonEvaluable,
  DerivativeOrderTooHigh,
  ShapeMismatch,
  TruncationTooDeep,
  OrderGapInvalid,
  NotInCalculus,
  ExpansionDiverges,
  SingularAtPoint,
  SingularLeadingCoefficient,
  NoPrincipalData,
  ReportFailed,
  DepthTooLarge,
  NeverSmall,
  EllipticityFailed,
  SingularToTolerance,
  LambdaMismatch,
  RankMismatch,
  SpectralHypothesisFailed,
  ConfigInvalid,
  CatalogMiss,
};

const char* err_name(Err e);

class PsdoError : public std::runtime_error {
 public:
  PsdoError(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what),
        code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw PsdoError(code, what);
}

}  // namespace psdo
