#pragma once

#include <stdexcept>
#include <string>

namespace qcalc {

/// Base of every error raised by the library. `kind()` is the stable name used
/// in reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define QCALC_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  }

QCALC_DEFINE_ERROR(DivisionByZero);
QCALC_DEFINE_ERROR(MismatchedOrder);
QCALC_DEFINE_ERROR(IndexOutOfRange);
QCALC_DEFINE_ERROR(MismatchedArity);
QCALC_DEFINE_ERROR(AxisOutOfRange);
QCALC_DEFINE_ERROR(ParseError);
QCALC_DEFINE_ERROR(BadOrder);
QCALC_DEFINE_ERROR(NonCommutativeCoefficient);
QCALC_DEFINE_ERROR(MismatchedAlgebra);
QCALC_DEFINE_ERROR(UnsupportedN);
QCALC_DEFINE_ERROR(BadIndexCount);
QCALC_DEFINE_ERROR(NotClosed);
QCALC_DEFINE_ERROR(NotAPerfectSquare);
QCALC_DEFINE_ERROR(OddPower);
QCALC_DEFINE_ERROR(BadInterval);
QCALC_DEFINE_ERROR(NonPositiveMetric);
QCALC_DEFINE_ERROR(ArityMismatch);
QCALC_DEFINE_ERROR(NotLeftMultiplication);
QCALC_DEFINE_ERROR(NotHomogeneous);
QCALC_DEFINE_ERROR(BasisRewriteFailure);
QCALC_DEFINE_ERROR(NonInvertibleChart);
QCALC_DEFINE_ERROR(NonSymmetricGamma);
QCALC_DEFINE_ERROR(NonFiniteState);
QCALC_DEFINE_ERROR(InvalidArgument);
QCALC_DEFINE_ERROR(ConfigParseError);
QCALC_DEFINE_ERROR(UsageError);

#undef QCALC_DEFINE_ERROR

}  // namespace qcalc
