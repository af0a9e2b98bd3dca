#pragma once

#include <stdexcept>
#include <string>

namespace dw {

/// Base of every numerical-domain failure raised by the library. `name()` is the
/// stable identifier printed by the CLI on standard error.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define DW_DECLARE_ERROR(Type)                                                  \
    class Type : public Error {                                                 \
    public:                                                                     \
        explicit Type(const std::string& message) : Error(#Type, message) {}    \
    }

DW_DECLARE_ERROR(InvalidArgument);
DW_DECLARE_ERROR(NonFiniteIntegrand);
DW_DECLARE_ERROR(SingularKernel);
DW_DECLARE_ERROR(EigenConvergence);
DW_DECLARE_ERROR(EmptyInput);
DW_DECLARE_ERROR(GridTooSmall);
DW_DECLARE_ERROR(TemperatureTooLow);
DW_DECLARE_ERROR(FieldChannelUnsupported);
DW_DECLARE_ERROR(DegenerateWeights);
DW_DECLARE_ERROR(SizeCap);
DW_DECLARE_ERROR(AxisMismatch);
DW_DECLARE_ERROR(WindowOutOfRange);
DW_DECLARE_ERROR(ContractViolation);
DW_DECLARE_ERROR(IoError);

#undef DW_DECLARE_ERROR

/// Warnings are routed through a replaceable sink (stderr by default).
using WarningSink = void (*)(const std::string&);
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

} // namespace dw
