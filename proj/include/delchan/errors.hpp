#pragma once

#include <stdexcept>
#include <string>

namespace delchan {

// Base class for all domain errors. The name() of the concrete error is
// echoed by the CLI on exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

#define DELCHAN_DEFINE_ERROR(NAME)                                      \
    class NAME : public Error {                                         \
    public:                                                              \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}   \
    }

DELCHAN_DEFINE_ERROR(BadAlphabet);
DELCHAN_DEFINE_ERROR(BadMessage);
DELCHAN_DEFINE_ERROR(NonDividing);
DELCHAN_DEFINE_ERROR(OutOfRange);
DELCHAN_DEFINE_ERROR(BadLength);
DELCHAN_DEFINE_ERROR(LengthMismatch);
DELCHAN_DEFINE_ERROR(BadDiffList);
DELCHAN_DEFINE_ERROR(CapExceeded);
DELCHAN_DEFINE_ERROR(SupportMismatch);
DELCHAN_DEFINE_ERROR(BadParams);
DELCHAN_DEFINE_ERROR(BudgetExceeded);
DELCHAN_DEFINE_ERROR(QTooLarge);
DELCHAN_DEFINE_ERROR(NoMatch);

#undef DELCHAN_DEFINE_ERROR

}  // namespace delchan
