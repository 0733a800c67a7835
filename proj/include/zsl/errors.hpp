#pragma once

#include <stdexcept>
#include <string>

namespace zsl {

// Exit codes used by the command line tool.
enum class ExitCode : int { Ok = 0, Config = 2, Data = 3, Numerical = 4 };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode code() const noexcept = 0;
};

class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode code() const noexcept override { return ExitCode::Config; }
};

class DataError : public Error {
public:
    using Error::Error;
    ExitCode code() const noexcept override { return ExitCode::Data; }
};

class NumericalError : public Error {
public:
    using Error::Error;
    ExitCode code() const noexcept override { return ExitCode::Numerical; }
};

}  // namespace zsl
