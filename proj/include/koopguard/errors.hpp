#pragma once

#include <stdexcept>
#include <string>

namespace koopguard {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const { return 1; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 2; }
};

class ParseError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 3; }
};

// SOC ran past the hard limit; the simulated pack is considered lost.
class OverchargeAbort : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 4; }
};

class CalibrationError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 5; }
};

class WindowUnderflow : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class IsolationUnavailable : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace koopguard
