#pragma once

#include <stdexcept>
#include <string>

namespace rotorct {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateEigenvectors : Error {
    explicit DegenerateEigenvectors(const std::string& msg) : Error(msg) {}
};
struct PhiZero : Error {
    explicit PhiZero(const std::string& msg) : Error(msg) {}
};
struct SupercriticalData : Error {
    explicit SupercriticalData(const std::string& msg) : Error(msg) {}
};
struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& msg) : Error(msg) {}
};
struct MaxStepsExceeded : Error {
    explicit MaxStepsExceeded(const std::string& msg) : Error(msg) {}
};
struct InconsistentInitialPair : Error {
    explicit InconsistentInitialPair(const std::string& msg) : Error(msg) {}
};
struct NotEquilibrium : Error {
    explicit NotEquilibrium(const std::string& msg) : Error(msg) {}
};
struct DegenerateOrbit : Error {
    explicit DegenerateOrbit(const std::string& msg) : Error(msg) {}
};
struct SingularJacobian : Error {
    explicit SingularJacobian(const std::string& msg) : Error(msg) {}
};
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};
struct TailMassExceeded : Error {
    explicit TailMassExceeded(const std::string& msg) : Error(msg) {}
};
struct CFLViolation : Error {
    explicit CFLViolation(const std::string& msg) : Error(msg) {}
};
struct ConfigInvalid : Error {
    explicit ConfigInvalid(const std::string& msg) : Error(msg) {}
};

} // namespace rotorct
