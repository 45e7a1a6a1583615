// Common numeric types and error classes shared by every holomem module.
#ifndef HOLOMEM_CORE_HPP
#define HOLOMEM_CORE_HPP

#include <complex>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace holomem {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sector index or system size exceeds a configured limit.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Invalid argument (mode index, sector mismatch, malformed state, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The control amplitude vanishes, so the mixing angle kappa is undefined.
class DegenerateScheduleError : public Error {
public:
    using Error::Error;
};

/// Storage/retrieval preconditions (endpoint ratios, cyclicity) violated.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// A phase target cannot be reached inside the pulse family bounds.
class DesignError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline int read_max_sector_env()
{
    if (const char* env = std::getenv("HOLOMEM_MAX_SECTOR")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0 && v <= 64)
            return static_cast<int>(v);
    }
    return 8;
}

} // namespace detail

/// Largest excitation sector the library will build. Defaults to 8 and can
/// be overridden once per process through HOLOMEM_MAX_SECTOR.
inline int max_sector()
{
    static const int limit = detail::read_max_sector_env();
    return limit;
}

} // namespace holomem

#endif
