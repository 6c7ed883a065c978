// Exception hierarchy shared by every actm module.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace actm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A sample lies where the requested quantity is undefined (e.g. sin(theta) <= 0).
struct DomainError : Error {
    using Error::Error;
};

/// Key points violate the BeamDesign invariants.
struct ShapeError : Error {
    using Error::Error;
};

/// Newton failed at a load step after every bisection was spent.
struct NonConvergence : Error {
    NonConvergence(std::size_t step_index, const std::string &what)
        : Error(what), step(step_index) {}
    std::size_t step;
};

/// A requested chord or angle falls outside the sampled range of a curve.
struct RangeError : Error {
    using Error::Error;
};

/// Two curves that must share a sample grid do not.
struct GridMismatch : Error {
    using Error::Error;
};

/// A requested operating point cannot be reached (e.g. negative preload).
struct Infeasible : Error {
    using Error::Error;
};

/// Every candidate of every generation scored the worst-fitness sentinel.
struct NoFeasibleCandidate : Error {
    using Error::Error;
};

/// Invalid configuration value or file.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace actm
