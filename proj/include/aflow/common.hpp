#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace aflow {

using cplx = std::complex<double>;

// Mismatched grids, bad ranks, malformed config values.  Thrown on contract
// violations that indicate a caller bug rather than a numerical event.
class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Loss of metric positivity, time-step underflow and similar runtime events
// that a driver may want to catch and react to (e.g. halve dt and retry).
class PositivityError : public std::runtime_error {
public:
    PositivityError(const std::string& msg, long point_index)
        : std::runtime_error(msg), point(point_index) {}
    long point;  // flat lattice index where the failure was detected
};

class FlowBreakdown : public std::runtime_error {
public:
    explicit FlowBreakdown(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace aflow
