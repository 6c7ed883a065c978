// Unit conversions between the SI values used internally and the
// millimetre / degree / mN·m / MPa values used in files and on the CLI.
#pragma once

#include <numbers>

namespace actm::units {

inline constexpr double pi = std::numbers::pi;

constexpr double deg(double degrees) { return degrees * pi / 180.0; }
constexpr double to_deg(double radians) { return radians * 180.0 / pi; }

constexpr double mm(double millimetres) { return millimetres * 1e-3; }
constexpr double to_mm(double metres) { return metres * 1e3; }

constexpr double mNm(double millinewton_metres) { return millinewton_metres * 1e-3; }
constexpr double to_mNm(double newton_metres) { return newton_metres * 1e3; }

constexpr double MPa(double megapascal) { return megapascal * 1e6; }
constexpr double GPa(double gigapascal) { return gigapascal * 1e9; }
constexpr double to_MPa(double pascal) { return pascal * 1e-6; }

/// mN·m per degree -> N·m per radian.
constexpr double mNm_per_deg(double value) { return value * 1e-3 * 180.0 / pi; }
constexpr double to_mNm_per_deg(double value) { return value * 1e3 * pi / 180.0; }

} // namespace actm::units
