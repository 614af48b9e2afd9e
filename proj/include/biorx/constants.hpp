#pragma once

namespace biorx {

/// CODATA 2018 exact / recommended values, SI units.
struct PhysicalConstants {
  static constexpr double q = 1.602176634e-19;      // C
  static constexpr double kB = 1.380649e-23;        // J/K
  static constexpr double N_A = 6.02214076e23;      // 1/mol
  static constexpr double eps0 = 8.8541878128e-12;  // F/m
};

inline constexpr double kPi = 3.14159265358979323846;

/// mol/m^3 -> molecules/m^3
constexpr double molar_to_molecules(double c_mol_per_m3) {
  return c_mol_per_m3 * PhysicalConstants::N_A;
}

}  // namespace biorx
