#pragma once

// Graphene bioFET: bound-ligand charge -> drain current, plus device 1/f noise.

#include <cstdint>
#include <vector>

namespace biorx {

struct ReceiverSpec {
  int N_r = 120;            // receptors
  double r = 2e-9;          // m, receptor length
  double N_e = 3.0;         // electrons per ligand
  double g = 1.9044e-4;     // A/V, transconductance
  double c_q = 2e-2;        // F/m^2, quantum capacitance per area
  double l_gr = 10e-6;      // m, graphene width
  double A_gr = 1e-10;      // m^2, exposed graphene area (l_gr^2 unless overridden)
  double c_ion = 30.0;      // mol/m^3
  double eps_rel = 80.0;
  double S_f1Hz = 1e-23;    // A^2/Hz
  double beta = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

double debye_length(const ReceiverSpec& spec, double T);

double effective_charge(const ReceiverSpec& spec, double debye);

/// Series combination of the double-layer and quantum capacitances, in F.
double gate_capacitance(const ReceiverSpec& spec, double debye);

/// Current deviation per bound receptor, in A.
double gain(const ReceiverSpec& spec, double q_eff, double C_G);

/// zeta evaluated from the receiver geometry at temperature T.
double receptor_gain(const ReceiverSpec& spec, double T);

/// S_f1Hz / f^beta. Throws std::domain_error for f <= 0.
double flicker_psd(double f, const ReceiverSpec& spec);

/// Flicker variance over an observation band, flat below f_L.
double flicker_variance(double f_L, double f_H, const ReceiverSpec& spec);

/// Zero-mean Gaussian series of length n whose one-sided PSD is S_f at the
/// interior DFT bins. DC and Nyquist bins carry no power.
std::vector<double> synthesize_flicker(int n, double dt, const ReceiverSpec& spec, std::uint64_t seed);

}  // namespace biorx
