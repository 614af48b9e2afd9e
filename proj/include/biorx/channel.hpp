#pragma once

// Advection-diffusion propagation in a rectangular microfluidic channel.

namespace biorx {

struct ChannelSpec {
  double h_ch = 5e-6;    // m, height
  double l_ch = 10e-6;   // m, width
  double u = 10e-6;      // m/s, mean flow velocity
  double D_0 = 2e-11;    // m^2/s, intrinsic diffusivity
  double x_R = 1e-3;     // m, Tx to Rx centre distance
  double T = 300.0;      // K

  double area() const { return h_ch * l_ch; }
  /// Throws std::invalid_argument naming the first non-positive field.
  void validate() const;
};

/// Number of molecules released for one symbol.
struct ReleaseEvent {
  double N_m = 0.0;
};

/// Taylor-Aris effective dispersion for a rectangular cross-section.
double effective_diffusion(const ChannelSpec& spec);

/// 1-D Gaussian plume c(x, t) in molecules/m^3. Throws std::domain_error for t <= 0.
double concentration_at(const ReleaseEvent& release, const ChannelSpec& spec, double x, double t);

/// t_D = x_R / u. Throws std::domain_error for u <= 0.
double peak_arrival_time(const ChannelSpec& spec);

/// c(x_R, t_D), the concentration the receiver sees at its sampling instant.
double received_concentration(const ReleaseEvent& release, const ChannelSpec& spec);

}  // namespace biorx
