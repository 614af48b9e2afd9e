#include "biorx/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "biorx/constants.hpp"

namespace biorx {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("ChannelSpec.") + name + " must be positive and finite");
}

}  // namespace

void ChannelSpec::validate() const {
  require_positive(h_ch, "h_ch");
  require_positive(l_ch, "l_ch");
  require_positive(u, "u");
  require_positive(D_0, "D_0");
  require_positive(x_R, "x_R");
  require_positive(T, "T");
}

double effective_diffusion(const ChannelSpec& spec) {
  const double h = spec.h_ch;
  const double l = spec.l_ch;
  const double u = spec.u;
  const double correction =
      8.5 * u * u * h * h * l * l / (210.0 * spec.D_0 * spec.D_0 * (h * h + 2.4 * h * l + l * l));
  return (1.0 + correction) * spec.D_0;
}

double concentration_at(const ReleaseEvent& release, const ChannelSpec& spec, double x, double t) {
  if (!(t > 0.0)) throw std::domain_error("concentration_at: t must be positive");
  const double D = effective_diffusion(spec);
  const double spread = 4.0 * D * t;
  const double offset = x - spec.u * t;
  return release.N_m / (spec.area() * std::sqrt(kPi * spread)) * std::exp(-offset * offset / spread);
}

double peak_arrival_time(const ChannelSpec& spec) {
  if (!(spec.u > 0.0)) throw std::domain_error("peak_arrival_time: flow velocity must be positive");
  return spec.x_R / spec.u;
}

double received_concentration(const ReleaseEvent& release, const ChannelSpec& spec) {
  const double t_D = peak_arrival_time(spec);
  const double D = effective_diffusion(spec);
  return release.N_m / (spec.area() * std::sqrt(4.0 * kPi * D * t_D));
}

}  // namespace biorx
