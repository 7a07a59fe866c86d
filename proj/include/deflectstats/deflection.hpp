#pragma once

#include <cmath>
#include <numbers>

#include "deflectstats/errors.hpp"

namespace deflectstats {

// Vertical-deflection components in arcseconds.
struct VerticalDeflection {
  double xi;   // meridian (north-south) component
  double eta;  // prime-vertical (east-west) component
};

// Components of the deflection of the vertical from astronomic (Phi, Lambda)
// and geodetic (phi, lambda) coordinates, all in decimal degrees:
//   xi  = Phi - phi
//   eta = (Lambda - lambda) * cos(phi)
// with the degree differences converted to arcseconds.
inline VerticalDeflection deflection_components(double astro_lat_deg, double astro_lon_deg,
                                                double geodetic_lat_deg,
                                                double geodetic_lon_deg) {
  if (!std::isfinite(astro_lat_deg) || !std::isfinite(astro_lon_deg) ||
      !std::isfinite(geodetic_lat_deg) || !std::isfinite(geodetic_lon_deg))
    throw ValidationError("deflection_components: non-finite coordinate");
  if (geodetic_lat_deg < -90.0 || geodetic_lat_deg > 90.0)
    throw ValidationError("deflection_components: geodetic latitude outside [-90, 90]");
  constexpr double kArcsecPerDegree = 3600.0;
  const double phi_rad = geodetic_lat_deg * std::numbers::pi / 180.0;
  const double xi = (astro_lat_deg - geodetic_lat_deg) * kArcsecPerDegree;
  const double eta = (astro_lon_deg - geodetic_lon_deg) * kArcsecPerDegree * std::cos(phi_rad);
  return {xi, eta};
}

}  // namespace deflectstats
