#pragma once

namespace cavitytrio {

// Unit conventions used throughout the library:
//   rates, couplings, frequencies, detunings  -> MHz, meaning 1e6 rad/s (angular)
//   field amplitudes                          -> sqrt(MHz)
//   time                                      -> microseconds
// so that rate [MHz] * time [us] is dimensionless.

inline constexpr double hbar_js = 1.054571817e-34;        // J*s
inline constexpr double speed_of_light_m_s = 299792458.0;  // m/s
inline constexpr double rad_s_per_mhz = 1.0e6;
inline constexpr double pi = 3.14159265358979323846;

/// Angular frequency (rad/s) of light at the given vacuum wavelength.
inline double optical_angular_frequency_rad_s(double wavelength_m) {
    return 2.0 * pi * speed_of_light_m_s / wavelength_m;
}

}  // namespace cavitytrio
