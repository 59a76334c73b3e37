#ifndef THZQS_CONSTANTS_HPP
#define THZQS_CONSTANTS_HPP

// Physical constants, CODATA/SI-2019 exact values. All quantities in the
// library are SI (meters, hertz, seconds, kelvin) unless a suffix says
// otherwise.
namespace thzqs::constants {

inline constexpr double speed_of_light = 299792458.0;   // m/s
inline constexpr double planck = 6.62607015e-34;        // J s
inline constexpr double boltzmann = 1.380649e-23;       // J/K
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double reduced_planck = planck / (2.0 * pi);

}  // namespace thzqs::constants

#endif
