#include "owc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero vector");
  return {v.x / n, v.y / n, v.z / n};
}

double deg_to_rad(double degrees) { return degrees * kPi / 180.0; }

void DeviceConstants::validate() const {
  if (!(fov_semi_angle_deg > 0.0 && fov_semi_angle_deg < 90.0))
    throw std::invalid_argument("fov_semi_angle_deg must be in (0, 90)");
  if (!(half_power_semi_angle_deg > 0.0 && half_power_semi_angle_deg < 90.0))
    throw std::invalid_argument("half_power_semi_angle_deg must be in (0, 90)");
  if (!(pd_area_m2 > 0.0))
    throw std::invalid_argument("pd_area_m2 must be positive");
  if (!(refractive_index >= 0.0))
    throw std::invalid_argument("refractive_index must be nonnegative");
}

double lambertian_order(double half_power_semi_angle_deg) {
  if (!(half_power_semi_angle_deg > 0.0 && half_power_semi_angle_deg < 90.0))
    throw std::domain_error("half-power semi-angle must be in (0, 90) degrees");
  const double c = std::cos(deg_to_rad(half_power_semi_angle_deg));
  if (c <= 0.0 || c >= 1.0)
    throw std::domain_error("cos(half-power semi-angle) out of (0, 1)");
  return -std::log(2.0) / std::log(c);
}

double concentrator_gain(double incidence_angle_deg,
                         const DeviceConstants& constants) {
  if (!(incidence_angle_deg >= 0.0))
    throw std::invalid_argument("incidence angle must be nonnegative");
  if (incidence_angle_deg > constants.fov_semi_angle_deg) return 0.0;
  const double s = std::sin(deg_to_rad(constants.fov_semi_angle_deg));
  return constants.refractive_index * constants.refractive_index / (s * s);
}

double channel_gain(const Luminaire& led, const Photodiode& pd,
                    const DeviceConstants& constants) {
  const Vec3 led_to_pd = pd.position - led.position;
  const double d = norm(led_to_pd);
  if (d == 0.0)
    throw std::invalid_argument("LED and photodiode positions coincide");

  const Vec3 tx_axis = normalized(led.orientation);
  const Vec3 rx_axis = normalized(pd.orientation);

  // cos(irradiance) along the LED axis, cos(incidence) along the PD normal;
  // clamp absorbs rounding before any acos-style comparison.
  const double cos_irr =
      std::clamp(dot(tx_axis, led_to_pd) / d, -1.0, 1.0);
  const double cos_inc =
      std::clamp(dot(rx_axis, Vec3{-led_to_pd.x, -led_to_pd.y, -led_to_pd.z}) / d,
                 -1.0, 1.0);

  // No emission behind the LED plane.
  if (cos_irr <= 0.0) return 0.0;

  const double cos_fov = std::cos(deg_to_rad(constants.fov_semi_angle_deg));
  if (cos_inc < cos_fov) return 0.0;  // psi > Psi_c

  const double m = lambertian_order(constants.half_power_semi_angle_deg);
  const double g = concentrator_gain(0.0, constants);  // flat inside the FOV
  return (m + 1.0) * constants.pd_area_m2 / (2.0 * kPi * d * d) * g *
         std::pow(cos_irr, m) * cos_inc;
}

ChannelMatrix build_channel_matrix(const std::vector<Luminaire>& leds,
                                   const std::vector<Photodiode>& users,
                                   const DeviceConstants& constants) {
  ChannelMatrix out(users.size(), leds.size());
  for (std::size_t k = 0; k < users.size(); ++k)
    for (std::size_t n = 0; n < leds.size(); ++n)
      out.at(k, n) = channel_gain(leds[n], users[k], constants);
  return out;
}

}  // namespace owc
