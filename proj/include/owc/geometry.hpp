#ifndef OWC_GEOMETRY_HPP
#define OWC_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace owc {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

Vec3 operator-(const Vec3& a, const Vec3& b);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);

double deg_to_rad(double degrees);

// Photodiode / luminaire constants shared by all channel computations.
struct DeviceConstants {
  double fov_semi_angle_deg = 60.0;         // Psi_c
  double half_power_semi_angle_deg = 60.0;  // Phi_1/2
  double pd_area_m2 = 1e-4;
  double refractive_index = 1.5;

  // Throws std::invalid_argument when any field is out of range.
  void validate() const;
};

// An LED with its emission axis (unit vector, default straight down).
struct Luminaire {
  Vec3 position;
  Vec3 orientation{0.0, 0.0, -1.0};
};

// A photodiode with its normal (unit vector, default straight up).
struct Photodiode {
  Vec3 position;
  Vec3 orientation{0.0, 0.0, 1.0};
};

// K x N matrix of LoS optical gains, row per user.
struct ChannelMatrix {
  std::size_t users = 0;
  std::size_t leds = 0;
  std::vector<double> gains;  // row-major

  ChannelMatrix() = default;
  ChannelMatrix(std::size_t k, std::size_t n)
      : users(k), leds(n), gains(k * n, 0.0) {}

  double at(std::size_t user, std::size_t led) const {
    return gains[user * leds + led];
  }
  double& at(std::size_t user, std::size_t led) {
    return gains[user * leds + led];
  }
};

// Lambertian emission order m = -ln 2 / ln(cos(phi_half)).
// Throws std::domain_error unless 0 < phi_half < 90.
double lambertian_order(double half_power_semi_angle_deg);

// Optical concentrator gain: n_R^2 / sin^2(Psi_c) inside the FOV, else 0.
double concentrator_gain(double incidence_angle_deg,
                         const DeviceConstants& constants);

// LoS channel gain between one LED and one photodiode.
// Zero outside the receiver FOV or behind the emitter plane.
// Throws std::invalid_argument when the two elements coincide.
double channel_gain(const Luminaire& led, const Photodiode& pd,
                    const DeviceConstants& constants);

// Applies channel_gain over all user/LED pairs.
ChannelMatrix build_channel_matrix(const std::vector<Luminaire>& leds,
                                   const std::vector<Photodiode>& users,
                                   const DeviceConstants& constants);

}  // namespace owc

#endif
