#pragma once

#include <cmath>

namespace saginopt {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kEarthRadius = 6371.0e3;      // m, spherical model
inline constexpr double kEarthMu = 3.986e14;          // m^3/s^2
inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return n > 0.0 ? a * (1.0 / n) : Vec3{};
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Geodetic point on the spherical Earth at radius kEarthRadius + altitude.
inline Vec3 from_lat_lon(double lat_deg, double lon_deg, double altitude_m = 0.0) {
  const double lat = deg_to_rad(lat_deg);
  const double lon = deg_to_rad(lon_deg);
  const double r = kEarthRadius + altitude_m;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon),
          r * std::sin(lat)};
}

// True when the open segment a-b stays outside the Earth sphere. Endpoints on
// the surface (ground nodes) count as clear when the other end is above the
// local horizon.
inline bool line_of_sight(const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double dd = dot(d, d);
  if (dd == 0.0) return true;
  double u = -dot(a, d) / dd;
  if (u < 0.0) u = 0.0;
  if (u > 1.0) u = 1.0;
  const Vec3 closest = a + d * u;
  return norm(closest) >= kEarthRadius - 1.0;  // 1 m slack for surface nodes
}

}  // namespace saginopt
