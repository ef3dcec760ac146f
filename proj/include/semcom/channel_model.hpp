#pragma once

#include <vector>

#include "semcom/rng.hpp"

namespace semcom {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct Disc {
  Point center;
  double radius_m = 0.0;

  bool operator==(const Disc&) const = default;
};

/// Placement regions for the three node classes plus the node counts.
struct GeometryConfig {
  int n_pairs = 0;    // N transmitter-receiver pairs
  int n_servers = 0;  // K edge servers
  Disc server_disc;
  Disc tx_disc;
  Disc rx_disc;
};

struct PathLossConfig {
  double reference_distance_m = 10.0;
  double exponent = 2.7;

  bool operator==(const PathLossConfig&) const = default;
};

struct Geometry {
  std::vector<Point> servers;       // K
  std::vector<Point> transmitters;  // N
  std::vector<Point> receivers;     // N
};

/// Block-fading power gains; constant within one realization.
struct ChannelGains {
  std::vector<double> direct;             // N, transmitter n -> receiver n
  std::vector<std::vector<double>> up;    // N x K, transmitter n -> server k
  std::vector<std::vector<double>> down;  // K x N, server k -> receiver n
};

double distance(const Point& a, const Point& b);

/// 1 / (1 + d/d0)^kappa. Equals 1 at d = 0, non-increasing in d.
double path_loss(double d_m, double d0_m, double exponent);

double dbm_to_watts(double dbm);

/// Thermal noise floor in watts for a flat PSD over the given bandwidth.
double noise_power_w(double psd_dbm_per_hz, double bandwidth_hz);

/// Area-uniform point in a disc (polar sampling, r = R*sqrt(u)).
Point sample_disc_point(const Disc& disc, RandomSource& rng);

Geometry sample_geometry(const GeometryConfig& config, RandomSource& rng);

/// Path loss times a unit-mean exponential fading draw per link, independent
/// across links. Every gain is strictly positive.
ChannelGains sample_gains(const Geometry& geom, const PathLossConfig& pl,
                          RandomSource& rng);

}  // namespace semcom
