#include "semcom/channel_model.hpp"

#include <cmath>
#include <stdexcept>

namespace semcom {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double path_loss(double d_m, double d0_m, double exponent) {
  return std::pow(1.0 + d_m / d0_m, -exponent);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double noise_power_w(double psd_dbm_per_hz, double bandwidth_hz) {
  return dbm_to_watts(psd_dbm_per_hz) * bandwidth_hz;
}

Point sample_disc_point(const Disc& disc, RandomSource& rng) {
  const double r = disc.radius_m * std::sqrt(rng.uniform01());
  const double theta = 2.0 * M_PI * rng.uniform01();
  return {disc.center.x + r * std::cos(theta),
          disc.center.y + r * std::sin(theta)};
}

Geometry sample_geometry(const GeometryConfig& config, RandomSource& rng) {
  if (config.n_pairs < 1 || config.n_servers < 1)
    throw std::invalid_argument("sample_geometry: need N >= 1 and K >= 1");
  Geometry geom;
  geom.servers.reserve(config.n_servers);
  geom.transmitters.reserve(config.n_pairs);
  geom.receivers.reserve(config.n_pairs);
  for (int k = 0; k < config.n_servers; ++k)
    geom.servers.push_back(sample_disc_point(config.server_disc, rng));
  for (int n = 0; n < config.n_pairs; ++n)
    geom.transmitters.push_back(sample_disc_point(config.tx_disc, rng));
  for (int n = 0; n < config.n_pairs; ++n)
    geom.receivers.push_back(sample_disc_point(config.rx_disc, rng));
  return geom;
}

ChannelGains sample_gains(const Geometry& geom, const PathLossConfig& pl,
                          RandomSource& rng) {
  const int n_pairs = static_cast<int>(geom.transmitters.size());
  const int n_servers = static_cast<int>(geom.servers.size());
  auto link_gain = [&](const Point& a, const Point& b) {
    const double loss =
        path_loss(distance(a, b), pl.reference_distance_m, pl.exponent);
    return loss * rng.exponential();
  };

  ChannelGains gains;
  gains.direct.resize(n_pairs);
  for (int n = 0; n < n_pairs; ++n)
    gains.direct[n] = link_gain(geom.transmitters[n], geom.receivers[n]);
  gains.up.assign(n_pairs, std::vector<double>(n_servers));
  for (int n = 0; n < n_pairs; ++n)
    for (int k = 0; k < n_servers; ++k)
      gains.up[n][k] = link_gain(geom.transmitters[n], geom.servers[k]);
  gains.down.assign(n_servers, std::vector<double>(n_pairs));
  for (int k = 0; k < n_servers; ++k)
    for (int n = 0; n < n_pairs; ++n)
      gains.down[k][n] = link_gain(geom.servers[k], geom.receivers[n]);
  return gains;
}

}  // namespace semcom
