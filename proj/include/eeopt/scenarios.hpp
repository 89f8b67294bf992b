// Copyright 2026 The eeopt Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Seeded generators for two uplink case studies: a multi-cell MIMO network
// with LMMSE reception, and a massive-MIMO network with MRC, MMSE channel
// estimation and UE hardware impairments.

#include "eeopt/common.hpp"
#include "eeopt/network.hpp"
#include "eeopt/rng.hpp"
#include "eeopt/sinr.hpp"

#include <Eigen/SVD>

#include <array>
#include <cstdint>
#include <vector>

namespace eeopt {

using Point2 = std::array<double, 2>;

/// Noise power F B N0 in W.
inline double noise_power(double noise_figure_db, double bandwidth_hz, double n0_dbm_hz) {
  require(bandwidth_hz > 0.0, "noise_power: bandwidth must be positive");
  return db_to_linear(noise_figure_db) * bandwidth_hz * db_to_linear(n0_dbm_hz - 30.0);
}

inline constexpr double kMinDistanceKm = 0.035;

/// reference_gain * max(d, d_min)^-exponent, with d in km.
inline double pathloss(double distance_km, double exponent, double reference_gain,
                       double min_distance_km = kMinDistanceKm) {
  require(distance_km > 0.0, "pathloss: distance must be positive");
  return reference_gain * std::pow(std::max(distance_km, min_distance_km), -exponent);
}

/// Radio parameters shared by both scenarios.
struct RadioConfig {
  double bandwidth_hz = 180.0;
  double noise_figure_db = 3.0;
  double n0_dbm_hz = -174.0;
  double p_max_dbw = -20.0;
  double psi_dbw = -20.0;
  double mu = 1.0;
  double pathloss_exponent = 3.5;
  double reference_gain_db = -145.4;  ///< path gain at 1 km
  double min_distance_km = kMinDistanceKm;
  double area_half_width_km = 1.0;

  double sigma2() const { return noise_power(noise_figure_db, bandwidth_hz, n0_dbm_hz); }
  double gain(double distance_km) const {
    return pathloss(distance_km, pathloss_exponent, db_to_linear(reference_gain_db), min_distance_km);
  }
};

/// Same radio defaults with a 180 kHz resource block instead of 180 Hz.
inline RadioConfig radio_preset_180khz() {
  RadioConfig r;
  r.bandwidth_hz = 180e3;
  return r;
}

inline std::vector<Point2> default_cell_sites() { return {{{0.5, 0.5}}, {{0.5, -0.5}}, {{-0.5, 0.0}}}; }

struct Deployment {
  double half_width_km = 1.0;
  std::vector<Point2> bs_positions;
  std::vector<Point2> ue_positions;
  std::vector<std::size_t> association;  ///< nearest BS per UE

  double distance(std::size_t ue, std::size_t bs) const {
    return std::hypot(ue_positions[ue][0] - bs_positions[bs][0], ue_positions[ue][1] - bs_positions[bs][1]);
  }
};

/// UEs uniform in the square, each served by its nearest BS.
inline Deployment make_deployment(std::uint64_t seed, std::size_t k, std::vector<Point2> bs, double half_width) {
  require(k >= 1, "deployment: need at least one UE");
  require(!bs.empty(), "deployment: need at least one BS");
  require(half_width > 0.0, "deployment: area half-width must be positive");
  Deployment d;
  d.half_width_km = half_width;
  d.bs_positions = std::move(bs);
  for (std::size_t i = 0; i < k; ++i) {
    CounterRng rng(seed, {static_cast<std::uint64_t>(StreamPurpose::kPosition), i});
    d.ue_positions.push_back({rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width)});
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t best = 0;
    for (std::size_t m = 1; m < d.bs_positions.size(); ++m) {
      if (d.distance(i, m) < d.distance(i, best)) best = m;
    }
    d.association.push_back(best);
  }
  return d;
}

inline std::vector<LinkParams> uniform_links(std::size_t k, const RadioConfig& radio) {
  LinkParams l;
  l.mu = radio.mu;
  l.psi = db_to_linear(radio.psi_dbw);
  l.p_max = db_to_linear(radio.p_max_dbw);
  l.weight = 1.0;
  return std::vector<LinkParams>(k, l);
}

// ---------------------------------------------------------------------------
// Multi-cell MIMO with LMMSE detection.

enum class BeamformerRule { kDominantSingular, kFirstBasis };

struct LteScenarioConfig {
  std::size_t k = 2;
  int n_t = 2;
  int n_r = 2;
  std::vector<Point2> bs_positions = default_cell_sites();
  BeamformerRule beamformer = BeamformerRule::kDominantSingular;
  RadioConfig radio;
  std::uint64_t seed = 1;
};

struct LteRealization {
  Deployment deployment;
  std::vector<std::vector<CMat>> channels;  ///< channels[k][l]: n_r x n_t from UE k to BS l
  std::vector<CVec> beamformers;
};

/// Unit-norm vector with its first non-negligible entry real and positive.
inline CVec fix_phase(CVec v) {
  v.normalize();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  }
  return v;
}

inline LteRealization realize_lte(const LteScenarioConfig& cfg) {
  require(cfg.n_t >= 1 && cfg.n_r >= 1, "lte: antenna counts must be >= 1");
  LteRealization out;
  out.deployment = make_deployment(cfg.seed, cfg.k, cfg.bs_positions, cfg.radio.area_half_width_km);
  const std::size_t l_count = cfg.bs_positions.size();
  out.channels.resize(cfg.k);
  for (std::size_t k = 0; k < cfg.k; ++k) {
    for (std::size_t l = 0; l < l_count; ++l) {
      const double g = cfg.radio.gain(out.deployment.distance(k, l));
      CounterRng rng(cfg.seed, {static_cast<std::uint64_t>(StreamPurpose::kChannel), k, l});
      CMat h(cfg.n_r, cfg.n_t);
      for (int c = 0; c < cfg.n_t; ++c) {
        for (int r = 0; r < cfg.n_r; ++r) h(r, c) = rng.complex_normal(g);
      }
      out.channels[k].push_back(std::move(h));
    }
  }
  for (std::size_t k = 0; k < cfg.k; ++k) {
    if (cfg.beamformer == BeamformerRule::kFirstBasis) {
      out.beamformers.push_back(CVec::Unit(cfg.n_t, 0));
      continue;
    }
    const CMat& h = out.channels[k][out.deployment.association[k]];
    Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeFullV);
    out.beamformers.push_back(fix_phase(svd.matrixV().col(0)));
  }
  return out;
}

inline NetworkInstance lte_instance(const LteScenarioConfig& cfg, const LteRealization& real) {
  VectorLmmseSinr m;
  m.r = cfg.n_r;
  m.v.resize(cfg.k);
  for (std::size_t k = 0; k < cfg.k; ++k) {
    const std::size_t bs = real.deployment.association[k];
    for (std::size_t i = 0; i < cfg.k; ++i) m.v[k].push_back(real.channels[i][bs] * real.beamformers[i]);
    m.u.push_back(CVec::Zero(cfg.n_r));
  }
  return NetworkInstance(cfg.radio.bandwidth_hz, uniform_links(cfg.k, cfg.radio),
                         SinrModel(std::move(m), cfg.radio.sigma2()));
}

inline NetworkInstance generate_lte(const LteScenarioConfig& cfg) { return lte_instance(cfg, realize_lte(cfg)); }

// ---------------------------------------------------------------------------
// Massive MIMO with MRC, pilot contamination and UE hardware impairments.

struct MassiveMimoScenarioConfig {
  std::size_t k = 2;
  std::vector<Point2> small_cells = default_cell_sites();
  int small_cell_antennas = 20;
  Point2 macro_position{{0.0, 0.0}};
  int macro_antennas = 50;
  double tau = 0.3;
  double evm = 0.1;
  /// Use d^2 / (tau + sum d) for the estimate variance instead of d / (tau + sum d).
  bool squared_estimate_numerator = false;
  RadioConfig radio;
  std::uint64_t seed = 1;
};

/// Large-scale quantities behind the coefficients: d[k][m] and rho[k][m]
/// (the latter already scaled by sqrt(1 - evm^2)).
struct MassiveMimoStatistics {
  Deployment deployment;
  Mat d;
  Mat rho;
};

/// rho[k][m] = sqrt(1 - evm^2) d[k][m] / (tau + sum_m' d[k][m']), or with
/// d[k][m]^2 in the numerator when `squared` is set.
inline Mat estimate_variances(const Mat& d, double tau, double evm, bool squared = false) {
  require(tau > 0.0, "massive-mimo: tau must be positive");
  require(evm >= 0.0 && evm < 1.0, "massive-mimo: evm must lie in [0, 1)");
  const double impair = std::sqrt(1.0 - evm * evm);
  Mat rho(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    const double denom = tau + d.row(i).sum();
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      const double num = squared ? d(i, j) * d(i, j) : d(i, j);
      rho(i, j) = impair * num / denom;
    }
  }
  return rho;
}

inline MassiveMimoStatistics massive_mimo_statistics(const MassiveMimoScenarioConfig& cfg) {
  require(cfg.small_cell_antennas >= 1 && cfg.macro_antennas >= 1, "massive-mimo: antenna counts must be >= 1");
  std::vector<Point2> sites = cfg.small_cells;
  sites.push_back(cfg.macro_position);
  MassiveMimoStatistics s;
  s.deployment = make_deployment(cfg.seed, cfg.k, sites, cfg.radio.area_half_width_km);
  const auto k = static_cast<Eigen::Index>(cfg.k);
  const auto m = static_cast<Eigen::Index>(sites.size());
  s.d.resize(k, m);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      s.d(i, j) = cfg.radio.gain(s.deployment.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    }
  }
  s.rho = estimate_variances(s.d, cfg.tau, cfg.evm, cfg.squared_estimate_numerator);
  return s;
}

/// Coefficients of the self-interference SINR form. With rho' the impaired
/// estimate variances and a = a(k):
///   alpha_k = (1 - evm^2) rho'_{k,a}
///   phi_k   = d_{k,a} + sum_{m != a} rho'_{k,m}^2 / rho'_{k,a} + evm^2 rho'_{k,a}
///   beta_ik = d_{i,a} rho'_{i,a} / rho'_{k,a}
/// See docs/impairments.md for the reduction.
inline SelfInterferenceSinr massive_mimo_coefficients(const MassiveMimoStatistics& s, double evm) {
  const auto k = s.d.rows();
  const auto m = s.d.cols();
  const double e2 = evm * evm;
  SelfInterferenceSinr c{Vec(k), Vec(k), Mat::Zero(k, k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto a = static_cast<Eigen::Index>(s.deployment.association[static_cast<std::size_t>(i)]);
    const double own = s.rho(i, a);
    double phi = s.d(i, a);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j != a) phi += s.rho(i, j) * s.rho(i, j) / own;
    }
    c.alpha(i) = (1.0 - e2) * own;
    c.phi(i) = phi + e2 * own;
    for (Eigen::Index t = 0; t < k; ++t) {
      if (t != i) c.beta(t, i) = s.d(t, a) * s.rho(t, a) / own;
    }
  }
  return c;
}

inline NetworkInstance generate_massive_mimo(const MassiveMimoScenarioConfig& cfg) {
  const MassiveMimoStatistics s = massive_mimo_statistics(cfg);
  return NetworkInstance(cfg.radio.bandwidth_hz, uniform_links(cfg.k, cfg.radio),
                         SinrModel(massive_mimo_coefficients(s, cfg.evm), cfg.radio.sigma2()));
}

}  // namespace eeopt
