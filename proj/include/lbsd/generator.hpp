// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "lbsd/random.hpp"
#include "lbsd/triple_store.hpp"

namespace lbsd {

namespace vocab {
inline constexpr std::string_view kGeneratedObservation = "ex:generatedObservation";
inline constexpr std::string_view kSensorType = "ex:sensorType";
inline constexpr std::string_view kElevation = "ex:elevation";
}  // namespace vocab

namespace detail {

struct Phenomenon {
  std::string_view predicate;
  double low;
  double high;
  /// Probability the observation reports the phenomenon at all.
  double presence;
  /// Readings when present: `base`, plus one more with `extra_chance`.
  std::size_t base;
  double extra_chance;
};

// Core phenomena are always read at least twice (centrality below 0.5); the
// rarer ones mostly once. windSpeed is rare but read in pairs, one reading
// when the observation is already full, which puts its centrality between
// the two preset thresholds.
inline constexpr std::array<Phenomenon, 6> kPhenomena{{
    {"ex:airTemperature", -10.0, 40.0, 1.0, 2, 0.2},
    {"ex:relativeHumidity", 0.0, 100.0, 1.0, 2, 0.1},
    {"ex:windSpeed", 0.0, 30.0, 0.05, 2, 0.0},
    {"ex:windDirection", 0.0, 360.0, 0.35, 1, 0.0},
    {"ex:precipitation", 0.0, 20.0, 0.25, 1, 0.0},
    {"ex:windGust", 0.0, 50.0, 0.15, 1, 0.2},
}};

inline constexpr std::size_t kMaxReadings = 6;

inline constexpr std::array<std::string_view, 4> kSensorTypes{"WeatherStation", "Anemometer", "RainGauge",
                                                               "Thermometer"};

inline std::string format_decimal(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 1);
  return std::string(buf.data(), res.ptr);
}

/// Splits `total` observations over `sensors` with Zipf(1) weights; the sum
/// is exactly `total`.
inline std::vector<std::size_t> zipf_apportion(std::size_t total, std::size_t sensors) {
  std::vector<double> w(sensors);
  for (std::size_t i = 0; i < sensors; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<std::size_t> counts(sensors);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < sensors; ++i) {
    counts[i] = static_cast<std::size_t>(static_cast<double>(total) * w[i] / sum);
    assigned += counts[i];
  }
  for (std::size_t i = 0; assigned < total; i = (i + 1) % sensors, ++assigned) ++counts[i];
  return counts;
}

}  // namespace detail

/// Synthetic sensor/observation graph modelled on Linked Observation Data.
///
/// Each sensor carries two literal metadata triples and links to its
/// observations through `ex:generatedObservation`. Observation counts follow
/// a Zipf split of `sensors * observations_per_sensor`, which gives a handful
/// of hub subjects. Every observation has 4 to 6 numeric readings drawn from
/// a fixed weather vocabulary; frequent phenomena are read several times
/// per observation, rare ones mostly once. Output is a pure function of the
/// arguments.
inline TripleStore generate_lod_like(std::uint64_t seed, std::size_t sensors, std::size_t observations_per_sensor) {
  Rng rng(seed);
  std::vector<std::size_t> counts = detail::zipf_apportion(sensors * observations_per_sensor, sensors);
  rng.shuffle(std::span<std::size_t>(counts));

  std::vector<Triple> triples;
  triples.reserve(sensors * observations_per_sensor * 7 + sensors * 2);
  for (std::size_t s = 0; s < sensors; ++s) {
    const std::string sensor = "ex:sensor/" + std::to_string(s);
    triples.push_back({sensor, std::string(vocab::kSensorType),
                       std::string(detail::kSensorTypes[rng.below(detail::kSensorTypes.size())]), true});
    triples.push_back({sensor, std::string(vocab::kElevation), detail::format_decimal(rng.unit() * 2000.0), true});
    for (std::size_t o = 0; o < counts[s]; ++o) {
      const std::string obs = "ex:obs/" + std::to_string(s) + "/" + std::to_string(o);
      triples.push_back({sensor, std::string(vocab::kGeneratedObservation), obs, false});
      std::size_t readings = 0;
      for (const auto& ph : detail::kPhenomena) {
        if (ph.presence < 1.0 && rng.unit() >= ph.presence) continue;
        std::size_t n = ph.base + (rng.unit() < ph.extra_chance ? 1 : 0);
        for (std::size_t r = 0; r < n && readings < detail::kMaxReadings; ++r, ++readings) {
          const double value = ph.low + rng.unit() * (ph.high - ph.low);
          triples.push_back({obs, std::string(ph.predicate), detail::format_decimal(value), true});
        }
      }
    }
  }
  return TripleStore(std::move(triples));
}

}  // namespace lbsd
