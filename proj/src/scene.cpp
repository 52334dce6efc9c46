#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "l4u/models.hpp"

namespace l4u {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
constexpr std::size_t kMaxDraws = 1'000'000;
// Scattered paths are 10 dB below the line-of-sight path on average.
constexpr double kScatterAmplitude = 0.31622776601683794;
}  // namespace

void validate(const MuMimoScene& s) {
  if (s.b == 0 || s.u == 0 || s.paths_per_ue == 0) {
    throw Error(ErrorKind::invalid_arguments, "scene needs b, u and paths_per_ue >= 1");
  }
  if (!(s.sector_deg > 0.0 && s.sector_deg <= 180.0)) {
    throw Error(ErrorKind::invalid_arguments, "sector must lie in (0, 180] degrees");
  }
  if (!(s.min_sep_deg >= 0.0) || s.min_sep_deg * static_cast<double>(s.u) > s.sector_deg) {
    throw Error(ErrorKind::invalid_arguments, "min_sep_deg * u must not exceed the sector");
  }
  if (!(s.dmin > 0.0 && s.dmin < s.dmax)) throw Error(ErrorKind::invalid_arguments, "need 0 < dmin < dmax");
  if (!(s.power_cap_db >= 0.0)) throw Error(ErrorKind::invalid_arguments, "power cap must be non-negative");
}

std::vector<cplx> array_response(std::size_t n, double omega) {
  std::vector<cplx> p(n);
  for (std::size_t b = 0; b < n; ++b) p[b] = std::polar(1.0, omega * static_cast<double>(b));
  return p;
}

SceneChannel synth_scene(const MuMimoScene& s, std::uint64_t index) {
  validate(s);
  CounterRng rng = CounterRng(s.seed).substream(index);
  const double half = s.sector_deg / 2.0;

  SceneChannel out;
  std::size_t draws = 0;
  while (out.ue_angle_deg.size() < s.u) {
    if (++draws > kMaxDraws) {
      throw Error(ErrorKind::infeasible_scene, "UE placement exceeded 1e6 rejection draws");
    }
    const double a = rng.uniform(-half, half);
    const bool ok = std::all_of(out.ue_angle_deg.begin(), out.ue_angle_deg.end(),
                                [&](double other) { return std::abs(a - other) >= s.min_sep_deg; });
    if (ok) out.ue_angle_deg.push_back(a);
  }

  out.h = CMatrix(s.b, s.u);
  out.paths.resize(s.u);
  std::vector<double> energy(s.u, 0.0);
  for (std::size_t u = 0; u < s.u; ++u) {
    const double d = rng.uniform(s.dmin, s.dmax);
    out.ue_distance_m.push_back(d);
    const double los_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.paths[u].push_back({out.ue_angle_deg[u], std::numbers::pi * std::sin(out.ue_angle_deg[u] * kDeg),
                            std::polar(1.0 / d, los_phase)});
    for (std::size_t p = 1; p < s.paths_per_ue; ++p) {
      const double a = rng.uniform(-half, half);
      const cplx g = (kScatterAmplitude / d) * rng.complex_normal(1.0);
      out.paths[u].push_back({a, std::numbers::pi * std::sin(a * kDeg), g});
    }
    for (const auto& path : out.paths[u]) {
      const auto resp = array_response(s.b, path.omega);
      for (std::size_t b = 0; b < s.b; ++b) out.h(b, u) += path.gain * resp[b];
    }
    for (std::size_t b = 0; b < s.b; ++b) energy[u] += std::norm(out.h(b, u));
  }

  // Power control: no UE may exceed the weakest one by more than the cap.
  const double emin = *std::min_element(energy.begin(), energy.end());
  const double ecap = emin * std::pow(10.0, s.power_cap_db / 10.0);
  out.power_scale.assign(s.u, 1.0);
  for (std::size_t u = 0; u < s.u; ++u) {
    if (energy[u] > ecap) {
      const double f = std::sqrt(ecap / energy[u]);
      out.power_scale[u] = f;
      for (std::size_t b = 0; b < s.b; ++b) out.h(b, u) *= f;
      for (auto& path : out.paths[u]) path.gain *= f;
    }
  }
  return out;
}

std::vector<CMatrix> synth_scene_channels(const MuMimoScene& s, std::size_t n_scenes) {
  std::vector<CMatrix> hs;
  hs.reserve(n_scenes);
  for (std::size_t i = 0; i < n_scenes; ++i) hs.push_back(synth_scene(s, i).h);
  return hs;
}

}  // namespace l4u
