#pragma once

// Signal models and datasets.
//
// Multipath model: y_b = sum_l c_l exp(j Omega_l b), Omega_l ~ U(0, 2 pi).
// Sinusoid model:  y_b = cos(Omega b + Phi), Omega, Phi ~ U(0, 2 pi).
// Sample m of a model with seed s is drawn from CounterRng(s).substream(m), so
// any subset of samples can be regenerated independently.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "l4u/matkit.hpp"
#include "l4u/rng.hpp"

namespace l4u {

/// N x M collection of column samples.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(CMatrix columns);

  std::size_t dim() const noexcept { return y_.rows(); }
  std::size_t count() const noexcept { return y_.cols(); }
  const CMatrix& matrix() const noexcept { return y_; }
  std::vector<cplx> column(std::size_t m) const { return y_.column(m); }

  bool operator==(const SampleSet&) const = default;

 private:
  CMatrix y_;
};

struct MultipathModel {
  std::size_t b = 8;
  std::size_t l = 1;
  std::vector<cplx> gains{1.0};
  std::uint64_t seed = 0;
  /// Test hook: fixed angular frequencies (one per path) instead of random draws.
  std::optional<std::vector<double>> forced_omega;
};

struct SinusoidModel {
  std::size_t b = 8;
  std::uint64_t seed = 0;
  /// Test hooks for Omega and Phi.
  std::optional<double> forced_omega;
  std::optional<double> forced_phi;
};

using StochasticModel = std::variant<MultipathModel, SinusoidModel>;

void validate(const MultipathModel& m);
void validate(const SinusoidModel& m);
std::size_t model_dim(const StochasticModel& m);
std::uint64_t model_seed(const StochasticModel& m);
StochasticModel with_seed(StochasticModel m, std::uint64_t seed);

/// Draws sample `index` of the model (uses the model's seed).
std::vector<cplx> draw_sample(const StochasticModel& m, std::uint64_t index);

SampleSet sample_multipath(const MultipathModel& m, std::size_t n);
SampleSet sample_sinusoid(const SinusoidModel& m, std::size_t n);
SampleSet sample_model(const StochasticModel& m, std::size_t n);

/// Synthetic line-of-sight MU-MIMO scene on a half-wavelength ULA.
struct MuMimoScene {
  std::size_t b = 32;
  std::size_t u = 4;
  double sector_deg = 120.0;
  double dmin = 10.0;
  double dmax = 110.0;
  double min_sep_deg = 5.0;
  double power_cap_db = 6.0;
  std::size_t paths_per_ue = 1;
  std::uint64_t seed = 0;
};

struct ScenePath {
  double angle_deg = 0.0;
  double omega = 0.0;  // pi sin(angle)
  cplx gain;
};

struct SceneChannel {
  CMatrix h;                                   // b x u
  std::vector<double> ue_angle_deg;            // line-of-sight angle per UE
  std::vector<double> ue_distance_m;
  std::vector<std::vector<ScenePath>> paths;   // per UE, LoS first
  std::vector<double> power_scale;             // amplitude factor applied by power control
};

void validate(const MuMimoScene& s);
/// Array response p(omega)_b = exp(j omega b), b = 0..n-1.
std::vector<cplx> array_response(std::size_t n, double omega);
SceneChannel synth_scene(const MuMimoScene& s, std::uint64_t index);
std::vector<CMatrix> synth_scene_channels(const MuMimoScene& s, std::size_t n_scenes);

/// Concatenates the columns of equally sized matrices into one sample set.
SampleSet columns_of(const std::vector<CMatrix>& hs);
/// Inverse of columns_of: groups consecutive columns into b x u matrices.
std::vector<CMatrix> group_columns(const SampleSet& s, std::size_t u);

void save_samples(const SampleSet& s, const std::filesystem::path& path);
SampleSet load_samples(const std::filesystem::path& path);

/// Deterministic shuffle-and-split. The train part gets round(frac * M)
/// columns; both parts must be non-empty.
std::pair<SampleSet, SampleSet> split(const SampleSet& s, double train_frac, std::uint64_t seed);

}  // namespace l4u
