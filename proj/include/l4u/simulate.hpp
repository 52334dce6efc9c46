#pragma once

// Uncoded MU-MIMO uplink simulation: y = H s + n with unit-energy Gray
// constellations, an antenna-domain LMMSE detector and a beamspace
// largest-entry (LE) detector.
//
// SNR is per receive antenna: SNR = E[||H s||^2] / (B n0) = ||H||_F^2 / (B n0).

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "l4u/matkit.hpp"
#include "l4u/rng.hpp"

namespace l4u {

enum class Constellation { qpsk, qam16 };
std::string_view to_string(Constellation c);
Constellation parse_constellation(std::string_view s);

/// Points indexed by their bit label (MSB first). QPSK: (b0, b1) ->
/// ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2). 16-QAM: (b0 b1) Gray-maps the real
/// level and (b2 b3) the imaginary level via 00 -> -3, 01 -> -1, 11 -> 1,
/// 10 -> 3, scaled by 1/sqrt(10).
const std::vector<cplx>& constellation_points(Constellation c);
std::size_t bits_per_symbol(Constellation c);
/// Nearest point; ties resolve to the lower index.
std::size_t nearest_symbol(Constellation c, cplx z);

struct Detection {
  std::vector<cplx> estimates;      // soft LMMSE output, one per UE
  std::vector<std::size_t> symbols; // constellation indices
  std::vector<std::uint8_t> bits;   // MSB-first labels, concatenated per UE
};

/// y = H s + n with n ~ CN(0, n0 I). n0 = 0 returns H s exactly.
std::vector<cplx> uplink_rx(const CMatrix& h, std::span<const cplx> s, double n0, CounterRng& rng);

/// s_hat = (H^H H + n0 I)^{-1} H^H y followed by hard decisions.
Detection lmmse_detect(std::span<const cplx> y, const CMatrix& h, double n0, Constellation c);

/// Transforms y and H by `transform`, keeps the ceil(density B) rows with the
/// largest channel energy sum_u |(A H)_{b,u}|^2 (ties to the lower row index,
/// original row order preserved) and runs LMMSE on the reduced system.
Detection le_detect(std::span<const cplx> y, const CMatrix& h, double n0, double density,
                    const UnitaryMatrix& transform, Constellation c);

/// Rows kept by the LE detector, ascending.
std::vector<std::size_t> le_rows(const CMatrix& transformed_h, double density);

struct DetectorKind {
  enum class Kind { lmmse, le };
  Kind kind = Kind::lmmse;
  double density = 0.125;
  /// Pre-transform; LE requires one, LMMSE uses the antenna domain when absent.
  std::optional<UnitaryMatrix> transform;
  /// Soft-threshold the transformed channel with tau = sqrt(n0) sqrt(2 ln B)
  /// before detection (imperfect-CSI option).
  bool shrinkage = false;
};

struct UplinkConfig {
  std::size_t b = 32;
  std::size_t u = 4;
  Constellation constellation = Constellation::qpsk;
  std::vector<double> snr_db_grid{0, 5, 10, 15, 20};
  std::size_t trials_per_point = 1000;
  std::uint64_t seed = 0;
};

struct BerCurve {
  std::vector<double> snr_db;
  std::vector<double> ber;
  std::vector<std::uint64_t> bit_count;
  std::vector<std::uint64_t> bit_errors;
};

/// Trial t at every SNR point uses CounterRng(seed).substream(t) and channel
/// t mod channels.size(), so curves for different detectors or SNR points
/// share bits and noise shapes (common random numbers).
BerCurve ber_sweep(const UplinkConfig& cfg, const DetectorKind& det, const std::vector<CMatrix>& channels);

/// Noise variance for a channel at a per-antenna SNR in dB.
double noise_variance(const CMatrix& h, double snr_db);

}  // namespace l4u
