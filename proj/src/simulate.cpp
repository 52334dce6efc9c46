#include "l4u/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "l4u/parallel.hpp"

namespace l4u {

namespace {

std::vector<cplx> make_qpsk() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<cplx> p(4);
  for (std::size_t idx = 0; idx < 4; ++idx) {
    const double re = (idx & 2u) ? -1.0 : 1.0;
    const double im = (idx & 1u) ? -1.0 : 1.0;
    p[idx] = {s * re, s * im};
  }
  return p;
}

std::vector<cplx> make_qam16() {
  // Gray levels for a bit pair (b0 b1)
  constexpr double level[4] = {-3.0, -1.0, 3.0, 1.0};  // 00, 01, 10, 11
  const double s = 1.0 / std::sqrt(10.0);
  std::vector<cplx> p(16);
  for (std::size_t idx = 0; idx < 16; ++idx) p[idx] = {s * level[idx >> 2], s * level[idx & 3u]};
  return p;
}

// Cholesky solve of (H^H H + n0 I) x = H^H y for a small U.
std::vector<cplx> lmmse_estimate(std::span<const cplx> y, const CMatrix& h, double n0) {
  const std::size_t u = h.cols();
  const std::size_t rows = h.rows();
  CMatrix g(u, u);
  std::vector<cplx> r(u, cplx{});
  for (std::size_t b = 0; b < rows; ++b) {
    auto hb = h.row(b);
    for (std::size_t p = 0; p < u; ++p) {
      const cplx cp = std::conj(hb[p]);
      r[p] += cp * y[b];
      for (std::size_t q = 0; q <= p; ++q) g(p, q) += cp * hb[q];
    }
  }
  double dmax = 0.0;
  for (std::size_t p = 0; p < u; ++p) {
    g(p, p) += n0;
    dmax = std::max(dmax, g(p, p).real());
  }
  // lower-triangular L with G = L L^H, stored in g
  for (std::size_t j = 0; j < u; ++j) {
    double d = g(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(g(j, k));
    if (!(d > 1e-12 * dmax) || !(dmax > 0.0)) {
      throw Error(ErrorKind::detection_error, "normal matrix is singular");
    }
    const double l = std::sqrt(d);
    g(j, j) = l;
    for (std::size_t i = j + 1; i < u; ++i) {
      cplx s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= g(i, k) * std::conj(g(j, k));
      g(i, j) = s / l;
    }
  }
  for (std::size_t i = 0; i < u; ++i) {
    cplx s = r[i];
    for (std::size_t k = 0; k < i; ++k) s -= g(i, k) * r[k];
    r[i] = s / g(i, i).real();
  }
  for (std::size_t i = u; i-- > 0;) {
    cplx s = r[i];
    for (std::size_t k = i + 1; k < u; ++k) s -= std::conj(g(k, i)) * r[k];
    r[i] = s / g(i, i).real();
  }
  return r;
}

Detection decide(std::vector<cplx> est, Constellation c) {
  Detection d;
  const std::size_t bps = bits_per_symbol(c);
  d.estimates = std::move(est);
  for (const auto& z : d.estimates) {
    const std::size_t idx = nearest_symbol(c, z);
    d.symbols.push_back(idx);
    for (std::size_t bit = bps; bit-- > 0;) d.bits.push_back(static_cast<std::uint8_t>((idx >> bit) & 1u));
  }
  return d;
}

void check_system(std::span<const cplx> y, const CMatrix& h, double n0) {
  if (h.rows() != y.size()) throw Error(ErrorKind::invalid_arguments, "receive vector and channel disagree");
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw Error(ErrorKind::invalid_arguments, "noise variance must be >= 0");
}

// A detector with its channel-dependent work done once.
struct Prepared {
  const UnitaryMatrix* transform = nullptr;
  CMatrix h_used;                 // transformed (and reduced) channel
  std::vector<std::size_t> rows;  // kept rows of the transformed domain
  bool reduced = false;
};

CMatrix soft_threshold(CMatrix h, double tau) {
  for (auto& z : h.data()) {
    const double m = std::abs(z);
    z = m > tau ? z * ((m - tau) / m) : cplx{};
  }
  return h;
}

CMatrix take_rows(const CMatrix& m, const std::vector<std::size_t>& rows) {
  CMatrix r(rows.size(), m.cols());
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t c = 0; c < m.cols(); ++c) r(j, c) = m(rows[j], c);
  return r;
}

// density <= 0 keeps every row; shrink_tau < 0 disables thresholding.
Prepared prepare(const CMatrix& h, const UnitaryMatrix* transform, double density, double shrink_tau) {
  Prepared p;
  p.transform = transform;
  CMatrix ht = transform ? transform->matrix() * h : h;
  if (shrink_tau >= 0.0) ht = soft_threshold(std::move(ht), shrink_tau);
  if (density > 0.0) {
    p.rows = le_rows(ht, density);
    p.reduced = true;
    if (p.rows.size() < h.cols()) {
      throw Error(ErrorKind::detection_error, "reduced system keeps " + std::to_string(p.rows.size()) +
                                                  " rows for " + std::to_string(h.cols()) + " users");
    }
    p.h_used = take_rows(ht, p.rows);
  } else {
    p.h_used = std::move(ht);
  }
  return p;
}

Detection run_prepared(const Prepared& p, std::span<const cplx> y, double n0, Constellation c) {
  std::vector<cplx> yt = p.transform ? p.transform->matrix() * y : std::vector<cplx>(y.begin(), y.end());
  if (p.reduced) {
    std::vector<cplx> yr(p.rows.size());
    for (std::size_t j = 0; j < p.rows.size(); ++j) yr[j] = yt[p.rows[j]];
    yt = std::move(yr);
  }
  return decide(lmmse_estimate(yt, p.h_used, n0), c);
}

}  // namespace

std::string_view to_string(Constellation c) { return c == Constellation::qpsk ? "qpsk" : "16qam"; }

Constellation parse_constellation(std::string_view s) {
  if (s == "qpsk" || s == "QPSK") return Constellation::qpsk;
  if (s == "16qam" || s == "16QAM" || s == "qam16") return Constellation::qam16;
  throw Error(ErrorKind::invalid_arguments, "unknown constellation '" + std::string(s) + "'");
}

const std::vector<cplx>& constellation_points(Constellation c) {
  static const std::vector<cplx> qpsk = make_qpsk();
  static const std::vector<cplx> qam16 = make_qam16();
  return c == Constellation::qpsk ? qpsk : qam16;
}

std::size_t bits_per_symbol(Constellation c) { return c == Constellation::qpsk ? 2 : 4; }

std::size_t nearest_symbol(Constellation c, cplx z) {
  const auto& pts = constellation_points(c);
  std::size_t best = 0;
  double bd = std::norm(z - pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = std::norm(z - pts[i]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

std::vector<cplx> uplink_rx(const CMatrix& h, std::span<const cplx> s, double n0, CounterRng& rng) {
  if (h.cols() != s.size()) throw Error(ErrorKind::invalid_arguments, "symbol vector and channel disagree");
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw Error(ErrorKind::invalid_arguments, "noise variance must be >= 0");
  std::vector<cplx> y = h * s;
  for (auto& v : y) v += rng.complex_normal(n0);
  return y;
}

Detection lmmse_detect(std::span<const cplx> y, const CMatrix& h, double n0, Constellation c) {
  check_system(y, h, n0);
  if (h.cols() > h.rows()) throw Error(ErrorKind::invalid_arguments, "more users than antennas");
  return decide(lmmse_estimate(y, h, n0), c);
}

std::vector<std::size_t> le_rows(const CMatrix& th, double density) {
  if (!(density > 0.0 && density <= 1.0)) throw Error(ErrorKind::invalid_arguments, "density must lie in (0, 1]");
  const std::size_t b = th.rows();
  const auto keep = static_cast<std::size_t>(
      std::clamp(std::ceil(density * static_cast<double>(b) - 1e-9), 1.0, static_cast<double>(b)));
  std::vector<double> energy(b, 0.0);
  for (std::size_t r = 0; r < b; ++r)
    for (const auto& z : th.row(r)) energy[r] += std::norm(z);
  std::vector<std::size_t> idx(b);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return energy[x] > energy[y]; });
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Detection le_detect(std::span<const cplx> y, const CMatrix& h, double n0, double density,
                    const UnitaryMatrix& transform, Constellation c) {
  check_system(y, h, n0);
  if (!(density > 0.0 && density <= 1.0)) throw Error(ErrorKind::invalid_arguments, "density must lie in (0, 1]");
  if (transform.dim() != h.rows()) throw Error(ErrorKind::invalid_arguments, "transform size differs from B");
  const Prepared p = prepare(h, &transform, density, -1.0);
  return run_prepared(p, y, n0, c);
}

double noise_variance(const CMatrix& h, double snr_db) {
  const double e = frobenius_norm(h);
  return e * e / (static_cast<double>(h.rows()) * std::pow(10.0, snr_db / 10.0));
}

BerCurve ber_sweep(const UplinkConfig& cfg, const DetectorKind& det, const std::vector<CMatrix>& channels) {
  if (channels.empty()) throw Error(ErrorKind::invalid_arguments, "no channels supplied");
  if (cfg.trials_per_point == 0) throw Error(ErrorKind::invalid_arguments, "trials_per_point must be >= 1");
  if (cfg.u == 0 || cfg.u > cfg.b) throw Error(ErrorKind::invalid_arguments, "need 1 <= u <= b");
  for (const auto& h : channels) {
    if (h.rows() != cfg.b || h.cols() != cfg.u) {
      throw Error(ErrorKind::invalid_arguments, "channel shape differs from b x u");
    }
  }
  const UnitaryMatrix* transform = det.transform ? &*det.transform : nullptr;
  if (det.kind == DetectorKind::Kind::le && !transform) {
    throw Error(ErrorKind::invalid_arguments, "the LE detector needs a transform");
  }
  if (transform && transform->dim() != cfg.b) throw Error(ErrorKind::invalid_arguments, "transform size differs from B");
  if (det.kind == DetectorKind::Kind::le && !(det.density > 0.0 && det.density <= 1.0)) {
    throw Error(ErrorKind::invalid_arguments, "density must lie in (0, 1]");
  }
  const double density = det.kind == DetectorKind::Kind::le ? det.density : 0.0;

  const std::size_t bps = bits_per_symbol(cfg.constellation);
  const auto& pts = constellation_points(cfg.constellation);
  const CounterRng root(cfg.seed);

  BerCurve curve;
  for (double snr : cfg.snr_db_grid) {
    std::vector<double> n0s(channels.size());
    std::vector<Prepared> prep(channels.size());
    for (std::size_t c = 0; c < channels.size(); ++c) {
      n0s[c] = noise_variance(channels[c], snr);
      double tau = -1.0;
      if (det.shrinkage) tau = std::sqrt(n0s[c]) * std::sqrt(2.0 * std::log(static_cast<double>(cfg.b)));
      prep[c] = prepare(channels[c], transform, density, tau);
    }
    std::vector<std::uint32_t> errors(cfg.trials_per_point, 0);
    parallel_for(cfg.trials_per_point, [&](std::size_t t) {
      CounterRng rng = root.substream(t);
      const std::size_t c = t % channels.size();
      std::vector<std::size_t> sent(cfg.u);
      std::vector<cplx> s(cfg.u);
      for (std::size_t u = 0; u < cfg.u; ++u) {
        sent[u] = rng.next_u32() & ((1u << bps) - 1u);
        s[u] = pts[sent[u]];
      }
      const auto y = uplink_rx(channels[c], s, n0s[c], rng);
      const Detection d = run_prepared(prep[c], y, n0s[c], cfg.constellation);
      std::uint32_t e = 0;
      for (std::size_t u = 0; u < cfg.u; ++u) e += static_cast<std::uint32_t>(std::popcount(sent[u] ^ d.symbols[u]));
      errors[t] = e;
    });
    std::uint64_t total = 0;
    for (auto e : errors) total += e;
    const std::uint64_t bits = static_cast<std::uint64_t>(cfg.trials_per_point) * cfg.u * bps;
    curve.snr_db.push_back(snr);
    curve.bit_errors.push_back(total);
    curve.bit_count.push_back(bits);
    curve.ber.push_back(static_cast<double>(total) / static_cast<double>(bits));
  }
  return curve;
}

}  // namespace l4u
