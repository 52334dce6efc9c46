#include "l4u/models.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "l4u/matrix_io.hpp"
#include "l4u/parallel.hpp"

namespace l4u {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SampleSet::SampleSet(CMatrix columns) : y_(std::move(columns)) {
  if (y_.empty()) throw Error(ErrorKind::invalid_dimension, "sample set needs at least one column");
  if (!all_finite(y_)) throw Error(ErrorKind::invalid_input, "sample set has non-finite entries");
}

void validate(const MultipathModel& m) {
  if (m.b == 0 || m.l == 0) throw Error(ErrorKind::invalid_arguments, "multipath model needs b >= 1 and l >= 1");
  if (m.gains.size() != m.l) {
    throw Error(ErrorKind::invalid_arguments,
                "expected " + std::to_string(m.l) + " path gains, got " + std::to_string(m.gains.size()));
  }
  bool any = false;
  for (const auto& c : m.gains) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorKind::invalid_arguments, "path gains must be finite");
    }
    any = any || c != cplx{};
  }
  if (!any) throw Error(ErrorKind::invalid_arguments, "at least one path gain must be non-zero");
  if (m.forced_omega && m.forced_omega->size() != m.l) {
    throw Error(ErrorKind::invalid_arguments, "forced frequencies must list one value per path");
  }
}

void validate(const SinusoidModel& m) {
  if (m.b == 0) throw Error(ErrorKind::invalid_arguments, "sinusoid model needs b >= 1");
}

std::size_t model_dim(const StochasticModel& m) {
  return std::visit([](const auto& x) { return x.b; }, m);
}

std::uint64_t model_seed(const StochasticModel& m) {
  return std::visit([](const auto& x) { return x.seed; }, m);
}

StochasticModel with_seed(StochasticModel m, std::uint64_t seed) {
  std::visit([seed](auto& x) { x.seed = seed; }, m);
  return m;
}

namespace {

std::vector<cplx> draw_multipath(const MultipathModel& m, CounterRng rng) {
  std::vector<cplx> y(m.b, cplx{});
  for (std::size_t l = 0; l < m.l; ++l) {
    const double omega = m.forced_omega ? (*m.forced_omega)[l] : rng.uniform(0.0, kTwoPi);
    for (std::size_t b = 0; b < m.b; ++b) {
      y[b] += m.gains[l] * std::polar(1.0, omega * static_cast<double>(b));
    }
  }
  return y;
}

std::vector<cplx> draw_sinusoid(const SinusoidModel& m, CounterRng rng) {
  const double omega_draw = rng.uniform(0.0, kTwoPi);
  const double phi_draw = rng.uniform(0.0, kTwoPi);
  const double omega = m.forced_omega.value_or(omega_draw);
  const double phi = m.forced_phi.value_or(phi_draw);
  std::vector<cplx> y(m.b);
  for (std::size_t b = 0; b < m.b; ++b) y[b] = std::cos(omega * static_cast<double>(b) + phi);
  return y;
}

}  // namespace

std::vector<cplx> draw_sample(const StochasticModel& m, std::uint64_t index) {
  return std::visit(
      [index](const auto& x) -> std::vector<cplx> {
        const CounterRng rng = CounterRng(x.seed).substream(index);
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, MultipathModel>) {
          return draw_multipath(x, rng);
        } else {
          return draw_sinusoid(x, rng);
        }
      },
      m);
}

SampleSet sample_model(const StochasticModel& m, std::size_t n) {
  std::visit([](const auto& x) { validate(x); }, m);
  if (n == 0) throw Error(ErrorKind::invalid_arguments, "sample count must be positive");
  const std::size_t dim = model_dim(m);
  CMatrix y(dim, n);
  parallel_for(n, [&](std::size_t j) {
    const auto col = draw_sample(m, j);
    for (std::size_t b = 0; b < dim; ++b) y(b, j) = col[b];
  });
  return SampleSet(std::move(y));
}

SampleSet sample_multipath(const MultipathModel& m, std::size_t n) { return sample_model(m, n); }
SampleSet sample_sinusoid(const SinusoidModel& m, std::size_t n) { return sample_model(m, n); }

SampleSet columns_of(const std::vector<CMatrix>& hs) {
  if (hs.empty()) throw Error(ErrorKind::invalid_arguments, "no matrices to concatenate");
  const std::size_t rows = hs.front().rows();
  std::size_t total = 0;
  for (const auto& h : hs) {
    if (h.rows() != rows) throw Error(ErrorKind::invalid_dimension, "matrices differ in row count");
    total += h.cols();
  }
  CMatrix y(rows, total);
  std::size_t c = 0;
  for (const auto& h : hs) {
    for (std::size_t j = 0; j < h.cols(); ++j, ++c) {
      for (std::size_t i = 0; i < rows; ++i) y(i, c) = h(i, j);
    }
  }
  return SampleSet(std::move(y));
}

std::vector<CMatrix> group_columns(const SampleSet& s, std::size_t u) {
  if (u == 0 || s.count() % u != 0) {
    throw Error(ErrorKind::invalid_arguments,
                "column count " + std::to_string(s.count()) + " is not a multiple of " + std::to_string(u));
  }
  std::vector<CMatrix> out;
  out.reserve(s.count() / u);
  for (std::size_t g = 0; g < s.count() / u; ++g) {
    CMatrix h(s.dim(), u);
    for (std::size_t j = 0; j < u; ++j)
      for (std::size_t i = 0; i < s.dim(); ++i) h(i, j) = s.matrix()(i, g * u + j);
    out.push_back(std::move(h));
  }
  return out;
}

void save_samples(const SampleSet& s, const std::filesystem::path& path) {
  if (s.count() == 0) throw Error(ErrorKind::invalid_arguments, "cannot save an empty sample set");
  save_cmx1(path, s.matrix());
}

SampleSet load_samples(const std::filesystem::path& path) {
  CMatrix m = load_cmx1(path);
  if (!all_finite(m)) throw Error(ErrorKind::format_error, "sample file has non-finite entries");
  return SampleSet(std::move(m));
}

std::pair<SampleSet, SampleSet> split(const SampleSet& s, double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw Error(ErrorKind::invalid_fraction, "train fraction must lie strictly between 0 and 1");
  }
  const std::size_t m = s.count();
  const auto n_train = static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(m)));
  if (n_train == 0 || n_train >= m) {
    throw Error(ErrorKind::invalid_fraction, "split of " + std::to_string(m) + " columns leaves an empty part");
  }
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  CounterRng rng(seed);
  for (std::size_t j = m; j > 1; --j) std::swap(idx[j - 1], idx[rng.uniform_int(j)]);
  auto take = [&](std::size_t lo, std::size_t hi) {
    CMatrix y(s.dim(), hi - lo);
    for (std::size_t c = lo; c < hi; ++c)
      for (std::size_t i = 0; i < s.dim(); ++i) y(i, c - lo) = s.matrix()(i, idx[c]);
    return SampleSet(std::move(y));
  };
  return {take(0, n_train), take(n_train, m)};
}

}  // namespace l4u
