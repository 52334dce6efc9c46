#include "l4u/objective.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "l4u/parallel.hpp"

namespace l4u {

namespace {

constexpr std::size_t kChunk = 1024;

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

void check_dims(const CMatrix& a, std::size_t n) {
  if (!a.is_square() || a.rows() != n) {
    throw Error(ErrorKind::invalid_arguments, "transform is " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + " but data dimension is " +
                                                  std::to_string(n));
  }
}

double l4_of(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& z : x) {
    const double p = std::norm(z);
    s += p * p;
  }
  return s;
}

// x = A y for a single column.
std::vector<cplx> transform_column(const CMatrix& a, std::span<const cplx> y) { return a * y; }

McEstimate summarize(std::span<const double> values) {
  McEstimate e;
  e.samples = values.size();
  e.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() < 2) {
    e.std_error = std::numeric_limits<double>::quiet_NaN();
    e.std_error_defined = false;
    return e;
  }
  std::vector<double> dev(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) {
    const double d = values[m] - e.mean;
    dev[m] = d * d;
  }
  const double var = pairwise_sum(dev) / static_cast<double>(values.size() - 1);
  e.std_error = std::sqrt(var / static_cast<double>(values.size()));
  e.std_error_defined = true;
  return e;
}

template <typename F>
std::vector<double> mc_values(const MonteCarloSpec& spec, F per_sample) {
  const StochasticModel model = with_seed(spec.model, spec.seed);
  std::vector<double> values(spec.samples);
  parallel_for(chunk_count(spec.samples), [&](std::size_t c) {
    const std::size_t hi = std::min(spec.samples, (c + 1) * kChunk);
    for (std::size_t m = c * kChunk; m < hi; ++m) values[m] = per_sample(draw_sample(model, m));
  });
  return values;
}

CMatrix pairwise_matrix_sum(std::vector<CMatrix>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_matrix_sum(parts, lo, mid) + pairwise_matrix_sum(parts, mid, hi);
}

}  // namespace

std::size_t spec_dim(const ObjectiveSpec& spec) {
  struct V {
    std::size_t operator()(const DatasetSpec& d) const { return d.y.dim(); }
    std::size_t operator()(const MonteCarloSpec& m) const { return model_dim(m.model); }
    std::size_t operator()(const AnalyticL1Spec& a) const { return a.b; }
  };
  return std::visit(V{}, spec);
}

void validate(const ObjectiveSpec& spec) {
  struct V {
    void operator()(const DatasetSpec& d) const {
      if (d.y.count() == 0) throw Error(ErrorKind::invalid_arguments, "dataset is empty");
    }
    void operator()(const MonteCarloSpec& m) const {
      if (m.samples == 0) throw Error(ErrorKind::invalid_arguments, "Monte-Carlo sample count must be >= 1");
      std::visit([](const auto& x) { validate(x); }, m.model);
    }
    void operator()(const AnalyticL1Spec& a) const {
      if (a.b == 0) throw Error(ErrorKind::invalid_arguments, "analytic spec needs b >= 1");
      if (!std::isfinite(a.c_mag)) throw Error(ErrorKind::invalid_arguments, "gain magnitude must be finite");
    }
  };
  std::visit(V{}, spec);
}

SampleSet draw_mc_samples(const MonteCarloSpec& spec) {
  return sample_model(with_seed(spec.model, spec.seed), spec.samples);
}

SampleBackend sample_backend(const ObjectiveSpec& spec) {
  validate(spec);
  if (const auto* d = std::get_if<DatasetSpec>(&spec)) {
    return {std::make_shared<const SampleSet>(d->y), 1.0};
  }
  if (const auto* m = std::get_if<MonteCarloSpec>(&spec)) {
    return {std::make_shared<const SampleSet>(draw_mc_samples(*m)), 1.0 / static_cast<double>(m->samples)};
  }
  return {};
}

std::vector<double> per_sample_l4(const CMatrix& a, const SampleSet& y) {
  check_dims(a, y.dim());
  const CMatrix x = a * y.matrix();
  std::vector<double> out(y.count(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = x.row(i);
    for (std::size_t m = 0; m < x.cols(); ++m) {
      const double p = std::norm(r[m]);
      out[m] += p * p;
    }
  }
  return out;
}

double g_det(const CMatrix& a, const SampleSet& y) {
  const auto v = per_sample_l4(a, y);
  return pairwise_sum(v);
}

double g_det(const UnitaryMatrix& a, const SampleSet& y) { return g_det(a.matrix(), y); }

McEstimate g_mc(const CMatrix& a, const MonteCarloSpec& spec) {
  validate(ObjectiveSpec{spec});
  check_dims(a, model_dim(spec.model));
  const auto values = mc_values(spec, [&](const std::vector<cplx>& y) { return l4_of(transform_column(a, y)); });
  return summarize(values);
}

McEstimate g_mc_difference(const CMatrix& a2, const CMatrix& a1, const MonteCarloSpec& spec) {
  validate(ObjectiveSpec{spec});
  check_dims(a1, model_dim(spec.model));
  check_dims(a2, model_dim(spec.model));
  const auto values = mc_values(
      spec, [&](const std::vector<cplx>& y) { return l4_of(transform_column(a2, y)) - l4_of(transform_column(a1, y)); });
  return summarize(values);
}

double evaluate(const CMatrix& a, const ObjectiveSpec& spec) {
  struct V {
    const CMatrix& a;
    double operator()(const DatasetSpec& d) const { return g_det(a, d.y); }
    double operator()(const MonteCarloSpec& m) const { return g_mc(a, m).mean; }
    double operator()(const AnalyticL1Spec& s) const { return g_analytic_L1(a, s.b, s.c_mag); }
  };
  validate(spec);
  return std::visit(V{a}, spec);
}

CMatrix grad_gdet(const CMatrix& a, const SampleSet& y) {
  check_dims(a, y.dim());
  const std::size_t n = y.dim();
  const std::size_t count = y.count();
  CMatrix w = a * y.matrix();
  for (auto& z : w.data()) z *= 2.0 * std::norm(z);
  const CMatrix& ym = y.matrix();
  std::vector<CMatrix> parts(chunk_count(count));
  parallel_for(parts.size(), [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(count, lo + kChunk);
    CMatrix acc(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      auto wi = w.row(i);
      for (std::size_t q = 0; q < n; ++q) {
        auto yq = ym.row(q);
        cplx s{};
        for (std::size_t m = lo; m < hi; ++m) s += wi[m] * std::conj(yq[m]);
        acc(i, q) = s;
      }
    }
    parts[c] = std::move(acc);
  });
  return pairwise_matrix_sum(parts, 0, parts.size());
}

GradientEstimate grad_mc(const CMatrix& a, const MonteCarloSpec& spec) {
  validate(ObjectiveSpec{spec});
  const std::size_t n = model_dim(spec.model);
  check_dims(a, n);
  const StochasticModel model = with_seed(spec.model, spec.seed);
  const std::size_t nn = n * n;
  struct Acc {
    std::vector<double> s_re, s_im, q_re, q_im;
  };
  std::vector<Acc> parts(chunk_count(spec.samples));
  parallel_for(parts.size(), [&](std::size_t c) {
    Acc acc{std::vector<double>(nn), std::vector<double>(nn), std::vector<double>(nn), std::vector<double>(nn)};
    const std::size_t hi = std::min(spec.samples, (c + 1) * kChunk);
    for (std::size_t m = c * kChunk; m < hi; ++m) {
      const auto y = draw_sample(model, m);
      const auto x = transform_column(a, y);
      for (std::size_t i = 0; i < n; ++i) {
        const cplx wi = 2.0 * std::norm(x[i]) * x[i];
        for (std::size_t q = 0; q < n; ++q) {
          const cplx g = wi * std::conj(y[q]);
          const std::size_t e = i * n + q;
          acc.s_re[e] += g.real();
          acc.s_im[e] += g.imag();
          acc.q_re[e] += g.real() * g.real();
          acc.q_im[e] += g.imag() * g.imag();
        }
      }
    }
    parts[c] = std::move(acc);
  });
  GradientEstimate out{CMatrix(n, n), std::vector<double>(nn), spec.samples};
  const double s = static_cast<double>(spec.samples);
  std::vector<double> col(parts.size());
  auto reduce = [&](auto member, std::size_t e) {
    for (std::size_t c = 0; c < parts.size(); ++c) col[c] = (parts[c].*member)[e];
    return pairwise_sum(col);
  };
  for (std::size_t e = 0; e < nn; ++e) {
    const double sr = reduce(&Acc::s_re, e);
    const double si = reduce(&Acc::s_im, e);
    const double qr = reduce(&Acc::q_re, e);
    const double qi = reduce(&Acc::q_im, e);
    const double mr = sr / s;
    const double mi = si / s;
    out.mean.data()[e] = {mr, mi};
    if (spec.samples > 1) {
      const double vr = std::max(0.0, (qr - s * mr * mr) / (s - 1.0));
      const double vi = std::max(0.0, (qi - s * mi * mi) / (s - 1.0));
      out.std_error[e] = std::sqrt((vr + vi) / s);
    } else {
      out.std_error[e] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

CMatrix gradient(const CMatrix& a, const ObjectiveSpec& spec) {
  struct V {
    const CMatrix& a;
    CMatrix operator()(const DatasetSpec& d) const { return grad_gdet(a, d.y); }
    CMatrix operator()(const MonteCarloSpec& m) const { return grad_mc(a, m).mean; }
    CMatrix operator()(const AnalyticL1Spec& s) const {
      check_dims(a, s.b);
      return grad_analytic_L1(a, s.c_mag);
    }
  };
  validate(spec);
  return std::visit(V{a}, spec);
}

CMatrix pure_gradient(const CMatrix& a) {
  CMatrix g = a;
  for (auto& z : g.data()) z *= 2.0 * std::norm(z);
  return g;
}

PairMatrix pair_matrix_from_rows(std::span<const cplx> xi, std::span<const cplx> xk, double weight) {
  double m11 = 0, m12 = 0, m13 = 0, m22 = 0, m23 = 0, m33 = 0;
  for (std::size_t m = 0; m < xi.size(); ++m) {
    const double d = 0.5 * (std::norm(xi[m]) - std::norm(xk[m]));
    const cplx z = xi[m] * std::conj(xk[m]);
    const double w2 = z.real();
    const double w3 = -z.imag();
    m11 += d * d;
    m12 += d * w2;
    m13 += d * w3;
    m22 += w2 * w2;
    m23 += w2 * w3;
    m33 += w3 * w3;
  }
  return {{{weight * m11, weight * m12, weight * m13},
           {weight * m12, weight * m22, weight * m23},
           {weight * m13, weight * m23, weight * m33}}};
}

PairMatrix pair_matrix(const CMatrix& a, std::size_t i, std::size_t k, const ObjectiveSpec& spec) {
  if (i <= k || i >= a.rows()) throw Error(ErrorKind::invalid_arguments, "pair needs k < i < N");
  if (const auto* s = std::get_if<AnalyticL1Spec>(&spec)) {
    check_dims(a, s->b);
    return pair_matrix_analytic(a, i, k, s->c_mag);
  }
  const SampleBackend be = sample_backend(spec);
  check_dims(a, be.samples->dim());
  const CMatrix& y = be.samples->matrix();
  std::vector<cplx> xi(y.cols(), cplx{});
  std::vector<cplx> xk(y.cols(), cplx{});
  for (std::size_t p = 0; p < a.cols(); ++p) {
    const cplx ai = a(i, p);
    const cplx ak = a(k, p);
    auto yp = y.row(p);
    for (std::size_t m = 0; m < y.cols(); ++m) {
      xi[m] += ai * yp[m];
      xk[m] += ak * yp[m];
    }
  }
  return pair_matrix_from_rows(xi, xk, be.weight);
}

DerivativeReport ca_derivatives(const CMatrix& a, const ObjectiveSpec& spec) {
  validate(spec);
  const std::size_t n = spec_dim(spec);
  check_dims(a, n);
  DerivativeReport r;
  r.b = n;
  r.max_second = -std::numeric_limits<double>::infinity();
  if (n < 2) {
    r.max_second = 0.0;
    return r;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) pairs.emplace_back(i, k);
  r.pairs.resize(pairs.size());

  std::function<PairMatrix(std::size_t, std::size_t)> pm;
  CMatrix x;
  SampleBackend be;
  if (const auto* s = std::get_if<AnalyticL1Spec>(&spec)) {
    pm = [&a, c = s->c_mag](std::size_t i, std::size_t k) { return pair_matrix_analytic(a, i, k, c); };
  } else {
    be = sample_backend(spec);
    x = a * be.samples->matrix();
    pm = [&](std::size_t i, std::size_t k) { return pair_matrix_from_rows(x.row(i), x.row(k), be.weight); };
  }
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, k] = pairs[p];
    const PairMatrix m = pm(i, k);
    r.pairs[p] = {i, k, 8.0 * m[0][1], 16.0 * (m[1][1] - m[0][0])};
  });
  for (const auto& p : r.pairs) {
    r.max_abs_first = std::max(r.max_abs_first, std::abs(p.first));
    r.max_second = std::max(r.max_second, p.second);
  }
  return r;
}

DerivativeReport ca_derivatives(const UnitaryMatrix& a, const ObjectiveSpec& spec) {
  return ca_derivatives(a.matrix(), spec);
}

}  // namespace l4u
