#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "l4u/analysis.hpp"
#include "l4u/json.hpp"
#include "l4u/learn.hpp"
#include "l4u/models.hpp"
#include "l4u/simulate.hpp"

namespace py = pybind11;
using namespace l4u;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CMatrix to_cmatrix(const CArray& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto r = static_cast<std::size_t>(a.shape(0));
  const auto c = static_cast<std::size_t>(a.shape(1));
  if (r == 0 || c == 0) throw py::value_error("expected a non-empty array");
  return CMatrix(r, c, std::vector<cplx>(a.data(), a.data() + r * c));
}

CArray to_array(const CMatrix& m) {
  CArray out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

UnitaryMatrix to_unitary(const CArray& a) { return UnitaryMatrix::from(to_cmatrix(a), 1e-8); }

std::string dump(const nlohmann::json& j) { return j.dump(); }

py::tuple learned(const LearnResult& r) { return py::make_tuple(to_array(r.a.matrix()), dump(nlohmann::json(r.trace))); }

}  // namespace

PYBIND11_MODULE(_l4u, m) {
  m.doc() = "Unitary l4-norm sparsifying transforms";

  py::register_exception<Error>(m, "L4uError", PyExc_ValueError);

  m.def("dft_matrix", [](std::size_t n) { return to_array(dft_matrix(n).matrix()); }, py::arg("n"));
  m.def("dct2_matrix", [](std::size_t n) { return to_array(dct2_matrix(n).matrix()); }, py::arg("n"));
  m.def("random_unitary", [](std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    return to_array(random_unitary(n, rng).matrix());
  }, py::arg("n"), py::arg("seed") = 0);
  m.def("l4_norm4", [](const CArray& a) { return l4_norm4(to_cmatrix(a)); }, py::arg("a"));
  m.def("project_unitary", [](const CArray& a) { return to_array(project_unitary(to_cmatrix(a)).matrix()); },
        py::arg("a"));
  m.def("nearest_cp", [](const CArray& a) {
    const CpProjection p = nearest_cp(to_cmatrix(a));
    py::dict d;
    d["perm"] = p.perm;
    d["phases"] = p.phases;
    d["distance_sq"] = p.distance_sq;
    d["is_permutation"] = p.is_permutation;
    return d;
  }, py::arg("a"));

  m.def("sample_multipath", [](std::size_t b, std::size_t l, std::vector<cplx> gains, std::size_t n, std::uint64_t seed) {
    if (gains.empty()) gains = default_gains(l);
    return to_array(sample_multipath(MultipathModel{b, l, gains, seed, std::nullopt}, n).matrix());
  }, py::arg("b"), py::arg("l") = 1, py::arg("gains") = std::vector<cplx>{}, py::arg("n") = 1000, py::arg("seed") = 0);
  m.def("sample_sinusoid", [](std::size_t b, std::size_t n, std::uint64_t seed) {
    return to_array(sample_sinusoid(SinusoidModel{b, seed, std::nullopt, std::nullopt}, n).matrix());
  }, py::arg("b"), py::arg("n") = 1000, py::arg("seed") = 0);
  m.def("scene_channels", [](std::size_t b, std::size_t u, std::size_t scenes, std::size_t paths, std::uint64_t seed) {
    MuMimoScene s;
    s.b = b;
    s.u = u;
    s.paths_per_ue = paths;
    s.seed = seed;
    std::vector<CArray> out;
    for (const auto& h : synth_scene_channels(s, scenes)) out.push_back(to_array(h));
    return out;
  }, py::arg("b") = 32, py::arg("u") = 4, py::arg("scenes") = 10, py::arg("paths") = 1, py::arg("seed") = 0);

  m.def("g_det", [](const CArray& a, const CArray& y) { return g_det(to_cmatrix(a), SampleSet(to_cmatrix(y))); },
        py::arg("a"), py::arg("y"));
  m.def("grad_gdet", [](const CArray& a, const CArray& y) {
    return to_array(grad_gdet(to_cmatrix(a), SampleSet(to_cmatrix(y))));
  }, py::arg("a"), py::arg("y"));
  m.def("g_analytic_l1", [](const CArray& a, double c) {
    const CMatrix am = to_cmatrix(a);
    return g_analytic_L1(am, am.rows(), c);
  }, py::arg("a"),
        py::arg("c") = 1.0);
  m.def("_ca_derivatives_analytic", [](const CArray& a, double c) {
    const CMatrix am = to_cmatrix(a);
    return dump(nlohmann::json(ca_derivatives(am, AnalyticL1Spec{am.rows(), c})));
  }, py::arg("a"), py::arg("c") = 1.0);

  m.def("_msp_run", [](const CArray& y, const CArray& init, std::size_t max_iters) {
    MspConfig cfg;
    cfg.init = to_unitary(init);
    cfg.max_iters = max_iters;
    return learned(msp_run(cfg, DatasetSpec{SampleSet(to_cmatrix(y))}));
  }, py::arg("y"), py::arg("init"), py::arg("max_iters") = 500);
  m.def("_ca_run", [](const CArray& y, const CArray& init, std::size_t max_sweeps) {
    CaConfig cfg;
    cfg.init = to_unitary(init);
    cfg.max_sweeps = max_sweeps;
    return learned(ca_run(cfg, DatasetSpec{SampleSet(to_cmatrix(y))}));
  }, py::arg("y"), py::arg("init"), py::arg("max_sweeps") = 100);

  m.def("_verify", [](const std::string& claim, const std::vector<std::size_t>& bs) {
    if (claim == "dft-msp") return dump(nlohmann::json(verify_dft_msp(bs, 1, {}, MspMode{})));
    if (claim == "dft-ca") return dump(nlohmann::json(verify_dft_ca(bs)));
    if (claim == "dct-scan") return dump(nlohmann::json(scan_dct(bs)));
    throw py::value_error("unknown claim '" + claim + "'");
  }, py::arg("claim"), py::arg("b"));

  m.def("_ber_sweep", [](const std::vector<CArray>& channels, const std::string& det, double density,
                         std::optional<CArray> transform, std::vector<double> snr_db, std::size_t trials,
                         const std::string& constellation, std::uint64_t seed) {
    std::vector<CMatrix> hs;
    for (const auto& h : channels) hs.push_back(to_cmatrix(h));
    if (hs.empty()) throw py::value_error("no channels");
    UplinkConfig cfg;
    cfg.b = hs.front().rows();
    cfg.u = hs.front().cols();
    cfg.constellation = parse_constellation(constellation);
    cfg.snr_db_grid = std::move(snr_db);
    cfg.trials_per_point = trials;
    cfg.seed = seed;
    DetectorKind d;
    d.kind = det == "le" ? DetectorKind::Kind::le : DetectorKind::Kind::lmmse;
    if (det != "le" && det != "lmmse") throw py::value_error("unknown detector '" + det + "'");
    d.density = density;
    if (transform) d.transform = to_unitary(*transform);
    return dump(nlohmann::json(ber_sweep(cfg, d, hs)));
  }, py::arg("channels"), py::arg("det") = "lmmse", py::arg("density") = 0.125, py::arg("transform") = py::none(),
     py::arg("snr_db") = std::vector<double>{0, 5, 10}, py::arg("trials") = 1000, py::arg("constellation") = "qpsk",
     py::arg("seed") = 0);
}
