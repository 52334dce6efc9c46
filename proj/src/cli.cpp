#include "l4u/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "l4u/analysis.hpp"
#include "l4u/json.hpp"
#include "l4u/matrix_io.hpp"
#include "l4u/models.hpp"
#include "l4u/parallel.hpp"
#include "l4u/simulate.hpp"

namespace l4u {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_range(text)) {
    if (v < 1 || v != std::floor(v)) throw UsageError("expected positive integers in '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<cplx> parse_gains(const std::string& text) {
  std::vector<cplx> g;
  for (const auto& t : split_list(text)) g.push_back(parse_complex(t));
  return g;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

// Pulls "--config PATH" out of args and appends the file's key=value pairs as
// flags unless the command line already sets them.
std::string apply_config_file(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t n = 0; n < args.size(); ++n) {
    if (args[n] == "--config" && n + 1 < args.size()) {
      path = args[n + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(n), args.begin() + static_cast<std::ptrdiff_t>(n) + 2);
      break;
    }
    if (args[n].rfind("--config=", 0) == 0) {
      path = args[n].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(n));
      break;
    }
  }
  if (path.empty()) return path;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open config file '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) != 0) key = "--" + key;
    if (has_flag(args, key)) continue;
    if (value == "true") {
      extra.push_back(key);
    } else if (value != "false") {
      extra.push_back(key);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return path;
}

// Every option of the subcommand with its resolved value.
json resolved_config(const CLI::App& sub, const std::string& config_file) {
  json cfg;
  cfg["command"] = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
    std::string name = opt->get_name(false, true);
    if (name.rfind("--", 0) == 0) name = name.substr(2);
    if (opt->count() > 0) {
      const auto& r = opt->results();
      cfg[name] = r.size() == 1 ? json(r[0]) : json(r);
    } else if (opt->get_type_size() == 0) {
      cfg[name] = false;
    } else if (!opt->get_default_str().empty()) {
      cfg[name] = opt->get_default_str();
    }
  }
  if (!config_file.empty()) cfg["config_file"] = config_file;
  return cfg;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::io_error, "cannot write '" + path + "'");
  f << j.dump(2) << '\n';
  if (!f) throw Error(ErrorKind::io_error, "write failed for '" + path + "'");
}

void save_with_meta(const std::string& path, const CMatrix& m, const json& config, json summary) {
  save_cmx1(path, m);
  write_json(path + ".meta.json", envelope(config, "summary", std::move(summary)));
}

UnitaryMatrix named_transform(const std::string& name, std::size_t b, std::uint64_t seed, const std::string& path) {
  if (name == "dft") return dft_matrix(b);
  if (name == "dct") return dct2_matrix(b);
  if (name == "identity") return UnitaryMatrix::identity(b);
  if (name == "random") {
    CounterRng rng(seed);
    return random_unitary(b, rng);
  }
  if (name == "file") {
    if (path.empty()) throw UsageError("a file transform needs a path");
    UnitaryMatrix a = UnitaryMatrix::from(load_cmx1(path), 1e-8);
    if (a.dim() != b) throw UsageError("transform in '" + path + "' is " + std::to_string(a.dim()) + "x" +
                                       std::to_string(a.dim()) + ", expected " + std::to_string(b));
    return a;
  }
  throw UsageError("unknown transform '" + name + "'");
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string model = "multipath";
  std::size_t b = 8;
  std::size_t l = 1;
  std::string gains;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::size_t u = 4;
  std::size_t paths = 1;
  std::string out;
};

MultipathModel multipath_from(std::size_t b, std::size_t l, const std::string& gains, std::uint64_t seed) {
  MultipathModel m;
  m.b = b;
  m.l = l;
  m.gains = gains.empty() ? default_gains(l) : parse_gains(gains);
  m.seed = seed;
  return m;
}

int cmd_gen(const GenArgs& a, const json& config, std::ostream& out) {
  SampleSet s(CMatrix(1, 1));
  if (a.model == "multipath") {
    s = sample_multipath(multipath_from(a.b, a.l, a.gains, a.seed), a.n);
  } else if (a.model == "sinusoid") {
    s = sample_sinusoid(SinusoidModel{a.b, a.seed, std::nullopt, std::nullopt}, a.n);
  } else if (a.model == "scene") {
    MuMimoScene sc;
    sc.b = a.b;
    sc.u = a.u;
    sc.paths_per_ue = a.paths;
    sc.seed = a.seed;
    s = columns_of(synth_scene_channels(sc, a.n));
  } else {
    throw UsageError("unknown model '" + a.model + "'");
  }
  json summary{{"dim", s.dim()}, {"count", s.count()}, {"seed", a.seed}, {"model", a.model}};
  save_with_meta(a.out, s.matrix(), config, summary);
  out << "wrote " << a.out << ": dim=" << s.dim() << " count=" << s.count() << " seed=" << a.seed << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------- learn

struct LearnArgs {
  std::string alg;
  std::string init = "identity";
  std::uint64_t init_seed = 0;
  std::string init_path;
  std::string data;
  bool model_l1 = false;
  double c = 1.0;
  std::string model;
  std::size_t b = 8;
  std::size_t l = 1;
  std::string gains;
  std::size_t samples = 100'000;
  std::uint64_t seed = 0;
  std::size_t max_iters = 500;
  std::size_t max_sweeps = 100;
  double step_tol = 1e-10;
  double obj_tol = 1e-12;
  double inner_tol = 1e-12;
  double improvement_tol = 1e-10;
  std::string order = "lexicographic";
  std::uint64_t order_seed = 0;
  std::string out;
  std::string trace;
};

ObjectiveSpec learn_objective(const LearnArgs& a) {
  const int sources = int(!a.data.empty()) + int(a.model_l1) + int(!a.model.empty());
  if (sources != 1) throw UsageError("choose exactly one of --data, --model-l1, --model");
  if (!a.data.empty()) return DatasetSpec{load_samples(a.data)};
  if (a.model_l1) return AnalyticL1Spec{a.b, a.c};
  MonteCarloSpec mc;
  mc.samples = a.samples;
  mc.seed = a.seed;
  if (a.model == "multipath") {
    mc.model = multipath_from(a.b, a.l, a.gains, a.seed);
  } else if (a.model == "sinusoid") {
    mc.model = SinusoidModel{a.b, a.seed, std::nullopt, std::nullopt};
  } else {
    throw UsageError("unknown model '" + a.model + "'");
  }
  return mc;
}

int cmd_learn(const LearnArgs& a, const json& config, std::ostream& out) {
  const ObjectiveSpec spec = learn_objective(a);
  validate(spec);
  const std::size_t b = spec_dim(spec);
  UnitaryMatrix init = named_transform(a.init, b, a.init_seed, a.init_path);
  LearnResult r{init, {}};
  if (a.alg == "msp") {
    MspConfig cfg;
    cfg.max_iters = a.max_iters;
    cfg.step_tol = a.step_tol;
    cfg.obj_tol = a.obj_tol;
    cfg.init = init;
    r = msp_run(cfg, spec);
  } else if (a.alg == "ca") {
    CaConfig cfg;
    cfg.max_sweeps = a.max_sweeps;
    if (a.order == "lexicographic") {
      cfg.sweep_order = SweepOrder::lexicographic;
    } else if (a.order == "random") {
      cfg.sweep_order = SweepOrder::seeded_random;
    } else {
      throw UsageError("unknown sweep order '" + a.order + "'");
    }
    cfg.order_seed = a.order_seed;
    cfg.inner_tol = a.inner_tol;
    cfg.improvement_tol = a.improvement_tol;
    cfg.init = init;
    r = ca_run(cfg, spec);
  } else {
    throw UsageError("unknown algorithm '" + a.alg + "'");
  }
  const auto& t = r.trace;
  const std::size_t iters = t.objective.empty() ? 0 : t.objective.size() - 1;
  json summary{{"algorithm", a.alg},
               {"dim", b},
               {"iterations", iters},
               {"initial_objective", t.objective.front()},
               {"final_objective", t.objective.back()},
               {"terminated_by", std::string(to_string(t.terminated_by))}};
  out << "alg=" << a.alg << " dim=" << b << " iterations=" << iters << " objective " << fmt(t.objective.front())
      << " -> " << fmt(t.objective.back()) << " terminated_by=" << to_string(t.terminated_by) << '\n';
  if (!t.sweep_gain.empty()) {
    summary["first_sweep_gain"] = t.sweep_gain.front();
    out << "first_sweep_gain=" << fmt(t.sweep_gain.front()) << '\n';
  }
  if (!a.out.empty()) {
    save_with_meta(a.out, r.a.matrix(), config, summary);
    out << "wrote " << a.out << '\n';
  }
  if (!a.trace.empty()) {
    json j = envelope(config, "trace", t);
    j["summary"] = summary;
    write_json(a.trace, j);
    out << "wrote " << a.trace << '\n';
  }
  return exit_ok;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string claim;
  std::string b;
  std::size_t l = 1;
  std::string gains;
  std::string mode = "analytic";
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::string json_path;
};

int cmd_verify(const VerifyArgs& a, const json& config, std::ostream& out) {
  VerificationReport rep;
  if (a.claim == "dft-msp") {
    MspMode mode;
    if (a.mode == "analytic") {
      mode.kind = MspMode::Kind::analytic;
    } else if (a.mode == "mc") {
      mode.kind = MspMode::Kind::monte_carlo;
    } else {
      throw UsageError("unknown mode '" + a.mode + "'");
    }
    mode.samples = a.samples;
    mode.seed = a.seed;
    rep = verify_dft_msp(parse_sizes(a.b.empty() ? "2,4,8,16" : a.b), a.l, parse_gains(a.gains), mode);
  } else if (a.claim == "dft-ca") {
    rep = verify_dft_ca(parse_sizes(a.b.empty() ? "2..32" : a.b));
  } else if (a.claim == "dct-scan") {
    rep = scan_dct(parse_sizes(a.b.empty() ? "3..32" : a.b));
  } else {
    throw UsageError("unknown claim '" + a.claim + "'");
  }
  out << "claim " << rep.claim << '\n';
  out << "     B      residual     tolerance  verdict  pair\n";
  for (const auto& p : rep.per_b) {
    char line[160];
    std::snprintf(line, sizeof line, "%6zu  %12.4e  %12.4e  %-7s  ", p.b, p.residual, p.tolerance,
                  p.passed ? "pass" : "FAIL");
    out << line;
    if (p.has_pair) out << "(" << p.worst_i << "," << p.worst_k << ")";
    out << '\n';
  }
  out << "result: " << (rep.passed ? "PASS" : "FAIL") << '\n';
  if (!a.json_path.empty()) write_json(a.json_path, envelope(config, "report", rep));
  return rep.passed ? exit_ok : exit_claim_failed;
}

// ---------------------------------------------------------------- ber

struct BerArgs {
  std::string det = "lmmse";
  double density = 0.125;
  std::string transform = "dft";
  std::string transform_path;
  std::string channels;
  std::size_t b = 32;
  std::size_t u = 4;
  std::size_t scenes = 100;
  std::size_t paths = 1;
  std::uint64_t scene_seed = 1;
  std::string snr = "0..20:5";
  std::string constellation = "qpsk";
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  bool shrinkage = false;
  std::string out;
};

int cmd_ber(const BerArgs& a, const json& config, std::ostream& out) {
  std::vector<CMatrix> channels;
  if (!a.channels.empty()) {
    channels = group_columns(load_samples(a.channels), a.u);
  } else {
    MuMimoScene sc;
    sc.b = a.b;
    sc.u = a.u;
    sc.paths_per_ue = a.paths;
    sc.seed = a.scene_seed;
    channels = synth_scene_channels(sc, a.scenes);
  }
  UplinkConfig cfg;
  cfg.b = channels.front().rows();
  cfg.u = a.u;
  cfg.constellation = parse_constellation(a.constellation);
  cfg.snr_db_grid = parse_range(a.snr);
  cfg.trials_per_point = a.trials;
  cfg.seed = a.seed;
  DetectorKind det;
  if (a.det == "lmmse") {
    det.kind = DetectorKind::Kind::lmmse;
  } else if (a.det == "le") {
    det.kind = DetectorKind::Kind::le;
  } else {
    throw UsageError("unknown detector '" + a.det + "'");
  }
  det.density = a.density;
  det.shrinkage = a.shrinkage;
  if (!(det.kind == DetectorKind::Kind::lmmse && a.transform == "identity")) {
    det.transform = named_transform(a.transform, cfg.b, 0, a.transform_path);
  }
  const BerCurve c = ber_sweep(cfg, det, channels);

  const std::string csv_path = a.out + ".csv";
  std::ofstream csv(csv_path);
  if (!csv) throw Error(ErrorKind::io_error, "cannot write '" + csv_path + "'");
  csv << "# format_version=" << kFormatVersion << '\n';
  csv << "# config=" << config.dump() << '\n';
  csv << "snr_db,ber,bits,bit_errors\n";
  csv.precision(17);
  for (std::size_t p = 0; p < c.snr_db.size(); ++p) {
    csv << c.snr_db[p] << ',' << c.ber[p] << ',' << c.bit_count[p] << ',' << c.bit_errors[p] << '\n';
  }
  if (!csv) throw Error(ErrorKind::io_error, "write failed for '" + csv_path + "'");
  write_json(a.out + ".json", envelope(config, "curve", c));

  out << "   snr_db           ber        bits\n";
  for (std::size_t p = 0; p < c.snr_db.size(); ++p) {
    char line[128];
    std::snprintf(line, sizeof line, "%9.3f  %12.4e  %10llu\n", c.snr_db[p], c.ber[p],
                  static_cast<unsigned long long>(c.bit_count[p]));
    out << line;
  }
  out << "wrote " << csv_path << " and " << a.out << ".json\n";
  return exit_ok;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_arguments:
    case ErrorKind::invalid_input:
    case ErrorKind::invalid_dimension:
    case ErrorKind::invalid_fraction:
      return exit_usage;
    default:
      return exit_runtime;
  }
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split_list(text)) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_double(part));
      continue;
    }
    const double lo = to_double(trim(part.substr(0, dots)));
    std::string rest = part.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = to_double(trim(rest.substr(colon + 1)));
      rest = rest.substr(0, colon);
    }
    const double hi = to_double(trim(rest));
    if (!(step > 0.0) || hi < lo) throw UsageError("bad range '" + part + "'");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t j = 0; j <= n; ++j) out.push_back(lo + static_cast<double>(j) * step);
  }
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unitary l4-norm sparsifying transforms: learning, verification and BER simulation", "l4u"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0 = hardware concurrency)");
  app.add_option("--config", "key=value file; command-line flags take precedence");

  GenArgs g;
  auto* gen = app.add_subcommand("gen", "Draw a sample set and write it as cmx1");
  gen->add_option("--model", g.model, "multipath | sinusoid | scene")->capture_default_str();
  gen->add_option("--b", g.b, "Dimension B")->capture_default_str();
  gen->add_option("--l", g.l, "Path count (multipath)")->capture_default_str();
  gen->add_option("--gains", g.gains, "Comma-separated complex path gains");
  gen->add_option("--n", g.n, "Samples, or scenes for --model scene")->capture_default_str();
  gen->add_option("--seed", g.seed)->capture_default_str();
  gen->add_option("--u", g.u, "Users per scene")->capture_default_str();
  gen->add_option("--paths", g.paths, "Paths per user (scene)")->capture_default_str();
  gen->add_option("--out", g.out, "Output cmx1 path")->required();

  LearnArgs l;
  auto* learn = app.add_subcommand("learn", "Learn a unitary transform with MSP or CA");
  learn->add_option("--alg", l.alg, "msp | ca")->required();
  learn->add_option("--init", l.init, "dft | dct | identity | random | file")->capture_default_str();
  learn->add_option("--init-seed", l.init_seed)->capture_default_str();
  learn->add_option("--init-path", l.init_path, "cmx1 file for --init file");
  learn->add_option("--data", l.data, "cmx1 sample set");
  learn->add_flag("--model-l1", l.model_l1, "Exact single-path expectation");
  learn->add_option("--c", l.c, "Path gain magnitude for --model-l1")->capture_default_str();
  learn->add_option("--model", l.model, "multipath | sinusoid (Monte Carlo)");
  learn->add_option("--b", l.b)->capture_default_str();
  learn->add_option("--l", l.l)->capture_default_str();
  learn->add_option("--gains", l.gains);
  learn->add_option("--samples", l.samples)->capture_default_str();
  learn->add_option("--seed", l.seed)->capture_default_str();
  learn->add_option("--max-iters", l.max_iters, "MSP iteration cap")->capture_default_str();
  learn->add_option("--max-sweeps", l.max_sweeps, "CA sweep cap")->capture_default_str();
  learn->add_option("--step-tol", l.step_tol)->capture_default_str();
  learn->add_option("--obj-tol", l.obj_tol)->capture_default_str();
  learn->add_option("--inner-tol", l.inner_tol)->capture_default_str();
  learn->add_option("--improvement-tol", l.improvement_tol)->capture_default_str();
  learn->add_option("--order", l.order, "lexicographic | random")->capture_default_str();
  learn->add_option("--order-seed", l.order_seed)->capture_default_str();
  learn->add_option("--out", l.out, "Learned transform (cmx1)");
  learn->add_option("--trace", l.trace, "Trace (JSON)");

  VerifyArgs v;
  auto* verify = app.add_subcommand("verify", "Numerically check a transform claim");
  verify->add_option("claim", v.claim, "dft-msp | dft-ca | dct-scan")->required();
  verify->add_option("--b", v.b, "Sizes: a..b, a..b:step or comma list");
  verify->add_option("--l", v.l)->capture_default_str();
  verify->add_option("--gains", v.gains);
  verify->add_option("--mode", v.mode, "analytic | mc")->capture_default_str();
  verify->add_option("--samples", v.samples)->capture_default_str();
  verify->add_option("--seed", v.seed)->capture_default_str();
  verify->add_option("--json", v.json_path, "Report output (JSON)");

  BerArgs r;
  auto* ber = app.add_subcommand("ber", "Uncoded BER sweep");
  ber->add_option("--det", r.det, "lmmse | le")->capture_default_str();
  ber->add_option("--density", r.density)->capture_default_str();
  ber->add_option("--transform", r.transform, "dft | dct | identity | file")->capture_default_str();
  ber->add_option("--transform-path", r.transform_path);
  ber->add_option("--channels", r.channels, "cmx1 with B x (scenes * U) columns");
  ber->add_option("--b", r.b)->capture_default_str();
  ber->add_option("--u", r.u)->capture_default_str();
  ber->add_option("--scenes", r.scenes)->capture_default_str();
  ber->add_option("--paths", r.paths)->capture_default_str();
  ber->add_option("--scene-seed", r.scene_seed)->capture_default_str();
  ber->add_option("--snr", r.snr, "SNR grid in dB")->capture_default_str();
  ber->add_option("--constellation", r.constellation, "qpsk | 16qam")->capture_default_str();
  ber->add_option("--trials", r.trials, "Trials per SNR point")->capture_default_str();
  ber->add_option("--seed", r.seed)->capture_default_str();
  ber->add_flag("--shrinkage", r.shrinkage, "Soft-threshold the beamspace channel");
  ber->add_option("--out", r.out, "Output prefix (.csv and .json)")->required();

  try {
    std::vector<std::string> args = argv;
    const std::string config_file = apply_config_file(args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? exit_ok : exit_usage;
    }
    set_max_threads(threads);
    if (gen->parsed()) return cmd_gen(g, resolved_config(*gen, config_file), out);
    if (learn->parsed()) return cmd_learn(l, resolved_config(*learn, config_file), out);
    if (verify->parsed()) return cmd_verify(v, resolved_config(*verify, config_file), out);
    return cmd_ber(r, resolved_config(*ber, config_file), out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}

}  // namespace l4u
