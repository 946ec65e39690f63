#include "sgl/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "sgl/blocks.hpp"
#include "sgl/config.hpp"
#include "sgl/error.hpp"
#include "sgl/exp_analysis.hpp"
#include "sgl/flatten.hpp"
#include "sgl/format.hpp"
#include "sgl/parallel.hpp"
#include "sgl/periodization.hpp"
#include "sgl/random_spectra.hpp"
#include "sgl/spectra.hpp"
#include "sgl/uniqueness.hpp"

namespace sgl {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

struct Invocation {
  std::string sub;
  std::uint64_t seed = 0;
};

struct Report {
  // suffix ("" for the main file) -> CSV text
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
  int status = kExitOk;
};

struct Subcommand {
  std::string help;
  std::set<std::string> keys;
  bool uses_seed = false;
  std::function<Report(const Config&, const Invocation&)> run;
};

std::string csv(const std::string& header, const std::vector<std::string>& rows) {
  std::string out = header + "\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string cplx_fields(cplx z) { return format_real(z.real()) + "," + format_real(z.imag()); }

std::string yes_no(bool b) { return b ? "true" : "false"; }

FrequencySet lambda_from(const Config& c) {
  if (c.has("lambda") && c.has("lambda_grid")) {
    throw ConfigError("give either 'lambda' or 'lambda_grid', not both", 0);
  }
  if (c.has("lambda")) return FrequencySet(c.reals("lambda"));
  const auto g = c.reals("lambda_grid");
  if (g.size() != 3 || !(g[2] >= 1.0)) {
    throw ConfigError("lambda_grid needs start, step, count", 0);
  }
  std::vector<double> pts;
  for (int i = 0; i < static_cast<int>(g[2]); ++i) pts.push_back(g[0] + g[1] * i);
  return FrequencySet(std::move(pts));
}

BlockSchedule schedule_from(const Config& c, int k_max) {
  if (!c.has("eps")) return BlockSchedule::geometric(k_max);
  return BlockSchedule{c.reals("eps")};
}

std::vector<Piece> pieces_from(const Config& c) {
  std::vector<Piece> out;
  std::string_view rest = c.text("pieces");
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const auto item = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (item.empty()) continue;
    const auto c1 = item.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : item.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ConfigError("pieces are 'lo,hi,value; ...'", 0);
    out.push_back({parse_real(item.substr(0, c1)), parse_real(item.substr(c1 + 1, c2 - c1 - 1)),
                   parse_complex(item.substr(c2 + 1))});
  }
  return out;
}

// Steps from choose_steps, progressions a_j + k q_j (k = 1..N) as Gamma.
struct SyntheticAnchors {
  PropertyCAnchors anchors;
  FrequencySet gamma;
};

SyntheticAnchors anchors_from(const Config& c, int default_m) {
  SyntheticAnchors s;
  const int m = static_cast<int>(c.integer("m", default_m));
  s.anchors.steps = choose_steps(m, c.real("step_lo", 3.0), c.real("step_hi", 4.0));
  s.anchors.anchors = c.has("anchors") ? c.reals("anchors") : std::vector<double>(m, 0.0);
  s.anchors.length = c.integer("length", 4096);
  s.anchors.validate();
  std::vector<double> pts;
  for (int j = 0; j < m; ++j) {
    for (Index k = 1; k <= s.anchors.length; ++k) {
      pts.push_back(s.anchors.anchors[j] + static_cast<double>(k) * s.anchors.steps[j]);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  s.gamma = FrequencySet(std::move(pts));
  return s;
}

Report run_project(const Config& c, const Invocation&) {
  const auto s = c.spectrum("spectrum");
  const auto projected = project(s, c.real("period", 1.0));
  std::vector<std::string> rows;
  for (const auto& iv : projected.intervals()) rows.push_back(format_real(iv.lo) + "," + format_real(iv.hi));
  Report r;
  r.files.push_back({"", csv("lo,hi", rows)});
  r.summary = "measure=" + format_real(projected.measure()) + " pieces=" +
              std::to_string(projected.size());
  return r;
}

Report run_gaps(const Config& c, const Invocation&) {
  const auto s = c.spectrum("spectrum");
  std::vector<std::string> rows;
  int with_gap = 0;
  for (double a : c.reals("period")) {
    const auto g = gap_report(s, a);
    with_gap += g.weak ? 1 : 0;
    rows.push_back(format_real(g.period) + "," + format_real(g.projection_measure) + "," +
                   format_real(g.complement_measure) + "," + yes_no(g.weak) + "," +
                   yes_no(g.strong) + "," + yes_no(g.strong_equals_weak) + "," +
                   quoted(format_spectrum_literal(g.witness)));
  }
  Report r;
  r.files.push_back(
      {"", csv("period,projection_measure,complement_measure,weak,strong,strong_equals_weak,witness",
               rows)});
  r.summary = std::to_string(with_gap) + " of " + std::to_string(rows.size()) +
              " periods leave a gap";
  return r;
}

BlockBuild blocks_from(const Config& c) {
  const int k_max = static_cast<int>(c.integer("k_max", 6));
  return build_blocks(c.spectrum("A"), schedule_from(c, k_max), k_max, c.integer("n_cap", 4096));
}

Report run_blocks(const Config& c, const Invocation&) {
  const auto b = blocks_from(c);
  Report r;
  r.files.push_back({"", csv(BlockBuild::csv_header(), b.csv_rows())});
  r.summary = "blocks=" + std::to_string(b.blocks.size()) + " n_k=" +
              std::to_string(b.blocks.back().n_hi) + " (first " + std::to_string(b.k_max) +
              " blocks of an infinite construction)";
  return r;
}

LambdaBuild lambda_build_from(const Config& c) {
  const auto b = blocks_from(c);
  const int parts = static_cast<int>(c.integer("J", 2));
  const auto partition = partition_blocks(b.blocks, parts);
  const auto alphas = c.has("alphas") ? c.reals("alphas") : vdc_alphas(parts);
  return build_lambda(partition, alphas, parts, c.integer("window", b.blocks.back().n_hi),
                      c.real("ud_floor", kDefaultUdFloor));
}

Report run_lambda(const Config& c, const Invocation&) {
  const auto lam = lambda_build_from(c);
  Report r;
  r.files.push_back({"", csv(lam.header_line(), lam.csv_rows())});
  r.summary = "points=" + std::to_string(lam.lambda.size()) +
              " separation=" + format_real(lam.separation) +
              " uniformly_discrete=" + yes_no(lam.uniformly_discrete);
  return r;
}

Report run_periodize(const Config& c, const Invocation&) {
  const PiecewiseConstantTransform f(pieces_from(c));
  const double v = c.real("v", 0.0);
  const auto coeffs = periodized_coefficients(f, v, c.integer("n_range", 20));
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < coeffs.n.size(); ++i) {
    rows.push_back(std::to_string(coeffs.n[i]) + "," + cplx_fields(coeffs.direct[i]) + "," +
                   cplx_fields(coeffs.sampled[i]) + "," +
                   format_real(std::abs(coeffs.direct[i] - coeffs.sampled[i])));
  }
  Report r;
  r.files.push_back({"", csv("n,coef_re,coef_im,sample_re,sample_im,abs_diff", rows)});
  r.summary = "max_abs_difference=" + format_real(coeffs.max_abs_difference) +
              " periodized_l2=" + format_real(periodized_l2(f, v));
  if (c.has("alpha")) {
    r.summary += " sobolev_norm=" + format_real(sobolev_norm(f, c.real("alpha")));
  }
  if (c.has("A")) {
    const auto lam = lambda_build_from(c);
    const auto diag = uniqueness_diagnostic(f, lam, c.spectrum("A"));
    r.files.push_back({"-diagnostic", csv(UniquenessDiagnostic::csv_header(), diag.csv_rows())});
    r.summary += " max_abs_on_lambda=" + format_real(diag.max_abs_on_lambda);
  }
  return r;
}

Report run_poisson(const Config& c, const Invocation&) {
  const std::string kind = c.has("signal") ? c.text("signal") : "fejer";
  std::optional<DecayingSignal> f;
  if (kind == "fejer") {
    f = DecayingSignal::fejer();
  } else if (kind == "tent") {
    f = DecayingSignal::tent(c.real("lo"), c.real("hi"));
  } else {
    throw ConfigError("signal must be fejer or tent", 0);
  }
  const double t = c.real("t", 0.0);
  const auto xs = c.has("x") ? c.reals("x") : std::vector<double>{0.0};
  const auto ns = c.has("N") ? c.reals("N") : std::vector<double>{100.0};
  std::vector<std::string> rows;
  int within = 0;
  for (double x : xs) {
    for (double n : ns) {
      const auto s = poisson_gap_series(*f, x, t, static_cast<Index>(n));
      within += s.within_budget ? 1 : 0;
      rows.push_back(format_real(x) + "," + format_real(t) + "," + std::to_string(s.n) + "," +
                     cplx_fields(s.value) + "," + format_real(std::abs(s.value)) + "," +
                     format_real(s.tail_bound) + "," + yes_no(s.within_budget) + "," +
                     yes_no(s.inconclusive));
    }
  }
  Report r;
  r.files.push_back(
      {"", csv("x,t,N,value_re,value_im,abs_value,tail_bound,within_budget,inconclusive", rows)});
  r.summary = "decay_budget=" + format_real(f->decay_budget()) + " within_budget=" +
              std::to_string(within) + "/" + std::to_string(rows.size());
  return r;
}

Report run_flatten(const Config& c, const Invocation&) {
  const double eps = c.real("eps");
  const auto s = anchors_from(c, 5);
  const auto cert = flattening_poly(s.gamma, s.anchors, eps, c.integer("n_budget", 4096));
  Report r;
  r.files.push_back({"", csv(FlatteningCertificate::csv_header(), {cert.csv_row()})});
  r.summary = "certified=" + yes_no(cert.certified) + " n=" + std::to_string(cert.n()) +
              " observed_max=" + format_real(cert.observed_max) +
              " slack=" + format_real(cert.slack);
  r.status = cert.certified ? kExitOk : kExitUncertified;
  return r;
}

Report run_frame(const Config& c, const Invocation&) {
  const auto lam = lambda_from(c);
  Report r;
  SpectrumSet s;
  std::optional<double> claimed;
  if (c.has("claimed")) claimed = c.real("claimed");
  if (c.has("spectrum")) {
    s = c.spectrum("spectrum");
  } else {
    // Certified flattening kernel, window, then S(delta).
    const auto a = anchors_from(c, 7);
    const auto cert = flattening_poly(a.gamma, a.anchors, c.real("eps"), c.integer("n_budget", 4096));
    const auto w = window_pair(c.real("window_offset", 0.0), c.real("window_width", 1.0));
    const auto k = analyze_kernel(cert, w, lam);
    s = k.s_delta;
    if (!claimed) claimed = k.frame_bound;
    r.files.push_back(
        {"-kernel",
         csv("offdiag_max,frame_bound,worst_row,envelope_constant,chain_bound,n,m",
             {format_real(k.offdiag_max) + "," +
              (k.frame_bound ? format_real(*k.frame_bound) : std::string()) + "," +
              std::to_string(k.worst_row) + "," + format_real(k.envelope_constant) + "," +
              format_real(k.chain_bound) + "," + std::to_string(cert.n()) + "," +
              std::to_string(cert.m())})});
    if (!k.frame_bound) {
      r.files.insert(r.files.begin(), {"", csv(FrameReport::csv_header(), {})});
      r.summary = "no certificate: offdiag_max=" + format_real(k.offdiag_max);
      r.status = kExitUncertified;
      return r;
    }
  }
  const auto report = frame_report(lam, s, claimed);
  r.files.insert(r.files.begin(), {"", csv(FrameReport::csv_header(), {report.csv_row()})});
  r.summary = "n=" + std::to_string(report.n) + " min_eig=" + format_real(report.min_eigenvalue);
  if (claimed) {
    r.summary += " claimed=" + format_real(*claimed) + " certified=" + yes_no(report.certified);
    if (!report.certified) r.status = kExitUncertified;
  }
  return r;
}

Report run_interpolate(const Config& c, const Invocation&) {
  auto pts = lambda_from(c).to_vector();
  std::vector<cplx> data;
  if (c.has("witness")) {
    // data e_{x0} on Lambda + {x0}
    const double x0 = c.real("witness");
    data.assign(pts.size(), cplx{});
    pts.push_back(x0);
    data.push_back(1.0);
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pts[a] < pts[b]; });
    std::vector<double> sp;
    std::vector<cplx> sd;
    for (auto i : order) {
      sp.push_back(pts[i]);
      sd.push_back(data[i]);
    }
    pts = std::move(sp);
    data = std::move(sd);
  } else {
    const FrequencySet sorted(pts);
    if (sorted.to_vector() != pts) throw ConfigError("lambda must be increasing when data is given", 0);
    data = c.complexes("data");
  }
  const FrequencySet lam(pts);
  const auto f = least_norm_interpolant(lam, c.spectrum("spectrum"), data);
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    rows.push_back(format_real(lam[i]) + "," + cplx_fields(f.coefficients(static_cast<Eigen::Index>(i))) +
                   "," + cplx_fields(f(lam[i])) + "," + cplx_fields(data[i]));
  }
  Report r;
  r.files.push_back({"", csv("lambda,b_re,b_im,f_re,f_im,target_re,target_im", rows)});
  r.summary = "min_eig=" + format_real(f.min_eigenvalue) + " residual=" + format_real(f.residual);
  return r;
}

Report run_neumann(const Config& c, const Invocation&) {
  NeumannProblem prob;
  prob.lambda = lambda_from(c);
  const std::string kind = c.has("profile") ? c.text("profile") : "exp";
  if (kind == "exp") {
    prob.profile = DecayProfile::exponential(c.real("rate", 2.0));
  } else if (kind == "harmonic") {
    prob.profile = DecayProfile::harmonic();
  } else if (kind == "point") {
    prob.profile = DecayProfile::point_mass();
  } else {
    throw ConfigError("profile must be exp, harmonic or point", 0);
  }
  auto data = c.has("data") ? c.complexes("data") : std::vector<cplx>{1.0};
  if (data.size() == 1) data.assign(prob.lambda.size(), data.front());
  prob.data = std::move(data);
  const auto res = neumann_interpolate(prob);
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < res.b.size(); ++i) {
    rows.push_back(format_real(prob.lambda[i]) + "," + cplx_fields(res.b[i]));
  }
  Report r;
  r.files.push_back({"", csv("lambda,b_re,b_im", rows)});
  std::vector<std::string> updates;
  for (std::size_t i = 0; i < res.update_norms.size(); ++i) {
    updates.push_back(std::to_string(i + 1) + "," + format_real(res.update_norms[i]));
  }
  r.files.push_back({"-iterations", csv("iteration,update_norm", updates)});
  r.summary = "contraction_norm=" + format_real(res.contraction_norm) +
              " iterations=" + std::to_string(res.iterations) +
              " residual=" + format_real(res.residual);
  return r;
}

Report run_random_mc(const Config& c, const Invocation& inv) {
  const auto rep = mc_hit_probability(c.real("q", 3.5), c.integer("N", 1), c.integer("J", 2),
                                      c.integer("trials", 10000), inv.seed);
  Report r;
  r.files.push_back({"", csv(MonteCarloReport::csv_header(), {rep.csv_row()})});
  r.summary = "freq=" + format_real(rep.freq) + " stderr=" + format_real(rep.stderr_);
  return r;
}

Report run_random_pipeline(const Config& c, const Invocation& inv) {
  PipelineConfig cfg;
  cfg.seed = inv.seed;
  cfg.m = static_cast<int>(c.integer("m", cfg.m));
  cfg.step_lo = c.real("step_lo", cfg.step_lo);
  cfg.step_hi = c.real("step_hi", cfg.step_hi);
  cfg.length = c.integer("N", cfg.length);
  cfg.count = c.integer("J", cfg.count);
  cfg.eps = c.real("eps", cfg.eps);
  cfg.delta = c.real("delta", cfg.delta);
  cfg.lambda_points = c.integer("lambda_points", cfg.lambda_points);
  const auto res = random_pipeline(cfg);
  Report r;
  r.files.push_back({"", csv(FrameReport::csv_header(), {res.frame.csv_row()})});
  std::vector<std::string> hits;
  for (const auto& h : res.spectrum.used) {
    hits.push_back(std::to_string(h.k) + "," + format_real(h.q) + "," + std::to_string(h.n) + "," +
                   format_real(h.max_deviation));
  }
  r.files.push_back({"-hits", csv("k,q,N,max_deviation", hits)});
  std::vector<std::string> ivs;
  for (const auto& iv : res.spectrum.s_delta.intervals()) {
    ivs.push_back(format_real(iv.lo) + "," + format_real(iv.hi));
  }
  r.files.push_back({"-spectrum", csv("lo,hi", ivs)});
  r.summary = "contained=" + yes_no(res.spectrum.contained) +
              " offdiag_max=" + format_real(res.analysis.offdiag_max) +
              " min_eig=" + format_real(res.frame.min_eigenvalue) +
              " positive=" + yes_no(res.positive);
  r.status = res.positive ? kExitOk : kExitUncertified;
  return r;
}

const std::map<std::string, Subcommand>& subcommands() {
  static const std::set<std::string> kBlocks{"A", "k_max", "n_cap", "eps"};
  static const std::set<std::string> kLambda{"A", "k_max", "n_cap", "eps", "J", "window", "alphas", "ud_floor"};
  static const std::set<std::string> kAnchors{"m", "step_lo", "step_hi", "anchors", "length", "n_budget", "eps"};
  auto with = [](std::set<std::string> a, const std::set<std::string>& b) {
    a.insert(b.begin(), b.end());
    return a;
  };
  static const std::map<std::string, Subcommand> table{
      {"project", {"spectrum projection S_a", {"spectrum", "period"}, false, run_project}},
      {"gaps", {"periodic gap report", {"spectrum", "period"}, false, run_gaps}},
      {"blocks", {"block completeness construction", kBlocks, false, run_blocks}},
      {"lambda", {"uniqueness set from block parts", kLambda, false, run_lambda}},
      {"periodize",
       {"periodized coefficients and norms",
        with(kLambda, {"pieces", "v", "n_range", "alpha"}), false, run_periodize}},
      {"poisson", {"Poisson gap series", {"signal", "lo", "hi", "x", "t", "N"}, false, run_poisson}},
      {"flatten", {"flattening polynomial certificate", kAnchors, false, run_flatten}},
      {"frame",
       {"Gram frame report",
        with(kAnchors, {"lambda", "lambda_grid", "spectrum", "claimed", "window_offset", "window_width"}),
        false, run_frame}},
      {"interpolate",
       {"least-norm interpolation", {"lambda", "lambda_grid", "spectrum", "data", "witness"}, false,
        run_interpolate}},
      {"neumann",
       {"Neumann contraction solve", {"lambda", "lambda_grid", "profile", "rate", "data"}, false,
        run_neumann}},
      {"random-mc", {"Monte Carlo hit probability", {"q", "N", "J", "trials"}, true, run_random_mc}},
      {"random-pipeline",
       {"random spectrum interpolation pipeline",
        {"m", "step_lo", "step_hi", "N", "J", "eps", "delta", "lambda_points"}, true,
        run_random_pipeline}},
  };
  return table;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BudgetExceeded:
    case ErrorKind::NoCertificate:
    case ErrorKind::ContainmentViolation:
    case ErrorKind::InsufficientHits:
    case ErrorKind::NotContraction:
    case ErrorKind::NonInterpolating:
      return kExitUncertified;
    default:
      return kExitInput;
  }
}

std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampling and interpolation on unions of intervals", "sgl"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  app.add_option("--config", config_path, "key = value config file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "master seed for random subcommands");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (default SGL_THREADS)");
  for (const auto& [name, sub] : subcommands()) app.add_subcommand(name, sub.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitInput;
  }

  if (threads_opt->count() > 0) {
    set_thread_count(threads);
  } else if (const char* env = std::getenv("SGL_THREADS")) {
    try {
      set_thread_count(static_cast<unsigned>(std::stoul(env)));
    } catch (const std::exception&) {
      err << "sgl: ignoring SGL_THREADS=" << env << "\n";
    }
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const Subcommand& sub = subcommands().at(name);

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    err << "sgl: cannot read config " << config_path << "\n";
    return kExitInput;
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Report report;
  try {
    const Config cfg = Config::parse(bytes);
    cfg.restrict_to(sub.keys);
    report = sub.run(cfg, Invocation{name, seed});
  } catch (const ConfigError& e) {
    err << "sgl " << name << ": " << config_path << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "sgl " << name << ": " << e.what();
    if (e.value()) err << " [value " << format_real(*e.value()) << "]";
    err << "\n";
    return exit_code_for(e.kind());
  }

  std::string hashed = bytes;
  if (sub.uses_seed) hashed += "\nseed=" + std::to_string(seed);
  const std::string stem = name + "-" + hex16(fnv1a64(hashed));
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::vector<std::string> written;
  for (const auto& [suffix, text] : report.files) {
    const auto path = std::filesystem::path(out_dir) / (stem + suffix + ".csv");
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << text;
    file.close();
    if (!file) {
      err << "sgl " << name << ": cannot write " << path.string() << "\n";
      return kExitInput;
    }
    written.push_back(path.string());
  }
  out << name << ": " << report.summary;
  if (!written.empty()) out << " -> " << written.front();
  out << "\n";
  return report.status;
}

}  // namespace sgl
