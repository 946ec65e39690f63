#include <algorithm>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgl/blocks.hpp"
#include "sgl/error.hpp"
#include "sgl/exp_analysis.hpp"
#include "sgl/flatten.hpp"
#include "sgl/parallel.hpp"
#include "sgl/periodization.hpp"
#include "sgl/random_spectra.hpp"
#include "sgl/spectra.hpp"
#include "sgl/uniqueness.hpp"

namespace py = pybind11;
using namespace sgl;

namespace {

std::vector<std::pair<double, double>> as_pairs(const SpectrumSet& s) {
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : s.intervals()) out.emplace_back(iv.lo, iv.hi);
  return out;
}

PiecewiseConstantTransform as_transform(const std::vector<std::tuple<double, double, cplx>>& pieces) {
  std::vector<Piece> out;
  for (const auto& [lo, hi, v] : pieces) out.push_back({lo, hi, v});
  return PiecewiseConstantTransform(std::move(out));
}

py::dict frame_dict(const FrameReport& r) {
  py::dict d;
  d["n"] = r.n;
  d["min_eigenvalue"] = r.min_eigenvalue;
  d["claimed"] = r.claimed_bound;
  d["certified"] = r.certified;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sgl, m) {
  m.doc() = "Sampling and interpolation on unions of intervals";

  static py::exception<Error> sgl_error(m, "SglError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = sgl_error;
      py::object instance = exc(e.what());
      instance.attr("kind") = std::string(to_string(e.kind()));
      instance.attr("value") = e.value() ? py::cast(*e.value()) : py::none();
      PyErr_SetObject(sgl_error.ptr(), instance.ptr());
    }
  });

  m.def("set_thread_count", &set_thread_count, py::arg("n"));

  py::class_<SpectrumSet>(m, "SpectrumSet")
      .def_property_readonly("intervals", &as_pairs)
      .def_property_readonly("measure", &SpectrumSet::measure)
      .def("contains", py::overload_cast<double, double>(&SpectrumSet::contains, py::const_),
           py::arg("t"), py::arg("tol") = kEndpointTolerance)
      .def("shifted", &SpectrumSet::shifted)
      .def("__len__", &SpectrumSet::size)
      .def("__eq__", [](const SpectrumSet& a, const SpectrumSet& b) { return a == b; })
      .def("__repr__", [](const SpectrumSet& s) { return "SpectrumSet(" + format_spectrum_literal(s) + ")"; });

  m.def("normalize", [](const std::vector<std::pair<double, double>>& raw) { return normalize(raw); });
  m.def("parse_spectrum", &parse_spectrum_literal, py::arg("text"));
  m.def("project", &project, py::arg("spectrum"), py::arg("period"));
  m.def("gap_report", [](const SpectrumSet& s, double period) {
    const auto g = gap_report(s, period);
    py::dict d;
    d["period"] = g.period;
    d["projection_measure"] = g.projection_measure;
    d["complement_measure"] = g.complement_measure;
    d["weak"] = g.weak;
    d["strong"] = g.strong;
    d["witness"] = g.witness;
    return d;
  });

  m.def("gram", [](const std::vector<double>& lam, const SpectrumSet& s) {
    return gram(FrequencySet(lam), s).entries;
  });
  m.def("frame_report",
        [](const std::vector<double>& lam, const SpectrumSet& s, std::optional<double> claimed) {
          return frame_dict(frame_report(FrequencySet(lam), s, claimed));
        },
        py::arg("lam"), py::arg("spectrum"), py::arg("claimed") = py::none());

  m.def("residual", [](Index mm, const std::vector<Index>& z, const SpectrumSet& a) {
    return residual(mm, z, a);
  });
  m.def("build_blocks",
        [](const SpectrumSet& a, int k_max, Index n_cap) {
          const auto b = build_blocks(a, BlockSchedule::geometric(k_max), k_max, n_cap);
          py::list rows;
          for (const auto& r : b.table) {
            rows.append(py::make_tuple(r.k, r.n_lo, r.n_hi, r.m, r.residual, r.eps_k));
          }
          py::list blocks;
          for (const auto& blk : b.blocks) blocks.append(py::make_tuple(blk.k, blk.n_lo, blk.n_hi));
          py::dict d;
          d["blocks"] = blocks;
          d["table"] = rows;
          return d;
        },
        py::arg("A"), py::arg("k_max"), py::arg("n_cap") = 4096);

  m.def("perturbed_integers", [](Index n) { return perturbed_integers(n).to_vector(); });
  m.def("vdc_alphas", &vdc_alphas);
  m.def("build_lambda",
        [](const SpectrumSet& a, int k_max, int parts, Index window) {
          const auto b = build_blocks(a, BlockSchedule::geometric(k_max), k_max, 4096);
          const auto lam = build_lambda(partition_blocks(b.blocks, parts), vdc_alphas(parts), parts, window);
          py::dict d;
          d["points"] = lam.lambda.to_vector();
          d["separation"] = lam.separation;
          d["alphas"] = lam.alphas;
          d["uniformly_discrete"] = lam.uniformly_discrete;
          return d;
        },
        py::arg("A"), py::arg("k_max"), py::arg("J"), py::arg("window"));

  m.def("periodized_coefficients",
        [](const std::vector<std::tuple<double, double, cplx>>& pieces, double v, Index n_range) {
          const auto c = periodized_coefficients(as_transform(pieces), v, n_range);
          py::dict d;
          d["n"] = c.n;
          d["direct"] = c.direct;
          d["sampled"] = c.sampled;
          d["max_abs_difference"] = c.max_abs_difference;
          return d;
        });
  m.def("sobolev_norm", [](const std::vector<std::tuple<double, double, cplx>>& pieces, double alpha) {
    return sobolev_norm(as_transform(pieces), alpha);
  });
  m.def("periodized_l2",
        [](const std::vector<std::tuple<double, double, cplx>>& pieces, double v) {
          return periodized_l2(as_transform(pieces), v);
        },
        py::arg("pieces"), py::arg("v") = 0.0);
  m.def("poisson_gap_series",
        [](const std::string& kind, double x, double t, Index n, double lo, double hi) {
          const auto f = kind == "tent" ? DecayingSignal::tent(lo, hi) : DecayingSignal::fejer();
          const auto s = poisson_gap_series(f, x, t, n);
          py::dict d;
          d["value"] = s.value;
          d["tail_bound"] = s.tail_bound;
          d["within_budget"] = s.within_budget;
          d["inconclusive"] = s.inconclusive;
          return d;
        },
        py::arg("kind"), py::arg("x"), py::arg("t"), py::arg("N"), py::arg("lo") = -1.0,
        py::arg("hi") = 1.0);

  m.def("dirichlet_value", &dirichlet_value, py::arg("n"), py::arg("q"), py::arg("t"));
  m.def("choose_steps", &choose_steps, py::arg("m"), py::arg("lo"), py::arg("hi"));
  m.def("separation_rho", [](const std::vector<double>& steps, double eps) {
    return separation_rho(steps, eps);
  });
  m.def("certify_sup",
        [](const std::vector<std::pair<double, cplx>>& terms, double lo, double hi, double bound,
           double step) {
          std::vector<ExpTerm> t;
          for (const auto& [f, c] : terms) t.push_back({f, c});
          const auto s = certify_sup(ExpPolynomial(std::move(t)), lo, hi, bound, step);
          py::dict d;
          d["observed_max"] = s.observed_max;
          d["slack"] = s.slack;
          d["certified"] = s.certified;
          return d;
        });
  m.def("flattening_poly",
        [](int mm, double eps, Index length, Index n_budget) {
          PropertyCAnchors a{choose_steps(mm, 3.0, 4.0), std::vector<double>(mm, 0.0), length};
          std::vector<double> pts;
          for (int j = 0; j < mm; ++j) {
            for (Index k = 1; k <= length; ++k) pts.push_back(static_cast<double>(k) * a.steps[j]);
          }
          std::sort(pts.begin(), pts.end());
          const auto cert = flattening_poly(FrequencySet(pts), a, eps, n_budget);
          py::dict d;
          d["n"] = cert.n();
          d["m"] = cert.m();
          d["observed_max"] = cert.observed_max;
          d["slack"] = cert.slack;
          d["certified"] = cert.certified;
          d["p0"] = cert.kernel(0.0);
          return d;
        },
        py::arg("m"), py::arg("eps"), py::arg("length") = 4096, py::arg("n_budget") = 4096);
  m.def("window_phi", [](double x, double offset, double width) {
    return window_pair(offset, width).phi(x);
  }, py::arg("x"), py::arg("offset") = 0.0, py::arg("width") = 1.0);

  m.def("least_norm_interpolant",
        [](const std::vector<double>& lam, const SpectrumSet& s, const std::vector<cplx>& data) {
          const auto f = least_norm_interpolant(FrequencySet(lam), s, data);
          py::dict d;
          d["coefficients"] = f.coefficients;
          d["min_eigenvalue"] = f.min_eigenvalue;
          d["residual"] = f.residual;
          d["evaluate"] = py::cpp_function([f](double x) { return f(x); });
          return d;
        });
  m.def("neumann_interpolate",
        [](const std::vector<double>& lam, double rate, const std::vector<cplx>& data) {
          const auto r = neumann_interpolate({FrequencySet(lam), DecayProfile::exponential(rate), data});
          py::dict d;
          d["b"] = r.b;
          d["iterations"] = r.iterations;
          d["residual"] = r.residual;
          d["contraction_norm"] = r.contraction_norm;
          return d;
        });

  m.def("sample_gamma", [](std::uint64_t seed, Index count) {
    return sample_gamma(seed, count).gamma.gamma;
  });
  m.def("find_progressions",
        [](std::uint64_t seed, Index count, double q, Index n) {
          py::list out;
          for (const auto& h : find_progressions(sample_gamma(seed, count), q, n)) {
            out.append(py::make_tuple(h.k, h.q, h.n, h.max_deviation));
          }
          return out;
        });
  m.def("mc_hit_probability",
        [](double q, Index n, Index count, Index trials, std::uint64_t seed) {
          const auto r = mc_hit_probability(q, n, count, trials, seed);
          return py::make_tuple(r.freq, r.stderr_);
        },
        py::arg("q"), py::arg("N"), py::arg("J"), py::arg("trials"), py::arg("seed"));
  m.def("random_pipeline", [](std::uint64_t seed) {
    PipelineConfig cfg;
    cfg.seed = seed;
    const auto r = random_pipeline(cfg);
    py::dict d;
    d["contained"] = r.spectrum.contained;
    d["offdiag_max"] = r.analysis.offdiag_max;
    d["frame"] = frame_dict(r.frame);
    d["positive"] = r.positive;
    return d;
  });
}
