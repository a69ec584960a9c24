#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "npci/npci.hpp"
#include "npci/parallel.hpp"
#include "npci/report.hpp"

namespace py = pybind11;
using namespace npci;

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

// Accepts 1-D arrays as single-column blocks.
RowMatrix as_block(const py::array_t<double, py::array::forcecast>& a,
                   const char* name) {
  if (a.ndim() == 1) {
    RowMatrix m(a.shape(0), 1);
    const auto v = a.unchecked<1>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) m(i, 0) = v(i);
    return m;
  }
  if (a.ndim() != 2) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::string(name) + " must be a 1-D or 2-D array");
  }
  RowMatrix m(a.shape(0), a.shape(1));
  const auto v = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    for (py::ssize_t k = 0; k < a.shape(1); ++k) m(i, k) = v(i, k);
  }
  return m;
}

TimeSeriesSample make_sample(const py::array_t<double, py::array::forcecast>& w,
                             const py::array_t<double, py::array::forcecast>& y,
                             const py::array_t<double, py::array::forcecast>& z) {
  TimeSeriesSample s{as_block(w, "w"), as_block(y, "y"), as_block(z, "z")};
  s.validate();
  return s;
}

WeightFamily parse_family(const std::string& name) {
  if (name == "indicator") return {WeightKind::kIndicator, {}};
  if (name == "sine") return {WeightKind::kSine, {}};
  if (name == "complex_exp") return {WeightKind::kComplexExp, {}};
  throw Error(ErrorKind::kInvalidConfig, "unknown weight family '" + name + "'");
}

BootstrapScheme parse_scheme(const std::string& name) {
  if (name == "multiplier") return BootstrapScheme::kMultiplier;
  if (name == "block") return BootstrapScheme::kBlockMultiplier;
  throw Error(ErrorKind::kInvalidConfig, "unknown bootstrap scheme '" + name + "'");
}

// c = None selects the data-driven rule.
BandwidthRule parse_bandwidth(std::optional<double> c) {
  return c ? BandwidthRule::fixed(*c) : BandwidthRule::data_driven();
}

py::tuple sample_tuple(const TimeSeriesSample& s) {
  return py::make_tuple(Matrix(s.w), Matrix(s.y), Matrix(s.z));
}

py::object complex_or_real(const Eigen::MatrixXd& re, const Eigen::MatrixXd& im) {
  if (im.size() == 0) return py::cast(re);
  const Eigen::MatrixXcd c = re.cast<std::complex<double>>() +
                             std::complex<double>(0.0, 1.0) * im.cast<std::complex<double>>();
  return py::cast(c);
}

}  // namespace

PYBIND11_MODULE(_npci, m) {
  m.doc() = "Kernel-based conditional independence tests for time series";

  static py::exception<Error> error(m, "NpciError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("set_num_threads", &set_num_threads, py::arg("n"),
        "Worker threads for parallel loops; 0 restores the default.");
  m.def("num_threads", &num_threads);

  m.def(
      "simulate",
      [](const std::string& dgp, Index n, Index burn_in, std::uint64_t seed) {
        const RawSeries r = simulate({parse_dgp(dgp), n, burn_in, seed});
        py::dict out;
        out["x"] = r.x;
        out["y"] = r.y;
        out["z"] = r.z;
        out["h1"] = r.h1;
        out["h2"] = r.h2;
        return out;
      },
      py::arg("dgp"), py::arg("n"), py::arg("burn_in") = 500, py::arg("seed") = 0,
      "Simulate one design; returns a dict of series x, y, z, h1, h2.");

  m.def(
      "simulate_sample",
      [](const std::string& dgp, Index n, Index burn_in, std::uint64_t seed) {
        const DgpId id = parse_dgp(dgp);
        return sample_tuple(make_triplet(simulate({id, n, burn_in, seed}), id));
      },
      py::arg("dgp"), py::arg("n"), py::arg("burn_in") = 500, py::arg("seed") = 0,
      "Simulate one design and return its (w, y, z) test triplet.");

  m.def(
      "lag_embed",
      [](std::vector<double> target, std::vector<double> candidate,
         std::vector<std::vector<double>> conditioning, Index lags, Index horizon) {
        EmbedRoles roles{target, candidate, {}};
        for (const auto& c : conditioning) roles.conditioning.emplace_back(c);
        return sample_tuple(lag_embed(roles, lags, horizon));
      },
      py::arg("target"), py::arg("candidate"), py::arg("conditioning"),
      py::arg("lags") = 1, py::arg("horizon") = 1);

  m.def(
      "bandwidth",
      [](py::array_t<double, py::array::forcecast> w,
         py::array_t<double, py::array::forcecast> y,
         py::array_t<double, py::array::forcecast> z, std::optional<double> c) {
        return bandwidth(parse_bandwidth(c), make_sample(w, y, z));
      },
      py::arg("w"), py::arg("y"), py::arg("z"), py::arg("c") = 1.0);

  m.def(
      "process_on_sample",
      [](py::array_t<double, py::array::forcecast> w,
         py::array_t<double, py::array::forcecast> y,
         py::array_t<double, py::array::forcecast> z, double h,
         const std::string& family) {
        const ProcessValues s = process_on_sample(make_sample(w, y, z), h,
                                                  parse_family(family));
        return complex_or_real(s.re, s.im);
      },
      py::arg("w"), py::arg("y"), py::arg("z"), py::arg("h"),
      py::arg("family") = "indicator",
      "S_n evaluated at every observation.");

  m.def(
      "residual_matrix",
      [](py::array_t<double, py::array::forcecast> w,
         py::array_t<double, py::array::forcecast> y,
         py::array_t<double, py::array::forcecast> z, double h,
         const std::string& family) {
        const SampleProcess p(make_sample(w, y, z), h, parse_family(family));
        const ResidualMatrix e = p.residuals();
        return complex_or_real(e.re, e.im);
      },
      py::arg("w"), py::arg("y"), py::arg("z"), py::arg("h"),
      py::arg("family") = "indicator",
      "Bootstrap residual products, one row per evaluation point.");

  m.def(
      "statistics",
      [](const Eigen::VectorXcd& s) {
        ProcessValues v{s.real(), s.imag()};
        if (s.imag().isZero(0.0)) v.im.resize(0);
        const StatisticValue st = statistics(v);
        return py::make_tuple(st.cvm, st.ks);
      },
      py::arg("values"), "(CvM, KS) of a vector of process values.");

  m.def(
      "mammen_weights",
      [](Index n, std::uint64_t seed) {
        RngStream stream = make_stream(seed, {});
        return mammen_weights(n, stream);
      },
      py::arg("n"), py::arg("seed") = 0);

  m.def(
      "bootstrap_test",
      [](py::array_t<double, py::array::forcecast> w,
         py::array_t<double, py::array::forcecast> y,
         py::array_t<double, py::array::forcecast> z, std::optional<double> c,
         const std::string& scheme, int B, double block_a,
         const std::string& family, double alpha, std::uint64_t seed) {
        TestConfig cfg;
        cfg.bandwidth = parse_bandwidth(c);
        cfg.weight = parse_family(family);
        cfg.bootstrap = {parse_scheme(scheme), B, block_a, seed};
        cfg.alpha = alpha;
        return to_python(to_json(bootstrap_test(make_sample(w, y, z), cfg)));
      },
      py::arg("w"), py::arg("y"), py::arg("z"), py::arg("c") = 1.0,
      py::arg("scheme") = "multiplier", py::arg("B") = 200, py::arg("block_a") = 2.0,
      py::arg("family") = "indicator", py::arg("alpha") = 0.05, py::arg("seed") = 1,
      "Bootstrap conditional independence test; c=None uses the data-driven bandwidth.");

  m.def(
      "run_experiment",
      [](std::vector<std::string> dgps, std::vector<Index> sample_sizes,
         std::vector<std::optional<double>> bandwidths, const std::string& scheme,
         std::vector<double> block_a, int reps, int B, double alpha, Index burn_in,
         std::uint64_t seed, bool keep_p_values) {
        ExperimentGrid g;
        for (const auto& d : dgps) g.dgps.push_back(parse_dgp(d));
        g.sample_sizes = std::move(sample_sizes);
        for (const auto& c : bandwidths) g.bandwidths.push_back(parse_bandwidth(c));
        g.scheme = parse_scheme(scheme);
        if (g.scheme == BootstrapScheme::kBlockMultiplier) g.block_a = std::move(block_a);
        g.replications = reps;
        g.bootstrap_replications = B;
        g.alpha = alpha;
        g.burn_in = burn_in;
        g.seed = seed;
        g.keep_p_values = keep_p_values;
        McReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(g);
        }
        return to_python(to_json(r));
      },
      py::arg("dgps"), py::arg("sample_sizes"),
      py::arg("bandwidths") = std::vector<std::optional<double>>{1.0},
      py::arg("scheme") = "multiplier", py::arg("block_a") = std::vector<double>{2.0},
      py::arg("reps") = 500, py::arg("B") = 200, py::arg("alpha") = 0.05,
      py::arg("burn_in") = 500, py::arg("seed") = 1, py::arg("keep_p_values") = false,
      "Monte Carlo rejection rates over a grid of designs.");

  m.def("mc_stderr", &mc_stderr, py::arg("p"), py::arg("replications"));

  m.def(
      "ols_fit",
      [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
        const OlsFit f = ols_fit(x, y);
        return py::make_tuple(f.coefficients, f.residuals);
      },
      py::arg("design"), py::arg("y"), "(coefficients, residuals)");

  m.def("newey_west_se", &newey_west_se, py::arg("design"), py::arg("residuals"),
        py::arg("m"));
  m.def("default_hac_lag", &default_hac_lag, py::arg("n"));

  m.def(
      "linear_granger_test",
      [](std::vector<double> rp, std::vector<double> vrp, Index horizon,
         std::optional<int> hac_lag) {
        return to_python(to_json(linear_granger_test(rp, vrp, horizon, hac_lag)));
      },
      py::arg("rp"), py::arg("vrp"), py::arg("horizon") = 1,
      py::arg("hac_lag") = py::none(),
      "Regress rp[t+h] on (1, rp[t], vrp[t]) and test the vrp coefficient.");
}
