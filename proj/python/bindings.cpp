/*
   Copyright 2026 The fdrlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fdrlab/asymptotics.hpp"
#include "fdrlab/criticality.hpp"
#include "fdrlab/pi0.hpp"
#include "fdrlab/procedures.hpp"
#include "fdrlab/pvalues.hpp"
#include "fdrlab/simulation.hpp"
#include "fdrlab/ttest.hpp"

namespace py = pybind11;
using namespace fdrlab;

namespace {

AlternativeFamily make_family(const std::string& name, double theta,
                              double gamma, int df) {
  if (name == "gaussian") return AlternativeFamily::gaussian(theta);
  if (name == "laplace") return AlternativeFamily::laplace(theta);
  if (name == "subbotin") return AlternativeFamily::subbotin(theta, gamma);
  if (name == "student") return AlternativeFamily::student(df, theta);
  throw std::invalid_argument("unknown family '" + name + "'");
}

Sidedness make_sidedness(const std::string& sided) {
  if (sided == "one") return Sidedness::OneSided;
  if (sided == "two") return Sidedness::TwoSided;
  throw std::invalid_argument("sided must be 'one' or 'two'");
}

} // namespace

PYBIND11_MODULE(_fdrlab, m) {
  m.doc() = "Multiple-testing laboratory: mixture models, step-up "
            "procedures, criticality, and null-proportion estimation";

  py::class_<AlternativeFamily>(m, "AlternativeFamily")
      .def(py::init(&make_family), py::arg("family"), py::arg("theta"),
           py::arg("gamma") = 2.0, py::arg("df") = 0)
      .def_property_readonly("theta", &AlternativeFamily::theta)
      .def_property_readonly("df", &AlternativeFamily::df)
      .def_property_readonly("name", &AlternativeFamily::name);

  py::class_<MixtureModel>(m, "MixtureModel")
      .def(py::init([](double pi0, const AlternativeFamily& family,
                       const std::string& sided) {
             return MixtureModel(pi0, family, make_sidedness(sided));
           }),
           py::arg("pi0"), py::arg("family"), py::arg("sided") = "one")
      .def_readonly("pi0", &MixtureModel::pi0);

  m.def("f0_pdf", &f0_pdf);
  m.def("f1_pdf", &f1_pdf);
  m.def("f0_cdf", &f0_cdf);
  m.def("f1_cdf", &f1_cdf);
  m.def("f0_quantile", &f0_quantile);
  m.def("likelihood_ratio", &likelihood_ratio);
  m.def("hh", &hh, py::arg("k"), py::arg("z"));

  m.def("p_value", &p_value);
  m.def("g1_cdf", &g1_cdf);
  m.def("g1_pdf", &g1_pdf);
  m.def("mixture_cdf", &mixture_cdf);
  m.def("mixture_pdf", &mixture_pdf);
  m.def(
      "sample_pvalues",
      [](const MixtureModel& model, int m_count, std::uint64_t seed,
         std::uint64_t stream, bool bernoulli_labels) {
        const auto sample = sample_pvalues(model, m_count, seed, stream,
                                           {bernoulli_labels});
        std::vector<bool> labels(sample.is_null.begin(), sample.is_null.end());
        return py::make_tuple(sample.pvalues, labels);
      },
      py::arg("model"), py::arg("m"), py::arg("seed"), py::arg("stream") = 0,
      py::arg("bernoulli_labels") = false);

  py::class_<BHOutcome>(m, "BHOutcome")
      .def_readonly("alpha", &BHOutcome::alpha)
      .def_readonly("effective_level", &BHOutcome::effective_level)
      .def_readonly("i_hat", &BHOutcome::i_hat)
      .def_readonly("tau_hat", &BHOutcome::tau_hat)
      .def_readonly("rejected", &BHOutcome::rejected)
      .def_readonly("R", &BHOutcome::R)
      .def_readonly("rho", &BHOutcome::rho)
      .def_readonly("V", &BHOutcome::V)
      .def_readonly("fdp", &BHOutcome::fdp)
      .def_readonly("power", &BHOutcome::power);

  m.def("bh95", [](const std::vector<double>& p, double alpha) {
    return bh95(p, alpha);
  });
  m.def(
      "plug_in_bh",
      [](const std::vector<double>& p, double alpha, double pi0_hat,
         bool strict) { return plug_in_bh(p, alpha, pi0_hat, strict); },
      py::arg("pvalues"), py::arg("alpha"), py::arg("pi0_hat"),
      py::arg("strict") = false);
  m.def("account",
        [](BHOutcome& outcome, const std::vector<bool>& is_null) {
          std::vector<std::uint8_t> labels(is_null.begin(), is_null.end());
          account(outcome, labels);
          return outcome;
        });

  py::class_<CriticalityReport>(m, "CriticalityReport")
      .def_readonly("alpha_star", &CriticalityReport::alpha_star)
      .def_readonly("alpha_star_intrinsic",
                    &CriticalityReport::alpha_star_intrinsic)
      .def_readonly("g1_at_0", &CriticalityReport::g1_at_0)
      .def_readonly("g1_at_1", &CriticalityReport::g1_at_1)
      .def_readonly("pi0_bar", &CriticalityReport::pi0_bar)
      .def_readonly("is_critical", &CriticalityReport::is_critical)
      .def_readonly("is_pure", &CriticalityReport::is_pure)
      .def("to_json", &report_to_json);

  m.def("critical_value_closed_form", &critical_value_closed_form);
  m.def("critical_value_numeric", &critical_value_numeric);
  m.def("purity_report", &purity_report);

  py::class_<Pi0Estimate>(m, "Pi0Estimate")
      .def_readonly("value_raw", &Pi0Estimate::value_raw)
      .def_readonly("value_clamped", &Pi0Estimate::value_clamped)
      .def_readonly("bandwidth", &Pi0Estimate::bandwidth)
      .def_readonly("asymptotic_se", &Pi0Estimate::asymptotic_se);

  m.def("storey_fixed", [](const std::vector<double>& p, double lambda) {
    return storey_fixed(p, lambda);
  });
  m.def(
      "storey_bandwidth",
      [](const std::vector<double>& p, int k, double eta_c) {
        return storey_bandwidth(p, k, EtaRule::power_log(eta_c));
      },
      py::arg("pvalues"), py::arg("k"), py::arg("eta_c") = 1.0 / 3.0);
  m.def(
      "kernel_pi0",
      [](const std::vector<double>& p, int k, double eta_c) {
        return kernel_pi0(p, k, EtaRule::power_log(eta_c));
      },
      py::arg("pvalues"), py::arg("k"), py::arg("eta_c") = 1.0 / 3.0);
  m.def("bandwidth_h", [](int m_count, int k, double eta_c) {
    return bandwidth_h(m_count, k, EtaRule::power_log(eta_c));
  });
  m.def("predicted_bias", &predicted_bias);

  py::class_<AsymptoticPrediction>(m, "AsymptoticPrediction")
      .def_readonly("alpha", &AsymptoticPrediction::alpha)
      .def_readonly("t_star", &AsymptoticPrediction::t_star)
      .def_readonly("rho_inf", &AsymptoticPrediction::rho_inf)
      .def_readonly("pi_inf", &AsymptoticPrediction::pi_inf)
      .def_readonly("fdp_limit", &AsymptoticPrediction::fdp_limit)
      .def_readonly("fdp_scaled_variance",
                    &AsymptoticPrediction::fdp_scaled_variance);

  m.def("t_star", &t_star);
  m.def("predict", &predict);
  m.def(
      "predict_plug_in",
      [](const MixtureModel& model, double alpha, double h_m) {
        return predict_plug_in(model, alpha, h_m);
      },
      py::arg("model"), py::arg("alpha"), py::arg("h_m"));

  m.def(
      "t_statistics",
      [](const std::vector<std::vector<double>>& rows,
         const std::vector<bool>& group_is_y) {
        TwoSampleDataset data;
        data.n_samples = static_cast<int>(group_is_y.size());
        data.group_is_y.assign(group_is_y.begin(), group_is_y.end());
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != group_is_y.size()) {
            throw std::invalid_argument("row length mismatch");
          }
          data.feature_ids.push_back("f" + std::to_string(i));
          data.values.insert(data.values.end(), rows[i].begin(), rows[i].end());
        }
        return t_statistics(data);
      },
      py::arg("rows"), py::arg("group_is_y"));
  m.def("two_sided_pvalues", [](const std::vector<double>& t, int df) {
    return two_sided_pvalues(t, df);
  });
}
