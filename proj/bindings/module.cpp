// Python bindings for the spectral toolbox core.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "specbox/hadamard.hpp"
#include "specbox/identities.hpp"
#include "specbox/invariants.hpp"
#include "specbox/version.hpp"

namespace py = pybind11;
using namespace specbox;

namespace {

Kind1D parse_kind(const std::string& s) {
  for (Kind1D k : {Kind1D::DD, Kind1D::DN, Kind1D::ND, Kind1D::NN, Kind1D::Periodic,
                   Kind1D::Antiperiodic})
    if (s == kind_name(k)) return k;
  throw std::invalid_argument("unknown boundary kind: " + s);
}

BoxProblem make_box(const std::vector<double>& sides, const std::vector<std::string>& bc) {
  BoxProblem box;
  box.sides = sides;
  if (bc.empty()) {
    box.bc.assign(box.dim(), {Bc::Dirichlet, Bc::Dirichlet});
  } else {
    for (const auto& s : bc) {
      if (s.size() != 2) throw std::invalid_argument("bc entries must be two of D/N");
      box.bc.push_back({bc_from_char(s[0]), bc_from_char(s[1])});
    }
  }
  box.validate();
  return box;
}

std::map<MultiIndex, double> terms_from_dict(const py::dict& d) {
  std::map<MultiIndex, double> terms;
  for (auto item : d) {
    MultiIndex m;
    if (py::isinstance<py::int_>(item.first))
      m = {item.first.cast<int>()};
    else
      m = item.first.cast<MultiIndex>();
    terms[m] = item.second.cast<double>();
  }
  return terms;
}

py::dict terms_to_dict(const std::map<MultiIndex, double>& terms) {
  py::dict d;
  for (const auto& [m, c] : terms) d[py::tuple(py::cast(m))] = c;
  return d;
}

CosineSpec make_spec(const std::vector<double>& sides, const py::dict& terms) {
  CosineSpec cs;
  cs.sides = sides;
  cs.terms = terms_from_dict(terms);
  cs.validate();
  return cs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Galerkin spectra, heat traces, and kernel identities for -Delta + q on boxes";
  m.attr("__version__") = kVersion;

  py::class_<BoxProblem>(m, "BoxProblem")
      .def(py::init(&make_box), py::arg("sides"), py::arg("bc") = std::vector<std::string>{})
      .def_readonly("sides", &BoxProblem::sides)
      .def_property_readonly("bc",
                             [](const BoxProblem& b) {
                               std::vector<std::string> out;
                               for (const auto& f : b.bc)
                                 out.push_back(std::string{bc_char(f[0]), bc_char(f[1])});
                               return out;
                             })
      .def_property_readonly("dim", &BoxProblem::dim)
      .def("volume", &BoxProblem::volume)
      .def("cell_volume", &BoxProblem::cell_volume);

  py::class_<CosineSpec>(m, "CosineSpec")
      .def(py::init(&make_spec), py::arg("sides"), py::arg("terms") = py::dict())
      .def_readonly("sides", &CosineSpec::sides)
      .def_property_readonly("terms",
                             [](const CosineSpec& s) { return terms_to_dict(s.terms); })
      .def("evaluate", &CosineSpec::evaluate, py::arg("x"))
      .def("to_json", &CosineSpec::to_json)
      .def_static("from_json", &CosineSpec::from_json, py::arg("text"));

  py::class_<TrigPotential>(m, "TrigPotential")
      .def_property_readonly("sides", &TrigPotential::sides)
      .def_property_readonly("coeffs",
                             [](const TrigPotential& p) { return terms_to_dict(p.coeffs()); })
      .def("evaluate", &TrigPotential::evaluate, py::arg("x"))
      .def("mean_value", &TrigPotential::mean_value)
      .def("subtract_mean", &TrigPotential::subtract_mean)
      .def("sup_bound", &TrigPotential::sup_bound);

  m.def("build_potential", &build_potential, py::arg("spec"));
  m.def("reflect_potential", &reflect_potential, py::arg("potential"));
  m.def("reduce_potential", &reduce_potential, py::arg("potential"), py::arg("k"));
  m.def("coordinate_series", &coordinate_series, py::arg("potential"), py::arg("dim_index"));

  py::class_<DirectionalComponent>(m, "DirectionalComponent")
      .def_readonly("direction", &DirectionalComponent::direction)
      .def_readonly("series", &DirectionalComponent::series)
      .def_readonly("dual_norm", &DirectionalComponent::dual_norm);
  m.def("directional_decomposition", &directional_decomposition, py::arg("potential"));

  py::class_<Spectrum1D>(m, "Spectrum1D")
      .def_readonly("eigenvalues", &Spectrum1D::eigenvalues)
      .def_property_readonly("trusted", &Spectrum1D::trusted)
      .def("eigenfunction", &Spectrum1D::eigenfunction, py::arg("n"), py::arg("x"))
      .def("kernel", &kernel_1d, py::arg("t"), py::arg("x"), py::arg("y"));

  m.def(
      "solve_interval",
      [](const TrigPotential& p, const std::string& kind, double a, int K, bool keep_vectors) {
        return solve_interval(p, parse_kind(kind), a, K, keep_vectors);
      },
      py::arg("potential"), py::arg("kind"), py::arg("a"), py::arg("K"),
      py::arg("keep_vectors") = true);
  m.def("directional_spectrum", &directional_spectrum, py::arg("component"),
        py::arg("K") = 128);

  py::class_<SpectrumND>(m, "SpectrumND")
      .def_readonly("eigenvalues", &SpectrumND::eigenvalues)
      .def_property_readonly("trusted", &SpectrumND::trusted)
      .def("kernel", &kernel_nd, py::arg("t"), py::arg("x"), py::arg("y"));

  m.def("solve_box", &solve_interval_nd, py::arg("potential"), py::arg("box"), py::arg("K"),
        py::arg("keep_vectors") = true);
  m.def("separable_spectrum", &separable_spectrum, py::arg("factors"), py::arg("box"),
        py::arg("count"), py::arg("K1d") = 128);

  py::class_<HeatPoint>(m, "HeatPoint")
      .def_readonly("t", &HeatPoint::t)
      .def_readonly("value", &HeatPoint::value)
      .def_readonly("tail_bound", &HeatPoint::tail_bound)
      .def_readonly("flagged", &HeatPoint::flagged);

  py::class_<SpectrumInfo>(m, "SpectrumInfo")
      .def_readonly("eigenvalues", &SpectrumInfo::eigenvalues)
      .def_readonly("trusted", &SpectrumInfo::trusted);
  m.def("spectrum_info", py::overload_cast<const Spectrum1D&>(&spectrum_info),
        py::arg("spectrum"));
  m.def("spectrum_info", py::overload_cast<const SpectrumND&>(&spectrum_info),
        py::arg("spectrum"));

  m.def("trace_series", &trace_series, py::arg("info"), py::arg("t_grid"));
  m.def("fit_t_grid", &fit_t_grid, py::arg("info"), py::arg("points") = 40);
  m.def("predicted_coefficients", &predicted_coefficients, py::arg("box"),
        py::arg("potential"));

  py::class_<AsymptoticFit>(m, "AsymptoticFit")
      .def_readonly("exponents", &AsymptoticFit::exponents)
      .def_readonly("fitted", &AsymptoticFit::fitted)
      .def_readonly("stderrs", &AsymptoticFit::stderrs)
      .def_readonly("residual", &AsymptoticFit::residual)
      .def_readonly("condition", &AsymptoticFit::condition);
  m.def(
      "fit_expansion",
      [](const HeatTraceSeries& series, const std::vector<double>& exponents) {
        return fit_expansion(series, exponents);
      },
      py::arg("series"), py::arg("exponents"));

  py::class_<IdentityReport>(m, "IdentityReport")
      .def_readonly("name", &IdentityReport::name)
      .def_readonly("residual", &IdentityReport::residual)
      .def_readonly("tolerance", &IdentityReport::tolerance)
      .def_readonly("passed", &IdentityReport::pass)
      .def("to_json", &IdentityReport::to_json);

  m.def("default_t_set", &default_t_set);
  m.def(
      "reflection_identity_1d",
      [](const TrigPotential& p, double a, const std::string& kind,
         const std::vector<double>& t_set, int points, int K, double tolerance,
         int sample_start) {
        return reflection_identity_1d(p, a, parse_kind(kind), t_set, points, K, tolerance,
                                      sample_start);
      },
      py::arg("potential"), py::arg("a"), py::arg("kind"), py::arg("t_set"),
      py::arg("points") = 25, py::arg("K") = 64, py::arg("tolerance") = 1e-7,
      py::arg("sample_start") = 1);
  m.def("torus_image_identity_2d", &torus_image_identity_2d, py::arg("potential"),
        py::arg("box"), py::arg("t_set"), py::arg("points") = 25, py::arg("K") = 16,
        py::arg("tolerance") = 1e-6, py::arg("sample_start") = 1);
  m.def("trace_pairing_identity", &trace_pairing_identity, py::arg("potential"), py::arg("a"),
        py::arg("t_set"), py::arg("K") = 64, py::arg("tolerance") = 1e-8);
  m.def("trace_quadrupling_2d", &trace_quadrupling_2d, py::arg("potential"), py::arg("box"),
        py::arg("t_set"), py::arg("K") = 16, py::arg("tolerance") = 1e-5);
  m.def("factorization_identity", &factorization_identity, py::arg("potential"),
        py::arg("box"), py::arg("k"), py::arg("t_set"), py::arg("points") = 25,
        py::arg("K") = 16, py::arg("tolerance") = 1e-8, py::arg("sample_start") = 1);
  m.def("telescoped_dirichlet_trace", &telescoped_dirichlet_trace, py::arg("potential"),
        py::arg("b"), py::arg("t_set"), py::arg("K") = 64, py::arg("tolerance") = 1e-7);

  m.def("hadamard_a1", &hadamard_a1, py::arg("potential"), py::arg("x"), py::arg("y"));
  m.def("hadamard_a2", &hadamard_a2, py::arg("potential"), py::arg("x"), py::arg("y"));
  m.def("a_nu_1d", &a_nu_1d, py::arg("potential"), py::arg("nu"), py::arg("x"), py::arg("y"));

  py::class_<OddDerivativeReport>(m, "OddDerivativeReport")
      .def_readonly("magnitudes", &OddDerivativeReport::magnitudes)
      .def_readonly("tolerance", &OddDerivativeReport::tolerance)
      .def_readonly("passed", &OddDerivativeReport::pass);
  m.def("even_maclaurin_check", &even_maclaurin_check, py::arg("potential"), py::arg("nu"),
        py::arg("c"), py::arg("b"), py::arg("tolerance") = 1e-6, py::arg("h") = 0.4);

  py::class_<BundleParams>(m, "BundleParams")
      .def(py::init<>())
      .def_readwrite("J", &BundleParams::J)
      .def_readwrite("K1d", &BundleParams::K1d)
      .def_readwrite("K_heat", &BundleParams::K_heat)
      .def_readwrite("max_radii", &BundleParams::max_radii)
      .def_readwrite("with_heat_fit", &BundleParams::with_heat_fit);

  py::class_<DirectionalInvariant>(m, "DirectionalInvariant")
      .def_readonly("direction", &DirectionalInvariant::direction)
      .def_readonly("eigenvalues", &DirectionalInvariant::eigenvalues)
      .def_readonly("guaranteed", &DirectionalInvariant::guaranteed);

  py::class_<InvariantBundle>(m, "InvariantBundle")
      .def_readonly("box", &InvariantBundle::box)
      .def_readonly("mean_integral", &InvariantBundle::mean_integral)
      .def_readonly("directional", &InvariantBundle::directional)
      .def_readonly("coordinate", &InvariantBundle::coordinate)
      .def_readonly("q_d_sums", &InvariantBundle::q_d_sums)
      .def_readonly("heat_coeffs", &InvariantBundle::heat_coeffs)
      .def("to_json", &InvariantBundle::to_json);
  m.def("bundle", &bundle, py::arg("potential"), py::arg("box"),
        py::arg("params") = BundleParams{});

  py::class_<ComparisonEntry>(m, "ComparisonEntry")
      .def_readonly("component", &ComparisonEntry::component)
      .def_readonly("deviation", &ComparisonEntry::deviation)
      .def_readonly("tolerance", &ComparisonEntry::tolerance)
      .def_readonly("match", &ComparisonEntry::match);

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("entries", &ComparisonReport::entries)
      .def_readonly("consistent", &ComparisonReport::consistent)
      .def_readonly("verdict", &ComparisonReport::verdict)
      .def("to_json", &ComparisonReport::to_json);
  m.def("compare_bundles", &compare_bundles, py::arg("a"), py::arg("b"),
        py::arg("spectrum_tol") = 1e-8, py::arg("integral_tol") = 1e-10,
        py::arg("heat_tol") = 1e-6);

  py::class_<SeparabilityReport>(m, "SeparabilityReport")
      .def_readonly("consistent", &SeparabilityReport::consistent)
      .def_readonly("worst", &SeparabilityReport::worst)
      .def_readonly("separating_radius2", &SeparabilityReport::separating_radius2)
      .def("to_json", &SeparabilityReport::to_json);
  m.def("separability_diagnosis", &separability_diagnosis, py::arg("bundle"),
        py::arg("tol") = 1e-10);
}
