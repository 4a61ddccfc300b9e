#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopfield/oracle.hpp"
#include "hopfield/spectrum.hpp"
#include "hopfield/thermometry.hpp"

namespace py = pybind11;
using namespace hopfield;

namespace {

std::array<std::array<Complex, 4>, 4> mu_entries(const MuMatrix& m) { return m.mu; }

std::array<std::vector<Complex>, 4> oracle_field_coeffs(const ModelParams& p,
                                                        int cutoff,
                                                        std::vector<double> ts) {
    oracle::HeisenbergPropagator prop(p, cutoff);
    return prop.field_coeffs(ts);
}

}  // namespace

PYBIND11_MODULE(_hopfieldusc, m) {
    m.doc() = "Exact polariton spectra, Eberly-Wodkiewicz physical spectra and "
              "critical quantum thermometry of the anisotropic Hopfield model";
    m.attr("__version__") = kVersion;

    py::register_exception<InvalidParams>(m, "InvalidParams", PyExc_ValueError);
    py::register_exception<InvalidSqueezing>(m, "InvalidSqueezing", PyExc_ValueError);
    py::register_exception<UnstablePhase>(m, "UnstablePhase", PyExc_ArithmeticError);
    py::register_exception<CriticalPhase>(m, "CriticalPhase", PyExc_ArithmeticError);
    py::register_exception<NotIsotropic>(m, "NotIsotropic", PyExc_ValueError);
    py::register_exception<PoleAt>(m, "PoleAt", PyExc_ArithmeticError);

    py::enum_<Phase>(m, "Phase")
        .value("Normal", Phase::Normal)
        .value("Critical", Phase::Critical)
        .value("Unstable", Phase::Unstable);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double omega_c, double omega_b, double g1, double g2,
                         double D) {
                 ModelParams p{omega_c, omega_b, g1, g2, D};
                 p.validate();
                 return p;
             }),
             py::arg("omega_c") = 1.0, py::arg("omega_b") = 1.0, py::arg("g1") = 0.0,
             py::arg("g2") = 0.0, py::arg("D") = 0.0)
        .def_readwrite("omega_c", &ModelParams::omega_c)
        .def_readwrite("omega_b", &ModelParams::omega_b)
        .def_readwrite("g1", &ModelParams::g1)
        .def_readwrite("g2", &ModelParams::g2)
        .def_readwrite("D", &ModelParams::D)
        .def("lambda2", &ModelParams::lambda2)
        .def("squeezing_valid", &ModelParams::squeezing_valid)
        .def_static("isotropic_coupling", &ModelParams::isotropic_coupling,
                    py::arg("omega_c"), py::arg("omega_b"), py::arg("g"), py::arg("D"))
        .def_static("resonant_trk", &ModelParams::resonant_trk, py::arg("g"),
                    py::arg("omega") = 1.0);

    py::class_<PolaritonSpectrum>(m, "PolaritonSpectrum")
        .def_readonly("omega_x_sq", &PolaritonSpectrum::omega_x_sq)
        .def_readonly("omega_y_sq", &PolaritonSpectrum::omega_y_sq)
        .def_readonly("phase", &PolaritonSpectrum::phase)
        .def("omega_x", &PolaritonSpectrum::omega_x)
        .def("omega_y", &PolaritonSpectrum::omega_y);

    py::class_<DerivedQuantities>(m, "DerivedQuantities")
        .def_readonly("Omega_x_sq", &DerivedQuantities::Omega_x_sq)
        .def_readonly("Omega_y_sq", &DerivedQuantities::Omega_y_sq)
        .def_readonly("lambda1", &DerivedQuantities::lambda1)
        .def_readonly("lambda2", &DerivedQuantities::lambda2)
        .def_readonly("w1_sq", &DerivedQuantities::w1_sq)
        .def_readonly("w2_sq", &DerivedQuantities::w2_sq)
        .def_readonly("lambda_tilde", &DerivedQuantities::lambda_tilde)
        .def_readonly("lambda_coupling", &DerivedQuantities::lambda_coupling)
        .def_readonly("theta", &DerivedQuantities::theta)
        .def_readonly("r1", &DerivedQuantities::r1)
        .def_readonly("r2", &DerivedQuantities::r2);

    m.def("polariton_frequencies", &polariton_frequencies, py::arg("params"));
    m.def("rwa_frequencies", &rwa_frequencies, py::arg("params"));
    m.def("derived_quantities", &derived_quantities, py::arg("params"));
    m.def("energy_level", &energy_level, py::arg("params"), py::arg("m"), py::arg("n"),
          py::arg("shifted") = false);
    m.def("critical_diamagnetic", &critical_diamagnetic, py::arg("params"));
    m.def("critical_coupling", &critical_coupling, py::arg("params"));

    py::class_<FockProduct>(m, "FockProduct")
        .def(py::init<int, int>(), py::arg("n") = 0, py::arg("m") = 0)
        .def_readwrite("n", &FockProduct::n)
        .def_readwrite("m", &FockProduct::m);

    py::class_<MuMatrix>(m, "MuMatrix")
        .def_property_readonly("mu", &mu_entries)
        .def_readonly("phi", &MuMatrix::phi)
        .def_readonly("lambda_ap", &MuMatrix::lambda_ap)
        .def_readonly("omega_x", &MuMatrix::omega_x)
        .def_readonly("omega_y", &MuMatrix::omega_y)
        .def("row_sum", &MuMatrix::row_sum, py::arg("j"));

    m.def("mu_coefficients", &mu_coefficients, py::arg("params"));

    py::class_<FieldEvolution>(m, "FieldEvolution")
        .def(py::init<const ModelParams&>(), py::arg("params"))
        .def("coeffs", &FieldEvolution::coeffs, py::arg("t"))
        .def_property_readonly("critical", &FieldEvolution::critical)
        .def_property_readonly("omega_x", &FieldEvolution::omega_x)
        .def_property_readonly("omega_y", &FieldEvolution::omega_y);

    m.def("autocorrelation",
          py::overload_cast<const ModelParams&, FockProduct, double, double>(
              &autocorrelation),
          py::arg("params"), py::arg("state"), py::arg("t1"), py::arg("t2"));
    m.def(
        "hermitian_check",
        [](const ModelParams& p, FockProduct s, std::vector<double> grid, double tol) {
            return hermitian_check(p, s, grid, tol);
        },
        py::arg("params"), py::arg("state"), py::arg("t_grid"),
        py::arg("tol") = 1e-12);

    py::class_<FilterConfig>(m, "FilterConfig")
        .def(py::init<>())
        .def_readwrite("gamma", &FilterConfig::gamma)
        .def_readwrite("t_obs", &FilterConfig::t_obs)
        .def_readwrite("omega_grid", &FilterConfig::omega_grid);
    m.def("make_filter", &make_filter, py::arg("gamma"), py::arg("t_obs"),
          py::arg("omega_max") = 3.0, py::arg("n_points") = 3000);

    py::enum_<SpectrumMethod>(m, "SpectrumMethod")
        .value("Quadrature", SpectrumMethod::Quadrature)
        .value("ClosedForm", SpectrumMethod::ClosedForm)
        .value("RWA", SpectrumMethod::RWA)
        .value("DSCLimit", SpectrumMethod::DSCLimit);

    py::class_<LorentzianComponent>(m, "LorentzianComponent")
        .def_readonly("center", &LorentzianComponent::center)
        .def_readonly("weight", &LorentzianComponent::weight)
        .def_readonly("numerator", &LorentzianComponent::numerator)
        .def_readonly("height", &LorentzianComponent::height);

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("omega", &SpectrumResult::omega)
        .def_readonly("values", &SpectrumResult::values)
        .def_readonly("components", &SpectrumResult::components)
        .def_readonly("method", &SpectrumResult::method)
        .def_readonly("gamma", &SpectrumResult::gamma)
        .def_readonly("t_obs", &SpectrumResult::t_obs)
        .def_readonly("stationary", &SpectrumResult::stationary)
        .def_readonly("critical_dynamics", &SpectrumResult::critical_dynamics);

    m.def("ew_spectrum_quadrature", &ew_spectrum_quadrature, py::arg("params"),
          py::arg("state"), py::arg("filter"), py::arg("stationary") = false);
    m.def("ew_spectrum_trapezoid", &ew_spectrum_trapezoid, py::arg("params"),
          py::arg("state"), py::arg("filter"), py::arg("rtol") = 1e-6,
          py::arg("max_doublings") = 12);
    m.def("ew_spectrum_closed_10", &ew_spectrum_closed_10, py::arg("params"),
          py::arg("filter"));
    m.def("ew_spectrum_closed_01", &ew_spectrum_closed_01, py::arg("params"),
          py::arg("filter"));
    m.def("ew_spectrum_rwa", &ew_spectrum_rwa, py::arg("params"), py::arg("filter"));
    m.def("dsc_limit_spectrum", &dsc_limit_spectrum, py::arg("params"),
          py::arg("filter"));

    py::class_<SpectrumPeak>(m, "SpectrumPeak")
        .def_readonly("position", &SpectrumPeak::position)
        .def_readonly("height", &SpectrumPeak::height);
    py::class_<VrsAnalysis>(m, "VrsAnalysis")
        .def_readonly("peaks", &VrsAnalysis::peaks)
        .def_readonly("splitting", &VrsAnalysis::splitting)
        .def_readonly("asymmetry_ratio", &VrsAnalysis::asymmetry_ratio)
        .def_readonly("single_peak", &VrsAnalysis::single_peak);
    m.def("vrs_analysis", &vrs_analysis, py::arg("spectrum"));

    py::enum_<ThermoBranch>(m, "ThermoBranch")
        .value("Hyperbolic", ThermoBranch::Hyperbolic)
        .value("Trigonometric", ThermoBranch::Trigonometric)
        .value("PoleNearby", ThermoBranch::PoleNearby);

    py::class_<ThermoPoint>(m, "ThermoPoint")
        .def_readonly("T", &ThermoPoint::T)
        .def_readonly("Z", &ThermoPoint::Z)
        .def_readonly("U", &ThermoPoint::U)
        .def_readonly("C", &ThermoPoint::C)
        .def_readonly("qfi", &ThermoPoint::qfi)
        .def_readonly("snr", &ThermoPoint::snr)
        .def_readonly("branch_x", &ThermoPoint::branch_x)
        .def_readonly("branch_y", &ThermoPoint::branch_y);

    m.def("partition_function", &partition_function, py::arg("params"), py::arg("T"));
    m.def("thermo_point", &thermo_point, py::arg("params"), py::arg("T"));
    m.def("thermo_point_modes", &thermo_point_modes, py::arg("omega_x"),
          py::arg("omega_y"), py::arg("T"));

    py::class_<CriticalQfi>(m, "CriticalQfi")
        .def_readonly("qfi", &CriticalQfi::qfi)
        .def_readonly("branch_x", &CriticalQfi::branch_x)
        .def_readonly("branch_y", &CriticalQfi::branch_y);
    m.def("qfi_critical_d0", &qfi_critical_d0, py::arg("omega_c"), py::arg("g"),
          py::arg("T"));

    py::class_<SnrPoint>(m, "SnrPoint")
        .def_readonly("g", &SnrPoint::g)
        .def_readonly("qfi", &SnrPoint::qfi)
        .def_readonly("snr", &SnrPoint::snr)
        .def_readonly("delta_t", &SnrPoint::delta_t)
        .def_readonly("pole", &SnrPoint::pole)
        .def_readonly("pole_index", &SnrPoint::pole_index);
    m.def(
        "snr_curve",
        [](double omega_c, double T, std::vector<double> grid, int n_meas) {
            return snr_curve(omega_c, T, grid, n_meas);
        },
        py::arg("omega_c"), py::arg("T"), py::arg("g_grid"),
        py::arg("n_measurements") = 1);
    m.def("dicke_equilibrium_critical_coupling", &dicke_equilibrium_critical_coupling,
          py::arg("omega_c"), py::arg("omega_z"), py::arg("T"));
    m.def("qfi_pole_locus", &qfi_pole_locus, py::arg("omega_c"), py::arg("T"),
          py::arg("n"));

    auto orm = m.def_submodule("oracle", "truncated-Fock-space validators");
    py::class_<oracle::OracleGaps>(orm, "OracleGaps")
        .def_readonly("ground", &oracle::OracleGaps::ground)
        .def_readonly("omega_y", &oracle::OracleGaps::omega_y)
        .def_readonly("omega_x", &oracle::OracleGaps::omega_x);
    orm.def("lowest_gaps", &oracle::lowest_gaps, py::arg("params"), py::arg("cutoff"),
            py::arg("tol") = 1e-10);
    orm.def("truncated_eigenvalues", &oracle::truncated_eigenvalues, py::arg("params"),
            py::arg("cutoff"));
    orm.def("field_coeffs", &oracle_field_coeffs, py::arg("params"), py::arg("cutoff"),
            py::arg("t_grid"));
    py::class_<oracle::LadderThermo>(orm, "LadderThermo")
        .def_readonly("Z", &oracle::LadderThermo::Z)
        .def_readonly("U", &oracle::LadderThermo::U)
        .def_readonly("C", &oracle::LadderThermo::C);
    orm.def("ladder_thermo", &oracle::ladder_thermo, py::arg("params"), py::arg("T"),
            py::arg("tail_rel") = 1e-14, py::arg("max_terms") = 2000000);
}
