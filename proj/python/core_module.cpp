#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arlgm/covariance.hpp"
#include "arlgm/errors.hpp"
#include "arlgm/io.hpp"
#include "arlgm/maxent.hpp"
#include "arlgm/scoring.hpp"
#include "arlgm/simulate.hpp"
#include "arlgm/spectrum.hpp"

namespace py = pybind11;
using namespace arlgm;

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "AR latent-variable graphical model identification";

  py::register_exception<ConfigError>(mod, "ConfigError");
  py::register_exception<DataError>(mod, "DataError");
  py::register_exception<SolverError>(mod, "SolverError");
  py::register_exception<IoError>(mod, "IoError");

  py::class_<EdgeSet>(mod, "EdgeSet")
      .def(py::init<int>(), py::arg("m"))
      .def_static("complete", &EdgeSet::complete, py::arg("m"))
      .def("insert", &EdgeSet::insert, py::arg("k"), py::arg("h"))
      .def("contains", &EdgeSet::contains, py::arg("k"), py::arg("h"))
      .def("pairs", &EdgeSet::pairs)
      .def("count", &EdgeSet::count)
      .def("dim", &EdgeSet::dim)
      .def("__len__", &EdgeSet::count)
      .def("__eq__", [](const EdgeSet& a, const EdgeSet& b) { return a == b; });

  py::class_<BlockRow>(mod, "BlockRow")
      .def("dim", &BlockRow::dim)
      .def("order", &BlockRow::order)
      .def("block", [](const BlockRow& y, int j) { return Matrix(y.block(j)); },
           py::arg("j"));

  py::class_<CovSequence>(mod, "CovSequence")
      .def_readonly("lags", &CovSequence::lags)
      .def_readonly("sample_size", &CovSequence::sample_size)
      .def_readonly("toeplitz_min_eig", &CovSequence::toeplitz_min_eig);

  py::class_<LatentArModel>(mod, "LatentArModel")
      .def_readonly("m", &LatentArModel::m)
      .def_readonly("l", &LatentArModel::l)
      .def_readonly("n", &LatentArModel::n)
      .def_readonly("a", &LatentArModel::a)
      .def_readonly("edges", &LatentArModel::edges)
      .def_readonly("companion_radius", &LatentArModel::companion_radius)
      .def("latent_factor", &LatentArModel::latent_factor);

  py::class_<RegParams>(mod, "RegParams")
      .def(py::init<>())
      .def(py::init([](double lambda, double gamma) {
             return RegParams{lambda, gamma};
           }),
           py::arg("lam"), py::arg("gamma"))
      .def_readwrite("lam", &RegParams::lambda)
      .def_readwrite("gamma", &RegParams::gamma);

  py::class_<SolverOptions>(mod, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolverOptions::tol)
      .def_readwrite("mu_min", &SolverOptions::mu_min)
      .def_readwrite("max_newton", &SolverOptions::max_newton)
      .def_readwrite("grid_size", &SolverOptions::grid_size)
      .def_readwrite("rank_tol", &SolverOptions::rank_tol)
      .def_readwrite("support_tol", &SolverOptions::support_tol);

  py::class_<MaxentOptions>(mod, "MaxentOptions")
      .def(py::init<>())
      .def_readwrite("tol", &MaxentOptions::tol)
      .def_readwrite("max_newton", &MaxentOptions::max_newton)
      .def_readwrite("grid_size", &MaxentOptions::grid_size);

  py::class_<DualCertificate>(mod, "DualCertificate")
      .def_readonly("gap", &DualCertificate::gap)
      .def_readonly("comp_slack_x", &DualCertificate::comp_slack_x)
      .def_readonly("comp_slack_l", &DualCertificate::comp_slack_l)
      .def_readonly("min_eig_u", &DualCertificate::min_eig_u)
      .def_readonly("min_eig_v", &DualCertificate::min_eig_v)
      .def_readonly("group_margin", &DualCertificate::group_margin)
      .def_readonly("certified", &DualCertificate::certified);

  py::class_<DualSolution>(mod, "DualSolution")
      .def_readonly("w", &DualSolution::w)
      .def_readonly("objective", &DualSolution::objective)
      .def_readonly("newton_steps", &DualSolution::newton_steps)
      .def_readonly("cert", &DualSolution::cert);

  py::class_<LatentStructure>(mod, "LatentStructure")
      .def_readonly("g", &LatentStructure::g)
      .def_readonly("h", &LatentStructure::h)
      .def_readonly("low_rank", &LatentStructure::low_rank)
      .def_readonly("l", &LatentStructure::l)
      .def_readonly("unique", &LatentStructure::unique);

  py::class_<FixedModel>(mod, "FixedModel")
      .def_readonly("m", &FixedModel::m)
      .def_readonly("n", &FixedModel::n)
      .def_readonly("l", &FixedModel::l)
      .def_readonly("edges", &FixedModel::edges)
      .def_readonly("g", &FixedModel::g)
      .def_readonly("x", &FixedModel::x)
      .def_readonly("h", &FixedModel::h)
      .def_readonly("low_rank", &FixedModel::low_rank)
      .def_readonly("objective", &FixedModel::objective);

  py::class_<ExtensionCertificate>(mod, "ExtensionCertificate")
      .def_readonly("moment_gap", &ExtensionCertificate::moment_gap)
      .def_readonly("latent_margin", &ExtensionCertificate::latent_margin)
      .def_readonly("entropy", &ExtensionCertificate::entropy)
      .def_readonly("ok", &ExtensionCertificate::ok);

  py::class_<RegPath>(mod, "RegPath")
      .def(py::init<>())
      .def_readwrite("points", &RegPath::points)
      .def_static("log_grid", &RegPath::log_grid, py::arg("lambda_lo"),
                  py::arg("lambda_hi"), py::arg("n_lambda"),
                  py::arg("gamma_lo"), py::arg("gamma_hi"), py::arg("n_gamma"));

  py::class_<SweepOptions>(mod, "SweepOptions")
      .def(py::init<>())
      .def_readwrite("n", &SweepOptions::n)
      .def_readwrite("bartlett_window", &SweepOptions::bartlett_window)
      .def_readwrite("subtract_mean", &SweepOptions::subtract_mean)
      .def_readwrite("no_latent", &SweepOptions::no_latent)
      .def_readwrite("additive_score", &SweepOptions::additive_score)
      .def_readwrite("additive_alpha", &SweepOptions::additive_alpha)
      .def_readwrite("latent_weight_floor", &SweepOptions::latent_weight_floor)
      .def_readwrite("workers", &SweepOptions::workers)
      .def_readwrite("solver", &SweepOptions::solver)
      .def_readwrite("maxent", &SweepOptions::maxent);

  py::class_<ScoredModel>(mod, "ScoredModel")
      .def_readonly("reg", &ScoredModel::reg)
      .def_readonly("status", &ScoredModel::status)
      .def_readonly("ok", &ScoredModel::ok)
      .def_readonly("model", &ScoredModel::model)
      .def_readonly("cert", &ScoredModel::cert)
      .def_readonly("ext", &ScoredModel::ext)
      .def_readonly("transversal", &ScoredModel::transversal)
      .def_readonly("unique", &ScoredModel::unique)
      .def_readonly("d", &ScoredModel::d)
      .def_readonly("p", &ScoredModel::p)
      .def_readonly("f", &ScoredModel::f);

  py::class_<SweepResult>(mod, "SweepResult")
      .def_readonly("models", &SweepResult::models)
      .def_readonly("selected", &SweepResult::selected);

  mod.def("gen_model", &gen_model, py::arg("m"), py::arg("l"), py::arg("n"),
          py::arg("edge_density"), py::arg("seed"));
  mod.def("sample", &sample, py::arg("model"), py::arg("big_n"),
          py::arg("seed"), py::arg("burn_in") = -1);
  mod.def("estimate_lags", &estimate_lags, py::arg("data"), py::arg("n"),
          py::arg("subtract_mean") = true);
  mod.def("log_returns", &log_returns, py::arg("prices"));
  mod.def("solve_sl_dual", &solve_sl_dual, py::arg("cov"), py::arg("reg"),
          py::arg("opts") = SolverOptions());
  mod.def("recover_x", &recover_x, py::arg("cov"), py::arg("dual"));
  mod.def("recover_latent", &recover_latent, py::arg("dual"), py::arg("x"),
          py::arg("reg"), py::arg("opts") = SolverOptions());
  mod.def("support_edges", &support_edges, py::arg("x"), py::arg("low_rank"),
          py::arg("m"), py::arg("support_tol") = 1e-5);
  mod.def("transversality", &transversality, py::arg("edges"), py::arg("g"),
          py::arg("m"));
  mod.def("solve_fixed", &solve_fixed, py::arg("cov"), py::arg("edges"),
          py::arg("g"), py::arg("opts") = MaxentOptions());
  mod.def(
      "certify_extension",
      [](const FixedModel& model, const CovSequence& cov, int grid_size,
         double tol) {
        return certify_extension(model, cov, FreqGrid(grid_size), tol);
      },
      py::arg("model"), py::arg("cov"), py::arg("grid_size") = 512,
      py::arg("tol") = 1e-6);
  mod.def("complexity", &complexity, py::arg("edges"), py::arg("l"));
  mod.def("sweep", &sweep, py::arg("data"), py::arg("path"), py::arg("opts"),
          py::call_guard<py::gil_scoped_release>());
  mod.def(
      "coherence_mean",
      [](const FixedModel& model, int grid_size) {
        JointSpectrum joint = assemble_joint(model);
        return coherence_mean_abs(partial_coherence(joint, FreqGrid(grid_size)));
      },
      py::arg("model"), py::arg("grid_size") = 512);
  mod.def("dot_string", &dot_string, py::arg("edges"), py::arg("l"),
          py::arg("names") = std::vector<std::string>());
}
