#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lpm/datasets.hpp"
#include "lpm/embed_gp.hpp"
#include "lpm/embed_psa.hpp"
#include "lpm/measures.hpp"
#include "lpm/procrustes.hpp"
#include "lpm/refine.hpp"

namespace py = pybind11;
using namespace lpm;

PYBIND11_MODULE(_lpm, m) {
    m.doc() = "Local-Procrustes manifold embedding";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<IsolatedPoints>(m, "IsolatedPoints", PyExc_RuntimeError);
    py::register_exception<SolverDiverged>(m, "SolverDiverged", PyExc_RuntimeError);
    py::register_exception<DegenerateEmbedding>(m, "DegenerateEmbedding", PyExc_RuntimeError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_RuntimeError);

    py::class_<NeighborhoodGraph>(m, "NeighborhoodGraph")
        .def_readonly("n", &NeighborhoodGraph::n)
        .def_readonly("neighbors", &NeighborhoodGraph::neighbors)
        .def_readonly("radii", &NeighborhoodGraph::radii)
        .def_readonly("r_max", &NeighborhoodGraph::r_max)
        .def("members", &NeighborhoodGraph::members)
        .def("connected_components", &NeighborhoodGraph::connected_components);

    m.def("knn_graph", &knn_graph, py::arg("x"), py::arg("k"));
    m.def("eps_graph", &eps_graph, py::arg("x"), py::arg("eps"));

    py::class_<ProcrustesFit>(m, "ProcrustesFit")
        .def_readonly("rotation", &ProcrustesFit::rotation)
        .def_readonly("translation", &ProcrustesFit::translation)
        .def_readonly("scale", &ProcrustesFit::scale)
        .def_readonly("residual", &ProcrustesFit::residual);

    m.def("fit", &fit, py::arg("x"), py::arg("y"));
    m.def("fit_conformal", &fit_conformal, py::arg("x"), py::arg("y"));
    m.def("apply", &apply, py::arg("fit"), py::arg("y"));

    py::class_<MeasureReport>(m, "MeasureReport")
        .def_readonly("R", &MeasureReport::r)
        .def_readonly("R_N", &MeasureReport::r_n)
        .def_readonly("R_PCA", &MeasureReport::r_pca)
        .def_readonly("R_C", &MeasureReport::r_c)
        .def_readonly("lower_bound_N", &MeasureReport::lower_bound_n)
        .def_readonly("skipped", &MeasureReport::skipped)
        .def("summary", &MeasureReport::summary);

    m.def(
        "measure_report",
        [](const Matrix& x, const Matrix& y, const NeighborhoodGraph& g) {
            return measure_report(x, y, g);
        },
        py::arg("x"), py::arg("y"), py::arg("graph"));
    m.def("lower_bound_N", &lower_bound_N, py::arg("x"), py::arg("graph"), py::arg("d"));

    m.def(
        "embed_gp",
        [](const Matrix& x, const NeighborhoodGraph& g, Index d, std::uint64_t seed,
           Index seed_index, bool random_seed) {
            GpOptions opt;
            opt.seed_index = seed_index;
            opt.random_seed = random_seed;
            RngStream rng(seed);
            auto res = embed_gp(x, g, d, opt, rng);
            return py::make_tuple(res.y, res.warnings);
        },
        py::arg("x"), py::arg("graph"), py::arg("d") = 2, py::arg("seed") = 0,
        py::arg("seed_index") = -1, py::arg("random_seed") = false);

    m.def(
        "embed_psa",
        [](const Matrix& x, const NeighborhoodGraph& g, Index d, std::uint64_t seed, Index chains,
           double alpha) {
            PsaOptions opt;
            opt.chains = chains;
            opt.schedule.alpha = alpha;
            RngStream rng(seed);
            auto res = embed_psa(x, g, d, opt, rng);
            return py::make_tuple(res.y, res.alignment_complete, res.warnings);
        },
        py::arg("x"), py::arg("graph"), py::arg("d") = 2, py::arg("seed") = 0,
        py::arg("chains") = 1, py::arg("alpha") = 0.95);

    m.def(
        "refine",
        [](const Matrix& x, const Matrix& y0, const NeighborhoodGraph& g, double rel_tol,
           Index max_iters) {
            auto res = refine(x, y0, g, rel_tol, max_iters);
            std::vector<std::tuple<Index, double, double, double>> trace;
            for (const auto& it : res.trace.iterations)
                trace.emplace_back(it.iter, it.r, it.r_n, it.max_displacement);
            return py::make_tuple(res.y, trace);
        },
        py::arg("x"), py::arg("y0"), py::arg("graph"), py::arg("rel_tol") = 1e-6,
        py::arg("max_iters") = 200);

    m.def(
        "generate",
        [](const std::string& kind, Index n, double noise, std::uint64_t seed) {
            RngStream rng(seed);
            SyntheticDataset ds;
            switch (kind_from_name(kind)) {
                case DatasetKind::swissroll: ds = gen_swissroll(n, noise, rng); break;
                case DatasetKind::hemisphere: ds = gen_hemisphere(n, rng); break;
                case DatasetKind::cylinder: ds = gen_cylinder(n, rng); break;
            }
            return py::make_tuple(ds.x, ds.z, ds.jacobians);
        },
        py::arg("kind"), py::arg("n"), py::arg("noise") = 0.0, py::arg("seed") = 0);

    m.def("subspace_angles", &subspace_angles, py::arg("p"), py::arg("j"));
    m.def("set_thread_count", &set_thread_count, py::arg("n"));
}
