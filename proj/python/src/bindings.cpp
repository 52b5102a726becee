#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fcalign/clustering.hpp"
#include "fcalign/eval_metrics.hpp"
#include "fcalign/fold_change.hpp"
#include "fcalign/gaussian_metrics.hpp"
#include "fcalign/io.hpp"
#include "fcalign/simulation.hpp"
#include "fcalign/warping.hpp"

namespace py = pybind11;
using namespace fcalign;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<FoldChange> items_from(const Array& mean, const Array& var) {
    if (mean.ndim() != 2 || var.ndim() != 2 || mean.shape(0) != var.shape(0) || mean.shape(1) != var.shape(1)) {
        throw Error(ErrorCode::LengthMismatch, "mean and var must be 2-d arrays of equal shape");
    }
    const auto n = static_cast<std::size_t>(mean.shape(0)), p = static_cast<std::size_t>(mean.shape(1));
    const auto m = mean.unchecked<2>();
    const auto v = var.unchecked<2>();
    std::vector<FoldChange> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < p; ++t) {
            out[i].mean.push_back(m(i, t));
            out[i].var.push_back(v(i, t));
        }
    }
    return out;
}

Array rows(const FoldChangeSet& set, bool variances) {
    Array out({set.size(), set.n_times()});
    auto a = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto src = variances ? set.var(i) : set.mean(i);
        for (std::size_t t = 0; t < set.n_times(); ++t) a(i, t) = src[t];
    }
    return out;
}

template <typename T>
py::array_t<T> to_numpy(const SquareMatrix<T>& m) {
    py::array_t<T> out({m.size(), m.size()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

template <typename T>
SquareMatrix<T> from_numpy(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw Error(ErrorCode::LengthMismatch, "expected a square matrix");
    SquareMatrix<T> m(static_cast<std::size_t>(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
}

py::dict result_dict(const ClusteringResult& r) {
    py::dict d;
    d["labels"] = r.labels;
    d["centroids"] = r.centroids;
    d["warps"] = r.warps;
    d["total_cost"] = r.total_cost;
    d["best_init"] = r.best_init;
    py::list inits;
    for (const auto& t : r.inits) {
        py::dict e;
        e["initial_centroids"] = t.initial_centroids;
        e["costs"] = t.costs;
        e["final_cost"] = t.final_cost;
        e["iterations"] = t.iterations;
        e["converged"] = t.converged;
        inits.append(e);
    }
    d["inits"] = inits;
    return d;
}

ClusterConfig cluster_config(std::size_t k, int n_init, int it_max, double epsilon, std::uint64_t seed) {
    return ClusterConfig{k, it_max, n_init, epsilon, seed};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Clustering of Gaussian fold changes with time warping";

    static py::exception<Error> error_type(m, "FcalignError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error_type;
            py::object instance = exc(e.what());
            instance.attr("code") = error_code_name(e.code());
            instance.attr("exit_code") = exit_code_for(e.code());
            PyErr_SetObject(error_type.ptr(), instance.ptr());
        }
    });

    py::class_<FoldChangeSet>(m, "FoldChangeSet")
        .def(py::init([](const std::vector<double>& time, std::vector<std::string> ids, const Array& mean,
                         const Array& var) {
                 return FoldChangeSet(TimeVector(time), std::move(ids), items_from(mean, var));
             }),
             py::arg("time"), py::arg("ids"), py::arg("mean"), py::arg("var"))
        .def("__len__", &FoldChangeSet::size)
        .def_property_readonly("ids", &FoldChangeSet::ids)
        .def_property_readonly("time", [](const FoldChangeSet& s) { return s.time().points(); })
        .def_property_readonly("mean", [](const FoldChangeSet& s) { return rows(s, false); })
        .def_property_readonly("var", [](const FoldChangeSet& s) { return rows(s, true); })
        .def("rho", &FoldChangeSet::rho, py::arg("i"), py::arg("j"), py::arg("t"))
        .def("set_rho", &FoldChangeSet::set_rho, py::arg("i"), py::arg("j"), py::arg("t"), py::arg("value"))
        .def("norm", [](const FoldChangeSet& s, std::size_t i) { return fc_norm(s.item(i)); }, py::arg("i"));

    m.def(
        "simulate",
        [](const std::string& scenario, std::size_t n_entities, std::uint64_t seed) {
            ScenarioSpec spec = parse_scenario(scenario);
            spec.n_entities = n_entities;
            spec.seed = seed;
            auto sim = simulate(spec);
            return py::make_tuple(std::move(sim.set), sim.truth, sim.shifts);
        },
        py::arg("scenario"), py::arg("n_entities") = 300, py::arg("seed") = 0,
        "Returns (FoldChangeSet, truth labels, shifts).");

    m.def(
        "read_replicates",
        [](const std::string& path, bool log_transform) {
            return estimate(validate_dataset(io::ingest_csv(path, log_transform)).dataset);
        },
        py::arg("path"), py::arg("log_transform") = false,
        "Estimate fold changes from a long-format replicate CSV, dropping incomplete entities.");
    m.def("read_fold_changes", [](const std::string& dir) { return io::read_fold_changes(dir); }, py::arg("dir"));
    m.def(
        "write_fold_changes", [](const std::string& dir, const FoldChangeSet& s) { io::write_fold_changes(dir, s); },
        py::arg("dir"), py::arg("set"));

    m.def(
        "preprocess",
        [](const FoldChangeSet& s, bool scale_by_std, bool scale_by_norm) {
            return preprocess(s, PreprocessOptions{scale_by_std, scale_by_norm});
        },
        py::arg("set"), py::arg("scale_by_std") = true, py::arg("scale_by_norm") = true);

    m.def("d2_squared", &d2_squared, py::arg("set"), py::arg("i"), py::arg("j"));
    m.def(
        "pairwise_matrix",
        [](const FoldChangeSet& s, const std::string& metric) { return to_numpy(pairwise_matrix(s, parse_metric(metric))); },
        py::arg("set"), py::arg("metric") = "l2");

    m.def(
        "diss",
        [](const FoldChangeSet& s, std::size_t i, std::size_t j, int step, double lambda, bool normalize) {
            return diss(s, i, j, step, WarpSpec{std::abs(step), lambda, normalize});
        },
        py::arg("set"), py::arg("i"), py::arg("j"), py::arg("step"), py::arg("lam") = 0.0,
        py::arg("normalize") = true);
    m.def(
        "optimal_warp",
        [](const FoldChangeSet& s, std::size_t i, std::size_t j, int s_max, double lambda, bool normalize) {
            const auto w = optimal_warp(s, i, j, WarpSpec{s_max, lambda, normalize});
            return py::make_tuple(w.value, w.step);
        },
        py::arg("set"), py::arg("i"), py::arg("j"), py::arg("s_max") = 1, py::arg("lam") = 0.0,
        py::arg("normalize") = true, "Returns (value, step).");
    m.def(
        "build_owd_ow",
        [](const FoldChangeSet& s, int s_max, double lambda, bool normalize) {
            const auto r = build_owd_ow(s, WarpSpec{s_max, lambda, normalize});
            return py::make_tuple(to_numpy(r.owd), to_numpy(r.ow));
        },
        py::arg("set"), py::arg("s_max") = 1, py::arg("lam") = 0.0, py::arg("normalize") = true,
        "Returns (owd, ow) as numpy arrays.");

    m.def(
        "cluster",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& owd, py::object ow, std::size_t k,
           int n_init, int it_max, double epsilon, std::uint64_t seed) {
            OWDMatrices mats{from_numpy<double>(owd), IntMatrix(static_cast<std::size_t>(owd.shape(0)), 0)};
            if (!ow.is_none()) mats.ow = from_numpy<int>(ow.cast<py::array_t<int, py::array::c_style | py::array::forcecast>>());
            ClusteringResult r;
            {
                py::gil_scoped_release release;
                r = cluster_fast(mats, cluster_config(k, n_init, it_max, epsilon, seed));
            }
            return result_dict(r);
        },
        py::arg("owd"), py::arg("ow") = py::none(), py::arg("k") = 2, py::arg("n_init") = 10, py::arg("it_max") = 100,
        py::arg("epsilon") = 1e-9, py::arg("seed") = 0, "k-medoids on a precomputed dissimilarity matrix.");
    m.def(
        "cluster_classic",
        [](const FoldChangeSet& s, std::size_t k, int s_max, double lambda, bool normalize, int n_init, int it_max,
           double epsilon, std::uint64_t seed) {
            ClusteringResult r;
            {
                py::gil_scoped_release release;
                r = cluster_classic(s, WarpSpec{s_max, lambda, normalize}, cluster_config(k, n_init, it_max, epsilon, seed));
            }
            return result_dict(r);
        },
        py::arg("set"), py::arg("k") = 2, py::arg("s_max") = 1, py::arg("lam") = 0.0, py::arg("normalize") = true,
        py::arg("n_init") = 10, py::arg("it_max") = 100, py::arg("epsilon") = 1e-9, py::arg("seed") = 0,
        "k-medoids computing optimal warps on demand.");

    m.def("ari", [](const std::vector<int>& a, const std::vector<int>& b) { return ari(a, b); }, py::arg("truth"),
          py::arg("pred"));
    m.def("v_measure", [](const std::vector<int>& a, const std::vector<int>& b) { return v_measure(a, b); },
          py::arg("truth"), py::arg("pred"));
    m.def(
        "silhouette",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& owd, const std::vector<int>& labels) {
            return silhouette(from_numpy<double>(owd), labels);
        },
        py::arg("owd"), py::arg("labels"));
}
