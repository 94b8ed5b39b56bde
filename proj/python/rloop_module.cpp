#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rloop/cli.hpp"
#include "rloop/dressing.hpp"
#include "rloop/flows.hpp"
#include "rloop/serialization.hpp"

namespace py = pybind11;
using namespace rloop;

namespace {

std::string factor_json(const std::string& loop_json, const std::string& group, std::size_t p,
                        std::size_t q) {
    RationalLoop g = loop_from_json(Json::parse(loop_json));
    FactorizationResult res;
    if (group == "glnc")
        res = factor_glnc(g);
    else if (group == "glnr")
        res = factor_glnr(g);
    else if (group == "upq")
        res = factor_upq(g, p, q);
    else
        throw ParseError("unknown group: " + group);
    return dump_canonical(factors_to_json(res.factors));
}

std::string multiply_json(const std::string& factors_json) {
    auto factors = factors_from_json(Json::parse(factors_json));
    if (factors.empty()) throw Error(ErrorClass::Validation, "empty factor list");
    RationalLoop g = RationalLoop::identity(factors[0].n);
    for (const auto& f : factors) g = g * f.loop;
    return dump_canonical(loop_to_json(g));
}

py::dict verify_json(const std::string& loop_json, const std::string& reality, std::size_t p,
                     std::size_t q, bool twisted) {
    RationalLoop g = loop_from_json(Json::parse(loop_json));
    py::dict out;
    bool ok = true;
    if (reality == "glnr") {
        bool r = g.check_glnr_reality().ok;
        out["glnr_reality"] = r;
        ok = ok && r;
    } else if (reality == "upq") {
        bool r = g.check_upq_reality(HermForm(p, q)).ok;
        out["upq_reality"] = r;
        ok = ok && r;
    }
    if (twisted) {
        bool r = g.check_twisted().ok;
        out["twisted"] = r;
        ok = ok && r;
    }
    out["ok"] = ok;
    return out;
}

py::dict dress_simple_json(const std::string& alpha_json, const std::string& n_json,
                           const std::string& f_json) {
    TowerScalar alpha = scalar_from_json(Json::parse(alpha_json));
    Mat nilp = matrix_from_json(Json::parse(n_json));
    RationalLoop f = loop_from_json(Json::parse(f_json));
    auto d = dress_simple_pole(alpha, nilp, f);
    py::dict out;
    out["ntilde"] = dump_canonical(matrix_to_json(d.n_tilde));
    out["dressed"] = dump_canonical(loop_to_json(d.dressed));
    return out;
}

py::dict permute_json(const std::string& alpha_json, const std::string& n_json,
                      const std::string& beta_json, const std::string& m_json) {
    auto nhat = permute(scalar_from_json(Json::parse(alpha_json)),
                        matrix_from_json(Json::parse(n_json)),
                        scalar_from_json(Json::parse(beta_json)),
                        matrix_from_json(Json::parse(m_json)));
    py::dict out;
    out["nhat"] = dump_canonical(matrix_to_json(nhat.n_hat));
    out["mhat"] = dump_canonical(matrix_to_json(nhat.m_hat));
    return out;
}

std::string twisted_pair_json(const std::string& alpha_json, const std::string& n_json) {
    SimpleElement s = make_twisted_pair(scalar_from_json(Json::parse(alpha_json)),
                                        matrix_from_json(Json::parse(n_json)));
    return dump_canonical(element_to_json(s));
}

double mkdv_q(double alpha, double n1, double n2, double n3, double x, double t) {
    GridSpec g;
    SolutionSurface s = mkdv_closed_form(alpha, n1, n2, n3, g);
    return s.eval(x, t).at(0, 1).real();
}

py::dict mkdv_residual(double alpha, double n1, double n2, double n3, double h) {
    GridSpec g;
    SolutionSurface s = mkdv_closed_form(alpha, n1, n2, n3, g);
    auto rep = pde_residual(s, FlowKind::Mkdv, h, 4);
    py::dict out;
    out["flow"] = rep.flow;
    out["h"] = rep.h;
    out["max_residual"] = rep.max_residual;
    out["masked_fraction"] = rep.masked_fraction;
    return out;
}

}  // namespace

PYBIND11_MODULE(_rloop, m) {
    m.doc() = "exact factorization and dressing of rational loops";
    static py::exception<Error> exc(m, "EngineError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            exc(e.what());
        }
    });
    m.def("factor", &factor_json, py::arg("loop_json"), py::arg("group") = "glnc",
          py::arg("p") = 1, py::arg("q") = 1,
          "Factor a negative loop (JSON) into simple elements (JSON list).");
    m.def("multiply", &multiply_json, py::arg("factors_json"),
          "Multiply a JSON factor list back into a canonical loop.");
    m.def("verify", &verify_json, py::arg("loop_json"), py::arg("reality") = "",
          py::arg("p") = 1, py::arg("q") = 1, py::arg("twisted") = false);
    m.def("dress_simple_pole", &dress_simple_json, py::arg("alpha_json"), py::arg("n_json"),
          py::arg("f_json"));
    m.def("permute", &permute_json, py::arg("alpha_json"), py::arg("n_json"),
          py::arg("beta_json"), py::arg("m_json"));
    m.def("twisted_pair", &twisted_pair_json, py::arg("alpha_json"), py::arg("n_json"));
    m.def("mkdv_q", &mkdv_q, py::arg("alpha"), py::arg("n1"), py::arg("n2"), py::arg("n3"),
          py::arg("x"), py::arg("t"));
    m.def("mkdv_residual", &mkdv_residual, py::arg("alpha"), py::arg("n1"), py::arg("n2"),
          py::arg("n3"), py::arg("h") = 1e-3);
}
