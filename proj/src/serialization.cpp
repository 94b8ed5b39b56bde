#include "rloop/serialization.hpp"

namespace rloop {

namespace {

Json rat_json(const Rat& r) { return rat_to_string(r); }

Rat rat_from(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw ParseError("expected a rational");
}

Json gauss_json(const Gauss& g) { return Json::array({rat_json(g.re), rat_json(g.im)}); }

Gauss gauss_from(const Json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw ParseError("complex value needs [re, im]");
        return Gauss(rat_from(j[0]), rat_from(j[1]));
    }
    return Gauss(rat_from(j));
}

}  // namespace

Json scalar_to_json(const TowerScalar& x0) {
    TowerScalar x = x0.minimized();
    if (x.is_rational()) return rat_json(x.rational_value());
    if (x.is_gaussian()) return gauss_json(x.gaussian_value());
    Json j;
    Json rads = Json::array();
    for (const auto& r : x.tower()->radicands) rads.push_back(r.get_str());
    Json coords = Json::array();
    for (const auto& c : x.coords()) coords.push_back(gauss_json(c));
    j["radicands"] = rads;
    j["coords"] = coords;
    return j;
}

TowerScalar scalar_from_json(const Json& j) {
    if (j.is_string() || j.is_number_integer()) return TowerScalar(rat_from(j));
    if (j.is_array()) return TowerScalar(gauss_from(j));
    if (j.is_object()) {
        if (!j.contains("radicands") || !j.contains("coords"))
            throw ParseError("tower scalar needs radicands and coords");
        auto data = std::make_shared<TowerData>();
        for (const auto& r : j["radicands"]) {
            Int v;
            if (r.is_number_integer())
                v = Int(r.get<long>());
            else if (r.is_string())
                v = Int(r.get<std::string>());
            else
                throw ParseError("bad radicand");
            data->radicands.push_back(v);
        }
        for (std::size_t k = 1; k < data->radicands.size(); ++k)
            if (!(data->radicands[k - 1] < data->radicands[k]))
                throw ParseError("radicands must be strictly increasing");
        std::vector<Gauss> coords;
        for (const auto& c : j["coords"]) coords.push_back(gauss_from(c));
        if (coords.size() != (std::size_t{1} << data->radicands.size()))
            throw ParseError("coords length must be 2^levels");
        return TowerScalar(data->radicands.empty() ? trivial_tower() : TowerRef(std::move(data)),
                           std::move(coords))
            .minimized();
    }
    throw ParseError("bad scalar");
}

Json poly_to_json(const Poly& p) {
    Json j = Json::array();
    for (const auto& c : p.coeffs()) j.push_back(scalar_to_json(c));
    return j;
}

Poly poly_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("polynomial must be a coefficient array");
    std::vector<TowerScalar> c;
    for (const auto& e : j) c.push_back(scalar_from_json(e));
    return Poly(std::move(c));
}

Json ratfunc_to_json(const RatFunc& f) {
    Json j;
    j["num"] = poly_to_json(f.num());
    j["den"] = poly_to_json(f.den());
    return j;
}

RatFunc ratfunc_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw ParseError("rational function needs num and den");
    return RatFunc(poly_from_json(j["num"]), poly_from_json(j["den"]));
}

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m.at(r, c)));
        rows.push_back(row);
    }
    return rows;
}

Mat matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty row array");
    std::size_t rows = j.size(), cols = j[0].size();
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) throw ParseError("ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = scalar_from_json(j[r][c]);
    }
    return m;
}

Json subspace_to_json(const Subspace& s) {
    Json cols = Json::array();
    for (std::size_t k = 0; k < s.dim(); ++k) {
        Json v = Json::array();
        for (const auto& x : s.basis_vector(k)) v.push_back(scalar_to_json(x));
        cols.push_back(v);
    }
    return cols;
}

Subspace subspace_from_json(const Json& j, std::size_t ambient) {
    if (!j.is_array()) throw ParseError("subspace must be a list of basis vectors");
    Mat cols(ambient, j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (j[k].size() != ambient) throw ParseError("basis vector has wrong length");
        for (std::size_t r = 0; r < ambient; ++r)
            cols.at(r, k) = scalar_from_json(j[k][r]);
    }
    return Subspace::span(ambient, cols);
}

Json loop_to_json(const RationalLoop& g) {
    Json j;
    j["n"] = g.dim();
    Json rows = Json::array();
    for (std::size_t r = 0; r < g.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < g.dim(); ++c) row.push_back(ratfunc_to_json(g.entry(r, c)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

RationalLoop loop_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
        throw ParseError("loop needs n and entries");
    std::size_t n = j["n"].get<std::size_t>();
    const Json& rows = j["entries"];
    if (rows.size() != n) throw ParseError("entry row count does not match n");
    std::vector<std::vector<RatFunc>> entries(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n) throw ParseError("entry column count does not match n");
        for (std::size_t c = 0; c < n; ++c)
            entries[r].push_back(ratfunc_from_json(rows[r][c]));
    }
    return RationalLoop::from_entries(entries);
}

namespace {

const char* reality_name(RealityMode m) {
    switch (m) {
        case RealityMode::None: return "none";
        case RealityMode::Glnr: return "glnr";
        case RealityMode::Upq: return "upq";
    }
    return "none";
}

RealityMode reality_from(const std::string& s) {
    if (s == "none") return RealityMode::None;
    if (s == "glnr") return RealityMode::Glnr;
    if (s == "upq") return RealityMode::Upq;
    throw ParseError("unknown reality mode: " + s);
}

}  // namespace

Json element_to_json(const SimpleElement& e) {
    Json j;
    j["kind"] = element_kind_name(e.kind);
    j["n"] = e.n;
    switch (e.kind) {
        case ElementKind::P:
            j["alpha"] = scalar_to_json(e.alpha);
            j["beta"] = scalar_to_json(e.beta);
            j["V"] = subspace_to_json(e.V);
            j["W"] = subspace_to_json(e.W);
            break;
        case ElementKind::PHerm:
            j["alpha"] = scalar_to_json(e.alpha);
            j["V"] = subspace_to_json(e.V);
            j["p"] = e.p;
            j["q"] = e.q;
            break;
        case ElementKind::QGlnr:
        case ElementKind::RGlnr:
            j["alpha"] = scalar_to_json(e.alpha);
            j["beta"] = scalar_to_json(e.beta);
            j["V"] = subspace_to_json(e.V);
            j["W"] = subspace_to_json(e.W);
            break;
        case ElementKind::QUpq:
            j["alpha"] = scalar_to_json(e.alpha);
            j["beta"] = scalar_to_json(e.beta);
            j["V"] = subspace_to_json(e.V);
            j["p"] = e.p;
            j["q"] = e.q;
            break;
        case ElementKind::M:
            j["alpha"] = scalar_to_json(e.alpha);
            j["k"] = e.k;
            j["N"] = matrix_to_json(e.N);
            j["reality"] = reality_name(e.reality);
            if (e.reality == RealityMode::Upq) {
                j["p"] = e.p;
                j["q"] = e.q;
            }
            break;
        case ElementKind::NUpq:
            j["alpha"] = scalar_to_json(e.alpha);
            j["k"] = e.k;
            j["N"] = matrix_to_json(e.N);
            j["V"] = subspace_to_json(e.V);
            j["p"] = e.p;
            j["q"] = e.q;
            break;
        case ElementKind::S:
            j["alpha"] = scalar_to_json(e.alpha);
            j["N"] = matrix_to_json(e.N);
            j["Nprime"] = matrix_to_json(e.Nprime);
            break;
    }
    return j;
}

SimpleElement element_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("n"))
        throw ParseError("element needs kind and n");
    std::string kind = j["kind"].get<std::string>();
    std::size_t n = j["n"].get<std::size_t>();
    auto scalar = [&](const char* key) { return scalar_from_json(j.at(key)); };
    if (kind == "p")
        return make_p(scalar("alpha"), scalar("beta"), subspace_from_json(j.at("V"), n),
                      subspace_from_json(j.at("W"), n));
    if (kind == "p_herm")
        return make_p_herm(scalar("alpha"), subspace_from_json(j.at("V"), n),
                           HermForm(j.at("p").get<std::size_t>(), j.at("q").get<std::size_t>()));
    if (kind == "q_glnr")
        return make_q_glnr(scalar("alpha"), scalar("beta"), subspace_from_json(j.at("V"), n),
                           subspace_from_json(j.at("W"), n));
    if (kind == "r_glnr")
        return make_r_glnr(scalar("alpha"), scalar("beta"), subspace_from_json(j.at("V"), n),
                           subspace_from_json(j.at("W"), n));
    if (kind == "q_upq")
        return make_q_upq(scalar("alpha"), scalar("beta"), subspace_from_json(j.at("V"), n),
                          HermForm(j.at("p").get<std::size_t>(), j.at("q").get<std::size_t>()));
    if (kind == "m") {
        RealityMode mode = j.contains("reality")
                               ? reality_from(j["reality"].get<std::string>())
                               : RealityMode::None;
        std::size_t p = j.value("p", std::size_t{0}), q = j.value("q", std::size_t{0});
        return make_m(scalar("alpha"), j.at("k").get<int>(), matrix_from_json(j.at("N")), mode, p,
                      q);
    }
    if (kind == "n_upq")
        return make_n_upq(scalar("alpha"), j.at("k").get<int>(), matrix_from_json(j.at("N")),
                          subspace_from_json(j.at("V"), n),
                          HermForm(j.at("p").get<std::size_t>(), j.at("q").get<std::size_t>()));
    if (kind == "s") return make_twisted_pair(scalar("alpha"), matrix_from_json(j.at("N")));
    throw ParseError("unknown element kind: " + kind);
}

Json factors_to_json(const std::vector<SimpleElement>& factors) {
    Json j = Json::array();
    for (const auto& f : factors) j.push_back(element_to_json(f));
    return j;
}

std::vector<SimpleElement> factors_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("factor list must be an array");
    std::vector<SimpleElement> out;
    for (const auto& e : j) out.push_back(element_from_json(e));
    return out;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace rloop
